/** Browser entry point: wires the session controller, stage views,
 * decision dialog, and comparison panel to the DOM.
 *
 * All semantics live behind the HTTP API -- this file only moves JSON
 * between the service and the screen. */

import { ApiClient } from "./api";
import { SessionController } from "./session";
import { renderCompareSvg, renderSvg } from "./svg";
import type { MapDocumentJson, PendingDecisionJson, SessionStateJson } from "./types";
import { compareView, dialogFor, renderStage } from "./viewmodel";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function readJsonFile(input: HTMLInputElement): Promise<unknown | undefined> {
  const file = input.files?.[0];
  if (!file) return undefined;
  return JSON.parse(await file.text());
}

export function start(baseUrl: string): void {
  const api = new ApiClient(baseUrl);
  const stageLabel = el<HTMLSpanElement>("stage-label");
  const tabs = el<HTMLDivElement>("stage-tabs");
  const canvas = el<HTMLDivElement>("canvas");
  const dialog = el<HTMLDivElement>("decision-dialog");
  const errors = el<HTMLDivElement>("errors");

  let currentStage = "input";
  let pending: PendingDecisionJson | null = null;

  const controller = new SessionController(api, {
    onState: (state) => void showState(state),
    onPending: (p) => {
      pending = p;
      void redraw();
    },
    onError: (err) => {
      errors.textContent = String(err);
    },
  });

  async function redraw(): Promise<void> {
    renderTabs();
    renderDialog();
    if (!controller.state) return;
    const stages = controller.availableStages();
    if (!stages.includes(currentStage)) currentStage = stages[stages.length - 1];
    try {
      const doc = await api.getArtifact(controller.sessionId, currentStage);
      // the decision context refers to the latest artifact of the
      // suspended stage, so only highlight there
      const latest = currentStage === stages[stages.length - 1];
      canvas.innerHTML = renderSvg(renderStage(doc, latest ? pending : null));
    } catch (err) {
      errors.textContent = String(err);
    }
  }

  async function showState(state: SessionStateJson): Promise<void> {
    stageLabel.textContent = state.stage;
    await redraw();
  }

  function renderTabs(): void {
    tabs.innerHTML = "";
    for (const stage of controller.availableStages()) {
      const btn = document.createElement("button");
      btn.textContent = stage;
      btn.className = stage === currentStage ? "tab active" : "tab";
      btn.onclick = () => {
        currentStage = stage;
        void redraw();
      };
      tabs.appendChild(btn);
    }
  }

  function renderDialog(): void {
    dialog.innerHTML = "";
    if (!pending) {
      dialog.hidden = true;
      return;
    }
    dialog.hidden = false;
    const model = dialogFor(pending);
    const prompt = document.createElement("p");
    prompt.textContent = model.prompt;
    dialog.appendChild(prompt);
    if (model.freeText) {
      const input = document.createElement("input");
      input.type = "text";
      input.placeholder = "label for the merged value";
      const submit = document.createElement("button");
      submit.textContent = "Merge";
      submit.onclick = () => void controller.answer(model.requestId, input.value);
      dialog.append(input, submit);
    } else {
      for (const option of model.options) {
        const btn = document.createElement("button");
        btn.textContent = option;
        btn.onclick = () => void controller.answer(model.requestId, option);
        dialog.appendChild(btn);
      }
    }
  }

  el<HTMLButtonElement>("create-session").onclick = async () => {
    errors.textContent = "";
    try {
      const doc = await readJsonFile(el<HTMLInputElement>("document-file"));
      if (doc === undefined) throw new Error("choose a map document first");
      const mapping = await readJsonFile(el<HTMLInputElement>("mapping-file"));
      await controller.create(doc as MapDocumentJson, mapping);
      controller.startPolling();
    } catch (err) {
      errors.textContent = String(err);
    }
  };

  el<HTMLButtonElement>("open-session").onclick = async () => {
    errors.textContent = "";
    try {
      const id = el<HTMLInputElement>("session-id").value.trim();
      await controller.open(id);
      controller.startPolling();
    } catch (err) {
      errors.textContent = String(err);
    }
  };

  el<HTMLButtonElement>("step").onclick = () => void controller.step();
  el<HTMLButtonElement>("run").onclick = () => void controller.run();

  el<HTMLButtonElement>("export-tree").onclick = async () => {
    const text = await api.getArtifactText(controller.sessionId, "tree");
    const blob = new Blob([text], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "tree.map.json";
    a.click();
  };

  el<HTMLButtonElement>("compare").onclick = async () => {
    errors.textContent = "";
    try {
      const a = (await readJsonFile(el<HTMLInputElement>("tree-a-file"))) as MapDocumentJson;
      const b = (await readJsonFile(el<HTMLInputElement>("tree-b-file"))) as MapDocumentJson;
      if (!a || !b) throw new Error("choose two value-tree documents");
      const pairs = await api.compare(a, b);
      el<HTMLDivElement>("compare-canvas").innerHTML = renderCompareSvg(compareView(a, b, pairs));
    } catch (err) {
      errors.textContent = String(err);
    }
  };
}

if (typeof document !== "undefined" && document.getElementById("canvas")) {
  start(localStorage.getItem("serviceUrl") ?? "http://127.0.0.1:8000");
}

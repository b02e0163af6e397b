/** JSON shapes exchanged with the session service. These mirror the
 * service's canonical documents exactly; the UI never invents fields. */

export type MapKind =
  | "cognitive_map"
  | "value_cognitive_map"
  | "ends_means_map"
  | "value_tree";

export interface ProvenanceJson {
  kind: "original" | "merged" | "split";
  sources: string[];
  context?: string;
  client_label?: string;
}

export interface MapNodeJson {
  id: string;
  label: string;
  negated_label?: string;
  base?: string;
  valence?: "affirmed" | "negated";
  provenance?: ProvenanceJson;
}

export interface MapArcJson {
  from: string;
  to: string;
  sign?: "+" | "-";
}

export interface MapDocumentJson {
  kind: MapKind;
  schema_version: number;
  nodes: MapNodeJson[];
  arcs: MapArcJson[];
  fundamental?: string;
  metadata: Record<string, unknown>;
}

export interface PendingDecisionJson {
  id: string;
  kind: "cycle_arc_choice" | "independence_question" | "merge_label";
  prompt: string;
  options: string[];
  context: [string, string][];
}

export interface SessionStateJson {
  id: string;
  stage: string;
  pending: PendingDecisionJson | null;
}

export interface TranscriptEntryJson {
  id: string;
  kind: string;
  answer: string;
  source: string;
}

export interface TranscriptJson {
  entries: TranscriptEntryJson[];
}

export interface ComparePairJson {
  node_a: string;
  node_b: string;
  label_a: string;
  label_b: string;
  similarity: number;
  depth_a: number;
  depth_b: number;
}

export const STAGES = [
  "ingested",
  "vcm_done",
  "emm_pending_decision",
  "emm_done",
  "vt_pending_decision",
  "vt_done",
  "failed",
] as const;

export type Stage = (typeof STAGES)[number];

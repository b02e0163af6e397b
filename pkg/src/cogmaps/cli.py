"""Command-line driver for the full transformation pipeline.

Exit codes: 0 success, 2 validation failure, 3 pending decision,
4 I/O failure, 5 internal invariant breach.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
from pathlib import Path

import click

from . import formats, pipeline
from .decisions import InteractiveProvider, ScriptedProvider
from .model import (
    validate_cognitive_map,
    validate_emm,
    validate_tree,
    validate_vcm,
)
from .tree import compare_trees

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PENDING = 3
EXIT_IO = 4
EXIT_INTERNAL = 5

ENV_OUT_DIR = "COGMAPS_OUT_DIR"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        click.echo(f"cannot read {path}: {e}", err=True)
        sys.exit(EXIT_IO)


def _parse_doc(path: str) -> formats.MapDocument:
    try:
        return formats.parse_map(_read(path))
    except formats.ParseError as e:
        click.echo(f"{path}: {e}", err=True)
        sys.exit(EXIT_VALIDATION)


def _validator_for(kind: str):
    return {
        formats.KIND_CM: lambda d: validate_cognitive_map(formats.to_cognitive_map(d)),
        formats.KIND_VCM: lambda d: validate_vcm(formats.to_vcm(d)),
        formats.KIND_EMM: lambda d: validate_emm(formats.to_emm(d)),
        formats.KIND_VT: lambda d: validate_tree(formats.to_tree(d)),
    }[kind]


def _provider(mode: str, decisions_path: str | None):
    answers = {}
    if decisions_path:
        try:
            answers = formats.parse_decision_script(_read(decisions_path))
        except formats.ParseError as e:
            click.echo(f"{decisions_path}: {e}", err=True)
            sys.exit(EXIT_VALIDATION)
    if mode == "interactive":
        return InteractiveProvider()
    return ScriptedProvider(answers, strict=(mode == "strict"))


def _print_pending(req) -> None:
    click.echo(f"pending decision {req.id} ({req.kind})")
    click.echo(req.prompt)
    for end, mean in req.context:
        click.echo(f"    {end} --> {mean}")
    for opt in req.options:
        click.echo(f"  option: {opt}")


def _out_dir(value: str | None) -> Path:
    target = value or os.environ.get(ENV_OUT_DIR) or "."
    p = Path(target)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write_artifacts(result: pipeline.PipelineResult, out: Path, export_formats: tuple[str, ...]) -> None:
    for stage, doc in result.artifacts().items():
        if "json" in export_formats:
            (out / f"{stage}.map.json").write_text(formats.emit_map(doc), encoding="utf-8")
        if "dot" in export_formats:
            (out / f"{stage}.dot").write_text(formats.export_dot(doc), encoding="utf-8")
    (out / "run.transcript.json").write_text(
        formats.emit_transcript(result.transcript), encoding="utf-8"
    )
    if result.emm_trace is not None:
        (out / "emm_trace.json").write_text(pipeline.emit_emm_trace(result.emm_trace), encoding="utf-8")


def _run(doc_path, mapping_path, decisions_path, mode, out_dir, export_formats):
    doc = _parse_doc(doc_path)
    mapping = None
    if mapping_path:
        try:
            mapping = formats.parse_value_mapping(_read(mapping_path))
        except formats.ParseError as e:
            click.echo(f"{mapping_path}: {e}", err=True)
            sys.exit(EXIT_VALIDATION)
    provider = _provider(mode, decisions_path)
    out = _out_dir(out_dir)
    try:
        result = pipeline.run_pipeline(doc, provider, mapping)
    except pipeline.PipelineError as e:
        click.echo(str(e), err=True)
        sys.exit(EXIT_VALIDATION)
    except Exception as e:
        click.echo(f"internal error: {e}", err=True)
        sys.exit(EXIT_INTERNAL)
    _write_artifacts(result, out, export_formats)
    if result.pending is not None:
        _print_pending(result.pending)
        sys.exit(EXIT_PENDING)
    return result


@click.group()
def main() -> None:
    """Transform cognitive maps into value trees."""


@main.command()
@click.argument("path")
def validate(path: str) -> None:
    """Validate a map document of any kind."""
    doc = _parse_doc(path)
    try:
        report = _validator_for(doc.kind)(doc)
    except formats.ParseError as e:
        click.echo(str(e), err=True)
        sys.exit(EXIT_VALIDATION)
    if report:
        for v in report:
            click.echo(str(v))
        sys.exit(EXIT_VALIDATION)
    click.echo(f"{path}: valid {doc.kind}")


_shared_options = [
    click.option("--mapping", "mapping_path", default=None, help="value mapping file (.mapping.json)"),
    click.option("--decisions", "decisions_path", default=None, help="decision script (.decisions.json)"),
    click.option(
        "--mode",
        type=click.Choice(["strict", "lenient", "interactive"]),
        default="strict",
        show_default=True,
    ),
    click.option("--out-dir", default=None, help=f"output directory (default ${ENV_OUT_DIR} or cwd)"),
    click.option(
        "--format",
        "export_formats",
        multiple=True,
        type=click.Choice(["json", "dot"]),
        default=("json",),
        show_default=True,
    ),
]


def _with_shared(f):
    for opt in reversed(_shared_options):
        f = opt(f)
    return f


@main.command("pipeline")
@click.argument("path")
@_with_shared
def pipeline_cmd(path, mapping_path, decisions_path, mode, out_dir, export_formats):
    """Run every remaining stage for the given document."""
    result = _run(path, mapping_path, decisions_path, mode, out_dir, export_formats)
    click.echo(f"pipeline complete: {result.stage}")


def _partial(path, mapping_path, decisions_path, mode, out_dir, export_formats, want: str):
    result = _run(path, mapping_path, decisions_path, mode, out_dir, export_formats)
    doc = result.artifacts().get(want)
    if doc is None:
        click.echo(f"stage {want} was not produced from this input", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(formats.emit_map(doc), nl=False)


@main.command("to-vcm")
@click.argument("path")
@_with_shared
def to_vcm_cmd(path, mapping_path, decisions_path, mode, out_dir, export_formats):
    """Cognitive map -> value cognitive map (printed to stdout)."""
    _partial(path, mapping_path, decisions_path, mode, out_dir, export_formats, "vcm")


@main.command("to-emm")
@click.argument("path")
@_with_shared
def to_emm_cmd(path, mapping_path, decisions_path, mode, out_dir, export_formats):
    """Run stages up to the ends-means map (printed to stdout)."""
    _partial(path, mapping_path, decisions_path, mode, out_dir, export_formats, "emm")


@main.command("to-tree")
@click.argument("path")
@_with_shared
def to_tree_cmd(path, mapping_path, decisions_path, mode, out_dir, export_formats):
    """Run stages up to the value tree (printed to stdout)."""
    _partial(path, mapping_path, decisions_path, mode, out_dir, export_formats, "tree")


@main.command("export-dot")
@click.argument("path")
@click.option("--out", default=None, help="write DOT here instead of stdout")
def export_dot_cmd(path, out):
    """Render a map document as DOT text."""
    doc = _parse_doc(path)
    text = formats.export_dot(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command("compare")
@click.argument("tree1")
@click.argument("tree2")
@click.option("--threshold", type=float, default=0.25, show_default=True)
@click.option("--json-out", default=None, help="also write the report as JSON")
def compare_cmd(tree1, tree2, threshold, json_out):
    """List label-similar node pairs between two value trees."""
    docs = [_parse_doc(p) for p in (tree1, tree2)]
    for p, d in zip((tree1, tree2), docs):
        if d.kind != formats.KIND_VT:
            click.echo(f"{p}: expected a value_tree document, got {d.kind}", err=True)
            sys.exit(EXIT_VALIDATION)
    pairs = compare_trees(formats.to_tree(docs[0]), formats.to_tree(docs[1]), threshold)
    for p in pairs:
        click.echo(
            f"{p.similarity:.2f}  {p.label_a!r} (depth {p.depth_a})  <->  {p.label_b!r} (depth {p.depth_b})"
        )
    if not pairs:
        click.echo("no label-similar pairs found")
    if json_out:
        Path(json_out).write_text(
            json.dumps([dataclasses.asdict(p) for p in pairs], indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--data-root", default="./cogmaps-sessions", show_default=True)
def serve_cmd(port, data_root):
    """Start the session service HTTP API."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(Path(data_root)), host="127.0.0.1", port=port)


if __name__ == "__main__":
    main()

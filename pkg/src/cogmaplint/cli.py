"""``cogmaplint`` command line: lint, export, paths, suggest-splits, synth.

Exit status: 0 clean, 1 findings at error severity (or warnings under
``--warnings-as-errors``), 2 usage, I/O or parse failure.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from cogmaplint import __version__
from cogmaplint.curation import CurationError, parse_curation
from cogmaplint.diagram import CYCLE_LIMIT, build_diagram, enumerate_paths
from cogmaplint.ingest import IngestError, load_bundle
from cogmaplint.model import (
    CausalDiagram,
    Code,
    CorpusBundle,
    CurationSpec,
    SplitSuggestion,
    UnknownNodeError,
)
from cogmaplint.report import (
    InputDigest,
    ReportDocument,
    exit_status,
    parse_diagram_json,
    render_diagram_json,
    render_dot,
    render_json,
    render_text,
)
from cogmaplint.rules import lint, run_r4

EXIT_USAGE = 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    map_paths: tuple[str, ...]
    relations_paths: tuple[str, ...]
    spec_path: str
    format: str = "text"
    max_path_len: int | None = None
    near_dup_threshold: Fraction | None = None
    warnings_as_errors: bool = False
    diagram_path: str | None = None
    cycle_limit: int = CYCLE_LIMIT

    def inputs(self) -> list[str]:
        extra = [self.diagram_path] if self.diagram_path else []
        return [*self.map_paths, *self.relations_paths, self.spec_path, *extra]


@dataclass
class Loaded:
    bundle: CorpusBundle
    spec: CurationSpec
    diagram: CausalDiagram
    resolution: list
    threshold: Fraction
    max_len: int


def _threshold(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("threshold must lie in [0, 1]")
    return value


def _path_len(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 3:
        raise argparse.ArgumentTypeError("path length must be at least 3 nodes")
    return value


def load(config: CliConfig) -> Loaded:
    for path in config.inputs():
        if not Path(path).is_file():
            raise UsageError(f"cannot read {path}: no such file")
    bundle = load_bundle(config.map_paths, config.relations_paths)
    spec = parse_curation(Path(config.spec_path).read_bytes(), config.spec_path)
    built = build_diagram(bundle, spec)
    diagram = built.diagram
    if config.diagram_path:
        diagram = parse_diagram_json(Path(config.diagram_path).read_text(encoding="utf-8"))
    threshold = config.near_dup_threshold if config.near_dup_threshold is not None else spec.near_dup_threshold
    max_len = config.max_path_len if config.max_path_len is not None else spec.max_path_len
    return Loaded(bundle, spec, diagram, built.diagnostics, threshold, max_len)


def run_lint(config: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        loaded = load(config)
    except (UsageError, IngestError, CurationError, ValueError, OSError) as exc:
        print(f"cogmaplint: error: {exc}", file=err)
        return EXIT_USAGE
    result = lint(
        loaded.bundle,
        loaded.spec,
        loaded.diagram,
        threshold=loaded.threshold,
        max_len=loaded.max_len,
        resolution=loaded.resolution,
        cycle_limit=config.cycle_limit,
    )
    if result.cycles_truncated:
        print("cogmaplint: note: cycle enumeration truncated; the R4-CYCLE list is incomplete", file=err)
    doc = ReportDocument(
        tuple(result.diagnostics),
        tuple(InputDigest.of_file(p) for p in config.inputs()),
    )
    out.write(render_json(doc) if config.format == "json" else render_text(doc))
    return exit_status(doc, config.warnings_as_errors)


# --- argument parsing -------------------------------------------------------


def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", action="append", required=True, metavar="CSV", help="cognitive map table (repeatable)")
    p.add_argument("--relations", action="append", required=True, metavar="CSV", help="assertion table (repeatable)")
    p.add_argument("--spec", required=True, metavar="CDSL", help="curation spec")
    p.add_argument("--near-dup-threshold", type=_threshold, metavar="T")
    p.add_argument("--max-path-len", type=_path_len, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cogmaplint", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="run every rule and print a report")
    _add_inputs(lint)
    lint.add_argument("--format", choices=("text", "json"), default="text")
    lint.add_argument("--warnings-as-errors", action="store_true")
    lint.add_argument("--diagram", metavar="JSON", help="check this (hand-edited) diagram instead of the lifted one")

    export = sub.add_parser("export", help="write the lifted diagram as DOT or JSON")
    _add_inputs(export)
    target = export.add_mutually_exclusive_group(required=True)
    target.add_argument("--dot", metavar="FILE", help="DOT output ('-' for stdout)")
    target.add_argument("--json", metavar="FILE", help="JSON output ('-' for stdout)")

    paths = sub.add_parser("paths", help="list causal chains of three or more nodes for review")
    _add_inputs(paths)
    paths.add_argument("--from", dest="source", metavar="NODE")
    paths.add_argument("--to", dest="target", metavar="NODE")
    paths.add_argument("--max-len", type=_path_len, metavar="N")

    splits = sub.add_parser("suggest-splits", help="print repairs for every denied-but-reachable relation")
    _add_inputs(splits)

    synth = sub.add_parser("synth", help="write a synthetic corpus with planted violations")
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--vars", type=int, required=True, dest="n_vars")
    synth.add_argument("--plant", default="", metavar="CODE=N[,CODE=N...]")
    synth.add_argument("-o", "--output", required=True, metavar="DIR")
    return parser


def _config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        map_paths=tuple(args.map),
        relations_paths=tuple(args.relations),
        spec_path=args.spec,
        format=getattr(args, "format", "text"),
        max_path_len=args.max_path_len,
        near_dup_threshold=args.near_dup_threshold,
        warnings_as_errors=getattr(args, "warnings_as_errors", False),
        diagram_path=getattr(args, "diagram", None),
    )


def _emit(target: str, text: str, out) -> None:
    if target == "-":
        out.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8", newline="\n")


def _cmd_export(args, out, err) -> int:
    loaded = load(_config(args))
    if args.dot:
        _emit(args.dot, render_dot(loaded.diagram), out)
    else:
        _emit(args.json, render_diagram_json(loaded.diagram), out)
    return 0


def _cmd_paths(args, out, err) -> int:
    loaded = load(_config(args))
    max_len = args.max_len or loaded.max_len
    try:
        paths = enumerate_paths(loaded.diagram, max_len, args.source, args.target)
    except UnknownNodeError as exc:
        raise UsageError(str(exc)) from None
    for path in paths:
        kinds = ",".join(k.value for k in path.kinds)
        out.write(f"{path}\t[{kinds}]\n")
    out.write(f"{len(paths)} path(s)\n")
    return 0


def _cmd_suggest_splits(args, out, err) -> int:
    loaded = load(_config(args))
    findings = [d for d in run_r4(loaded.diagram, loaded.spec, loaded.max_len).diagnostics if d.code is Code.R4_TRANSITIVITY]
    for diag in findings:
        cause, effect = diag.subjects[:2]
        out.write(f"deny {cause} -> {effect}:\n")
        for path in diag.subjects[2:]:
            out.write(f"  path {path}\n")
        for s in diag.suggestions:
            if isinstance(s, SplitSuggestion):
                out.write(f"  split {s.mediator} -> {s.part_a} + {s.part_b}\n")
                out.write(f"    {s.part_a}: in-edges from {', '.join(s.incoming)}; entities {', '.join(s.part_a_entities) or '-'}\n")
                out.write(f"    {s.part_b}: out-edges to {', '.join(s.outgoing)}; entities {', '.join(s.part_b_entities) or '-'}\n")
            else:
                out.write(f"  reclassify {s.mediator}: {s.note}\n")
        if not diag.suggestions:
            out.write("  no three-node chain; review the longer paths\n")
    out.write(f"{len(findings)} transitivity finding(s)\n")
    return 0


def _cmd_synth(args, out, err) -> int:
    from cogmaplint.synth import generate, parse_plants, write_corpus

    corpus = generate(args.seed, args.n_vars, parse_plants(args.plant))
    for path in write_corpus(corpus, args.output, seed=args.seed, n_vars=args.n_vars):
        out.write(f"wrote {path}\n")
    return 0


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "lint":
        return run_lint(_config(args), out, err)
    handler = {
        "export": _cmd_export,
        "paths": _cmd_paths,
        "suggest-splits": _cmd_suggest_splits,
        "synth": _cmd_synth,
    }[args.command]
    try:
        return handler(args, out, err)
    except (UsageError, IngestError, CurationError, ValueError, OSError) as exc:
        print(f"cogmaplint: error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

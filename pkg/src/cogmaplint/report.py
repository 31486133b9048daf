"""Report documents and their renderings (text, JSON, DOT)."""

from __future__ import annotations

import hashlib
import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from cogmaplint import __version__
from cogmaplint.model import (
    ArtificialNode,
    CausalDiagram,
    CausalVariable,
    Code,
    Constituent,
    Diagnostic,
    DiagramEdge,
    EdgeKind,
    EntityAssertion,
    Reclassification,
    SelfLoop,
    Severity,
    SplitSuggestion,
    Suggestion,
)


@dataclass(frozen=True)
class InputDigest:
    path: str
    digest: str

    @classmethod
    def of_file(cls, path: str | Path) -> InputDigest:
        return cls(str(path), digest_bytes(Path(path).read_bytes()))


def digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def tally(diagnostics: Iterable[Diagnostic]) -> dict[str, dict[str, int]]:
    by_code = {code.value: 0 for code in Code}
    by_severity = {sev.value: 0 for sev in Severity}
    for diag in diagnostics:
        by_code[diag.code.value] += 1
        by_severity[diag.severity.value] += 1
    return {"by_code": dict(sorted(by_code.items())), "by_severity": dict(sorted(by_severity.items()))}


@dataclass(frozen=True)
class ReportDocument:
    diagnostics: tuple[Diagnostic, ...] = ()
    inputs: tuple[InputDigest, ...] = ()
    tool_version: str = __version__

    def __post_init__(self) -> None:
        object.__setattr__(self, "diagnostics", tuple(self.diagnostics))
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def summary(self) -> dict[str, dict[str, int]]:
        return tally(self.diagnostics)

    def count(self, severity: Severity) -> int:
        return sum(1 for d in self.diagnostics if d.severity is severity)


def exit_status(doc: ReportDocument, warnings_as_errors: bool = False) -> int:
    """0 when clean, 1 on any error (or warning, under the flag)."""
    if doc.count(Severity.ERROR):
        return 1
    if warnings_as_errors and doc.count(Severity.WARNING):
        return 1
    return 0


# --- JSON -------------------------------------------------------------------


def suggestion_to_dict(s: Suggestion) -> dict[str, Any]:
    if isinstance(s, SplitSuggestion):
        return {
            "kind": "split",
            "mediator": s.mediator,
            "part_a": s.part_a,
            "part_b": s.part_b,
            "incoming": list(s.incoming),
            "outgoing": list(s.outgoing),
            "part_a_entities": list(s.part_a_entities),
            "part_b_entities": list(s.part_b_entities),
        }
    return {"kind": "reclassify", "mediator": s.mediator, "note": s.note}


def suggestion_from_dict(data: Mapping[str, Any]) -> Suggestion:
    if data["kind"] == "split":
        s = SplitSuggestion(
            data["mediator"],
            tuple(data["incoming"]),
            tuple(data["outgoing"]),
            tuple(data["part_a_entities"]),
            tuple(data["part_b_entities"]),
        )
        if (s.part_a, s.part_b) != (data["part_a"], data["part_b"]):
            raise ValueError(f"split part names do not derive from mediator {s.mediator!r}")
        return s
    if data["kind"] == "reclassify":
        return Reclassification(data["mediator"], data["note"])
    raise ValueError(f"unknown suggestion kind {data['kind']!r}")


def diagnostic_to_dict(d: Diagnostic) -> dict[str, Any]:
    return {
        "code": d.code.value,
        "severity": d.severity.value,
        "message": d.message,
        "subjects": list(d.subjects),
        "suggestion": [suggestion_to_dict(s) for s in d.suggestions] or None,
    }


def document_to_dict(doc: ReportDocument) -> dict[str, Any]:
    return {
        "tool_version": doc.tool_version,
        "inputs": [{"path": i.path, "digest": i.digest} for i in doc.inputs],
        "diagnostics": [diagnostic_to_dict(d) for d in doc.diagnostics],
        "summary": doc.summary,
    }


def render_json(doc: ReportDocument) -> str:
    return json.dumps(document_to_dict(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str) -> ReportDocument:
    """Inverse of :func:`render_json`; rejects inconsistent summaries."""
    data = json.loads(text)
    diagnostics = []
    for item in data["diagnostics"]:
        diag = Diagnostic(
            Code(item["code"]),
            item["message"],
            tuple(item["subjects"]),
            tuple(suggestion_from_dict(s) for s in item["suggestion"] or ()),
        )
        if diag.severity.value != item["severity"]:
            raise ValueError(f"{diag.code.value} must have severity {diag.severity.value}")
        diagnostics.append(diag)
    doc = ReportDocument(
        tuple(diagnostics),
        tuple(InputDigest(i["path"], i["digest"]) for i in data["inputs"]),
        data["tool_version"],
    )
    if data["summary"] != doc.summary:
        raise ValueError("summary counts disagree with the diagnostics")
    return doc


# --- text -------------------------------------------------------------------


def render_diagnostic(d: Diagnostic) -> str:
    line = f"{d.severity.value}[{d.code.value}] {d.message} ({', '.join(d.subjects)})"
    if d.suggestions:
        line += " — " + "; ".join(s.describe() for s in d.suggestions)
    return line


def render_text(doc: ReportDocument) -> str:
    lines = [render_diagnostic(d) for d in doc.diagnostics]
    counts = [f"{doc.count(sev)} {sev.value}(s)" for sev in Severity]
    lines.append(f"{len(doc.diagnostics)} diagnostic(s): " + ", ".join(counts))
    return "\n".join(lines) + "\n"


# --- diagram serialization --------------------------------------------------


def _row_to_dict(a: EntityAssertion) -> dict[str, Any]:
    return {"cause": a.cause, "effect": a.effect, "cluster": a.cluster, "source": a.source, "line": a.line}


def _row_from_dict(d: Mapping[str, Any]) -> EntityAssertion:
    return EntityAssertion(d["cause"], d["effect"], d.get("cluster", ""), d.get("source", ""), int(d.get("line", 0)))


def diagram_to_dict(diagram: CausalDiagram) -> dict[str, Any]:
    return {
        "variables": [
            {"name": v.name, "values": {k: sorted(labels) for k, labels in v.values.items()}}
            for v in diagram.variables
        ],
        "artificials": [
            {"name": a.name, "constituents": [list(c) for c in sorted(a.constituents)]}
            for a in diagram.artificials
        ],
        "edges": [
            {
                "src": e.src,
                "dst": e.dst,
                "kind": e.kind.value,
                "provenance": [_row_to_dict(r) for r in sorted(e.provenance)],
            }
            for e in diagram.edges
        ],
        "self_loops": [
            {"node": lp.node, "provenance": [_row_to_dict(r) for r in sorted(lp.provenance)]}
            for lp in diagram.self_loops
        ],
    }


def diagram_from_dict(data: Mapping[str, Any]) -> CausalDiagram:
    """Load a (possibly hand-edited) diagram; edge typing is not enforced."""
    diagram = CausalDiagram(
        variables=tuple(CausalVariable(v["name"], v["values"]) for v in data.get("variables", ())),
        artificials=tuple(
            ArtificialNode(a["name"], frozenset(Constituent(*c) for c in a["constituents"]))
            for a in data.get("artificials", ())
        ),
        edges=tuple(
            DiagramEdge(e["src"], e["dst"], EdgeKind(e["kind"]), frozenset(_row_from_dict(r) for r in e.get("provenance", ())))
            for e in data.get("edges", ())
        ),
        self_loops=tuple(
            SelfLoop(lp["node"], frozenset(_row_from_dict(r) for r in lp["provenance"]))
            for lp in data.get("self_loops", ())
        ),
    )
    for edge in diagram.edges:
        for end in (edge.src, edge.dst):
            if not diagram.has_node(end):
                raise ValueError(f"edge {edge} references unknown node {end!r}")
    return diagram


def render_diagram_json(diagram: CausalDiagram) -> str:
    return json.dumps(diagram_to_dict(diagram), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_diagram_json(text: str) -> CausalDiagram:
    return diagram_from_dict(json.loads(text))


# --- DOT --------------------------------------------------------------------

_EDGE_STYLE = {
    EdgeKind.VARIABLE_CAUSAL: "solid",
    EdgeKind.ARTIFICIAL_CAUSAL: "dashed",
    EdgeKind.MEMBERSHIP: "dotted",
}


def dot_id(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def render_dot(diagram: CausalDiagram, name: str = "causal_diagram") -> str:
    """Graphviz digraph: one statement per node and per edge.

    Variables are ellipses, artificial nodes dashed boxes; edge style
    encodes the edge kind.
    """
    lines = [f"digraph {dot_id(name)} {{"]
    for var in diagram.variables:
        lines.append(f"  {dot_id(var.name)} [shape=ellipse];")
    for node in diagram.artificials:
        lines.append(f"  {dot_id(node.name)} [shape=box, style=dashed];")
    for edge in diagram.edges:
        lines.append(
            f"  {dot_id(edge.src)} -> {dot_id(edge.dst)} "
            f"[style={_EDGE_STYLE[edge.kind]}, label={dot_id(edge.kind.value)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"

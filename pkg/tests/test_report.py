from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

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
    SplitSuggestion,
)
from cogmaplint.report import (
    InputDigest,
    ReportDocument,
    digest_bytes,
    exit_status,
    parse_diagram_json,
    parse_json,
    render_diagram_json,
    render_dot,
    render_json,
    render_text,
)

text = st.text(max_size=8)
suggestions = st.one_of(
    st.builds(Reclassification, text, text),
    st.builds(
        SplitSuggestion,
        text,
        st.lists(text, max_size=2).map(tuple),
        st.lists(text, max_size=2).map(tuple),
        st.lists(text, max_size=2).map(tuple),
        st.lists(text, max_size=2).map(tuple),
    ),
)
diagnostics = st.builds(
    Diagnostic,
    st.sampled_from(list(Code)),
    text,
    st.lists(text, min_size=1, max_size=3).map(tuple),
    st.lists(suggestions, max_size=2).map(tuple),
)


@given(st.lists(diagnostics, max_size=6))
def test_json_round_trip(items):
    doc = ReportDocument(tuple(items), (InputDigest("a.csv", digest_bytes(b"x")),))
    text_out = render_json(doc)
    assert parse_json(text_out) == doc
    assert render_json(parse_json(text_out)) == text_out


def test_json_shape():
    d = Diagnostic(Code.R4_CYCLE, "loop", ("A", "B"))
    data = json.loads(render_json(ReportDocument((d,))))
    assert data["diagnostics"][0] == {"code": "R4-CYCLE", "severity": "error", "message": "loop", "subjects": ["A", "B"], "suggestion": None}
    assert data["summary"]["by_code"]["R4-CYCLE"] == 1
    assert data["summary"]["by_severity"] == {"error": 1, "info": 0, "warning": 0}
    assert digest_bytes(b"") == "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


def test_parse_json_rejects_tampering():
    doc = json.loads(render_json(ReportDocument((Diagnostic(Code.R3_MEDIATED, "m", ("x",)),))))
    doc["diagnostics"][0]["severity"] = "error"
    with pytest.raises(ValueError):
        parse_json(json.dumps(doc))
    doc["diagnostics"][0]["severity"] = "warning"
    doc["summary"]["by_code"]["R3-MEDIATED"] = 2
    with pytest.raises(ValueError):
        parse_json(json.dumps(doc))


def test_exit_status():
    warn = ReportDocument((Diagnostic(Code.R1_NEARDUP, "m", ("x",)),))
    info = ReportDocument((Diagnostic(Code.CLUSTER_OVERLAP, "m", ("x",)),))
    err = ReportDocument((Diagnostic(Code.R4_CYCLE, "m", ("x",)),))
    assert [exit_status(d) for d in (ReportDocument(), info, warn, err)] == [0, 0, 0, 1]
    assert exit_status(warn, True) == 1 and exit_status(info, True) == 0


def test_text_report_footer():
    out = render_text(ReportDocument((Diagnostic(Code.R1_NEARDUP, "similar", ("a", "b")),)))
    assert out.splitlines() == [
        "warning[R1-NEARDUP] similar (a, b)",
        "1 diagnostic(s): 0 error(s), 1 warning(s), 0 info(s)",
    ]


DIAGRAM = CausalDiagram(
    variables=(CausalVariable("A", {"on": frozenset({"a"})}), CausalVariable("B \"q\"", {"on": frozenset({"b"})})),
    artificials=(ArtificialNode("A and B", frozenset({Constituent("A", "on"), Constituent('B "q"', "on")})),),
    edges=(
        DiagramEdge("A", 'B "q"', EdgeKind.VARIABLE_CAUSAL, frozenset({EntityAssertion("a", "b", "c", "r.csv", 2)})),
        DiagramEdge("A and B", "A", EdgeKind.MEMBERSHIP),
        DiagramEdge("A and B", "A", EdgeKind.ARTIFICIAL_CAUSAL),
    ),
    self_loops=(SelfLoop("A", frozenset({EntityAssertion("a", "a")})),),
)


def test_diagram_json_round_trip():
    text_out = render_diagram_json(DIAGRAM)
    assert parse_diagram_json(text_out) == DIAGRAM
    broken = json.loads(text_out)
    broken["edges"][0]["dst"] = "Nowhere"
    with pytest.raises(ValueError):
        parse_diagram_json(json.dumps(broken))


def test_dot_styles():
    dot = render_dot(DIAGRAM)
    assert dot.startswith('digraph "causal_diagram" {\n')
    assert '  "A" [shape=ellipse];' in dot
    assert '  "B \\"q\\"" [shape=ellipse];' in dot
    assert '  "A and B" [shape=box, style=dashed];' in dot
    assert '"A" -> "B \\"q\\"" [style=solid' in dot
    assert '"A and B" -> "A" [style=dotted' in dot
    assert '"A and B" -> "A" [style=dashed' in dot
    assert dot.endswith("}\n")

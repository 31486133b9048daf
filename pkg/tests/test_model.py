from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogmaplint.model import (
    ArtificialNode,
    CausalDiagram,
    CausalPath,
    CausalVariable,
    Code,
    Constituent,
    CorpusBundle,
    CurationSpec,
    DeniedRelation,
    Diagnostic,
    DiagramEdge,
    EdgeKind,
    EntityAssertion,
    Severity,
    TextEntity,
    UnknownNodeError,
    add_edge,
    sort_diagnostics,
    validate_spec,
)

A = CausalVariable("A", {"on": frozenset({"a"})})
B = CausalVariable("B", {"on": frozenset({"b"}), "off": frozenset({"not b"})})


def test_severity_table():
    errors = {c for c in Code if c.severity is Severity.ERROR}
    assert {c.value for c in errors} == {
        "NAME-UNRESOLVED", "ALIAS-CHAIN", "R1-DUP", "R2-MISPLACED",
        "R3-UNSUPPORTED", "R3-UNTYPED-ARTIFICIAL", "R4-TRANSITIVITY", "R4-CYCLE",
    }
    assert Code.CLUSTER_OVERLAP.severity is Severity.INFO
    assert {c for c in Code if c.severity is Severity.WARNING} == {
        Code.R1_NEARDUP, Code.R1_UNASSIGNED, Code.R3_MEDIATED
    }


@pytest.mark.parametrize(
    "build",
    [
        lambda: TextEntity(0, "x"),
        lambda: TextEntity(1, "  "),
        lambda: CausalVariable("V", {}),
        lambda: CausalVariable("V", {"a": frozenset()}),
        lambda: ArtificialNode("I", frozenset({Constituent("A", "on")})),
        lambda: DeniedRelation("A", "A"),
        lambda: CorpusBundle((TextEntity(1, "x"), TextEntity(1, "y"))),
        lambda: CurationSpec(config={"colour": 1}),
        lambda: Diagnostic(Code.R4_CYCLE, "m", ()),
        lambda: CausalPath(("A", "B", "A"), (EdgeKind.VARIABLE_CAUSAL,) * 2),
        lambda: CausalDiagram(variables=(A, A)),
    ],
)
def test_invalid_construction_is_rejected(build):
    with pytest.raises(ValueError):
        build()


def test_diagram_indexes_and_merges_provenance():
    r1 = EntityAssertion("a", "b", line=2)
    r2 = EntityAssertion("a", "not b", line=3)
    d = CausalDiagram(
        variables=(B, A),
        edges=(
            DiagramEdge("A", "B", EdgeKind.VARIABLE_CAUSAL, frozenset({r1})),
            DiagramEdge("A", "B", EdgeKind.VARIABLE_CAUSAL, frozenset({r2})),
        ),
    )
    assert d.node_names == ("A", "B")
    assert len(d.edges) == 1 and d.edges[0].provenance == {r1, r2}
    assert d.successors == {"A": ("B",), "B": ()}
    assert d.predecessors["B"] == ("A",)
    assert d.causal_edge("B", "A") is None


def test_add_edge_checks_endpoints():
    d = CausalDiagram(variables=(A, B))
    with pytest.raises(UnknownNodeError):
        add_edge(d, DiagramEdge("A", "Z", EdgeKind.VARIABLE_CAUSAL))
    assert add_edge(d, DiagramEdge("A", "B", EdgeKind.VARIABLE_CAUSAL)).successors["A"] == ("B",)


def test_validate_spec_findings():
    spec = CurationSpec(
        aliases={"x": "y", "y": "b", "z": "z"},
        variables={
            "A": A,
            "B": B,
            "C": CausalVariable("C", {"p": frozenset({"Same"}), "q": frozenset({"same!"})}),
        },
        interactions={
            "A": ArtificialNode("A", frozenset({Constituent("A", "on"), Constituent("B", "on")})),
            "I": ArtificialNode("I", frozenset({Constituent("A", "on"), Constituent("B", "maybe")})),
        },
        denials=frozenset({DeniedRelation("A", "Ghost")}),
    )
    found = {(d.code, d.subjects) for d in validate_spec(spec)}
    assert found == {
        (Code.R1_DUP, ("A",)),
        (Code.R1_DUP, ("Same", "C")),
        (Code.NAME_UNRESOLVED, ("I", "B=maybe")),
        (Code.NAME_UNRESOLVED, ("Ghost",)),
        (Code.ALIAS_CHAIN, ("y", "x")),
    }


diags = st.builds(
    Diagnostic,
    st.sampled_from(list(Code)),
    st.just("m"),
    st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=2).map(tuple),
)


@given(st.lists(diags, max_size=12))
def test_sort_is_total_and_stable(items):
    out = sort_diagnostics(items)
    keys = [(d.severity.rank, d.code.value, d.subjects[0]) for d in out]
    assert keys == sorted(keys)
    assert sorted(map(id, out)) == sorted(map(id, items))
    assert sort_diagnostics(out) == out

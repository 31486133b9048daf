"""Edge lifting and graph analytics against brute-force oracles."""

from __future__ import annotations

import pytest

from cogmaplint.diagram import build_diagram, enumerate_paths, find_cycles, find_mediated

from oracles import brute_cycles, brute_mediated, brute_paths, lifted_edges, random_instance, self_loops

SEEDS = range(200)


def _built(seed):
    inst = random_instance(seed)
    return inst, build_diagram(inst.bundle, inst.spec).diagram


@pytest.mark.parametrize("seed", SEEDS)
def test_lifting_matches_oracle(seed):
    inst, diagram = _built(seed)
    assert {(e.src, e.dst, e.kind.value) for e in diagram.edges} == lifted_edges(inst)
    assert {lp.node for lp in diagram.self_loops} == self_loops(inst)


@pytest.mark.parametrize("seed", SEEDS)
def test_analytics_match_oracle(seed):
    inst, diagram = _built(seed)
    pairs = {(s, d) for s, d, k in lifted_edges(inst) if k != "membership"}
    nodes = list(diagram.node_names)
    assert {c.nodes for c in find_cycles(diagram)} == brute_cycles(pairs, self_loops(inst), nodes)
    paths = enumerate_paths(diagram, 6)
    assert [p.nodes for p in paths] == sorted(brute_paths(pairs, nodes, 3, 6))
    assert {(m.edge.src, m.edge.dst, m.mediator) for m in find_mediated(diagram)} == brute_mediated(pairs, nodes)


def test_instances_are_not_trivial():
    sizes = [len(find_cycles(_built(s)[1])) for s in SEEDS]
    assert sum(1 for n in sizes if n) > 50

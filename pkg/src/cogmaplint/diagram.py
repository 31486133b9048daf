"""Variable-level diagram construction and read-only graph analytics."""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

from cogmaplint.model import (
    CausalDiagram,
    CausalPath,
    Code,
    CorpusBundle,
    CurationSpec,
    Diagnostic,
    DiagramEdge,
    EdgeKind,
    EntityAssertion,
    SelfLoop,
    UnknownNodeError,
)
from cogmaplint.resolve import Resolver, normalize

CYCLE_LIMIT = 100_000
CYCLE_NODE_GUARD = 64


def label_owners(spec: CurationSpec) -> dict[str, str]:
    """Canonical entity label -> owning node name.

    A label that is an interaction name belongs to that artificial node.
    A label claimed by several variables goes to the alphabetically first
    one; rule 1 reports the conflict.
    """
    owners: dict[str, str] = {}
    taken: set[str] = set()
    for name in spec.interactions:
        owners[name] = name
        taken.add(normalize(name))
    for var in spec.variables.values():
        for label in sorted(var.labels()):
            key = normalize(label)
            if key not in taken:
                owners[label] = var.name
                taken.add(key)
    return dict(sorted(owners.items()))


def spec_resolver(spec: CurationSpec) -> tuple[Resolver, dict[str, str]]:
    owners = label_owners(spec)
    return Resolver(spec.aliases, owners), owners


@dataclass(frozen=True)
class BuildResult:
    diagram: CausalDiagram
    diagnostics: list[Diagnostic] = field(default_factory=list)


def build_diagram(bundle: CorpusBundle, spec: CurationSpec) -> BuildResult:
    """Lift entity-level assertions to a typed variable-level diagram.

    Every assertion whose endpoints resolve contributes to exactly one edge
    or self-loop.  Assertions with an unresolved endpoint are dropped and
    reported once per distinct label as NAME-UNRESOLVED.
    """
    resolver, owners = spec_resolver(spec)
    artificial = set(spec.interactions)

    edges: list[DiagramEdge] = []
    for node in spec.interactions.values():
        for var in sorted(node.variables):
            if var in spec.variables:
                edges.append(DiagramEdge(node.name, var, EdgeKind.MEMBERSHIP))

    lifted: dict[tuple[str, str], set[EntityAssertion]] = {}
    loops: dict[str, set[EntityAssertion]] = {}
    unresolved: dict[str, list[EntityAssertion]] = {}
    for assertion in bundle.assertions:
        ends = []
        for label in (assertion.cause, assertion.effect):
            canonical = resolver.resolve(label)
            if canonical is None:
                unresolved.setdefault(normalize(label), []).append(assertion)
            ends.append(canonical)
        if None in ends:
            continue
        src, dst = owners[ends[0]], owners[ends[1]]
        if src == dst:
            loops.setdefault(src, set()).add(assertion)
        else:
            lifted.setdefault((src, dst), set()).add(assertion)

    for (src, dst), provenance in lifted.items():
        kind = EdgeKind.ARTIFICIAL_CAUSAL if {src, dst} & artificial else EdgeKind.VARIABLE_CAUSAL
        edges.append(DiagramEdge(src, dst, kind, frozenset(provenance)))

    diagram = CausalDiagram(
        variables=tuple(spec.variables.values()),
        artificials=tuple(spec.interactions.values()),
        edges=tuple(edges),
        self_loops=tuple(SelfLoop(n, frozenset(p)) for n, p in loops.items()),
    )
    diagnostics = []
    for key, rows in sorted(unresolved.items()):
        rows = sorted(rows, key=lambda a: (a.source, a.line))
        label = next(a.cause if normalize(a.cause) == key else a.effect for a in rows)
        where = ", ".join(a.ref for a in rows[:3]) + (" ..." if len(rows) > 3 else "")
        diagnostics.append(
            Diagnostic(
                Code.NAME_UNRESOLVED,
                f"label {label!r} matches no variable value, interaction or alias; "
                f"{len(rows)} assertion(s) dropped ({where})",
                (label,),
            )
        )
    return BuildResult(diagram, diagnostics)


# --- paths ------------------------------------------------------------------


def _simple_paths(
    succ: Mapping[str, Sequence[str]], start: str, target: str | None, max_len: int
) -> Iterator[tuple[str, ...]]:
    """Simple paths from ``start`` (2..max_len nodes), depth-first, sorted successors."""
    path = [start]
    on_path = {start}
    stack = [iter(succ.get(start, ()))]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if nxt in on_path:
            continue
        path.append(nxt)
        if target is None or nxt == target:
            yield tuple(path)
        if nxt != target and len(path) < max_len:
            on_path.add(nxt)
            stack.append(iter(succ.get(nxt, ())))
        else:
            path.pop()


def _kinds(diagram: CausalDiagram, nodes: Sequence[str]) -> tuple[EdgeKind, ...]:
    kinds = []
    for a, b in zip(nodes, nodes[1:]):
        edge = diagram.causal_edge(a, b)
        assert edge is not None
        kinds.append(edge.kind)
    return tuple(kinds)


def simple_paths(
    diagram: CausalDiagram, source: str, target: str, max_len: int, min_len: int = 2
) -> list[CausalPath]:
    paths = [
        CausalPath(p, _kinds(diagram, p))
        for p in _simple_paths(diagram.successors, source, target, max_len)
        if len(p) >= min_len
    ]
    return sorted(paths)


def enumerate_paths(
    diagram: CausalDiagram,
    max_len: int,
    source: str | None = None,
    target: str | None = None,
) -> list[CausalPath]:
    """All simple causal paths with 3..max_len nodes, in lexicographic order."""
    if max_len < 3:
        raise ValueError(f"max_len must be at least 3, got {max_len}")
    for name in (source, target):
        if name is not None and not diagram.has_node(name):
            raise UnknownNodeError(name)
    starts = [source] if source is not None else list(diagram.node_names)
    found = []
    for start in starts:
        for nodes in _simple_paths(diagram.successors, start, target, max_len):
            if len(nodes) >= 3:
                found.append(CausalPath(nodes, _kinds(diagram, nodes)))
    return sorted(found)


def reachable(diagram: CausalDiagram, source: str, target: str) -> bool:
    seen = {source}
    frontier = [source]
    while frontier:
        node = frontier.pop()
        for nxt in diagram.successors.get(node, ()):
            if nxt == target:
                return True
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return False


# --- cycles -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Cycle:
    nodes: tuple[str, ...]

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        if not nodes:
            raise ValueError("empty cycle")
        i = nodes.index(min(nodes))
        object.__setattr__(self, "nodes", nodes[i:] + nodes[:i])

    def __len__(self) -> int:
        return len(self.nodes)

    def __str__(self) -> str:
        return " -> ".join(self.nodes + self.nodes[:1])


@dataclass(frozen=True)
class CycleSearch:
    cycles: list[Cycle]
    truncated: bool = False


def _strong_components(nodes: Sequence[str], succ: Mapping[str, Sequence[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    out: list[list[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            nxt = next(it, None)
            if nxt is not None:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ.get(nxt, ()))))
                elif nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(sorted(comp))
    return out


def _johnson(succ: Mapping[str, Sequence[str]], limit: int) -> tuple[list[tuple[str, ...]], bool]:
    """Elementary circuits of length >= 2 (Johnson 1975), iterative.

    Works through a queue of strongly connected components: circuits
    through the smallest vertex of a component are emitted starting at
    that vertex, then the vertex is dropped and the rest re-split.
    """
    found: list[tuple[str, ...]] = []
    graph = {v: [w for w in succ[v] if w != v] for v in succ}
    pending = [c for c in _strong_components(sorted(graph), graph) if len(c) > 1]
    if limit <= 0:
        return found, bool(pending)
    while pending:
        comp = pending.pop()
        members = set(comp)
        adj = {v: [w for w in graph[v] if w in members] for v in comp}
        s = comp[0]
        blocked: set[str] = set()
        bmap: dict[str, set[str]] = {v: set() for v in comp}

        def unblock(u: str) -> None:
            todo = [u]
            while todo:
                x = todo.pop()
                if x in blocked:
                    blocked.discard(x)
                    todo.extend(bmap[x])
                    bmap[x].clear()

        path = [s]
        blocked.add(s)
        closed = [False]
        work = [(s, iter(adj[s]))]
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if w == s:
                    found.append(tuple(path))
                    closed[-1] = True
                    if len(found) >= limit:
                        return found, True
                elif w not in blocked:
                    path.append(w)
                    blocked.add(w)
                    closed.append(False)
                    work.append((w, iter(adj[w])))
                continue
            work.pop()
            path.pop()
            was_closed = closed.pop()
            if was_closed:
                unblock(v)
            else:
                for x in adj[v]:
                    bmap[x].add(v)
            if closed:
                closed[-1] = closed[-1] or was_closed
        rest = {v: [w for w in adj[v] if w != s] for v in comp[1:]}
        pending.extend(c for c in _strong_components(comp[1:], rest) if len(c) > 1)
    return found, False


def cycle_search(diagram: CausalDiagram, limit: int = CYCLE_LIMIT) -> CycleSearch:
    """Every simple causal cycle, self-loops included, up to ``limit`` cycles."""
    loops = sorted(Cycle((loop.node,)) for loop in diagram.self_loops)
    cycles = loops[:limit]
    circuits, truncated = _johnson(diagram.successors, limit - len(cycles))
    cycles.extend(Cycle(c) for c in circuits)
    return CycleSearch(sorted(cycles), truncated or len(loops) > limit)


def find_cycles(diagram: CausalDiagram) -> list[Cycle]:
    return cycle_search(diagram).cycles


# --- mediation --------------------------------------------------------------


class Mediation(NamedTuple):
    edge: DiagramEdge
    mediator: str


def find_mediated(diagram: CausalDiagram) -> list[Mediation]:
    """Causal edges ``A -> C`` shadowed by some ``A -> B -> C``."""
    succ = diagram.successors
    hits = []
    for edge in diagram.causal_edges():
        a, c = edge.src, edge.dst
        for b in succ.get(a, ()):
            if b not in (a, c) and c in succ.get(b, ()):
                hits.append(Mediation(edge, b))
    return sorted(hits, key=lambda m: (m.edge.src, m.edge.dst, m.edge.kind.value, m.mediator))

"""Domain types shared by every stage of the linter.

All values are immutable after construction.  Constructors enforce the
invariants that can be checked on a value in isolation (non-empty labels,
at least two constituents, ...); cross-references between values are
checked by :func:`validate_spec` and the rule checkers, because those
violations must be reported as diagnostics rather than raised.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Union

from cogmaplint.resolve import normalize

DEFAULT_NEAR_DUP_THRESHOLD = Fraction(1, 2)
DEFAULT_MAX_PATH_LEN = 6
CONFIG_KEYS = ("max_path_len", "near_dup_threshold")


class Source(str, enum.Enum):
    COGNITIVE_MAP = "cognitive-map"
    CAUSAL_DIAGRAM = "causal-diagram"


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"

    @property
    def rank(self) -> int:
        return _SEVERITY_RANK[self]


_SEVERITY_RANK = {Severity.ERROR: 0, Severity.WARNING: 1, Severity.INFO: 2}


class Code(str, enum.Enum):
    NAME_UNRESOLVED = "NAME-UNRESOLVED"
    ALIAS_CHAIN = "ALIAS-CHAIN"
    CLUSTER_OVERLAP = "CLUSTER-OVERLAP"
    R1_DUP = "R1-DUP"
    R1_UNASSIGNED = "R1-UNASSIGNED"
    R1_NEARDUP = "R1-NEARDUP"
    R2_MISPLACED = "R2-MISPLACED"
    R3_UNSUPPORTED = "R3-UNSUPPORTED"
    R3_MEDIATED = "R3-MEDIATED"
    R3_UNTYPED_ARTIFICIAL = "R3-UNTYPED-ARTIFICIAL"
    R4_TRANSITIVITY = "R4-TRANSITIVITY"
    R4_CYCLE = "R4-CYCLE"

    @property
    def severity(self) -> Severity:
        return SEVERITY_OF[self]


SEVERITY_OF: dict[Code, Severity] = {
    Code.NAME_UNRESOLVED: Severity.ERROR,
    Code.ALIAS_CHAIN: Severity.ERROR,
    Code.R1_DUP: Severity.ERROR,
    Code.R2_MISPLACED: Severity.ERROR,
    Code.R3_UNSUPPORTED: Severity.ERROR,
    Code.R3_UNTYPED_ARTIFICIAL: Severity.ERROR,
    Code.R4_TRANSITIVITY: Severity.ERROR,
    Code.R4_CYCLE: Severity.ERROR,
    Code.R1_NEARDUP: Severity.WARNING,
    Code.R1_UNASSIGNED: Severity.WARNING,
    Code.R3_MEDIATED: Severity.WARNING,
    Code.CLUSTER_OVERLAP: Severity.INFO,
}


def _require_text(value: str, what: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"{what} must be non-empty text, got {value!r}")
    return value


# --- corpus -----------------------------------------------------------------


@dataclass(frozen=True)
class TextEntity:
    """A brainstormed phrase from the cognitive map."""

    id: int
    label: str
    clusters: frozenset[str] = frozenset()
    source: Source = Source.COGNITIVE_MAP

    def __post_init__(self) -> None:
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id < 1:
            raise ValueError(f"entity id must be a positive integer, got {self.id!r}")
        _require_text(self.label, "entity label")
        object.__setattr__(self, "clusters", frozenset(self.clusters))


@dataclass(frozen=True, order=True)
class EntityAssertion:
    """One entity-level ``cause -> effect`` row.

    ``source`` and ``line`` locate the row in its input file; they keep
    duplicate rows distinct so that edge provenance can count them.
    """

    cause: str
    effect: str
    cluster: str = ""
    source: str = ""
    line: int = 0

    def __post_init__(self) -> None:
        _require_text(self.cause, "assertion cause")
        _require_text(self.effect, "assertion effect")

    @property
    def ref(self) -> str:
        return f"{self.source}:{self.line}" if self.source else f"#{self.line}"


@dataclass(frozen=True)
class CorpusBundle:
    entities: tuple[TextEntity, ...] = ()
    assertions: tuple[EntityAssertion, ...] = ()
    sources: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "assertions", tuple(self.assertions))
        object.__setattr__(self, "sources", tuple(self.sources))
        seen: set[int] = set()
        for entity in self.entities:
            if entity.id in seen:
                raise ValueError(f"duplicate entity id {entity.id}")
            seen.add(entity.id)


# --- curation ---------------------------------------------------------------


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            raise ValueError("source spans are 1-based")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class CausalVariable:
    """A causal variable whose named values each own a set of entity labels.

    Overlap between the label sets of two values is legal to construct;
    :func:`validate_spec` reports it.
    """

    name: str
    values: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        _require_text(self.name, "variable name")
        values = {k: frozenset(v) for k, v in sorted(dict(self.values).items())}
        if not values:
            raise ValueError(f"variable {self.name!r} needs at least one value")
        for value, labels in values.items():
            _require_text(value, "value name")
            if not labels:
                raise ValueError(f"value {self.name}.{value} owns no entity labels")
            for label in labels:
                _require_text(label, "entity label")
        object.__setattr__(self, "values", values)

    def labels(self) -> frozenset[str]:
        return frozenset().union(*self.values.values())

    def value_of(self, label: str) -> str | None:
        key = normalize(label)
        for value, labels in self.values.items():
            if any(normalize(item) == key for item in labels):
                return value
        return None


class Constituent(NamedTuple):
    variable: str
    value: str

    def __str__(self) -> str:
        return f"{self.variable}={self.value}"


@dataclass(frozen=True)
class ArtificialNode:
    """An interaction entity standing for a joint configuration of values."""

    name: str
    constituents: frozenset[Constituent]

    def __post_init__(self) -> None:
        _require_text(self.name, "interaction name")
        parts = frozenset(Constituent(*c) for c in self.constituents)
        if len(parts) < 2:
            raise ValueError(f"interaction {self.name!r} needs at least two constituents")
        object.__setattr__(self, "constituents", parts)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(c.variable for c in self.constituents)


@dataclass(frozen=True, order=True)
class DeniedRelation:
    cause: str
    effect: str

    def __post_init__(self) -> None:
        _require_text(self.cause, "denied cause")
        _require_text(self.effect, "denied effect")
        if self.cause == self.effect:
            raise ValueError(f"a denial needs two distinct nodes, got {self.cause!r} twice")


ConfigValue = Union[int, Fraction]


@dataclass(frozen=True)
class CurationSpec:
    """Expert decisions: aliases, groupings, interactions, denials, settings.

    ``config`` holds only explicitly set keys; use :attr:`near_dup_threshold`
    and :attr:`max_path_len` for the effective values.
    """

    aliases: Mapping[str, str] = field(default_factory=dict)
    variables: Mapping[str, CausalVariable] = field(default_factory=dict)
    interactions: Mapping[str, ArtificialNode] = field(default_factory=dict)
    denials: frozenset[DeniedRelation] = frozenset()
    config: Mapping[str, ConfigValue] = field(default_factory=dict)
    spans: Mapping[str, SourceSpan] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "aliases", dict(sorted(dict(self.aliases).items())))
        object.__setattr__(self, "variables", _by_name(self.variables))
        object.__setattr__(self, "interactions", _by_name(self.interactions))
        object.__setattr__(self, "denials", frozenset(self.denials))
        config = dict(self.config)
        unknown = sorted(set(config) - set(CONFIG_KEYS))
        if unknown:
            raise ValueError(f"unknown config key(s): {', '.join(unknown)}")
        object.__setattr__(self, "config", dict(sorted(config.items())))
        object.__setattr__(self, "spans", dict(self.spans))

    @property
    def near_dup_threshold(self) -> Fraction:
        return Fraction(self.config.get("near_dup_threshold", DEFAULT_NEAR_DUP_THRESHOLD))

    @property
    def max_path_len(self) -> int:
        return int(self.config.get("max_path_len", DEFAULT_MAX_PATH_LEN))

    def node_names(self) -> list[str]:
        return sorted(set(self.variables) | set(self.interactions))


def _by_name(items: Mapping[str, object] | Iterable[object]) -> dict:
    if isinstance(items, Mapping):
        pairs = list(items.items())
    else:
        pairs = [(item.name, item) for item in items]  # type: ignore[attr-defined]
    return dict(sorted(pairs, key=lambda p: p[0]))


# --- diagram ----------------------------------------------------------------


class EdgeKind(str, enum.Enum):
    VARIABLE_CAUSAL = "variable-causal"
    ARTIFICIAL_CAUSAL = "artificial-causal"
    MEMBERSHIP = "membership"

    @property
    def is_causal(self) -> bool:
        return self is not EdgeKind.MEMBERSHIP


@dataclass(frozen=True)
class DiagramEdge:
    """A typed edge; causal edges carry the assertions that support them.

    Kind/provenance consistency is deliberately not enforced here so that
    hand-edited diagrams can be loaded and then reported on.
    """

    src: str
    dst: str
    kind: EdgeKind
    provenance: frozenset[EntityAssertion] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", EdgeKind(self.kind))
        object.__setattr__(self, "provenance", frozenset(self.provenance))

    @property
    def key(self) -> tuple[str, str, EdgeKind]:
        return (self.src, self.dst, self.kind)

    def __str__(self) -> str:
        return f"{self.src} -> {self.dst}"


@dataclass(frozen=True)
class SelfLoop:
    """Assertions whose cause and effect land in the same node."""

    node: str
    provenance: frozenset[EntityAssertion]

    def __post_init__(self) -> None:
        object.__setattr__(self, "provenance", frozenset(self.provenance))


class UnknownNodeError(KeyError):
    def __init__(self, name: str) -> None:
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown node {self.name!r}"


def _edge_sort_key(edge: DiagramEdge) -> tuple[str, str, str]:
    return (edge.src, edge.dst, edge.kind.value)


@dataclass(frozen=True)
class CausalDiagram:
    variables: tuple[CausalVariable, ...] = ()
    artificials: tuple[ArtificialNode, ...] = ()
    edges: tuple[DiagramEdge, ...] = ()
    self_loops: tuple[SelfLoop, ...] = ()

    def __post_init__(self) -> None:
        variables = tuple(sorted(self.variables, key=lambda v: v.name))
        artificials = tuple(sorted(self.artificials, key=lambda a: a.name))
        names = [v.name for v in variables] + [a.name for a in artificials]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"node names must be unique: {', '.join(dupes)}")
        merged: dict[tuple[str, str, EdgeKind], DiagramEdge] = {}
        for edge in self.edges:
            old = merged.get(edge.key)
            if old is not None:
                edge = replace(old, provenance=old.provenance | edge.provenance)
            merged[edge.key] = edge
        loops: dict[str, frozenset[EntityAssertion]] = {}
        for loop in self.self_loops:
            loops[loop.node] = loops.get(loop.node, frozenset()) | loop.provenance
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "artificials", artificials)
        object.__setattr__(self, "edges", tuple(sorted(merged.values(), key=_edge_sort_key)))
        object.__setattr__(
            self, "self_loops", tuple(SelfLoop(n, p) for n, p in sorted(loops.items()))
        )

    @cached_property
    def node_names(self) -> tuple[str, ...]:
        return tuple(sorted([v.name for v in self.variables] + [a.name for a in self.artificials]))

    @cached_property
    def artificial_names(self) -> frozenset[str]:
        return frozenset(a.name for a in self.artificials)

    def has_node(self, name: str) -> bool:
        return name in self._node_set

    @cached_property
    def _node_set(self) -> frozenset[str]:
        return frozenset(self.node_names)

    def is_artificial(self, name: str) -> bool:
        return name in self.artificial_names

    def variable(self, name: str) -> CausalVariable | None:
        for var in self.variables:
            if var.name == name:
                return var
        return None

    def causal_edges(self) -> tuple[DiagramEdge, ...]:
        return tuple(e for e in self.edges if e.kind.is_causal)

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        """Causal adjacency (both causal kinds, never membership), sorted."""
        adj: dict[str, set[str]] = {n: set() for n in self.node_names}
        for edge in self.edges:
            if edge.kind.is_causal:
                adj.setdefault(edge.src, set()).add(edge.dst)
                adj.setdefault(edge.dst, set())
        return {n: tuple(sorted(s)) for n, s in sorted(adj.items())}

    @cached_property
    def predecessors(self) -> dict[str, tuple[str, ...]]:
        pred: dict[str, set[str]] = {n: set() for n in self.successors}
        for src, dsts in self.successors.items():
            for dst in dsts:
                pred[dst].add(src)
        return {n: tuple(sorted(s)) for n, s in pred.items()}

    def causal_edge(self, src: str, dst: str) -> DiagramEdge | None:
        for kind in (EdgeKind.VARIABLE_CAUSAL, EdgeKind.ARTIFICIAL_CAUSAL):
            edge = self._edge_index.get((src, dst, kind))
            if edge is not None:
                return edge
        return None

    @cached_property
    def _edge_index(self) -> dict[tuple[str, str, EdgeKind], DiagramEdge]:
        return {e.key: e for e in self.edges}


def add_edge(diagram: CausalDiagram, edge: DiagramEdge) -> CausalDiagram:
    """Return ``diagram`` with ``edge`` inserted or its provenance merged."""
    for endpoint in (edge.src, edge.dst):
        if not diagram.has_node(endpoint):
            raise UnknownNodeError(endpoint)
    return replace(diagram, edges=diagram.edges + (edge,))


@dataclass(frozen=True, order=True)
class CausalPath:
    nodes: tuple[str, ...]
    kinds: tuple[EdgeKind, ...] = field(compare=False)

    def __post_init__(self) -> None:
        if len(self.kinds) != len(self.nodes) - 1:
            raise ValueError("a path needs exactly one edge kind per hop")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("paths must be simple")

    def __len__(self) -> int:
        return len(self.nodes)

    def __str__(self) -> str:
        return " -> ".join(self.nodes)


# --- diagnostics ------------------------------------------------------------


@dataclass(frozen=True)
class SplitSuggestion:
    """Divide an over-general mediator so the denied chain falls apart.

    ``incoming`` are the upstream nodes whose edges stay on ``part_a``;
    ``outgoing`` the downstream nodes kept by ``part_b``.  The entity
    lists say which of the mediator's values sit on each side.
    """

    mediator: str
    incoming: tuple[str, ...] = ()
    outgoing: tuple[str, ...] = ()
    part_a_entities: tuple[str, ...] = ()
    part_b_entities: tuple[str, ...] = ()

    @property
    def part_a(self) -> str:
        return f"{self.mediator}_a"

    @property
    def part_b(self) -> str:
        return f"{self.mediator}_b"

    def describe(self) -> str:
        return (
            f"split {self.mediator} into {self.part_a} (keeps edges from "
            f"{', '.join(self.incoming) or '-'}) and {self.part_b} (keeps edges to "
            f"{', '.join(self.outgoing) or '-'})"
        )


@dataclass(frozen=True)
class Reclassification:
    mediator: str
    note: str

    def describe(self) -> str:
        return self.note


Suggestion = Union[SplitSuggestion, Reclassification]


@dataclass(frozen=True)
class Diagnostic:
    code: Code
    message: str
    subjects: tuple[str, ...]
    suggestions: tuple[Suggestion, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "code", Code(self.code))
        object.__setattr__(self, "subjects", tuple(self.subjects))
        object.__setattr__(self, "suggestions", tuple(self.suggestions))
        if not self.subjects:
            raise ValueError("a diagnostic needs at least one subject")

    @property
    def severity(self) -> Severity:
        return self.code.severity

    def sort_key(self) -> tuple[int, str, str]:
        return (self.severity.rank, self.code.value, self.subjects[0])


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diagnostics, key=Diagnostic.sort_key)


# --- local spec validation --------------------------------------------------


def validate_spec(spec: CurationSpec) -> list[Diagnostic]:
    """Report violations of the curation spec's own well-formedness.

    Covers node-name collisions, labels shared by two values of one
    variable, constituents or denials naming missing nodes or values, and
    alias chains.  Cross-variable label sharing is left to rule 1.
    """
    out: list[Diagnostic] = []

    for name in sorted(set(spec.variables) & set(spec.interactions)):
        out.append(
            Diagnostic(Code.R1_DUP, f"{name!r} is declared both as a variable and an interaction", (name,))
        )

    for var in spec.variables.values():
        claims: dict[str, list[str]] = {}
        for value, labels in var.values.items():
            for key in {normalize(label) for label in labels}:
                claims.setdefault(key, []).append(value)
        for value, labels in var.values.items():
            for label in sorted(labels):
                owners = claims[normalize(label)]
                if len(owners) > 1 and owners[0] == value:
                    out.append(
                        Diagnostic(
                            Code.R1_DUP,
                            f"entity {label!r} is listed under several values of {var.name}: "
                            + ", ".join(owners),
                            (label, var.name),
                        )
                    )
                    claims[normalize(label)] = [value]

    for node in spec.interactions.values():
        for part in sorted(node.constituents):
            var = spec.variables.get(part.variable)
            if var is None:
                msg = f"interaction {node.name!r} references unknown variable {part.variable}"
            elif part.value not in var.values:
                msg = f"interaction {node.name!r} references unknown value {part}"
            else:
                continue
            out.append(Diagnostic(Code.NAME_UNRESOLVED, msg, (node.name, str(part))))

    nodes = set(spec.variables) | set(spec.interactions)
    for denial in sorted(spec.denials):
        missing = [n for n in (denial.cause, denial.effect) if n not in nodes]
        for name in missing:
            out.append(
                Diagnostic(
                    Code.NAME_UNRESOLVED,
                    f"denial {denial.cause} -> {denial.effect} names unknown node {name!r}",
                    (name,),
                )
            )

    keys = {normalize(k): k for k in spec.aliases}
    for raw, target in spec.aliases.items():
        if normalize(target) in keys and normalize(target) != normalize(raw):
            middle = keys[normalize(target)]
            out.append(
                Diagnostic(
                    Code.ALIAS_CHAIN,
                    f"alias {raw!r} -> {target!r} points at another alias ({middle!r} -> "
                    f"{spec.aliases[middle]!r}); aliases apply once",
                    (middle, raw),
                )
            )
    return out

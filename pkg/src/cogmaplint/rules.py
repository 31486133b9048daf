"""The four modeling-rule checkers plus corpus hygiene.

Each checker emits only its own codes:

* ``check_r1``: R1-DUP, R1-UNASSIGNED, R1-NEARDUP, CLUSTER-OVERLAP
* ``check_r2``: R2-MISPLACED
* ``check_r3``: R3-UNSUPPORTED, R3-MEDIATED, R3-UNTYPED-ARTIFICIAL
* ``check_r4``: R4-CYCLE, R4-TRANSITIVITY
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from cogmaplint.diagram import (
    CYCLE_LIMIT,
    Cycle,
    build_diagram,
    cycle_search,
    find_mediated,
    reachable,
    simple_paths,
    spec_resolver,
)
from cogmaplint.model import (
    CausalDiagram,
    CausalPath,
    Code,
    CorpusBundle,
    CurationSpec,
    Diagnostic,
    EdgeKind,
    Reclassification,
    Source,
    SplitSuggestion,
    Suggestion,
    sort_diagnostics,
    validate_spec,
)
from cogmaplint.resolve import near_duplicates, normalize


def _claims(spec: CurationSpec) -> dict[str, list[str]]:
    """Normalized label -> claimant node names (variables first, then interactions)."""
    claims: dict[str, list[str]] = {}
    for var in spec.variables.values():
        for key in sorted({normalize(label) for label in var.labels()}):
            claims.setdefault(key, []).append(var.name)
    for name in spec.interactions:
        claims.setdefault(normalize(name), []).append(name)
    return claims


def check_r1(bundle: CorpusBundle, spec: CurationSpec, threshold: Fraction | float | None = None) -> list[Diagnostic]:
    threshold = spec.near_dup_threshold if threshold is None else Fraction(threshold)
    out: list[Diagnostic] = []
    display: dict[str, str] = {}
    for var in spec.variables.values():
        for label in sorted(var.labels(), reverse=True):
            display[normalize(label)] = label
    for name in spec.interactions:
        display.setdefault(normalize(name), name)

    for key, claimants in sorted(_claims(spec).items()):
        if len(claimants) > 1:
            label = display[key]
            out.append(
                Diagnostic(
                    Code.R1_DUP,
                    f"entity {label!r} is claimed by {len(claimants)} nodes: {', '.join(claimants)}; "
                    "a text entity describes a value of exactly one variable",
                    (label, *claimants),
                )
            )

    resolver, owners = spec_resolver(spec)
    map_entities = [e for e in bundle.entities if e.source is Source.COGNITIVE_MAP]
    owner_of: dict[str, str | None] = {}
    for entity in map_entities:
        canonical = resolver.resolve(entity.label)
        owner_of[entity.label] = owners[canonical] if canonical is not None else None
        if canonical is None:
            out.append(
                Diagnostic(
                    Code.R1_UNASSIGNED,
                    f"entity {entity.label!r} (#{entity.id}) is not a value of any variable "
                    "nor an interaction",
                    (entity.label,),
                )
            )

    for hit in near_duplicates(map_entities, threshold):
        owner_a, owner_b = owner_of[hit.a], owner_of[hit.b]
        if owner_a is not None and owner_a == owner_b and owner_a in spec.variables:
            continue
        if owner_a is not None and owner_b is not None:
            if resolver.resolve(hit.a) == resolver.resolve(hit.b):
                continue
        out.append(
            Diagnostic(
                Code.R1_NEARDUP,
                f"entities {hit.a!r} and {hit.b!r} are lexically similar "
                f"(token Jaccard {hit.score}) but not grouped under one variable",
                (hit.a, hit.b),
            )
        )

    for entity in map_entities:
        if len(entity.clusters) >= 2:
            out.append(
                Diagnostic(
                    Code.CLUSTER_OVERLAP,
                    f"entity {entity.label!r} sits in {len(entity.clusters)} clusters: "
                    + ", ".join(sorted(entity.clusters)),
                    (entity.label,),
                )
            )
    return out


def r2_evidence(spec: CurationSpec) -> dict[str, list[str]]:
    """Variable name -> interaction names listed among its values."""
    names = {normalize(n): n for n in spec.interactions}
    found: dict[str, list[str]] = {}
    for var in spec.variables.values():
        hits = sorted({names[normalize(lb)] for lb in var.labels() if normalize(lb) in names})
        if hits:
            found[var.name] = hits
    return found


def check_r2(bundle: CorpusBundle, spec: CurationSpec) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for var_name, names in sorted(r2_evidence(spec).items()):
        for name in names:
            out.append(
                Diagnostic(
                    Code.R2_MISPLACED,
                    f"interaction {name!r} is also listed as a value of variable {var_name}; "
                    "keep interaction entities out of the variables they combine",
                    (name, var_name),
                )
            )
    for node in spec.interactions.values():
        if len(node.variables) < 2:
            out.append(
                Diagnostic(
                    Code.R2_MISPLACED,
                    f"interaction {node.name!r} combines values of a single variable "
                    f"({', '.join(sorted(node.variables))}); it is a value, not an interaction",
                    (node.name,),
                )
            )
    return out


def check_r3(diagram: CausalDiagram) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for edge in diagram.edges:
        touches_artificial = diagram.is_artificial(edge.src) or diagram.is_artificial(edge.dst)
        if edge.kind.is_causal and not edge.provenance:
            out.append(
                Diagnostic(
                    Code.R3_UNSUPPORTED,
                    f"causal edge {edge} has no supporting entity-level assertion",
                    (str(edge),),
                )
            )
        if touches_artificial and edge.kind is EdgeKind.VARIABLE_CAUSAL:
            out.append(
                Diagnostic(
                    Code.R3_UNTYPED_ARTIFICIAL,
                    f"edge {edge} touches an artificial node but is typed {edge.kind.value}; "
                    f"use {EdgeKind.ARTIFICIAL_CAUSAL.value}",
                    (str(edge),),
                )
            )
    for hit in find_mediated(diagram):
        e = hit.edge
        out.append(
            Diagnostic(
                Code.R3_MEDIATED,
                f"edge {e} may be a distant effect: {e.src} -> {hit.mediator} -> {e.dst} also exists",
                (str(e), hit.mediator),
            )
        )
    return out


def _witness(diagram: CausalDiagram, cycle: Cycle) -> str:
    """One supporting assertion per hop, rendered entity-to-entity."""
    if len(cycle) == 1:
        loop = next(lp for lp in diagram.self_loops if lp.node == cycle.nodes[0])
        rows = sorted(loop.provenance)
        if not rows:
            return "no supporting assertion"
        row = rows[0]
        how = "the same entity" if normalize(row.cause) == normalize(row.effect) else "two of its entities"
        return f"{row.cause!r} -> {row.effect!r} ({row.ref}) links {how}"
    hops = []
    ring = cycle.nodes + cycle.nodes[:1]
    for a, b in zip(ring, ring[1:]):
        edge = diagram.causal_edge(a, b)
        row = sorted(edge.provenance)[0] if edge is not None and edge.provenance else None
        hops.append(f"{row.cause!r} -> {row.effect!r}" if row else f"{a} -> {b} (unsupported)")
    return "; ".join(hops)


def _suggestions(
    diagram: CausalDiagram, spec: CurationSpec, paths: Sequence[CausalPath]
) -> tuple[Suggestion, ...]:
    evidence = r2_evidence(spec)
    by_mediator: dict[str, list[CausalPath]] = {}
    for path in paths:
        if len(path) == 3:
            by_mediator.setdefault(path.nodes[1], []).append(path)
    out: list[Suggestion] = []
    for mediator, group in sorted(by_mediator.items()):
        incoming = tuple(sorted({p.nodes[0] for p in group}))
        outgoing = tuple(sorted({p.nodes[2] for p in group}))
        if diagram.is_artificial(mediator):
            out.append(
                Reclassification(
                    mediator,
                    f"{mediator!r} is an interaction entity: the chain through it mixes "
                    f"artificial-causal relations, so attribute its effect on "
                    f"{', '.join(outgoing)} to the constituent it really stems from, "
                    f"not to {', '.join(incoming)}",
                )
            )
            continue
        if mediator in evidence:
            # could be an interaction in disguise or merely too general: offer both
            out.append(
                Reclassification(
                    mediator,
                    f"{mediator} lists interaction entities among its values "
                    f"({', '.join(evidence[mediator])}); model them as artificial nodes",
                )
            )
        a_side: set[str] = set()
        b_side: set[str] = set()
        for src in incoming:
            edge = diagram.causal_edge(src, mediator)
            if edge is not None:
                a_side.update(row.effect for row in edge.provenance)
        for dst in outgoing:
            edge = diagram.causal_edge(mediator, dst)
            if edge is not None:
                b_side.update(row.cause for row in edge.provenance)
        out.append(SplitSuggestion(mediator, incoming, outgoing, tuple(sorted(a_side)), tuple(sorted(b_side))))
    return tuple(out)


@dataclass
class R4Result:
    diagnostics: list[Diagnostic] = field(default_factory=list)
    truncated: bool = False


def run_r4(diagram: CausalDiagram, spec: CurationSpec, max_len: int | None = None, limit: int = CYCLE_LIMIT) -> R4Result:
    max_len = spec.max_path_len if max_len is None else max_len
    result = R4Result()
    search = cycle_search(diagram, limit)
    result.truncated = search.truncated
    for cycle in search.cycles:
        what = "self-loop" if len(cycle) == 1 else f"{len(cycle)}-node loop"
        result.diagnostics.append(
            Diagnostic(
                Code.R4_CYCLE,
                f"{what} {cycle} (witness: {_witness(diagram, cycle)})",
                cycle.nodes,
            )
        )
    for denial in sorted(spec.denials):
        e, g = denial.cause, denial.effect
        if not (diagram.has_node(e) and diagram.has_node(g)) or not reachable(diagram, e, g):
            continue
        paths = simple_paths(diagram, e, g, max_len)
        if paths:
            detail = f"{len(paths)} path(s) within {max_len} nodes"
        else:
            detail = f"reachable only through paths longer than {max_len} nodes"
        result.diagnostics.append(
            Diagnostic(
                Code.R4_TRANSITIVITY,
                f"{e} does not cause {g} by expert denial, yet {g} is reachable from {e} ({detail})",
                (e, g, *(str(p) for p in paths)),
                _suggestions(diagram, spec, paths),
            )
        )
    return result


def check_r4(diagram: CausalDiagram, spec: CurationSpec, max_len: int | None = None) -> list[Diagnostic]:
    return run_r4(diagram, spec, max_len).diagnostics


@dataclass
class LintResult:
    diagnostics: list[Diagnostic]
    cycles_truncated: bool = False


def lint(
    bundle: CorpusBundle,
    spec: CurationSpec,
    diagram: CausalDiagram | None = None,
    *,
    threshold: Fraction | float | None = None,
    max_len: int | None = None,
    resolution: Iterable[Diagnostic] | None = None,
    cycle_limit: int = CYCLE_LIMIT,
) -> LintResult:
    """Every checker's findings, sorted by (severity, code, first subject).

    ``resolution`` defaults to the NAME-UNRESOLVED findings of building the
    diagram from ``bundle``; ``diagram`` defaults to that same build.
    """
    if diagram is None or resolution is None:
        built = build_diagram(bundle, spec)
        diagram = built.diagram if diagram is None else diagram
        resolution = built.diagnostics if resolution is None else resolution
    r4 = run_r4(diagram, spec, max_len, cycle_limit)
    found = [
        *resolution,
        *validate_spec(spec),
        *check_r1(bundle, spec, threshold),
        *check_r2(bundle, spec),
        *check_r3(diagram),
        *r4.diagnostics,
    ]
    return LintResult(sort_diagnostics(found), r4.truncated)


def check_all(
    bundle: CorpusBundle,
    spec: CurationSpec,
    diagram: CausalDiagram | None = None,
    *,
    threshold: Fraction | float | None = None,
    max_len: int | None = None,
    resolution: Iterable[Diagnostic] | None = None,
) -> list[Diagnostic]:
    return lint(bundle, spec, diagram, threshold=threshold, max_len=max_len, resolution=resolution).diagnostics

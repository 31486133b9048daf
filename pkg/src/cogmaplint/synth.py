"""Seeded synthetic corpora with a ledger of planted violations.

The clean part of an instance is a random triangle-free DAG over
``n_vars`` variables (optionally with one interaction node), lint-clean by
construction.  Each plant then adds a minimal violation on fresh nodes
named ``P<k>...`` so it cannot interact with the clean part or with other
plants.  Randomness comes only from ``random.Random(seed)``.

R3-UNSUPPORTED and R3-UNTYPED-ARTIFICIAL cannot arise from corpus input;
their plants are recorded as ``edits`` to apply to the built diagram,
mimicking a hand-edited diagram file.
"""

from __future__ import annotations

import json
import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from cogmaplint.curation import format_curation
from cogmaplint.diagram import build_diagram
from cogmaplint.ingest import write_assertions, write_cognitive_map
from cogmaplint.model import (
    ArtificialNode,
    CausalDiagram,
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
    TextEntity,
    add_edge,
)
from cogmaplint.report import diagram_to_dict, render_diagram_json

R4_CODES = (Code.R4_CYCLE, Code.R4_TRANSITIVITY)
EDIT_CODES = (Code.R3_UNSUPPORTED, Code.R3_UNTYPED_ARTIFICIAL)
CLUSTER = "Synth"


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class Plant:
    code: Code
    subjects: tuple[str, ...]


@dataclass(frozen=True)
class PlantLedger:
    plants: tuple[Plant, ...] = ()
    edits: tuple[DiagramEdge, ...] = ()

    def to_dict(self) -> dict:
        return {
            "plants": [{"code": p.code.value, "subjects": list(p.subjects)} for p in self.plants],
            "edits": diagram_to_dict(CausalDiagram(edges=self.edits))["edges"],
        }


class SynthCorpus(NamedTuple):
    bundle: CorpusBundle
    spec: CurationSpec
    ledger: PlantLedger


@dataclass
class _Builder:
    entities: list[tuple[str, frozenset[str]]] = field(default_factory=list)
    assertions: list[tuple[str, str]] = field(default_factory=list)
    variables: dict[str, CausalVariable] = field(default_factory=dict)
    interactions: dict[str, ArtificialNode] = field(default_factory=dict)
    aliases: dict[str, str] = field(default_factory=dict)
    denials: set[DeniedRelation] = field(default_factory=set)
    plants: list[Plant] = field(default_factory=list)
    edits: list[DiagramEdge] = field(default_factory=list)

    def variable(self, name: str, values: Mapping[str, list[str]], clusters: frozenset[str] = frozenset({CLUSTER})) -> None:
        self.variables[name] = CausalVariable(name, {k: frozenset(v) for k, v in values.items()})
        for labels in values.values():
            for label in labels:
                self.entities.append((label, clusters))

    def simple(self, name: str) -> str:
        """Single-valued variable ``name`` owning entity ``<name>On``."""
        label = f"{name}On"
        self.variable(name, {"on": [label]})
        return label


def _clean(b: _Builder, rng: random.Random, n_vars: int) -> None:
    letters = "AB"
    owned: dict[str, list[str]] = {}
    for i in range(n_vars):
        name = f"Var{i}"
        values = {}
        for v in range(rng.randint(1, 2)):
            values[f"val{letters[v]}"] = [f"{name}Val{letters[v]}Ent{k}" for k in range(rng.randint(1, 2))]
        b.variable(name, values)
        owned[name] = [lb for labels in values.values() for lb in labels]
    if n_vars >= 2 and rng.random() < 0.5:
        x, y = sorted(rng.sample(range(n_vars), 2))
        node = ArtificialNode(
            "Inter0",
            frozenset({Constituent(f"Var{x}", "valA"), Constituent(f"Var{y}", "valA")}),
        )
        b.interactions[node.name] = node
        b.entities.append((node.name, frozenset({CLUSTER})))
        owned[node.name] = [node.name]

    order = list(owned)
    rng.shuffle(order)
    candidates = [(order[i], order[j]) for i in range(len(order)) for j in range(i + 1, len(order))]
    rng.shuffle(candidates)
    succ: dict[str, set[str]] = {n: set() for n in order}
    pred: dict[str, set[str]] = {n: set() for n in order}
    for x, y in candidates:
        if rng.random() >= 0.4:
            continue
        shadowed = succ[x] & pred[y]  # x -> b -> y would mediate x -> y
        shadows_out = succ[x] & succ[y]  # x -> c becomes mediated by x -> y -> c
        shadows_in = pred[x] & pred[y]  # a -> y becomes mediated by a -> x -> y
        if shadowed or shadows_out or shadows_in:
            continue
        succ[x].add(y)
        pred[y].add(x)
        for _ in range(rng.randint(1, 2)):
            b.assertions.append((rng.choice(owned[x]), rng.choice(owned[y])))


def _plant(b: _Builder, code: Code, k: int) -> None:
    p = f"P{k}"
    if code is Code.NAME_UNRESOLVED:
        src = b.simple(f"{p}Src")
        b.assertions.append((src, f"{p}Ghost"))
        b.plants.append(Plant(code, (f"{p}Ghost",)))
    elif code is Code.ALIAS_CHAIN:
        b.aliases[f"{p}AliasA"] = f"{p}AliasB"
        b.aliases[f"{p}AliasB"] = f"{p}AliasC"
        b.plants.append(Plant(code, (f"{p}AliasB",)))
    elif code is Code.CLUSTER_OVERLAP:
        label = f"{p}MultiOn"
        b.variable(f"{p}Multi", {"on": [label]}, frozenset({CLUSTER, f"{p}Other"}))
        b.plants.append(Plant(code, (label,)))
    elif code is Code.R1_DUP:
        label = f"{p}Shared"
        b.variables[f"{p}DupA"] = CausalVariable(f"{p}DupA", {"on": frozenset({label})})
        b.variables[f"{p}DupB"] = CausalVariable(f"{p}DupB", {"on": frozenset({label})})
        b.entities.append((label, frozenset({CLUSTER})))
        b.plants.append(Plant(code, (label,)))
    elif code is Code.R1_UNASSIGNED:
        b.entities.append((f"{p}Orphan", frozenset({CLUSTER})))
        b.plants.append(Plant(code, (f"{p}Orphan",)))
    elif code is Code.R1_NEARDUP:
        stem = f"{p}gas {p}leak {p}inside"
        a, c = f"{stem} {p}buildings", f"{stem} {p}dwellings"
        b.variable(f"{p}NearA", {"on": [a]})
        b.variable(f"{p}NearB", {"on": [c]})
        b.plants.append(Plant(code, (a, c)))
    elif code is Code.R2_MISPLACED:
        var = f"{p}Deg"
        b.variable(var, {"one": [f"{var}One"], "two": [f"{var}Two"]})
        name = f"{p}Degenerate"
        b.interactions[name] = ArtificialNode(name, frozenset({Constituent(var, "one"), Constituent(var, "two")}))
        b.entities.append((name, frozenset({CLUSTER})))
        b.plants.append(Plant(code, (name,)))
    elif code is Code.R3_MEDIATED:
        a, m, c = (b.simple(f"{p}{s}") for s in "ABC")
        b.assertions.extend([(a, m), (m, c), (a, c)])
        b.plants.append(Plant(code, (f"{p}A -> {p}C", f"{p}B")))
    elif code is Code.R4_TRANSITIVITY:
        e, f, g = (b.simple(f"{p}{s}") for s in "EFG")
        b.assertions.extend([(e, f), (f, g)])
        b.denials.add(DeniedRelation(f"{p}E", f"{p}G"))
        b.plants.append(Plant(code, (f"{p}E", f"{p}G")))
    elif code is Code.R4_CYCLE:
        x, y, z = (b.simple(f"{p}{s}") for s in "XYZ")
        b.assertions.extend([(x, y), (y, z), (z, x)])
        b.plants.append(Plant(code, (f"{p}X", f"{p}Y", f"{p}Z")))
    elif code is Code.R3_UNSUPPORTED:
        b.simple(f"{p}U")
        b.simple(f"{p}V")
        b.edits.append(DiagramEdge(f"{p}U", f"{p}V", EdgeKind.VARIABLE_CAUSAL))
        b.plants.append(Plant(code, (f"{p}U -> {p}V",)))
    elif code is Code.R3_UNTYPED_ARTIFICIAL:
        s = b.simple(f"{p}S")
        b.simple(f"{p}T")
        name = f"{p}Combo"
        b.interactions[name] = ArtificialNode(name, frozenset({Constituent(f"{p}S", "on"), Constituent(f"{p}T", "on")}))
        b.entities.append((name, frozenset({CLUSTER})))
        row = EntityAssertion(s, name, CLUSTER, "tampered", k + 1)
        b.edits.append(DiagramEdge(f"{p}S", name, EdgeKind.VARIABLE_CAUSAL, frozenset({row})))
        b.plants.append(Plant(code, (f"{p}S -> {name}",)))
    else:  # pragma: no cover - Code is exhaustive above
        raise ParameterError(f"cannot plant {code}")


def parse_plants(text: str) -> dict[Code, int]:
    """Parse ``CODE=N[,CODE=N...]``."""
    plants: dict[Code, int] = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        code, sep, count = part.partition("=")
        try:
            plants[Code(code.strip())] = int(count) if sep else 1
        except ValueError:
            raise ParameterError(f"bad plant {part!r}; expected CODE=COUNT") from None
    return plants


def generate(seed: int, n_vars: int, plants: Mapping[Code | str, int] | None = None) -> SynthCorpus:
    """Build a synthetic (bundle, spec, ledger) triple; pure in its arguments."""
    requested = {Code(c): n for c, n in (plants or {}).items()}
    if n_vars < 1:
        raise ParameterError("n_vars must be positive")
    if any(n < 0 for n in requested.values()):
        raise ParameterError("plant counts must be non-negative")
    if n_vars < 3 and any(requested.get(c, 0) for c in R4_CODES):
        raise ParameterError("R4 plants need n_vars >= 3")

    rng = random.Random(seed)
    b = _Builder()
    _clean(b, rng, n_vars)
    k = 0
    for code in sorted(requested, key=lambda c: c.value):
        for _ in range(requested[code]):
            _plant(b, code, k)
            k += 1

    entities = tuple(TextEntity(i, label, clusters) for i, (label, clusters) in enumerate(b.entities, start=1))
    assertions = tuple(
        EntityAssertion(cause, effect, CLUSTER, "relations.csv", line)
        for line, (cause, effect) in enumerate(b.assertions, start=2)
    )
    bundle = CorpusBundle(entities, assertions, ("map.csv", "relations.csv"))
    spec = CurationSpec(
        aliases=b.aliases,
        variables=b.variables,
        interactions=b.interactions,
        denials=frozenset(b.denials),
    )
    return SynthCorpus(bundle, spec, PlantLedger(tuple(b.plants), tuple(b.edits)))


def apply_edits(diagram: CausalDiagram, edits: tuple[DiagramEdge, ...]) -> CausalDiagram:
    for edge in edits:
        diagram = add_edge(diagram, edge)
    return diagram


def synth_diagram(corpus: SynthCorpus) -> CausalDiagram:
    """The built diagram with the ledger's hand edits applied."""
    return apply_edits(build_diagram(corpus.bundle, corpus.spec).diagram, corpus.ledger.edits)


def write_corpus(corpus: SynthCorpus, directory: str | Path, seed: int | None = None, n_vars: int | None = None) -> list[Path]:
    """Write map.csv, relations.csv, spec.cdsl, ledger.json (and diagram.json
    when the ledger carries diagram edits) into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "map.csv": write_cognitive_map(corpus.bundle.entities),
        "relations.csv": write_assertions(corpus.bundle.assertions),
        "spec.cdsl": format_curation(corpus.spec),
    }
    ledger = {"seed": seed, "n_vars": n_vars, **corpus.ledger.to_dict()}
    files["ledger.json"] = json.dumps(ledger, sort_keys=True, indent=2) + "\n"
    if corpus.ledger.edits:
        files["diagram.json"] = render_diagram_json(synth_diagram(corpus))
    written = []
    for name, text in files.items():
        path = out / name
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)
    return written


def recalled(plant: Plant, diagnostics: Iterable[Diagnostic]) -> bool:
    """True when some diagnostic has the plant's code and shares a subject with it."""
    return any(d.code is plant.code and set(d.subjects) & set(plant.subjects) for d in diagnostics)

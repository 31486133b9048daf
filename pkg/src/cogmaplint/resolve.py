"""Label canonicalization and lexical near-duplicate detection."""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from cogmaplint.model import CurationSpec, TextEntity

_NON_WORD = re.compile(r"[\W_]+")


def normalize(label: str) -> str:
    """Lowercase, turn punctuation into spaces, collapse whitespace, trim."""
    return " ".join(_NON_WORD.sub(" ", label.lower()).split())


def tokens(label: str) -> frozenset[str]:
    return frozenset(normalize(label).split())


def jaccard(a: str, b: str) -> Fraction:
    """Token-set Jaccard similarity of two labels, as an exact fraction."""
    ta, tb = tokens(a), tokens(b)
    union = ta | tb
    if not union:
        return Fraction(0)
    return Fraction(len(ta & tb), len(union))


class Resolver:
    """Maps raw labels onto a fixed set of canonical labels.

    The alias table is applied once, on the normalized key; the result is
    then matched against ``known`` by normalized equality.  When two known
    labels normalize alike, the lexicographically smallest wins.
    """

    def __init__(self, aliases: Mapping[str, str], known: Iterable[str]) -> None:
        self._aliases = {normalize(k): v for k, v in sorted(aliases.items())}
        self._known: dict[str, str] = {}
        for label in sorted(known):
            self._known.setdefault(normalize(label), label)

    def resolve(self, label: str) -> str | None:
        key = normalize(label)
        target = self._aliases.get(key)
        if target is not None:
            key = normalize(target)
        return self._known.get(key)

    def table(self, labels: Iterable[str]) -> ResolutionTable:
        canonical: dict[str, str] = {}
        unresolved: set[str] = set()
        for label in labels:
            result = self.resolve(label)
            if result is None:
                unresolved.add(label)
            else:
                canonical[normalize(label)] = result
        return ResolutionTable(dict(sorted(canonical.items())), frozenset(unresolved))


@dataclass(frozen=True)
class ResolutionTable:
    canonical: Mapping[str, str]
    unresolved: frozenset[str]


def resolve(label: str, spec: CurationSpec, known: Iterable[str]) -> str | None:
    """Canonical label for ``label``, or ``None`` when nothing matches."""
    return Resolver(spec.aliases, known).resolve(label)


@dataclass(frozen=True, order=True)
class NearDuplicate:
    a: str
    b: str
    score: Fraction

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.a, self.b))


def near_duplicates(entities: Iterable[TextEntity], threshold: Fraction | float) -> list[NearDuplicate]:
    """All label pairs whose token Jaccard similarity reaches ``threshold``.

    Pairs whose labels normalize to the same text are skipped; those are
    duplicates, not near-duplicates.
    """
    threshold = Fraction(threshold)
    if not 0 <= threshold <= 1:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    labels = sorted({e.label for e in entities})
    keyed = sorted({normalize(label): label for label in reversed(labels)}.items())
    found: list[NearDuplicate] = []
    for (ka, la), (kb, lb) in combinations(keyed, 2):
        score = jaccard(ka, kb)
        if score >= threshold:
            a, b = sorted((la, lb))
            found.append(NearDuplicate(a, b, score))
    return sorted(found)

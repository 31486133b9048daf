"""Readers and writers for the two corpus tables (``map.csv``, ``relations.csv``)."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Iterator, Sequence
from pathlib import Path

from cogmaplint.model import CorpusBundle, EntityAssertion, Source, TextEntity

MAP_HEADER = ("index", "text_entity", "cluster")
RELATIONS_HEADER = ("cause", "effect", "cluster")
CLUSTER_SEPARATOR = "&"


class IngestError(ValueError):
    def __init__(self, source: str, line: int, message: str) -> None:
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line
        self.message = message


def _decode(data: str | bytes) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8-sig")
    return data.removeprefix("\ufeff")


def _rows(data: str | bytes, header: Sequence[str], source: str) -> Iterator[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(_decode(data), newline=""))
    first = next(reader, None)
    if first is None:
        raise IngestError(source, 1, f"missing header, expected {','.join(header)}")
    if [cell.strip() for cell in first] != list(header):
        raise IngestError(source, 1, f"bad header {','.join(first)!r}, expected {','.join(header)}")
    while True:
        start = reader.line_num + 1
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            raise IngestError(source, start, str(exc)) from None
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise IngestError(source, start, f"expected {len(header)} columns, found {len(row)}")
        yield start, row


def split_clusters(cell: str) -> frozenset[str]:
    return frozenset(part.strip() for part in cell.split(CLUSTER_SEPARATOR) if part.strip())


def parse_cognitive_map(data: str | bytes, source: str = "map.csv") -> list[TextEntity]:
    """Parse ``index,text_entity,cluster`` rows into entities.

    Raises :class:`IngestError` naming the 1-based line for malformed rows
    and duplicate indices.
    """
    entities: list[TextEntity] = []
    seen: dict[int, int] = {}
    for line, (index, label, cluster) in _rows(data, MAP_HEADER, source):
        try:
            ident = int(index.strip())
        except ValueError:
            raise IngestError(source, line, f"index {index!r} is not an integer") from None
        if ident < 1:
            raise IngestError(source, line, f"index must be positive, got {ident}")
        if ident in seen:
            raise IngestError(source, line, f"duplicate index {ident} (first on line {seen[ident]})")
        label = label.strip()
        if not label:
            raise IngestError(source, line, "empty text_entity")
        seen[ident] = line
        entities.append(TextEntity(ident, label, split_clusters(cluster), Source.COGNITIVE_MAP))
    return entities


def parse_assertions(data: str | bytes, source: str = "relations.csv") -> list[EntityAssertion]:
    assertions: list[EntityAssertion] = []
    for line, (cause, effect, cluster) in _rows(data, RELATIONS_HEADER, source):
        cause, effect = cause.strip(), effect.strip()
        if not cause or not effect:
            raise IngestError(source, line, "cause and effect must be non-empty")
        assertions.append(EntityAssertion(cause, effect, cluster.strip(), source, line))
    return assertions


def _write(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_cognitive_map(entities: Iterable[TextEntity]) -> str:
    sep = f" {CLUSTER_SEPARATOR} "
    return _write(MAP_HEADER, ((e.id, e.label, sep.join(sorted(e.clusters))) for e in entities))


def write_assertions(assertions: Iterable[EntityAssertion]) -> str:
    return _write(RELATIONS_HEADER, ((a.cause, a.effect, a.cluster) for a in assertions))


def load_bundle(map_paths: Iterable[str | Path], relations_paths: Iterable[str | Path]) -> CorpusBundle:
    """Read and concatenate any number of map and relations files."""
    entities: list[TextEntity] = []
    assertions: list[EntityAssertion] = []
    sources: list[str] = []
    first_seen: dict[int, str] = {}
    for path in map_paths:
        name = str(path)
        for entity in parse_cognitive_map(Path(path).read_bytes(), name):
            if entity.id in first_seen:
                raise ValueError(f"{name}: entity index {entity.id} already used in {first_seen[entity.id]}")
            first_seen[entity.id] = name
            entities.append(entity)
        sources.append(name)
    for path in relations_paths:
        name = str(path)
        assertions.extend(parse_assertions(Path(path).read_bytes(), name))
        sources.append(name)
    return CorpusBundle(tuple(entities), tuple(assertions), tuple(sources))

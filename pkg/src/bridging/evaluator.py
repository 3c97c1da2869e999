"""Path evaluation: inclusion, path patterns, markers and CP lists.

Well-formed paths are thinned out in three steps.  A path that properly
includes a compatible shorter one is discarded; each survivor is labelled
plausible, metonymic or implausible by matching relation patterns; only the
strongest label present is kept.  The result for a concept pair is a
:class:`CPList`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .kb import KBError, Schema
from .paths import DEFAULT_CONFIG, ConceptualPath, PathLike, SearchConfig, find_connected_paths, relations_of

TRANSITIVE_PART_WHOLE = (
    "has-physical-part",
    "collection-member",
    "mass-portion",
    "process-phase",
    "event-feature",
    "area-place",
)
EXTRA_PLAUSIBLE = ("spatial-containment", "connection")
METONYMIC_RELATIONS = ("has-part", "part-of", "produced-by")
METONYMIC_INVERSES = ("part-of", "has-part", "produces")


class PathMarker(enum.IntEnum):
    """Conceptual strength; larger is stronger."""

    IMPLAUSIBLE = 0
    METONYMIC = 1
    PLAUSIBLE = 2

    def __str__(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class PatternSets:
    """Pattern inventory bound to a schema.

    Only relation names the schema declares are kept, so every base can be
    used in subsumption queries.  ``transitive_inv`` holds the inverses of
    ``transitive``.
    """

    transitive: frozenset[str]
    transitive_inv: frozenset[str]
    extra: frozenset[str]
    ms: frozenset[str]
    ms_inv: frozenset[str]

    @classmethod
    def for_schema(
        cls,
        schema: Schema,
        transitive: Iterable[str] = TRANSITIVE_PART_WHOLE,
        extra: Iterable[str] = EXTRA_PLAUSIBLE,
        ms: Iterable[str] = METONYMIC_RELATIONS,
        ms_inv: Iterable[str] = METONYMIC_INVERSES,
    ) -> "PatternSets":
        declared = schema.relations
        t = frozenset(r for r in transitive if r in declared)
        ms_set = {r for r in ms if r in declared}
        ms_inv_set = {r for r in ms_inv if r in declared}
        for name, inv in schema.metonymy_relations:
            ms_set.add(name)
            ms_inv_set.add(inv)
        return cls(
            transitive=t,
            transitive_inv=frozenset(schema.inverse(r) for r in t),
            extra=frozenset(r for r in extra if r in declared),
            ms=frozenset(ms_set),
            ms_inv=frozenset(ms_inv_set),
        )

    @property
    def plausible_bases(self) -> frozenset[str]:
        return self.transitive | self.transitive_inv | self.extra

    @property
    def collapsible_bases(self) -> frozenset[str]:
        return self.transitive | self.transitive_inv


@dataclass(frozen=True)
class CPList:
    source: str
    target: str
    paths: tuple[ConceptualPath, ...] = ()
    marker: Optional[PathMarker] = None

    def __bool__(self) -> bool:
        return bool(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __str__(self) -> str:
        if not self.paths:
            return f"CP({self.source}, {self.target}) = empty"
        return f"CP({self.source}, {self.target}) = {self.marker} [{', '.join(map(str, self.paths))}]"


def includes(p1: PathLike, p2: PathLike, schema: Schema) -> bool:
    """Path inclusion criterion: ``p1`` properly contains a compatible ``p2``.

    ``p2`` must occur in ``p1`` as a contiguous, proper sub-sequence, the
    domains of the first relations must be comparable, and so must the
    ranges of the last relations.
    """
    r, s = relations_of(p1), relations_of(p2)
    n, m = len(r), len(s)
    if m >= n:
        return False
    if not schema.comparable(schema.domain(r[0]), schema.domain(s[0])):
        return False
    if not schema.comparable(schema.range(r[-1]), schema.range(s[-1])):
        return False
    return any(r[i:i + m] == s for i in range(n - m + 1))


def matches_star_pattern(path: PathLike, base: str, schema: Schema) -> bool:
    """``(base*)``: every step is subsumed by ``base``."""
    if base not in schema.relations:
        raise KBError(f"unknown relation {base!r}")
    rels = relations_of(path)
    return bool(rels) and all(schema.subsumes_relation(base, r) for r in rels)


def is_plausible(path: PathLike, schema: Schema, patterns: PatternSets) -> bool:
    rels = relations_of(path)
    if len(rels) == 1:
        schema.relation_ancestors(rels[0])
        return True
    return any(matches_star_pattern(rels, b, schema) for b in patterns.plausible_bases)


def _acts_as(segment: Sequence[str], targets: frozenset[str], schema: Schema, patterns: PatternSets) -> bool:
    # a single relation, or a uniform transitive part-whole chain read as one relation
    if len(segment) == 1:
        return any(schema.subsumes_relation(t, segment[0]) for t in targets)
    return any(
        matches_star_pattern(segment, b, schema) and any(schema.subsumes_relation(t, b) for t in targets)
        for b in patterns.collapsible_bases
    )


def is_metonymic(path: PathLike, schema: Schema, patterns: PatternSets) -> bool:
    """Metonymic path patterns.

    Not plausible, and either a plausible prefix followed by a relation in
    ``ms`` or a relation in ``ms_inv`` followed by a plausible rest.  Uniform
    transitive part-whole segments stand in for a single relation.
    """
    rels = relations_of(path)
    n = len(rels)
    if n < 2 or is_plausible(rels, schema, patterns):
        return False
    for j in range(1, n):
        head, tail = rels[:j], rels[j:]
        if is_plausible(head, schema, patterns) and _acts_as(tail, patterns.ms, schema, patterns):
            return True
        if _acts_as(head, patterns.ms_inv, schema, patterns) and is_plausible(tail, schema, patterns):
            return True
    return False


def classify_path(path: PathLike, schema: Schema, patterns: PatternSets) -> PathMarker:
    if is_plausible(path, schema, patterns):
        return PathMarker.PLAUSIBLE
    if is_metonymic(path, schema, patterns):
        return PathMarker.METONYMIC
    return PathMarker.IMPLAUSIBLE


@dataclass
class PathReport:
    """Every stage of the evaluation for one concept pair, for tracing and counts."""

    source: str
    target: str
    connected: list[ConceptualPath]
    well_formed: list[ConceptualPath]
    included_by: dict[ConceptualPath, list[ConceptualPath]] = field(default_factory=dict)
    markers: dict[ConceptualPath, PathMarker] = field(default_factory=dict)
    cp: CPList = None  # type: ignore[assignment]

    @property
    def cyclic(self) -> list[ConceptualPath]:
        kept = set(self.well_formed)
        return [p for p in self.connected if p not in kept]

    @property
    def after_inclusion(self) -> list[ConceptualPath]:
        return [p for p in self.well_formed if p not in self.included_by]

    def counts(self) -> tuple[int, int, int, int]:
        return len(self.connected), len(self.well_formed), len(self.after_inclusion), len(self.cp.paths)


def _select(
    x: str, y: str, well_formed: list[ConceptualPath], schema: Schema, patterns: PatternSets
) -> tuple[dict, dict, CPList]:
    included_by = {}
    for p1 in well_formed:
        dominators = [p2 for p2 in well_formed if p2 != p1 and includes(p1, p2, schema)]
        if dominators:
            included_by[p1] = dominators
    survivors = [p for p in well_formed if p not in included_by]
    markers = {p: classify_path(p, schema, patterns) for p in survivors}
    if not survivors:
        return included_by, markers, CPList(x, y)
    best = max(markers.values())
    return included_by, markers, CPList(x, y, tuple(p for p in survivors if markers[p] == best), best)


def build_cp_list(
    x: str,
    y: str,
    schema: Schema,
    patterns: PatternSets | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
) -> CPList:
    """Strongest surviving well-formed paths from ``x`` to ``y``."""
    patterns = patterns or PatternSets.for_schema(schema)
    wf = find_connected_paths(x, y, schema, config, prune_cyclic=True)
    return _select(x, y, wf, schema, patterns)[2]


def evaluate_paths(
    x: str,
    y: str,
    schema: Schema,
    patterns: PatternSets | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
) -> PathReport:
    patterns = patterns or PatternSets.for_schema(schema)
    connected = find_connected_paths(x, y, schema, config, prune_cyclic=False)
    wf = find_connected_paths(x, y, schema, config, prune_cyclic=True)
    included_by, markers, cp = _select(x, y, wf, schema, patterns)
    return PathReport(x, y, connected, wf, included_by, markers, cp)


def path_marker_of_list(cp: CPList) -> Optional[PathMarker]:
    return cp.marker if cp.paths else None


def _strength(cp: CPList) -> int:
    marker = path_marker_of_list(cp)
    return -1 if marker is None else int(marker)


def is_stronger_than(cp1: CPList, cp2: CPList) -> bool:
    """Marker of ``cp1`` is strictly stronger; an empty list is weakest of all.

    Both lists are meant to start at the same concept.
    """
    return _strength(cp1) > _strength(cp2)


def equally_strong_as(cp1: CPList, cp2: CPList) -> bool:
    return _strength(cp1) == _strength(cp2)

"""Search for connected, non-cyclic conceptual paths between two concepts."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .kb import KBError, Schema

MAX_LEN_ENV = "BRIDGE_MAX_PATH_LEN"


@dataclass(frozen=True)
class ConceptualPath:
    """A role chain ``(r_1 ... r_n)`` with the concepts it passes through.

    ``waypoints[0]`` is the start concept and ``waypoints[i]`` is the range
    of ``relations[i-1]``.
    """

    relations: tuple[str, ...]
    waypoints: tuple[str, ...]

    def __post_init__(self):
        if not self.relations:
            raise ValueError("a conceptual path has at least one relation")
        if len(self.waypoints) != len(self.relations) + 1:
            raise ValueError("need exactly one waypoint more than relations")

    @classmethod
    def through(cls, schema: Schema, start: str, relations: Sequence[str]) -> "ConceptualPath":
        """Build a path from a start concept, deriving waypoints from ranges."""
        return cls(tuple(relations), (start, *(schema.range(r) for r in relations)))

    def __len__(self) -> int:
        return len(self.relations)

    @property
    def start(self) -> str:
        return self.waypoints[0]

    @property
    def end(self) -> str:
        return self.waypoints[-1]

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (len(self.relations), self.relations)

    def __str__(self) -> str:
        return "(" + " ".join(self.relations) + ")"


PathLike = Union[ConceptualPath, Sequence[str]]


def relations_of(path: PathLike) -> tuple[str, ...]:
    return path.relations if isinstance(path, ConceptualPath) else tuple(path)


@dataclass(frozen=True)
class SearchConfig:
    max_length: int | None = None
    distinct_waypoints: bool = True
    # restrict each step to the most specific roles of the current concept
    most_specific_roles: bool = True

    def __post_init__(self):
        if self.max_length is not None and self.max_length < 1:
            raise ValueError("max_length must be >= 1")
        if self.max_length is None and not self.distinct_waypoints:
            raise ValueError("search without distinct waypoints needs a max_length")

    @classmethod
    def from_env(cls, **overrides) -> "SearchConfig":
        raw = os.environ.get(MAX_LEN_ENV)
        if raw and "max_length" not in overrides:
            try:
                overrides["max_length"] = int(raw)
            except ValueError:
                raise ValueError(f"{MAX_LEN_ENV} must be an integer, got {raw!r}") from None
        return cls(**overrides)


DEFAULT_CONFIG = SearchConfig()


def is_cyclic(path: PathLike, schema: Schema) -> bool:
    """Cyclic path criterion.

    True iff two distinct positions ``i != j`` carry relations ``r_i`` and
    ``r_j`` such that ``r_i isa_R* s`` and ``r_j isa_R* inverse(s)`` for some
    declared relation ``s``.
    """
    rels = relations_of(path)
    anc = [schema.relation_ancestors(r) for r in rels]
    inv = [schema.inverse_ancestors(r) for r in rels]
    for i in range(len(rels)):
        for j in range(len(rels)):
            if i != j and anc[i] & inv[j]:
                return True
    return False


def _roles(schema: Schema, concept: str, config: SearchConfig) -> Sequence[str]:
    if config.most_specific_roles:
        return schema.traversable_roles(concept)
    return sorted(schema.roles_of(concept))


def _search(
    schema: Schema, x: str, y: str, config: SearchConfig, prune_cyclic: bool
) -> Iterator[ConceptualPath]:
    y_anc = schema.concept_ancestors(y)

    def reaches(c: str) -> bool:
        return c in y_anc or y in schema.concept_ancestors(c)

    # stack entries: relations, waypoints, union of isa_R ancestors so far.
    # r_k closes a cycle iff inverse(a) is in that union for some ancestor a of r_k.
    stack: list[tuple[tuple[str, ...], tuple[str, ...], frozenset[str]]] = [((), (x,), frozenset())]
    while stack:
        rels, points, seen_anc = stack.pop()
        if config.max_length is not None and len(rels) >= config.max_length:
            continue
        for r in reversed(_roles(schema, points[-1], config)):
            nxt = schema.range(r)
            if config.distinct_waypoints and nxt in points:
                continue
            if prune_cyclic and schema.inverse_ancestors(r) & seen_anc:
                continue
            new_rels, new_points = rels + (r,), points + (nxt,)
            if reaches(nxt):
                yield ConceptualPath(new_rels, new_points)
            stack.append((new_rels, new_points, seen_anc | schema.relation_ancestors(r)))


def find_connected_paths(
    x: str,
    y: str,
    schema: Schema,
    config: SearchConfig = DEFAULT_CONFIG,
    prune_cyclic: bool = True,
) -> list[ConceptualPath]:
    """All connected paths from ``x`` to ``y``, sorted by length then names.

    Each step follows a (possibly inherited) role of the current concept,
    so only generalisation happens along the way; the final concept must be
    ``isa_F*``-comparable with ``y``.  Cyclic prefixes are cut during the
    search unless ``prune_cyclic`` is false.
    """
    for c in (x, y):
        if c not in schema.concept_parents:
            raise KBError(f"unknown concept {c!r}")
    out = list(_search(schema, x, y, config, prune_cyclic))
    out.sort(key=ConceptualPath.sort_key)
    return out


def well_formed_paths(x: str, y: str, schema: Schema, config: SearchConfig = DEFAULT_CONFIG) -> list[ConceptualPath]:
    """Connected and non-cyclic paths from ``x`` to ``y``."""
    return find_connected_paths(x, y, schema, config, prune_cyclic=True)

"""Brute-force reference for the path machinery, written from the definitions.

Nothing here imports the library's search or evaluator code.  Closures are
recomputed by fixed-point iteration, paths are enumerated by extending
every connected prefix, and each filter is the literal quantified formula.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

PLAUSIBLE, METONYMIC, IMPLAUSIBLE = "plausible", "metonymic", "implausible"
STRENGTH = {IMPLAUSIBLE: 0, METONYMIC: 1, PLAUSIBLE: 2}

T_BASES = ["has-physical-part", "collection-member", "mass-portion", "process-phase", "event-feature", "area-place"]
EXTRA = ["spatial-containment", "connection"]
MS = ["has-part", "part-of", "produced-by"]
MS_INV = ["part-of", "has-part", "produces"]


@dataclass
class RawKB:
    """Declarations as plain dicts: concept -> parents, relation -> (domain, range, inverse, parents)."""

    concepts: dict[str, list[str]] = field(default_factory=dict)
    relations: dict[str, tuple[str, str, str, list[str]]] = field(default_factory=dict)

    def to_text(self, omit_inverse_lines: bool = False) -> str:
        lines = []
        for c, ps in self.concepts.items():
            lines.append(f"concept {c}" + (f" isa {' '.join(ps)}" if ps else ""))
        written = set()
        for r, (d, rg, inv, ps) in self.relations.items():
            if omit_inverse_lines and inv in written and inv != r:
                continue
            isa = f" isa {' '.join(ps)}" if ps else ""
            lines.append(f"relation {r}{isa} domain {d} range {rg} inverse {inv}")
            written.add(r)
        return "\n".join(lines) + "\n"


def closure(parents: dict[str, list[str]]) -> dict[str, set[str]]:
    anc = {k: {k} for k in parents}
    changed = True
    while changed:
        changed = False
        for k, ps in parents.items():
            for p in ps:
                extra = anc[p] - anc[k]
                if extra:
                    anc[k] |= extra
                    changed = True
    return anc


class Oracle:
    def __init__(self, raw: RawKB):
        self.raw = raw
        self.c_anc = closure(raw.concepts)
        self.r_anc = closure({r: v[3] for r, v in raw.relations.items()})
        self.dom = {r: v[0] for r, v in raw.relations.items()}
        self.rng = {r: v[1] for r, v in raw.relations.items()}
        self.inv = {r: v[2] for r, v in raw.relations.items()}
        declared = set(raw.relations)
        self.t = [b for b in T_BASES if b in declared]
        self.t_inv = [self.inv[b] for b in self.t]
        self.p_bases = self.t + self.t_inv + [b for b in EXTRA if b in declared]
        self.ms = [b for b in MS if b in declared]
        self.ms_inv = [b for b in MS_INV if b in declared]

    # -- hierarchy ---------------------------------------------------------
    def isa_c(self, a: str, b: str) -> bool:
        return b in self.c_anc[a]

    def isa_r(self, a: str, b: str) -> bool:
        return b in self.r_anc[a]

    def comparable(self, a: str, b: str) -> bool:
        return self.isa_c(a, b) or self.isa_c(b, a)

    def step_roles(self, c: str) -> list[str]:
        applicable = [r for r in self.raw.relations if self.isa_c(c, self.dom[r])]
        # a role is shadowed at c by any other applicable role below it
        return [r for r in applicable if not any(s != r and self.isa_r(s, r) for s in applicable)]

    # -- paths -------------------------------------------------------------
    def connected_from(self, x: str, max_len: int) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
        """Every connected relation sequence from ``x`` with distinct waypoints."""
        out = []
        frontier = [((), (x,))]
        for _ in range(max_len):
            nxt = []
            for rels, pts in frontier:
                for r in self.step_roles(pts[-1]):
                    c = self.rng[r]
                    if c in pts:
                        continue
                    item = (rels + (r,), pts + (c,))
                    nxt.append(item)
                    out.append(item)
            frontier = nxt
        return out

    def cyclic(self, rels: tuple[str, ...]) -> bool:
        n = len(rels)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for s in self.raw.relations:
                    if self.isa_r(rels[i], s) and self.isa_r(rels[j], self.inv[s]):
                        return True
        return False

    def well_formed(self, x: str, y: str, max_len: int, cache=None) -> set[tuple[str, ...]]:
        seqs = cache if cache is not None else self.connected_from(x, max_len)
        return {
            rels for rels, pts in seqs
            if self.comparable(pts[-1], y) and not self.cyclic(rels)
        }

    def includes(self, p1: tuple[str, ...], p2: tuple[str, ...]) -> bool:
        n, m = len(p1), len(p2)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                if j - i + 1 != m or p1[i - 1:j] != p2:
                    continue
                if not (i != 1 or j != n):
                    continue
                if self.comparable(self.dom[p1[0]], self.dom[p2[0]]) and self.comparable(
                    self.rng[p1[-1]], self.rng[p2[-1]]
                ):
                    return True
        return False

    def star(self, seg, base) -> bool:
        return len(seg) > 0 and all(self.isa_r(r, base) for r in seg)

    def plausible(self, seg) -> bool:
        return len(seg) == 1 or any(self.star(seg, b) for b in self.p_bases)

    def acts_as(self, seg, targets) -> bool:
        if len(seg) == 1:
            return any(self.isa_r(seg[0], t) for t in targets)
        return any(
            self.star(seg, b) and any(self.isa_r(b, t) for t in targets)
            for b in self.t + self.t_inv
        )

    def metonymic(self, p) -> bool:
        if self.plausible(p):
            return False
        for k in range(1, len(p)):
            if self.plausible(p[:k]) and self.acts_as(p[k:], self.ms):
                return True
            if self.acts_as(p[:k], self.ms_inv) and self.plausible(p[k:]):
                return True
        return False

    def marker(self, p) -> str:
        if self.plausible(p):
            return PLAUSIBLE
        if self.metonymic(p):
            return METONYMIC
        return IMPLAUSIBLE

    def cp_list(self, x: str, y: str, max_len: int, cache=None) -> tuple[str | None, set[tuple[str, ...]]]:
        wf = self.well_formed(x, y, max_len, cache)
        survivors = {p for p in wf if not any(q != p and self.includes(p, q) for q in wf)}
        if not survivors:
            return None, set()
        marks = {p: self.marker(p) for p in survivors}
        best = max(marks.values(), key=STRENGTH.__getitem__)
        return best, {p for p in survivors if marks[p] == best}


# -- random KBs -------------------------------------------------------------

RELATION_NAMES = [
    ("has-part", "part-of"),
    ("has-physical-part", "physical-part-of"),
    ("produces", "produced-by"),
    ("collection-member", "member-of-collection"),
    ("spatial-containment", "spatially-contained-in"),
    ("has-property", "property-of"),
    ("rel-a", "rel-a-of"),
    ("rel-b", "rel-b-of"),
    ("rel-c", "rel-c-of"),
    ("rel-d", "rel-d-of"),
]


def random_kb(seed: int, max_concepts: int = 15, max_relations: int = 20) -> RawKB:
    """A random schema that respects narrowing and declares every inverse.

    About one pair in ten is the self-inverse ``connection``.
    """
    rnd = random.Random(seed)
    n_c = rnd.randint(3, max_concepts)
    names = [f"C{i}" for i in range(n_c)]
    raw = RawKB()
    for i, c in enumerate(names):
        k = rnd.choice([0, 1, 1, 1, 2]) if i else 0
        raw.concepts[c] = sorted(rnd.sample(names[:i], min(k, i)))
    anc = closure(raw.concepts)
    desc = {c: [d for d in names if c in anc[d]] for c in names}

    pairs = rnd.sample(RELATION_NAMES, rnd.randint(1, max_relations // 2))
    made: list[str] = []
    for fwd, bwd in pairs:
        parent = rnd.choice(made) if made and rnd.random() < 0.5 else None
        if parent is None:
            d, r = rnd.choice(names), rnd.choice(names)
            fp, bp = [], []
        else:
            pd, pr, pinv, _ = raw.relations[parent]
            d, r = rnd.choice(desc[pd]), rnd.choice(desc[pr])
            fp, bp = [parent], [pinv]
        raw.relations[fwd] = (d, r, bwd, fp)
        raw.relations[bwd] = (r, d, fwd, bp)
        made.append(fwd)
    if len(raw.relations) < max_relations and rnd.random() < 0.3:
        c = rnd.choice(names)
        raw.relations["connection"] = (c, c, "connection", [])
    return raw

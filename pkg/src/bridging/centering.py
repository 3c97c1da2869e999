"""Functional centering: forward-looking centers ranked by context-boundedness.

Elements of an utterance that realize something from the previous
utterance's C_f list are *bound* and come first, in the order the previous
list gave them.  Unbound elements follow in surface order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

# child -> parent
WORD_CLASSES: dict[str, Optional[str]] = {
    "Word": None,
    "Nominal": "Word",
    "Noun": "Nominal",
    "ProperNoun": "Nominal",
    "PronPersonal": "Nominal",
    "PronDemonstrative": "Nominal",
    "Determiner": "Word",
    "DetDefinite": "Determiner",
    "DetDemonstrative": "DetDefinite",
    "DetIndefinite": "Determiner",
    "Adjective": "Word",
    "Verb": "Word",
    "Preposition": "Word",
    "Adverb": "Word",
}


def isa_word_class(cls: str, ancestor: str) -> bool:
    """Reflexive-transitive subclass test over :data:`WORD_CLASSES`."""
    if cls not in WORD_CLASSES:
        raise ValueError(f"unknown word class {cls!r}")
    node: Optional[str] = cls
    while node is not None:
        if node == ancestor:
            return True
        node = WORD_CLASSES[node]
    return False


@dataclass
class Markable:
    id: str
    surface: str
    word_class: str
    position: int
    lemma: str = ""
    definite: bool = False
    head: Optional[str] = None
    referent: Optional[str] = None
    concept: Optional[str] = None

    @property
    def is_nominal(self) -> bool:
        return self.referent is not None and isa_word_class(self.word_class, "Nominal")

    @property
    def is_noun(self) -> bool:
        return isa_word_class(self.word_class, "Noun")


@dataclass
class Utterance:
    index: int
    markables: list[Markable] = field(default_factory=list)
    facts: list[tuple[str, str, str]] = field(default_factory=list)

    def markable(self, mid: str) -> Markable:
        for m in self.markables:
            if m.id == mid:
                return m
        raise KeyError(mid)

    def __contains__(self, m: Markable) -> bool:
        return any(x is m or x.id == m.id for x in self.markables)

    def has_definite_determiner(self, m: Markable) -> bool:
        """``m`` heads a DetDefinite dependent, or is flagged definite."""
        if m.definite:
            return True
        return any(d.head == m.id and isa_word_class(d.word_class, "DetDefinite") for d in self.markables)

    def nominals(self) -> list[Markable]:
        return sorted((m for m in self.markables if m.is_nominal), key=lambda m: m.position)


@dataclass(frozen=True)
class CfEntry:
    """One forward-looking center: an instance plus how it got there."""

    referent: str
    concept: str
    markable: Markable
    label: str
    bound: bool = False
    anchor: Optional[str] = None

    def __str__(self) -> str:
        return self.label


@dataclass
class CenteringState:
    cf: list[CfEntry]
    cb: Optional[CfEntry] = None

    @property
    def cp(self) -> Optional[CfEntry]:
        return self.cf[0] if self.cf else None

    def referents(self) -> list[str]:
        return [e.referent for e in self.cf]

    def index_of(self, referent: str) -> int:
        for i, e in enumerate(self.cf):
            if e.referent == referent:
                return i
        raise ValueError(f"{referent!r} is not a forward-looking center")


def rank_cf(
    u: Utterance,
    prev_cf: Sequence[CfEntry],
    instance_concept: Mapping[str, str],
    bridged: Mapping[str, str] | None = None,
    named: Iterable[str] = (),
) -> list[CfEntry]:
    """Rank the nominal referents of ``u`` by information structure.

    ``bridged`` maps markable ids to the previous-list referent they were
    linked to by ellipsis resolution; such markables count as bound at the
    rank of that referent.  Duplicate referents keep their best rank.
    """
    bridged = bridged or {}
    named = set(named)
    prev_rank = {}
    for i, e in enumerate(prev_cf):
        prev_rank.setdefault(e.referent, i)
    bound, unbound = [], []
    for m in u.nominals():
        if m.referent not in instance_concept:
            raise KeyError(f"unknown referent {m.referent!r} for markable {m.id}")
        anchor = m.referent if m.referent in prev_rank else bridged.get(m.id)
        if anchor is not None and anchor not in prev_rank:
            anchor = None
        concept = instance_concept[m.referent]
        label = m.referent if m.referent in named else concept
        entry = CfEntry(m.referent, concept, m, label, anchor is not None, anchor)
        (bound if anchor is not None else unbound).append(entry)
    bound.sort(key=lambda e: (prev_rank[e.anchor], e.markable.position))
    out, seen = [], set()
    for e in bound + unbound:
        if e.referent not in seen:
            seen.add(e.referent)
            out.append(e)
    return out


def compute_cb(prev_cf: Sequence[CfEntry], realized: Iterable[str]) -> Optional[CfEntry]:
    """Highest-ranked element of the previous C_f that is realized now."""
    realized = set(realized)
    for e in prev_cf:
        if e.referent in realized:
            return e
    return None


def is_preferred_is(z: str, y: str, cf: Sequence[CfEntry]) -> bool:
    """``z >_IS y``: ``z`` precedes ``y`` in the ranked list ``cf``."""
    order = [e.referent for e in cf]
    try:
        return order.index(z) < order.index(y)
    except ValueError:
        missing = z if z not in order else y
        raise ValueError(f"{missing!r} is not in the C_f list") from None


TRANSITIONS = ("continuation", "retention", "smooth-shift", "rough-shift", "n/a")


def classify_transition(prev: Optional[CenteringState], new: CenteringState) -> str:
    if prev is None or prev.cb is None or new.cb is None:
        return "n/a"
    same = prev.cb.referent == new.cb.referent
    cb_is_cp = new.cp is not None and new.cb.referent == new.cp.referent
    if same:
        return "continuation" if cb_is_cp else "retention"
    return "smooth-shift" if cb_is_cp else "rough-shift"


@dataclass
class CenteringHistory:
    """Processed utterances and their centering states, indexed from 1."""

    utterances: list[Utterance] = field(default_factory=list)
    states: list[CenteringState] = field(default_factory=list)

    def cf(self, n: int) -> list[CfEntry]:
        if n <= 0 or n > len(self.states):
            return []
        return self.states[n - 1].cf

    def utterance(self, n: int) -> Utterance:
        return self.utterances[n - 1]

    def state(self, n: int) -> Optional[CenteringState]:
        return self.states[n - 1] if 0 < n <= len(self.states) else None

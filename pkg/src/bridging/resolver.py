"""Textual ellipsis resolution on top of the path evaluator and centering.

A definite noun phrase triggers the search when it is neither a nominal
anaphor nor already tied by a POF-type fact to something realized in the
current utterance.  Candidates are the forward-looking centers of the
previous utterance; the winner has the strongest CP list, ties going to
the candidate ranked higher in that list.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .centering import (
    CenteringHistory,
    CenteringState,
    CfEntry,
    Markable,
    Utterance,
    classify_transition,
    compute_cb,
    is_preferred_is,
    isa_word_class,
    rank_cf,
)
from .evaluator import CPList, PathMarker, PatternSets, build_cp_list, equally_strong_as, is_stronger_than
from .kb import KBError, KnowledgeBase
from .paths import DEFAULT_CONFIG, ConceptualPath, SearchConfig


class Outcome(str, enum.Enum):
    NOMINAL_ANAPHOR = "nominal-anaphor"
    ALREADY_CONNECTED = "already-connected"
    TRIGGERED = "triggered"
    NOT_DEFINITE = "not-definite"

    def __str__(self) -> str:
        return self.value


class Status(str, enum.Enum):
    RESOLVED = "resolved"
    AMBIGUOUS = "ambiguous"
    NO_ANTECEDENT = "no-antecedent"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TriggerVerdict:
    outcome: Outcome
    detail: str = ""


@dataclass
class ResolutionResult:
    elliptical: Markable
    status: Status
    antecedent: Optional[CfEntry] = None
    bridge: CPList = None  # type: ignore[assignment]
    path: Optional[ConceptualPath] = None
    role_instantiated: Optional[str] = None
    # (candidate, its CP list) in the order they were examined
    candidates: list[tuple[CfEntry, CPList]] = field(default_factory=list)
    skipped: list[CfEntry] = field(default_factory=list)
    tied: list[CfEntry] = field(default_factory=list)
    facts_added: list[tuple[str, str, str]] = field(default_factory=list)
    intermediates: list[str] = field(default_factory=list)

    def summary(self) -> str:
        if self.status is not Status.RESOLVED:
            return f"{self.elliptical.surface} → {self.status}"
        return (
            f"{self.elliptical.surface} → {self.antecedent.referent} "
            f"via {' '.join(self.path.relations)} [{self.bridge.marker}]"
        )


def is_nominal_anaphor(x: Markable, prev_cf: Sequence[CfEntry], kb: KnowledgeBase) -> bool:
    """``x``'s concept subsumes the concept of some element of the previous C_f."""
    if x.concept is None:
        raise ValueError(f"markable {x.id} has no conceptual referent")
    return any(kb.schema.subsumes_concept(x.concept, e.concept) for e in prev_cf)


def should_trigger(
    x: Markable,
    u: Utterance,
    prev_cf: Sequence[CfEntry],
    kb: KnowledgeBase,
    realized: Iterable[str] = (),
) -> TriggerVerdict:
    """Decide whether ``x`` starts a search for an elliptical antecedent.

    ``realized`` adds instances realized in ``u`` without a markable of
    their own (antecedents and intermediates of earlier resolutions).
    Only facts asserted with ``x`` as subject block: the inverse direction
    (e.g. ``A1 charge-time CT1``) leaves the POF-type role uninstantiated.
    """
    if not (x.is_noun and u.has_definite_determiner(x)):
        return TriggerVerdict(Outcome.NOT_DEFINITE, "not a definite noun phrase")
    if is_nominal_anaphor(x, prev_cf, kb):
        hit = next(e for e in prev_cf if kb.schema.subsumes_concept(x.concept, e.concept))
        return TriggerVerdict(Outcome.NOMINAL_ANAPHOR, f"{x.concept} subsumes {hit.label}")
    here = {m.referent for m in u.markables if m.referent is not None} | set(realized)
    here.discard(x.referent)
    for s, r, o in sorted(kb.text.asserted):
        if s == x.referent and o in here and kb.schema.is_pof_type(r):
            return TriggerVerdict(Outcome.ALREADY_CONNECTED, f"{s} {r} {o}")
    return TriggerVerdict(Outcome.TRIGGERED)


def is_potential_elliptical_antecedent(y: Markable, x: Markable, n: int, history: CenteringHistory) -> bool:
    u = history.utterance(n)
    return (
        isa_word_class(y.word_class, "Nominal")
        and x.is_noun
        and u.has_definite_determiner(x)
        and x in u
        and y.referent in {e.referent for e in history.cf(n - 1)}
    )


def preferred_conceptual_bridge(
    x: Markable,
    n: int,
    history: CenteringHistory,
    kb: KnowledgeBase,
    patterns: PatternSets | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
    early_stop: bool = True,
) -> ResolutionResult:
    """Pick the antecedent of ``x`` in utterance ``n`` without touching the KB.

    With ``early_stop`` the scan ends at the first candidate whose CP list
    is plausible; nothing ranked below it can win.  Without it, every
    candidate is checked against every other one.
    """
    schema = kb.schema
    patterns = patterns or PatternSets.for_schema(schema)
    prev = history.cf(n - 1)
    cands = [e for e in prev if is_potential_elliptical_antecedent(e.markable, x, n, history)]
    result = ResolutionResult(x, Status.NO_ANTECEDENT, bridge=CPList(x.concept, ""))
    if not cands:
        return result

    if early_stop:
        best: Optional[tuple[CfEntry, CPList]] = None
        for i, y in enumerate(cands):
            cp = build_cp_list(x.concept, y.concept, schema, patterns, config)
            result.candidates.append((y, cp))
            if best is None or is_stronger_than(cp, best[1]):
                best = (y, cp)
            if cp.marker is PathMarker.PLAUSIBLE:
                result.skipped = cands[i + 1:]
                break
        winners = [best]
    else:
        result.candidates = [(y, build_cp_list(x.concept, y.concept, schema, patterns, config)) for y in cands]

        def beaten(y: CfEntry, cp_y: CPList) -> bool:
            return any(
                is_stronger_than(cp_z, cp_y)
                or (equally_strong_as(cp_z, cp_y) and is_preferred_is(z.referent, y.referent, prev))
                for z, cp_z in result.candidates
                if z is not y
            )

        winners = [(y, cp) for y, cp in result.candidates if not beaten(y, cp)]

    if len(winners) != 1:
        result.status = Status.AMBIGUOUS
        result.tied = [y for y, _ in winners]
        return result
    y, cp = winners[0]
    result.bridge = cp
    if not cp:
        return result
    result.status = Status.RESOLVED
    result.antecedent = y
    return result


def _choose_path(cp: CPList, target_concept: str, kb: KnowledgeBase) -> ConceptualPath:
    # prefer a path whose last range admits the antecedent, so every fact types
    for p in cp.paths:
        if kb.schema.subsumes_concept(kb.schema.range(p.relations[-1]), target_concept):
            return p
    return cp.paths[0]


def resolve_and_update(
    x: Markable,
    n: int,
    history: CenteringHistory,
    kb: KnowledgeBase,
    patterns: PatternSets | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
    early_stop: bool = True,
) -> ResolutionResult:
    """Resolve ``x`` and link it to its antecedent in the text KB.

    A unit-length bridge becomes one fact.  Longer bridges get a fresh
    instance for every intermediate concept on the chosen path.  Typing
    failures raise :class:`~bridging.kb.TypingError` and leave the KB as it was.
    """
    result = preferred_conceptual_bridge(x, n, history, kb, patterns, config, early_stop)
    if result.status is not Status.RESOLVED:
        return result
    y = result.antecedent
    path = _choose_path(result.bridge, y.concept, kb)
    result.path = path
    result.role_instantiated = path.relations[0]
    chain = [x.referent]
    for concept in path.waypoints[1:-1]:
        inst = kb.text.new_instance(kb.schema, concept)
        result.intermediates.append(inst)
        chain.append(inst)
    chain.append(y.referent)
    triples = [(chain[i], r, chain[i + 1]) for i, r in enumerate(path.relations)]
    try:
        for s, r, o in triples:
            kb.text.check_fact(kb.schema, s, r, o)
    except KBError:
        for inst in result.intermediates:
            del kb.text.instances[inst]
        raise
    for s, r, o in triples:
        kb.assert_fact(s, r, o)
    result.facts_added = triples
    return result


@dataclass
class UtteranceReport:
    index: int
    state: CenteringState
    transition: str
    verdicts: list[tuple[Markable, TriggerVerdict]] = field(default_factory=list)
    results: list[ResolutionResult] = field(default_factory=list)


class ResolutionSession:
    """Runs ellipsis resolution utterance by utterance over one discourse.

    The session owns the centering history and mutates ``kb.text``; it is
    not meant to be shared between threads.
    """

    def __init__(
        self,
        kb: KnowledgeBase,
        patterns: PatternSets | None = None,
        config: SearchConfig = DEFAULT_CONFIG,
        early_stop: bool = True,
    ):
        self.kb = kb
        self.patterns = patterns or PatternSets.for_schema(kb.schema)
        self.config = config
        self.early_stop = early_stop
        self.history = CenteringHistory()
        self.reports: list[UtteranceReport] = []
        self.realized_extra: dict[int, set[str]] = {}

    def process(self, u: Utterance) -> UtteranceReport:
        if u.index != len(self.history.utterances) + 1:
            raise ValueError(f"expected utterance {len(self.history.utterances) + 1}, got {u.index}")
        n = u.index
        kb = self.kb
        for s, r, o in u.facts:
            kb.assert_fact(s, r, o)
        self.history.utterances.append(u)
        prev_cf = self.history.cf(n - 1)
        extra = self.realized_extra.setdefault(n, set())
        bridged: dict[str, str] = {}
        verdicts, results = [], []
        for x in sorted(u.markables, key=lambda m: m.position):
            if not x.is_noun or x.referent is None:
                continue
            v = should_trigger(x, u, prev_cf, kb, extra)
            verdicts.append((x, v))
            if v.outcome is not Outcome.TRIGGERED:
                continue
            res = resolve_and_update(x, n, self.history, kb, self.patterns, self.config, self.early_stop)
            results.append(res)
            if res.status is Status.RESOLVED:
                bridged[x.id] = res.antecedent.referent
                extra.add(res.antecedent.referent)
                extra.update(res.intermediates)
        cf = rank_cf(u, prev_cf, kb.text.instances, bridged, kb.text.named)
        realized = {m.referent for m in u.markables if m.referent is not None} | extra
        state = CenteringState(cf, compute_cb(prev_cf, realized))
        prev_state = self.history.state(n - 1)
        self.history.states.append(state)
        report = UtteranceReport(n, state, classify_transition(prev_state, state), verdicts, results)
        self.reports.append(report)
        return report

    def run(self, utterances: Iterable[Utterance]) -> list[UtteranceReport]:
        return [self.process(u) for u in utterances]


def resolve_discourse(
    kb: KnowledgeBase,
    utterances: Iterable[Utterance],
    patterns: PatternSets | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
    early_stop: bool = True,
) -> list[UtteranceReport]:
    return ResolutionSession(kb, patterns, config, early_stop).run(utterances)


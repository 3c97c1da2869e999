"""Reader for annotated discourse files (``.dis``).

Each utterance block lists markables, pre-resolved nominal anaphora and the
facts its semantic interpretation produced::

    utterance 1
    markable m1 surface="316LT" lemma=316LT class=ProperNoun referent=316LT pos=2
    anaphor m3 resolves-to 316LT
    fact m1 has-accumulator m2

A ``referent`` naming a concept introduces a fresh instance of it; one
naming an instance refers to that instance.  ``resolves-to`` and fact
arguments accept markable ids as well as instance ids.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .centering import WORD_CLASSES, Markable, Utterance
from .kb import KBError, KnowledgeBase


class DiscourseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class _RawMarkable:
    fields: dict[str, str]
    flags: set[str]
    line: int


@dataclass
class _RawUtterance:
    index: int
    line: int
    markables: list[_RawMarkable] = field(default_factory=list)
    anaphors: list[tuple[str, str, int]] = field(default_factory=list)
    facts: list[tuple[str, str, str, int]] = field(default_factory=list)


def _split(raw: str, lineno: int) -> list[str]:
    try:
        return shlex.split(raw, comments=True)
    except ValueError as exc:
        raise DiscourseError(str(exc), lineno) from None


def _parse(lines: Iterable[str]) -> list[_RawUtterance]:
    blocks: list[_RawUtterance] = []
    for lineno, raw in enumerate(lines, 1):
        toks = _split(raw, lineno)
        if not toks:
            continue
        kw = toks[0]
        if kw == "utterance":
            if len(toks) != 2 or not toks[1].isdigit():
                raise DiscourseError("expected: utterance <n>", lineno)
            n = int(toks[1])
            if n != len(blocks) + 1:
                raise DiscourseError(f"utterance {n} out of sequence (expected {len(blocks) + 1})", lineno)
            blocks.append(_RawUtterance(n, lineno))
            continue
        if not blocks:
            raise DiscourseError(f"{kw!r} before the first utterance", lineno)
        block = blocks[-1]
        if kw == "markable":
            if len(toks) < 2:
                raise DiscourseError("markable needs an id", lineno)
            fields, flags = {"id": toks[1]}, set()
            for tok in toks[2:]:
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    fields[k] = v
                else:
                    flags.add(tok)
            block.markables.append(_RawMarkable(fields, flags, lineno))
        elif kw == "anaphor":
            if len(toks) != 4 or toks[2] != "resolves-to":
                raise DiscourseError("expected: anaphor <id> resolves-to <id>", lineno)
            block.anaphors.append((toks[1], toks[3], lineno))
        elif kw == "fact":
            if len(toks) != 4:
                raise DiscourseError("expected: fact <id> <relation> <id>", lineno)
            block.facts.append((toks[1], toks[2], toks[3], lineno))
        else:
            raise DiscourseError(f"unknown directive {kw!r}", lineno)
    return blocks


def load_discourse(source: TextIO | Iterable[str] | str, kb: KnowledgeBase) -> list[Utterance]:
    """Parse a discourse file and register its referents in ``kb.text``.

    Facts are validated here but asserted only when the utterance is
    processed, since their presence matters for triggering.
    """
    if isinstance(source, str):
        source = source.splitlines()
    schema, text = kb.schema, kb.text
    by_id: dict[str, Markable] = {}
    out: list[Utterance] = []

    def instance_for(ref: str, lineno: int) -> str:
        if ref in by_id:
            if by_id[ref].referent is None:
                raise DiscourseError(f"markable {ref} has no referent", lineno)
            return by_id[ref].referent  # type: ignore[return-value]
        if ref in text.instances:
            return ref
        raise DiscourseError(f"unknown instance or markable {ref!r}", lineno)

    for block in _parse(source):
        anaphor_of = {}
        for mid, target, lineno in block.anaphors:
            anaphor_of[mid] = (target, lineno)
        u = Utterance(block.index)
        positions = set()
        for rm in block.markables:
            f, lineno = rm.fields, rm.line
            mid = f["id"]
            if mid in by_id:
                raise DiscourseError(f"duplicate markable id {mid}", lineno)
            unknown = rm.flags - {"definite"}
            if unknown:
                raise DiscourseError(f"unknown flag(s) {sorted(unknown)}", lineno)
            cls = f.get("class")
            if cls not in WORD_CLASSES:
                raise DiscourseError(f"unknown word class {cls!r}", lineno)
            try:
                pos = int(f["pos"])
            except (KeyError, ValueError):
                raise DiscourseError(f"markable {mid} needs an integer pos=", lineno) from None
            if pos in positions:
                raise DiscourseError(f"position {pos} used twice in utterance {block.index}", lineno)
            positions.add(pos)
            m = Markable(
                id=mid,
                surface=f.get("surface", mid),
                word_class=cls,
                position=pos,
                lemma=f.get("lemma", ""),
                definite="definite" in rm.flags,
                head=f.get("head"),
            )
            ref = f.get("referent")
            if ref is not None:
                if ref in text.instances:
                    m.referent, m.concept = ref, text.instances[ref]
                elif ref in schema.concept_parents:
                    m.concept = ref
                else:
                    raise DiscourseError(f"unknown concept or instance {ref!r}", lineno)
            if mid in anaphor_of:
                target, alineno = anaphor_of.pop(mid)
                inst = instance_for(target, alineno)
                inst_c = text.instances[inst]
                if m.concept is not None and not schema.subsumes_concept(m.concept, inst_c):
                    raise DiscourseError(
                        f"anaphor {mid} ({m.concept}) cannot refer to {inst}:{inst_c}", alineno
                    )
                m.referent = inst
                m.concept = m.concept or inst_c
            elif m.referent is None and m.concept is not None:
                m.referent = text.new_instance(schema, m.concept)
            by_id[mid] = m
            u.markables.append(m)
        for mid, (_, lineno) in anaphor_of.items():
            raise DiscourseError(f"anaphor refers to unknown markable {mid!r}", lineno)
        for m in u.markables:
            if m.head is not None and m.head not in by_id:
                raise DiscourseError(f"markable {m.id}: unknown head {m.head!r}")
        for s, r, o, lineno in block.facts:
            triple = (instance_for(s, lineno), r, instance_for(o, lineno))
            try:
                text.check_fact(schema, *triple)
            except KBError as exc:
                raise DiscourseError(str(exc), lineno) from None
            u.facts.append(triple)
        out.append(u)
    return out

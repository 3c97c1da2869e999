"""Terminological schema, text knowledge base and the ``.kb`` file loader.

The schema is a concept hierarchy (``isa`` between concept names) plus a
relation hierarchy (``isa`` between relation names), where every relation
carries a domain, a range and an inverse.  Reachability in both hierarchies
is computed once at load time; all subsumption queries are set lookups.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO


class KBError(ValueError):
    """Raised for malformed or inconsistent knowledge bases."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class TypingError(KBError):
    """A fact whose subject or object violates the relation's domain/range."""


@dataclass(frozen=True)
class RelationDef:
    name: str
    domain: str
    range: str
    inverse: str
    parents: frozenset[str] = frozenset()


def _closure(parents: dict[str, frozenset[str]], kind: str, lines: dict[str, int]) -> dict[str, frozenset[str]]:
    # reflexive-transitive ancestor sets; raises on cycles
    ancestors: dict[str, frozenset[str]] = {}
    visiting: set[str] = set()

    def visit(node: str, trail: list[str]) -> frozenset[str]:
        if node in ancestors:
            return ancestors[node]
        if node in visiting:
            cycle = trail[trail.index(node):] + [node]
            raise KBError(f"cyclic {kind} hierarchy: {' -> '.join(cycle)}", lines.get(node))
        visiting.add(node)
        acc = {node}
        for parent in sorted(parents[node]):
            acc |= visit(parent, trail + [node])
        visiting.discard(node)
        ancestors[node] = frozenset(acc)
        return ancestors[node]

    for name in sorted(parents):
        visit(name, [])
    return ancestors


class Schema:
    """Immutable TBox: concepts with ``isa_F``, relations with ``isa_R``.

    Construct through :func:`load_kb` or :meth:`Schema.build`; both validate
    every invariant (acyclicity, inverse symmetry, domain/range narrowing).
    """

    def __init__(
        self,
        concepts: dict[str, frozenset[str]],
        relations: dict[str, RelationDef],
        metonymy_relations: Iterable[tuple[str, str]] = (),
        pof_relations: Iterable[str] = (),
    ):
        self.concept_parents = dict(concepts)
        self.relations = dict(relations)
        self.metonymy_relations = tuple(metonymy_relations)
        self.pof_relations = tuple(pof_relations)
        self._concept_anc = _closure(self.concept_parents, "concept", {})
        self._relation_anc = _closure(
            {r.name: r.parents for r in self.relations.values()}, "relation", {}
        )
        self._roles: dict[str, frozenset[str]] = {}
        self._traversable: dict[str, tuple[str, ...]] = {}
        self._inverse_anc: dict[str, frozenset[str]] = {}

    @classmethod
    def build(
        cls,
        concepts: dict[str, Iterable[str]],
        relations: Iterable[tuple[str, str, str, str, Iterable[str]]],
    ) -> "Schema":
        """Build a validated schema from plain tuples.

        ``relations`` holds ``(name, domain, range, inverse, parents)``; an
        inverse that is named but not listed is derived by mirroring.
        """
        lines = ["concept " + " ".join([c] + (["isa", *ps] if ps else [])) for c, ps in concepts.items()]
        for name, dom, rng, inv, ps in relations:
            ps = list(ps)
            decl = f"relation {name}" + (" isa " + " ".join(ps) if ps else "")
            lines.append(f"{decl} domain {dom} range {rng} inverse {inv}")
        return load_kb(lines).schema

    @property
    def concepts(self) -> frozenset[str]:
        return frozenset(self.concept_parents)

    def _check_concept(self, name: str) -> None:
        if name not in self.concept_parents:
            raise KBError(f"unknown concept {name!r}")

    def _check_relation(self, name: str) -> None:
        if name not in self.relations:
            raise KBError(f"unknown relation {name!r}")

    def concept_ancestors(self, name: str) -> frozenset[str]:
        self._check_concept(name)
        return self._concept_anc[name]

    def relation_ancestors(self, name: str) -> frozenset[str]:
        self._check_relation(name)
        return self._relation_anc[name]

    def inverse_ancestors(self, name: str) -> frozenset[str]:
        """Inverses of every ``isa_R*`` ancestor of ``name``."""
        if name not in self._inverse_anc:
            self._inverse_anc[name] = frozenset(self.relations[a].inverse for a in self.relation_ancestors(name))
        return self._inverse_anc[name]

    def subsumes_concept(self, ancestor: str, descendant: str) -> bool:
        """True iff ``descendant isa_F* ancestor`` (reflexive)."""
        self._check_concept(ancestor)
        return ancestor in self.concept_ancestors(descendant)

    def subsumes_relation(self, ancestor: str, descendant: str) -> bool:
        self._check_relation(ancestor)
        return ancestor in self.relation_ancestors(descendant)

    def comparable(self, a: str, b: str) -> bool:
        return self.subsumes_concept(a, b) or self.subsumes_concept(b, a)

    def domain(self, relation: str) -> str:
        self._check_relation(relation)
        return self.relations[relation].domain

    def range(self, relation: str) -> str:
        self._check_relation(relation)
        return self.relations[relation].range

    def inverse(self, relation: str) -> str:
        self._check_relation(relation)
        return self.relations[relation].inverse

    def roles_of(self, concept: str) -> frozenset[str]:
        """All relations applicable to ``concept``, inherited ones included."""
        if concept not in self._roles:
            anc = self.concept_ancestors(concept)
            self._roles[concept] = frozenset(r.name for r in self.relations.values() if r.domain in anc)
        return self._roles[concept]

    def traversable_roles(self, concept: str) -> tuple[str, ...]:
        """Most specific roles of ``concept``, sorted by name.

        A role is dropped when a proper subrelation of it is also a role of
        the concept: the subrelation restricts it at this concept.
        """
        if concept not in self._traversable:
            roles = self.roles_of(concept)
            keep = [
                r for r in roles
                if not any(s != r and r in self._relation_anc[s] for s in roles)
            ]
            self._traversable[concept] = tuple(sorted(keep))
        return self._traversable[concept]

    def pof_bases(self) -> tuple[str, ...]:
        """Relations whose subrelations count as POF-type (inverse property/part)."""
        defaults = [r for r in ("property-of", "part-of") if r in self.relations]
        return tuple(dict.fromkeys(defaults + list(self.pof_relations)))

    def is_pof_type(self, relation: str) -> bool:
        anc = self.relation_ancestors(relation)
        return any(base in anc for base in self.pof_bases())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schema):
            return NotImplemented
        return (
            self.concept_parents == other.concept_parents
            and self.relations == other.relations
            and self.metonymy_relations == other.metonymy_relations
            and self.pof_relations == other.pof_relations
        )

    def __repr__(self) -> str:
        return f"Schema({len(self.concept_parents)} concepts, {len(self.relations)} relations)"


_ABBREV_SPLIT = re.compile(r"[-_\s]+")


@dataclass
class TextKB:
    """Instance-level assertions.

    ``asserted`` keeps the direction in which a fact was stated; ``facts``
    is its closure under inverses.  ``named`` lists instances introduced by
    name in a KB file, as opposed to ones created while reading a text.
    """

    instances: dict[str, str] = field(default_factory=dict)
    facts: set[tuple[str, str, str]] = field(default_factory=set)
    asserted: set[tuple[str, str, str]] = field(default_factory=set)
    # presentation only: the text format cannot mark an instance as anonymous
    named: set[str] = field(default_factory=set, compare=False)

    def add_instance(self, schema: Schema, ident: str, concept: str, named: bool = True) -> str:
        schema._check_concept(concept)
        known = self.instances.get(ident)
        if known is not None and known != concept:
            raise KBError(f"instance {ident!r} already typed {known}, cannot retype as {concept}")
        self.instances[ident] = concept
        if named:
            self.named.add(ident)
        return ident

    def new_instance(self, schema: Schema, concept: str) -> str:
        """Create an anonymous instance with an id built from the concept's initials."""
        prefix = "".join(part[0] for part in _ABBREV_SPLIT.split(concept) if part) or "I"
        for k in itertools.count(1):
            ident = f"{prefix}{k}"
            if ident not in self.instances:
                return self.add_instance(schema, ident, concept, named=False)
        raise AssertionError("unreachable")

    def concept_of(self, ident: str) -> str:
        try:
            return self.instances[ident]
        except KeyError:
            raise KBError(f"unknown instance {ident!r}") from None

    def check_fact(self, schema: Schema, subject: str, relation: str, obj: str) -> None:
        rel = schema.relations.get(relation)
        if rel is None:
            raise KBError(f"unknown relation {relation!r}")
        s_c, o_c = self.concept_of(subject), self.concept_of(obj)
        if not schema.subsumes_concept(rel.domain, s_c):
            raise TypingError(f"{subject}:{s_c} is not in domain {rel.domain} of {relation}")
        if not schema.subsumes_concept(rel.range, o_c):
            raise TypingError(f"{obj}:{o_c} is not in range {rel.range} of {relation}")

    def assert_fact(self, schema: Schema, subject: str, relation: str, obj: str) -> "TextKB":
        """Add ``(subject, relation, obj)`` and its inverse; idempotent."""
        self.check_fact(schema, subject, relation, obj)
        self.asserted.add((subject, relation, obj))
        self.facts.add((subject, relation, obj))
        self.facts.add((obj, schema.inverse(relation), subject))
        return self

    def facts_about(self, subject: str) -> Iterator[tuple[str, str, str]]:
        return (f for f in self.facts if f[0] == subject)

    def validate(self, schema: Schema) -> None:
        for ident, concept in self.instances.items():
            if concept not in schema.concept_parents:
                raise KBError(f"instance {ident!r} has unknown concept {concept!r}")
        for s, r, o in self.facts:
            self.check_fact(schema, s, r, o)
            if (o, schema.inverse(r), s) not in self.facts:
                raise KBError(f"missing inverse of fact ({s} {r} {o})")
        if not self.asserted <= self.facts:
            raise KBError("asserted facts missing from closure")

    def dump(self) -> str:
        """Serialise in the ``.kb`` text format (instance and fact lines)."""
        out = [f"instance {i} : {c}" for i, c in sorted(self.instances.items())]
        out += [f"fact {s} {r} {o}" for s, r, o in sorted(self.asserted)]
        return "\n".join(out) + ("\n" if out else "")


@dataclass
class KnowledgeBase:
    schema: Schema
    text: TextKB = field(default_factory=TextKB)

    def assert_fact(self, subject: str, relation: str, obj: str) -> TextKB:
        return self.text.assert_fact(self.schema, subject, relation, obj)

    def concept_of(self, ident: str) -> str:
        return self.text.concept_of(ident)


def _tokens(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


@dataclass
class _RelDecl:
    name: str
    parents: list[str]
    domain: str
    range: str
    inverse: str
    line: int


def _parse_relation(toks: list[str], lineno: int) -> _RelDecl:
    if len(toks) < 2:
        raise KBError("relation needs a name", lineno)
    name, rest = toks[1], toks[2:]
    parents: list[str] = []
    slots: dict[str, str] = {}
    key = None
    for tok in rest:
        if tok in ("isa", "domain", "range", "inverse"):
            if tok in slots or (tok == "isa" and key == "isa"):
                raise KBError(f"repeated keyword {tok!r}", lineno)
            key = tok
            if tok == "isa":
                slots["isa"] = ""
            continue
        if key == "isa":
            parents.append(tok)
        elif key in ("domain", "range", "inverse") and key not in slots:
            slots[key] = tok
        else:
            raise KBError(f"unexpected token {tok!r} in relation declaration", lineno)
    for required in ("domain", "range", "inverse"):
        if required not in slots:
            raise KBError(f"relation {name} lacks '{required}'", lineno)
    if "isa" in slots and not parents:
        raise KBError(f"relation {name}: 'isa' without parents", lineno)
    return _RelDecl(name, parents, slots["domain"], slots["range"], slots["inverse"], lineno)


def load_kb(source: TextIO | Iterable[str] | str) -> KnowledgeBase:
    """Parse and validate a knowledge base in the line-oriented ``.kb`` format.

    Declarations may appear in any order.  Relations whose inverse is named
    but never declared get a mirrored declaration: domain and range swapped,
    parents replaced by the parents' inverses.
    """
    if isinstance(source, str):
        source = source.splitlines()
    concepts: dict[str, list[str]] = {}
    concept_lines: dict[str, int] = {}
    rels: dict[str, _RelDecl] = {}
    instances: list[tuple[str, str, int]] = []
    facts: list[tuple[str, str, str, int]] = []
    metonymy: list[tuple[str, str | None, int]] = []
    pof: list[tuple[str, int]] = []

    for lineno, raw in enumerate(source, 1):
        toks = _tokens(raw)
        if not toks:
            continue
        kw = toks[0]
        if kw == "concept":
            if len(toks) < 2 or (len(toks) > 2 and (toks[2] != "isa" or len(toks) == 3)):
                raise KBError("expected: concept <NAME> [isa <NAME> ...]", lineno)
            name = toks[1]
            if name in concepts:
                raise KBError(f"duplicate concept {name}", lineno)
            concepts[name] = toks[3:]
            concept_lines[name] = lineno
        elif kw == "relation":
            decl = _parse_relation(toks, lineno)
            if decl.name in rels:
                raise KBError(f"duplicate relation {decl.name}", lineno)
            rels[decl.name] = decl
        elif kw == "instance":
            ident, sep, concept = " ".join(toks[1:]).partition(":")
            ident, concept = ident.strip(), concept.strip()
            if not sep or not ident or not concept or " " in ident + concept:
                raise KBError("expected: instance <id> : <NAME>", lineno)
            instances.append((ident, concept, lineno))
        elif kw == "fact":
            if len(toks) != 4:
                raise KBError("expected: fact <id> <relation> <id>", lineno)
            facts.append((toks[1], toks[2], toks[3], lineno))
        elif kw == "metonymy-relation":
            if len(toks) == 2:
                metonymy.append((toks[1], None, lineno))
            elif len(toks) == 4 and toks[2] == "inverse":
                metonymy.append((toks[1], toks[3], lineno))
            else:
                raise KBError("expected: metonymy-relation <name> [inverse <name>]", lineno)
        elif kw == "pof-relation":
            if len(toks) != 2:
                raise KBError("expected: pof-relation <name>", lineno)
            pof.append((toks[1], lineno))
        else:
            raise KBError(f"unknown declaration {kw!r}", lineno)

    for name, parents in concepts.items():
        for p in parents:
            if p not in concepts:
                raise KBError(f"concept {name}: unknown parent {p}", concept_lines[name])
    for d in rels.values():
        for c in (d.domain, d.range):
            if c not in concepts:
                raise KBError(f"relation {d.name}: unknown concept {c}", d.line)

    # mirror undeclared inverses
    mirrored = set()
    for d in list(rels.values()):
        if d.inverse not in rels:
            rels[d.inverse] = _RelDecl(d.inverse, [], d.range, d.domain, d.name, d.line)
            mirrored.add(d.inverse)
    for name in mirrored:
        d = rels[name]
        orig = rels[d.inverse]
        for p in orig.parents:
            if p not in rels:
                raise KBError(f"relation {orig.name}: unknown parent {p}", orig.line)
        d.parents = [rels[p].inverse for p in orig.parents]

    for d in rels.values():
        for p in d.parents:
            if p not in rels:
                raise KBError(f"relation {d.name}: unknown parent {p}", d.line)
        inv = rels[d.inverse]
        if inv.inverse != d.name:
            raise KBError(
                f"inverse mismatch: inverse({d.name}) = {d.inverse} but inverse({inv.name}) = {inv.inverse}",
                d.line,
            )
        if (inv.domain, inv.range) != (d.range, d.domain):
            raise KBError(f"relations {d.name}/{inv.name} do not swap domain and range", d.line)

    concept_parents = {c: frozenset(ps) for c, ps in concepts.items()}
    _closure(concept_parents, "concept", concept_lines)
    _closure({n: frozenset(d.parents) for n, d in rels.items()}, "relation", {n: d.line for n, d in rels.items()})

    relations = {
        n: RelationDef(n, d.domain, d.range, d.inverse, frozenset(d.parents)) for n, d in rels.items()
    }

    met: list[tuple[str, str]] = []
    for name, inv_name, lineno in metonymy:
        if name not in relations:
            raise KBError(f"metonymy-relation: unknown relation {name}", lineno)
        inv_name = inv_name or relations[name].inverse
        if inv_name not in relations:
            raise KBError(f"metonymy-relation: unknown relation {inv_name}", lineno)
        met.append((name, inv_name))
    for name, lineno in pof:
        if name not in relations:
            raise KBError(f"pof-relation: unknown relation {name}", lineno)

    schema = Schema(concept_parents, relations, met, [p for p, _ in pof])
    for d in rels.values():
        rel = relations[d.name]
        for p in rel.parents:
            parent = relations[p]
            if not schema.subsumes_concept(parent.domain, rel.domain):
                raise KBError(
                    f"relation {rel.name} isa {p}: domain {rel.domain} not subsumed by {parent.domain}", d.line
                )
            if not schema.subsumes_concept(parent.range, rel.range):
                raise KBError(
                    f"relation {rel.name} isa {p}: range {rel.range} not subsumed by {parent.range}", d.line
                )

    text = TextKB()
    for ident, concept, lineno in instances:
        if concept not in concepts:
            raise KBError(f"instance {ident}: unknown concept {concept}", lineno)
        if ident in text.instances:
            raise KBError(f"duplicate instance {ident}", lineno)
        text.add_instance(schema, ident, concept)
    for s, r, o, lineno in facts:
        try:
            text.assert_fact(schema, s, r, o)
        except KBError as exc:
            raise KBError(str(exc), lineno) from None
    return KnowledgeBase(schema, text)


def dump_schema(schema: Schema) -> str:
    """Serialise a schema back into ``.kb`` declarations."""
    out = []
    for c in sorted(schema.concept_parents):
        ps = sorted(schema.concept_parents[c])
        out.append(f"concept {c}" + (" isa " + " ".join(ps) if ps else ""))
    for r in sorted(schema.relations.values(), key=lambda r: r.name):
        isa = " isa " + " ".join(sorted(r.parents)) if r.parents else ""
        out.append(f"relation {r.name}{isa} domain {r.domain} range {r.range} inverse {r.inverse}")
    for name, inv in schema.metonymy_relations:
        out.append(f"metonymy-relation {name} inverse {inv}")
    out += [f"pof-relation {p}" for p in schema.pof_relations]
    return "\n".join(out) + "\n"


"""``bridge`` command line: resolve a discourse, list paths, run the pair evaluation."""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Sequence

from .discourse import DiscourseError, load_discourse
from .evaluation import run_eval
from .evaluator import PatternSets, classify_path, evaluate_paths
from .kb import KBError, KnowledgeBase, load_kb
from .paths import SearchConfig
from .resolver import Outcome, ResolutionSession, Status, UtteranceReport


def _load(path: str) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return load_kb(fh)


def _fmt_entries(entries) -> str:
    return "[" + ", ".join(e.label for e in entries) + "]"


def _result_json(res) -> dict:
    return {
        "markable": res.elliptical.id,
        "surface": res.elliptical.surface,
        "status": str(res.status),
        "antecedent": res.antecedent.referent if res.antecedent else None,
        "antecedent_label": res.antecedent.label if res.antecedent else None,
        "path": list(res.path.relations) if res.path else None,
        "marker": str(res.bridge.marker) if res.bridge and res.bridge.marker is not None else None,
        "role_instantiated": res.role_instantiated,
        "facts_added": [list(f) for f in res.facts_added],
        "candidates": [
            {
                "referent": y.referent,
                "label": y.label,
                "concept": y.concept,
                "marker": str(cp.marker) if cp else None,
                "paths": [list(p.relations) for p in cp.paths],
            }
            for y, cp in res.candidates
        ],
        "skipped": [e.referent for e in res.skipped],
    }


def _report_json(reports: Sequence[UtteranceReport], kb: KnowledgeBase) -> dict:
    out = []
    for r in reports:
        out.append(
            {
                "utterance": r.index,
                "cf": [e.label for e in r.state.cf],
                "cf_referents": [e.referent for e in r.state.cf],
                "cb": r.state.cb.label if r.state.cb else None,
                "cp": r.state.cp.label if r.state.cp else None,
                "transition": r.transition,
                "verdicts": [
                    {"markable": m.id, "surface": m.surface, "outcome": str(v.outcome), "detail": v.detail}
                    for m, v in r.verdicts
                ],
                "resolutions": [_result_json(res) for res in r.results],
            }
        )
    return {"utterances": out, "facts": [list(f) for f in sorted(kb.text.asserted)]}


def _print_resolve(reports: Sequence[UtteranceReport], kb: KnowledgeBase, trace: bool) -> None:
    for r in reports:
        st = r.state
        print(
            f"U{r.index}  C_f = {_fmt_entries(st.cf)}  C_b = {st.cb.label if st.cb else '-'}"
            f"  C_p = {st.cp.label if st.cp else '-'}  transition = {r.transition}"
        )
        results = {res.elliptical.id: res for res in r.results}
        for m, v in r.verdicts:
            if v.outcome is Outcome.NOT_DEFINITE and not trace:
                continue
            detail = f" ({v.detail})" if v.detail else ""
            print(f'  "{m.surface}" ({m.id}): {v.outcome}{detail}')
            res = results.get(m.id)
            if res is None:
                continue
            print(f"    {res.summary()}")
            if res.status is Status.AMBIGUOUS:
                print(f"    tied: {', '.join(e.label for e in res.tied)}")
            if trace:
                for y, cp in res.candidates:
                    tag = "chosen" if res.antecedent is not None and y is res.antecedent else "rejected"
                    print(f"      candidate {y.label}: {cp}  {tag}")
                if res.skipped:
                    print(f"      not examined (a plausible bridge ranks higher): {', '.join(e.label for e in res.skipped)}")
                for f in res.facts_added:
                    print(f"      asserted {' '.join(f)}")
    print("facts:")
    for s, rel, o in sorted(kb.text.asserted):
        print(f"  {s} {rel} {o}")


def cmd_resolve(args: argparse.Namespace) -> int:
    kb = _load(args.kb)
    with open(args.discourse, encoding="utf-8") as fh:
        utterances = load_discourse(fh, kb)
    session = ResolutionSession(kb, config=SearchConfig.from_env())
    reports = session.run(utterances)
    if args.json:
        print(json.dumps(_report_json(reports, kb), indent=2))
    else:
        _print_resolve(reports, kb, args.trace)
    failed = any(res.status is not Status.RESOLVED for r in reports for res in r.results)
    return 2 if failed else 0


def cmd_paths(args: argparse.Namespace) -> int:
    schema = _load(args.kb).schema
    patterns = PatternSets.for_schema(schema)
    rep = evaluate_paths(args.source, args.target, schema, patterns, SearchConfig.from_env())

    def show(p, note: str) -> None:
        print(f"  {str(p):<50} {' > '.join(p.waypoints):<60} {note}")

    if not rep.well_formed:
        print("no well-formed paths")
    else:
        print(f"well-formed paths {args.source} -> {args.target}:")
        for p in rep.after_inclusion:
            show(p, str(rep.markers[p]))
        if args.all:
            for p, dominators in rep.included_by.items():
                show(p, f"discarded ({classify_path(p, schema, patterns)}): includes {dominators[0]}")
    if args.all:
        for p in rep.cyclic:
            show(p, "rejected: cyclic")
    print(rep.cp)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    schema = _load(args.kb).schema
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = run_eval(schema, args.pairs, args.seed, config=SearchConfig.from_env())
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(json.dumps(report.to_dict(), indent=2) if args.json else report.format())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bridge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", help="resolve textual ellipses in an annotated discourse")
    p.add_argument("--kb", required=True)
    p.add_argument("--discourse", required=True)
    p.add_argument("--trace", action="store_true", help="show CP lists and rejected candidates")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("paths", help="list conceptual paths between two concepts")
    p.add_argument("--kb", required=True)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--all", action="store_true", help="include discarded and cyclic paths")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("eval", help="filter-chain statistics over random concept pairs")
    p.add_argument("--kb", required=True)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KBError, DiscourseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Random concept-pair evaluation of the path filter chain."""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .evaluator import PathReport, PatternSets, evaluate_paths
from .kb import Schema
from .paths import DEFAULT_CONFIG, SearchConfig

STAGES = ("connected", "well_formed", "after_inclusion", "after_marker")


@dataclass(frozen=True)
class EvalRow:
    source: str
    target: str
    connected: int
    well_formed: int
    after_inclusion: int
    after_marker: int
    marker: str | None

    def counts(self) -> tuple[int, int, int, int]:
        return (self.connected, self.well_formed, self.after_inclusion, self.after_marker)


@dataclass
class EvalReport:
    requested: int
    seed: int
    rows: list[EvalRow] = field(default_factory=list)
    reports: list[PathReport] = field(default_factory=list, repr=False)

    @property
    def pairs_sampled(self) -> int:
        return len(self.rows)

    def average(self, stage: str) -> Fraction:
        if not self.rows:
            return Fraction(0)
        return Fraction(sum(getattr(r, stage) for r in self.rows), len(self.rows))

    @property
    def averages(self) -> dict[str, Fraction]:
        return {s: self.average(s) for s in STAGES}

    def is_monotone(self) -> bool:
        avgs = [self.average(s) for s in STAGES]
        return all(a >= b for a, b in zip(avgs, avgs[1:]))

    def to_dict(self) -> dict:
        return {
            "pairs_requested": self.requested,
            "pairs_sampled": self.pairs_sampled,
            "seed": self.seed,
            "averages": {f"avg_{s}": float(v) for s, v in self.averages.items()},
            "averages_exact": {f"avg_{s}": str(v) for s, v in self.averages.items()},
            "rows": [
                {"from": r.source, "to": r.target, **dict(zip(STAGES, r.counts())), "marker": r.marker}
                for r in self.rows
            ],
        }

    def format(self) -> str:
        width = max([len(f"{r.source} -> {r.target}") for r in self.rows] + [9])
        lines = [f"{'pair':<{width}}  connected  well-formed  inclusion  marker"]
        for r in self.rows:
            pair = f"{r.source} -> {r.target}"
            lines.append(
                f"{pair:<{width}}  {r.connected:>9}  {r.well_formed:>11}  {r.after_inclusion:>9}"
                f"  {r.after_marker:>6}  {r.marker or '-'}"
            )
        avgs = self.averages
        lines.append(
            f"pairs={self.pairs_sampled} seed={self.seed}  averages: "
            + " -> ".join(f"{float(avgs[s]):.2f}" for s in STAGES)
        )
        return "\n".join(lines)


def sample_pairs(schema: Schema, n: int, seed: int) -> list[tuple[str, str]]:
    """``n`` distinct unordered pairs of distinct concepts, drawn uniformly."""
    if n < 1:
        raise ValueError("number of pairs must be >= 1")
    pool = list(itertools.combinations(sorted(schema.concepts), 2))
    if n > len(pool):
        warnings.warn(f"only {len(pool)} concept pairs available; sampling all of them", stacklevel=2)
        n = len(pool)
    return random.Random(seed).sample(pool, n)


def run_eval(
    schema: Schema,
    pairs: int,
    seed: int,
    patterns: PatternSets | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
) -> EvalReport:
    patterns = patterns or PatternSets.for_schema(schema)
    report = EvalReport(pairs, seed)
    for x, y in sample_pairs(schema, pairs, seed):
        pr = evaluate_paths(x, y, schema, patterns, config)
        marker = str(pr.cp.marker) if pr.cp else None
        report.rows.append(EvalRow(x, y, *pr.counts(), marker))
        report.reports.append(pr)
    return report

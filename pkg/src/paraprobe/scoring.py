"""Verdict backfill and structural scoring of pair records.

GTED is computed for compile-both pairs only.  Statements outside the
parser's grammar are excluded with an explicit reason (and counted in
the returned tally) rather than scored zero: a parser gap must not
masquerade as structural divergence.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable

from .gted import StatementParseError, gted_similarity, parse_statement
from .harness.records import (
    FAILED,
    NOT_EQUIVALENT,
    EquivalenceVerdict,
    PairRecord,
)


@dataclass(frozen=True)
class ScoreSummary:
    records: int
    scored: int
    parse_excluded: int


def score_record(record: PairRecord) -> PairRecord:
    """Return the record with its verdict backfilled and GTED populated."""
    verdict = record.verdict
    if verdict is None:
        # Runs always attach verdicts; backfill defensively from compiles.
        if record.compile_both:
            verdict = EquivalenceVerdict(status=FAILED, method="failed")
        else:
            verdict = EquivalenceVerdict(status=NOT_EQUIVALENT, method="compile_failure")
    if not record.compile_both:
        return dataclasses.replace(record, verdict=verdict, gted=None, gted_excluded=None)
    try:
        tree_a = parse_statement(record.baseline.statement)
        tree_b = parse_statement(record.perturbed.statement)
    except StatementParseError as exc:
        return dataclasses.replace(
            record, verdict=verdict, gted=None, gted_excluded=f"parse_error: {exc}"
        )
    score = gted_similarity(tree_a, tree_b)
    return dataclasses.replace(
        record, verdict=verdict, gted=score.similarity, gted_excluded=None
    )


def score_records(records: Iterable[PairRecord]) -> tuple[list[PairRecord], ScoreSummary]:
    scored = [score_record(r) for r in records]
    return scored, ScoreSummary(
        records=len(scored),
        scored=sum(1 for r in scored if r.gted is not None),
        parse_excluded=sum(1 for r in scored if r.gted_excluded),
    )

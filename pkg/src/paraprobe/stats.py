"""Aggregation and uncertainty: consistency, compile rates, bootstrap CIs.

Surface consistency counts Equivalent verdicts over all pairs.
Non-compiling and Failed pairs stay in the denominator by default (the
conservative floor); set ``exclude_failed`` to drop checker-breakage
pairs from a group's denominator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .harness.records import EQUIVALENT, FAILED, PairRecord

log = logging.getLogger(__name__)


class EmptyInput(ValueError):
    """Bootstrap over an empty value list."""


_GROUPINGS: dict[str, tuple[str, ...]] = {
    "model": ("dataset", "model"),
    "rule": ("dataset", "model", "rule_id"),
    "dataset": ("dataset",),
    "category": ("dataset", "category"),
}


def _group_key(record: PairRecord, fields: Sequence[str], categories: Mapping[str, str] | None):
    key = []
    for field in fields:
        if field == "category":
            key.append((categories or {}).get(record.rule_id, "(unknown)"))
        else:
            key.append(getattr(record, field))
    return tuple(key)


def resolve_grouping(grouping: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(grouping, str):
        return _GROUPINGS[grouping]
    return tuple(grouping)


@dataclass(frozen=True)
class ConsistencyStat:
    group: tuple
    numerator: int
    denominator: int
    rate: float  # percent
    ci_low: float | None = None
    ci_high: float | None = None


def surface_consistency(
    records: Iterable[PairRecord],
    grouping: str | Sequence[str] = "model",
    rule_categories: Mapping[str, str] | None = None,
    exclude_failed: bool = False,
    bootstrap_iterations: int = 0,
    ci_level: float = 0.95,
    seed: int = 0,
) -> list[ConsistencyStat]:
    """Equivalent-pair fraction per group, optionally with bootstrap CIs."""
    fields = resolve_grouping(grouping)
    outcomes: dict[tuple, list[int]] = {}
    for record in records:
        if exclude_failed and record.verdict.status == FAILED:
            continue
        key = _group_key(record, fields, rule_categories)
        outcomes.setdefault(key, []).append(
            1 if record.verdict.status == EQUIVALENT else 0
        )
    stats = []
    for key in sorted(outcomes):
        values = outcomes[key]
        if not values:
            log.warning("group %r has no pairs; omitted", key)
            continue
        rate = 100.0 * sum(values) / len(values)
        low = high = None
        if bootstrap_iterations > 0:
            low, high = bootstrap_ci(values, bootstrap_iterations, ci_level, seed)
        stats.append(
            ConsistencyStat(
                group=key,
                numerator=sum(values),
                denominator=len(values),
                rate=rate,
                ci_low=low,
                ci_high=high,
            )
        )
    return stats


@dataclass(frozen=True)
class CompileRateRow:
    group: tuple
    n: int
    base_rate: float  # percent
    pert_rate: float
    both_rate: float
    both_count: int


def compile_rates(
    records: Iterable[PairRecord],
    grouping: str | Sequence[str] = "model",
    rule_categories: Mapping[str, str] | None = None,
) -> list[CompileRateRow]:
    """Per-direction and compile-both rates per group."""
    fields = resolve_grouping(grouping)
    tallies: dict[tuple, list[int]] = {}
    for record in records:
        key = _group_key(record, fields, rule_categories)
        n, base, pert, both = tallies.setdefault(key, [0, 0, 0, 0])
        base_ok = bool(record.baseline.compile and record.baseline.compile.success)
        pert_ok = bool(record.perturbed.compile and record.perturbed.compile.success)
        tallies[key] = [
            n + 1,
            base + base_ok,
            pert + pert_ok,
            both + (base_ok and pert_ok),
        ]
    rows = []
    for key in sorted(tallies):
        n, base, pert, both = tallies[key]
        rows.append(
            CompileRateRow(
                group=key,
                n=n,
                base_rate=100.0 * base / n,
                pert_rate=100.0 * pert / n,
                both_rate=100.0 * both / n,
                both_count=both,
            )
        )
    return rows


def bootstrap_ci(
    values: Sequence[int] | Sequence[float],
    iterations: int = 5000,
    level: float = 0.95,
    seed: int = 0,
    clusters: Sequence | None = None,
) -> tuple[float, float]:
    """Percentile bootstrap interval (in percent) over 0/1 outcomes.

    Resampling is at the pair level by default; passing ``clusters``
    (one label per value) resamples whole clusters instead, for
    theorem-level clustering.  Deterministic given the seed.
    """
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        raise EmptyInput("bootstrap_ci needs at least one value")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    rng = np.random.default_rng(seed)
    if clusters is None:
        idx = rng.integers(0, vals.size, size=(iterations, vals.size))
        means = vals[idx].mean(axis=1)
    else:
        labels = np.asarray(list(clusters))
        unique = np.unique(labels)
        by_cluster = [vals[labels == u] for u in unique]
        means = np.empty(iterations)
        for i in range(iterations):
            pick = rng.integers(0, len(by_cluster), size=len(by_cluster))
            sample = np.concatenate([by_cluster[j] for j in pick])
            means[i] = sample.mean()
    alpha = (1.0 - level) / 2.0
    low, high = np.percentile(means, [100.0 * alpha, 100.0 * (1.0 - alpha)])
    return 100.0 * float(low), 100.0 * float(high)

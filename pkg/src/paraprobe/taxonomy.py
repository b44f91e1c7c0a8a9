"""Four-way classification of Lean compile failures.

Categories: unknown-identifier, syntax, elaboration, other.  ``other``
aggregates type, import and miscellaneous errors.  Classification is a
pure function of the diagnostic text; a failed compile always lands in
exactly one category.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import yaml

UNKNOWN_IDENTIFIER = "unknown_identifier"
SYNTAX = "syntax"
ELABORATION = "elaboration"
OTHER = "other"

CATEGORIES = (UNKNOWN_IDENTIFIER, SYNTAX, ELABORATION, OTHER)


@dataclass(frozen=True)
class PatternTable:
    """Ordered category patterns; highest-priority category wins."""

    priority: tuple[str, ...]
    patterns: Mapping[str, tuple[re.Pattern[str], ...]]

    def classify_messages(self, messages: Iterable[str]) -> str:
        joined = list(messages)
        for category in self.priority:
            if category == OTHER:
                continue
            for pat in self.patterns.get(category, ()):
                if any(pat.search(msg) for msg in joined):
                    return category
        return OTHER


def default_pattern_path() -> Path:
    return Path(__file__).parent / "data" / "error_patterns.yaml"


def load_pattern_table(source: str | Path | None = None) -> PatternTable:
    doc = yaml.safe_load(Path(source or default_pattern_path()).read_text(encoding="utf-8"))
    priority = tuple(doc["priority"])
    if set(priority) != set(CATEGORIES):
        raise ValueError(f"pattern table priority must cover {CATEGORIES}")
    compiled = {
        cat: tuple(re.compile(p, re.IGNORECASE) for p in pats)
        for cat, pats in (doc.get("patterns") or {}).items()
    }
    return PatternTable(priority=priority, patterns=compiled)


_DEFAULT_TABLE: PatternTable | None = None


def _default_table() -> PatternTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_pattern_table()
    return _DEFAULT_TABLE


def classify_diagnostics(result, table: PatternTable | None = None) -> str:
    """Category of a failed CompileResult.

    Multi-error outputs take the highest-priority category present, not
    the first error positionally, so cascading errors cannot mask an
    identifier hallucination.

    Raises:
        ValueError: called on a successful compile.
    """
    if result.success:
        raise ValueError("classify_diagnostics requires a failed compile result")
    table = table or _default_table()
    messages = [d.message for d in result.diagnostics if d.severity == "error"]
    return table.classify_messages(messages)


@dataclass(frozen=True)
class TaxonomyRow:
    group: tuple
    n: int
    shares: Mapping[str, float]  # category -> percentage of n

    def pct(self, category: str) -> float:
        return self.shares.get(category, 0.0)


def taxonomy_table(
    records: Iterable,
    grouping: tuple[str, ...] = ("dataset", "model"),
    table: PatternTable | None = None,
) -> list[TaxonomyRow]:
    """Failure distribution per group over every failed compile direction.

    Each PairRecord contributes up to two failed predictions (baseline
    and perturbed).  Rows report N and the percentage per category;
    percentages sum to 100 up to rounding.
    """
    table = table or _default_table()
    counts: dict[tuple, dict[str, int]] = {}
    for record in records:
        key = tuple(getattr(record, field) for field in grouping)
        for side in (record.baseline, record.perturbed):
            if side.compile is None or side.compile.success:
                continue
            cat = classify_diagnostics(side.compile, table)
            counts.setdefault(key, {c: 0 for c in CATEGORIES})[cat] += 1
    rows = []
    for key in sorted(counts):
        by_cat = counts[key]
        n = sum(by_cat.values())
        shares = {c: 100.0 * by_cat[c] / n for c in CATEGORIES}
        rows.append(TaxonomyRow(group=key, n=n, shares=shares))
    return rows

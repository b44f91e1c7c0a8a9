"""Report emission: delimited tables plus a machine-readable summary.

Six tables: per-model consistency with CIs, per-category consistency,
compile rates, the compile-failure taxonomy, a per-rule-by-model matrix (cells with no pairs are emitted
as explicit "." markers, distinct from 0.0), and the GTED panel.
Emission is deterministic: same records, same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping

from .gted import gted_summary
from .harness.records import EQUIVALENT, PairRecord
from .stats import compile_rates, surface_consistency
from .taxonomy import CATEGORIES, taxonomy_table

NULL_MARKER = "."

TABLES = (
    "consistency_by_model",
    "consistency_by_category",
    "compile_rates",
    "error_taxonomy",
    "rule_model_matrix",
    "gted_panel",
)


def _pct(x: float | None) -> str:
    return NULL_MARKER if x is None else f"{x:.1f}"


def _num(x: float) -> str:
    return f"{x:.3f}"


def _write_tsv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    lines = ["\t".join(header)]
    lines.extend("\t".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_report(
    records: Iterable[PairRecord],
    out_dir: str | Path,
    rule_categories: Mapping[str, str] | None = None,
    bootstrap_iterations: int = 5000,
    ci_level: float = 0.95,
    seed: int = 0,
) -> dict:
    """Write all report files into ``out_dir``; returns the summary mapping."""
    records = list(records)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary: dict = {"n_records": len(records)}

    # (i) per-model consistency with CIs
    by_model = surface_consistency(
        records,
        "model",
        bootstrap_iterations=bootstrap_iterations,
        ci_level=ci_level,
        seed=seed,
    )
    _write_tsv(
        out / "consistency_by_model.tsv",
        ["dataset", "model", "n", "equivalent", "rate_pct", "ci_low_pct", "ci_high_pct"],
        [
            [s.group[0], s.group[1], str(s.denominator), str(s.numerator),
             _pct(s.rate), _pct(s.ci_low), _pct(s.ci_high)]
            for s in by_model
        ],
    )
    summary["consistency_by_model"] = [
        {
            "dataset": s.group[0],
            "model": s.group[1],
            "n": s.denominator,
            "equivalent": s.numerator,
            "rate_pct": round(s.rate, 1),
            "ci_low_pct": None if s.ci_low is None else round(s.ci_low, 1),
            "ci_high_pct": None if s.ci_high is None else round(s.ci_high, 1),
        }
        for s in by_model
    ]

    # (ii) per-category consistency
    by_category = surface_consistency(
        records,
        "category",
        rule_categories=rule_categories,
        bootstrap_iterations=bootstrap_iterations,
        ci_level=ci_level,
        seed=seed,
    )
    _write_tsv(
        out / "consistency_by_category.tsv",
        ["dataset", "category", "n", "equivalent", "rate_pct", "ci_low_pct", "ci_high_pct"],
        [
            [s.group[0], s.group[1], str(s.denominator), str(s.numerator),
             _pct(s.rate), _pct(s.ci_low), _pct(s.ci_high)]
            for s in by_category
        ],
    )
    summary["consistency_by_category"] = [
        {
            "dataset": s.group[0],
            "category": s.group[1],
            "n": s.denominator,
            "equivalent": s.numerator,
            "rate_pct": round(s.rate, 1),
        }
        for s in by_category
    ]

    # (iii) compile rates
    rates = compile_rates(records, "model")
    _write_tsv(
        out / "compile_rates.tsv",
        ["dataset", "model", "n", "base_pct", "pert_pct", "both_pct", "both_count"],
        [
            [r.group[0], r.group[1], str(r.n), _pct(r.base_rate), _pct(r.pert_rate),
             _pct(r.both_rate), str(r.both_count)]
            for r in rates
        ],
    )
    summary["compile_rates"] = [
        {
            "dataset": r.group[0],
            "model": r.group[1],
            "n": r.n,
            "base_pct": round(r.base_rate, 1),
            "pert_pct": round(r.pert_rate, 1),
            "both_pct": round(r.both_rate, 1),
            "both_count": r.both_count,
        }
        for r in rates
    ]

    # (iv) compile-failure taxonomy
    tax = taxonomy_table(records)
    _write_tsv(
        out / "error_taxonomy.tsv",
        ["dataset", "model", "n_failed"] + [f"{c}_pct" for c in CATEGORIES],
        [
            [t.group[0], t.group[1], str(t.n)] + [_pct(t.pct(c)) for c in CATEGORIES]
            for t in tax
        ],
    )
    summary["error_taxonomy"] = [
        {
            "dataset": t.group[0],
            "model": t.group[1],
            "n_failed": t.n,
            **{f"{c}_pct": round(t.pct(c), 1) for c in CATEGORIES},
        }
        for t in tax
    ]

    # (v) per-rule x model matrix with explicit empty-cell markers
    models = sorted({r.model for r in records})
    cells: dict[tuple[str, str], dict[str, tuple[int, int]]] = {}
    for record in records:
        row = cells.setdefault((record.dataset, record.rule_id), {})
        eq, n = row.get(record.model, (0, 0))
        row[record.model] = (eq + (record.verdict.status == EQUIVALENT), n + 1)
    matrix_rows = []
    matrix_summary = []
    for dataset, rule_id in sorted(cells):
        row = cells[(dataset, rule_id)]
        rendered = [dataset, rule_id]
        entry: dict = {"dataset": dataset, "rule_id": rule_id, "cells": {}}
        for model in models:
            if model not in row or row[model][1] == 0:
                rendered.append(NULL_MARKER)
                entry["cells"][model] = None
            else:
                eq, n = row[model]
                rendered.append(_pct(100.0 * eq / n))
                entry["cells"][model] = round(100.0 * eq / n, 1)
        matrix_rows.append(rendered)
        matrix_summary.append(entry)
    _write_tsv(
        out / "rule_model_matrix.tsv",
        ["dataset", "rule_id"] + models,
        matrix_rows,
    )
    summary["rule_model_matrix"] = matrix_summary

    # (vi) GTED panel over compile-both pairs with a similarity score
    scores = [
        {"model": r.model, "dataset": r.dataset, "similarity": r.gted}
        for r in records
        if r.gted is not None
    ]
    panel = gted_summary(scores, grouping=("model", "dataset"))
    _write_tsv(
        out / "gted_panel.tsv",
        ["model", "dataset", "n", "median", "p25", "p75", "mean", "count_at_1"],
        [
            [row.group[0], row.group[1], str(row.n), _num(row.median), _num(row.p25),
             _num(row.p75), _num(row.mean), f"{row.count_at_one}/{row.n}"]
            for row in panel
        ],
    )
    summary["gted_panel"] = [
        {
            "model": row.group[0],
            "dataset": row.group[1],
            "n": row.n,
            "median": round(row.median, 3),
            "p25": round(row.p25, 3),
            "p75": round(row.p75, 3),
            "mean": round(row.mean, 3),
            "count_at_1": row.count_at_one,
        }
        for row in panel
    ]
    summary["gted_excluded"] = sum(1 for r in records if r.gted_excluded)

    (out / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return summary

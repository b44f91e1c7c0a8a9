"""Theorem dataset ingestion and paraphrase-workload generation.

Datasets are line-delimited JSON record files.  Loaders normalize the
field names used by public ProofNet- and miniF2F-style distributions
into one schema: ``id``, ``nl_statement``, optional ``formal_statement``
and optional ``dataset`` tag.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .textmask import has_balanced_math

log = logging.getLogger(__name__)

_ID_KEYS = ("id", "name", "problem_name")
_NL_KEYS = ("nl_statement", "informal_stmt", "informal_statement", "nl")
_FORMAL_KEYS = ("formal_statement", "formal", "lean4_statement")


class SchemaError(ValueError):
    """A dataset record failed validation; carries record index and field."""

    def __init__(self, index: int, field: str, message: str):
        self.index = index
        self.field = field
        super().__init__(f"record {index}, field {field!r}: {message}")


@dataclass(frozen=True)
class TheoremRecord:
    id: str
    dataset: str
    nl_statement: str
    reference_formalization: str | None = None


@dataclass(frozen=True)
class PerturbedInstance:
    """A baseline/perturbed prose pair produced by exactly one rule."""

    theorem_id: str
    dataset: str
    rule_id: str
    baseline: str
    perturbed: str


def _first_key(record: dict, keys: tuple[str, ...]):
    for key in keys:
        if key in record and record[key] is not None:
            return record[key]
    return None


def load_corpus(source: str | Path, dataset: str | None = None) -> list[TheoremRecord]:
    """Load and validate a JSONL dataset file.

    The dataset tag comes from each record's ``dataset`` field, the
    ``dataset`` argument, or the file stem, in that order.

    Raises:
        SchemaError: malformed JSON, missing fields, unbalanced math
            delimiters, or duplicate ids.
    """
    path = Path(source)
    default_tag = dataset or path.stem
    records: list[TheoremRecord] = []
    seen: dict[str, int] = {}
    with path.open(encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(i, "-", f"invalid JSON: {exc}") from exc
            rid = _first_key(raw, _ID_KEYS)
            if not rid or not isinstance(rid, str):
                raise SchemaError(i, "id", "missing or non-string id")
            if rid in seen:
                raise SchemaError(i, "id", f"duplicate id {rid!r} (first at record {seen[rid]})")
            seen[rid] = i
            nl = _first_key(raw, _NL_KEYS)
            if not nl or not isinstance(nl, str) or not nl.strip():
                raise SchemaError(i, "nl_statement", "missing or empty statement")
            if not has_balanced_math(nl):
                raise SchemaError(i, "nl_statement", "unbalanced math delimiters")
            records.append(
                TheoremRecord(
                    id=rid,
                    dataset=str(raw.get("dataset") or default_tag),
                    nl_statement=nl,
                    reference_formalization=_first_key(raw, _FORMAL_KEYS),
                )
            )
    return records


def generate_workload(
    corpus: Iterable[TheoremRecord],
    suite,
    on_defect: Callable[[str, str], None] | None = None,
) -> list[PerturbedInstance]:
    """All Applied (theorem, rule) pairs, sorted by (dataset, theorem_id, rule_id).

    A rule whose rewrite destroys a placeholder is marked defective for
    the whole run: it is skipped for every remaining theorem and
    reported through ``on_defect`` (default: a log warning).
    """
    from .rules import RuleDefect, RuleSuite, apply_suite  # rules imports this module

    active = suite
    defective: set[str] = set()
    instances: list[PerturbedInstance] = []
    for theorem in corpus:
        while True:
            try:
                produced = apply_suite(active, theorem)
                break
            except RuleDefect as exc:
                defective.add(exc.rule_id)
                if on_defect is not None:
                    on_defect(exc.rule_id, str(exc))
                else:
                    log.warning("%s", exc)
                active = RuleSuite(
                    rules=tuple(r for r in active.rules if r.id != exc.rule_id),
                    categories=active.categories,
                )
        instances.extend(produced)
    # Defective rules contribute nothing, including from theorems seen
    # before the defect surfaced.
    instances = [p for p in instances if p.rule_id not in defective]
    instances.sort(key=lambda p: (p.dataset, p.theorem_id, p.rule_id))
    return instances


def write_workload(instances: Iterable[PerturbedInstance], path: str | Path) -> None:
    """One instance per line: dataset, theorem_id, rule_id, baseline, perturbed."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(
                json.dumps(
                    {
                        "dataset": inst.dataset,
                        "theorem_id": inst.theorem_id,
                        "rule_id": inst.rule_id,
                        "baseline": inst.baseline,
                        "perturbed": inst.perturbed,
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                )
                + "\n"
            )


def read_workload(path: str | Path) -> list[PerturbedInstance]:
    instances = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            raw = json.loads(line)
            instances.append(
                PerturbedInstance(
                    theorem_id=raw["theorem_id"],
                    dataset=raw["dataset"],
                    rule_id=raw["rule_id"],
                    baseline=raw["baseline"],
                    perturbed=raw["perturbed"],
                )
            )
    return instances


def sample_corpus_path(name: str) -> Path:
    """Resolve a bundled synthetic sample corpus (``proofnet_sharp`` or ``minif2f``)."""
    path = Path(__file__).parent / "data" / "corpora" / f"{name}_sample.jsonl"
    if not path.exists():
        raise FileNotFoundError(f"no bundled sample corpus named {name!r}")
    return path

"""PairRecord: the full evaluation result for one (theorem, rule, model) cell.

Record files hold one JSON record per line, UTF-8, with an explicit
schema version.  Serialization is canonical (sorted keys) so identical
campaigns produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from ..corpus import PerturbedInstance
from .checker import CompileResult, Diagnostic

SCHEMA_VERSION = 1

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
FAILED = "failed"


@dataclass(frozen=True)
class EquivalenceVerdict:
    status: str  # equivalent | not_equivalent | failed
    method: str  # beq_plus | compile_failure | failed
    forward: bool | None = None
    backward: bool | None = None

    def __post_init__(self) -> None:
        if self.status == EQUIVALENT and not (self.forward and self.backward):
            raise ValueError("Equivalent requires both proof directions to succeed")


@dataclass(frozen=True)
class SideResult:
    """Everything recorded for one direction (baseline or perturbed)."""

    raw: str | None = None
    statement: str | None = None
    own_preamble: str | None = None
    extraction_error: str | None = None
    backend_error: str | None = None
    compile: CompileResult | None = None


@dataclass(frozen=True)
class PairRecord:
    instance: PerturbedInstance
    model: str
    baseline: SideResult
    perturbed: SideResult
    verdict: EquivalenceVerdict
    gted: float | None = None
    gted_excluded: str | None = None

    # Convenience pass-throughs used by grouping code.
    @property
    def dataset(self) -> str:
        return self.instance.dataset

    @property
    def theorem_id(self) -> str:
        return self.instance.theorem_id

    @property
    def rule_id(self) -> str:
        return self.instance.rule_id

    @property
    def compile_both(self) -> bool:
        """Derived, never stored: both directions elaborated."""
        return bool(
            self.baseline.compile
            and self.baseline.compile.success
            and self.perturbed.compile
            and self.perturbed.compile.success
        )

    def sort_key(self) -> tuple:
        return (self.dataset, self.theorem_id, self.rule_id, self.model)


def _compile_to_dict(result: CompileResult | None) -> dict | None:
    if result is None:
        return None
    return {
        "success": result.success,
        "diagnostics": [
            {
                "severity": d.severity,
                "message": d.message,
                "pos": list(d.pos) if d.pos else None,
            }
            for d in result.diagnostics
        ],
        "elapsed": result.elapsed,
    }


def _compile_from_dict(data: dict | None) -> CompileResult | None:
    if data is None:
        return None
    return CompileResult(
        success=data["success"],
        diagnostics=tuple(
            Diagnostic(
                severity=d["severity"],
                message=d["message"],
                pos=tuple(d["pos"]) if d.get("pos") else None,
            )
            for d in data["diagnostics"]
        ),
        elapsed=data["elapsed"],
    )


def _side_to_dict(side: SideResult) -> dict:
    return {
        "raw": side.raw,
        "statement": side.statement,
        "own_preamble": side.own_preamble,
        "extraction_error": side.extraction_error,
        "backend_error": side.backend_error,
        "compile": _compile_to_dict(side.compile),
    }


def _side_from_dict(data: dict) -> SideResult:
    return SideResult(
        raw=data.get("raw"),
        statement=data.get("statement"),
        own_preamble=data.get("own_preamble"),
        extraction_error=data.get("extraction_error"),
        backend_error=data.get("backend_error"),
        compile=_compile_from_dict(data.get("compile")),
    )


def record_to_dict(record: PairRecord) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dataset": record.dataset,
        "theorem_id": record.theorem_id,
        "rule_id": record.rule_id,
        "model": record.model,
        "nl_baseline": record.instance.baseline,
        "nl_perturbed": record.instance.perturbed,
        "baseline": _side_to_dict(record.baseline),
        "perturbed": _side_to_dict(record.perturbed),
        "verdict": {
            "status": record.verdict.status,
            "method": record.verdict.method,
            "forward": record.verdict.forward,
            "backward": record.verdict.backward,
        },
        "gted": record.gted,
        "gted_excluded": record.gted_excluded,
    }


def record_from_dict(data: dict) -> PairRecord:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported record schema version {data.get('schema_version')!r}")
    verdict = data["verdict"]
    return PairRecord(
        instance=PerturbedInstance(
            theorem_id=data["theorem_id"],
            dataset=data["dataset"],
            rule_id=data["rule_id"],
            baseline=data["nl_baseline"],
            perturbed=data["nl_perturbed"],
        ),
        model=data["model"],
        baseline=_side_from_dict(data["baseline"]),
        perturbed=_side_from_dict(data["perturbed"]),
        verdict=EquivalenceVerdict(
            status=verdict["status"],
            method=verdict["method"],
            forward=verdict.get("forward"),
            backward=verdict.get("backward"),
        ),
        gted=data.get("gted"),
        gted_excluded=data.get("gted_excluded"),
    )


def record_to_json(record: PairRecord) -> str:
    return json.dumps(record_to_dict(record), ensure_ascii=False, sort_keys=True)


def write_records(records: Iterable[PairRecord], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record_to_json(record) + "\n")


def read_records(path: str | Path) -> Iterator[PairRecord]:
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield record_from_dict(json.loads(line))

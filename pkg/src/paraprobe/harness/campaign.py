"""Pair evaluation and campaign orchestration.

``evaluate_pair`` runs one (instance, model) cell end to end: prompt,
model call, extraction, preamble normalization, compilation of both
sides, and the bidirectional-equivalence verdict.  ``run_campaign``
fans cells out over a worker pool, streams records incrementally, and
is resumable: responses and checker results are cached on disk, so a
rerun of a finished campaign performs zero backend calls and writes
byte-identical records.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ..corpus import PerturbedInstance
from .backends import CachedModelClient, HttpModelClient, MockModelClient, ModelUnavailable, ResponseCache
from .cache import KVCache
from .checker import (
    CachedChecker,
    CheckerProtocolError,
    CheckerUnavailable,
    CompileResult,
    Diagnostic,
    HttpChecker,
    MockChecker,
)
from .extract import (
    DEFAULT_WRAPPER,
    ExtractionError,
    LeanStatement,
    extract_theorem_block,
    normalize_preamble,
    raw_concat_unit,
)
from .profiles import ModelProfile, PromptPayload, build_prompt, get_profile
from .records import (
    EQUIVALENT,
    FAILED,
    NOT_EQUIVALENT,
    EquivalenceVerdict,
    PairRecord,
    SideResult,
    record_to_json,
)

log = logging.getLogger(__name__)

_EXTRACTION_FAILURE_DIAGNOSTIC = "model output contained no theorem declaration"


def compile_check(checker, unit: str) -> CompileResult:
    """Compile one unit; transport errors propagate as CheckerUnavailable."""
    return checker.compile(unit)


def _extraction_failure() -> CompileResult:
    # Extraction failures count downstream as compile failures of
    # category Other, so they carry a non-classifiable diagnostic.
    return CompileResult(
        success=False,
        diagnostics=(Diagnostic("error", _EXTRACTION_FAILURE_DIAGNOSTIC),),
    )


def beq_plus(
    checker,
    stmt_a: LeanStatement | str,
    stmt_b: LeanStatement | str,
    wrapper: str = DEFAULT_WRAPPER,
    normalize: bool = True,
) -> EquivalenceVerdict:
    """Bidirectional-equivalence verdict for two statements.

    Both statements are compiled first; a failing side makes the pair
    NotEquivalent (method ``compile_failure``).  Otherwise the checker
    attempts both directed proof tasks and the pair is Equivalent iff
    both succeed.  Checker-level breakage yields Failed (``failed``).
    """
    stmt_a = stmt_a if isinstance(stmt_a, LeanStatement) else LeanStatement(text=stmt_a)
    stmt_b = stmt_b if isinstance(stmt_b, LeanStatement) else LeanStatement(text=stmt_b)
    try:
        unit_a = _build_unit(stmt_a, wrapper, normalize)
        unit_b = _build_unit(stmt_b, wrapper, normalize)
        compile_a = compile_check(checker, unit_a)
        compile_b = compile_check(checker, unit_b)
        return _verdict_from(checker, unit_a, unit_b, compile_a, compile_b)
    except (CheckerUnavailable, CheckerProtocolError, ExtractionError):
        return EquivalenceVerdict(status=FAILED, method="failed")


def _build_unit(stmt: LeanStatement, wrapper: str, normalize: bool) -> str:
    if normalize:
        return normalize_preamble(stmt, wrapper)
    return raw_concat_unit(stmt, wrapper)


def _verdict_from(checker, unit_a, unit_b, compile_a, compile_b) -> EquivalenceVerdict:
    if not (compile_a.success and compile_b.success):
        return EquivalenceVerdict(status=NOT_EQUIVALENT, method="compile_failure")
    forward = checker.prove(unit_a, unit_b)
    backward = checker.prove(unit_b, unit_a)
    status = EQUIVALENT if (forward and backward) else NOT_EQUIVALENT
    return EquivalenceVerdict(
        status=status, method="beq_plus", forward=forward, backward=backward
    )


def _evaluate_side(model_client, checker, profile, nl, wrapper, normalize) -> SideResult:
    payload = build_prompt(profile, nl)
    try:
        raw = model_client.complete(payload)
    except ModelUnavailable as exc:
        return SideResult(backend_error=str(exc))
    try:
        stmt = extract_theorem_block(raw)
    except ExtractionError as exc:
        return SideResult(raw=raw, extraction_error=str(exc), compile=_extraction_failure())
    unit = _build_unit(stmt, wrapper, normalize)
    compile_result = compile_check(checker, unit)
    return SideResult(
        raw=raw,
        statement=stmt.text,
        own_preamble=stmt.own_preamble,
        compile=compile_result,
    )


def evaluate_pair(
    model_client,
    checker,
    instance: PerturbedInstance,
    profile: ModelProfile,
    wrapper: str = DEFAULT_WRAPPER,
    normalize: bool = True,
) -> PairRecord:
    """Evaluate one paraphrase pair; errors land in the record, never raise."""
    try:
        baseline = _evaluate_side(
            model_client, checker, profile, instance.baseline, wrapper, normalize
        )
        perturbed = _evaluate_side(
            model_client, checker, profile, instance.perturbed, wrapper, normalize
        )
    except (CheckerUnavailable, CheckerProtocolError) as exc:
        side = SideResult(backend_error=str(exc))
        return PairRecord(
            instance=instance,
            model=profile.name,
            baseline=side,
            perturbed=side,
            verdict=EquivalenceVerdict(status=FAILED, method="failed"),
        )

    if baseline.backend_error or perturbed.backend_error:
        verdict = EquivalenceVerdict(status=FAILED, method="failed")
    elif not (baseline.compile.success and perturbed.compile.success):
        verdict = EquivalenceVerdict(status=NOT_EQUIVALENT, method="compile_failure")
    else:
        unit_a = _build_unit(
            LeanStatement(text=baseline.statement, own_preamble=baseline.own_preamble),
            wrapper,
            normalize,
        )
        unit_b = _build_unit(
            LeanStatement(text=perturbed.statement, own_preamble=perturbed.own_preamble),
            wrapper,
            normalize,
        )
        try:
            verdict = _verdict_from(
                checker, unit_a, unit_b, baseline.compile, perturbed.compile
            )
        except (CheckerUnavailable, CheckerProtocolError):
            verdict = EquivalenceVerdict(status=FAILED, method="failed")

    return PairRecord(
        instance=instance,
        model=profile.name,
        baseline=baseline,
        perturbed=perturbed,
        verdict=verdict,
    )


@dataclass(frozen=True)
class CampaignConfig:
    """Fully serializable run configuration, archived beside the outputs."""

    workload_path: str
    models: tuple[str, ...]
    out_dir: str
    cache_dir: str
    checker_url: str | None = None
    mock: bool = True
    parallelism: int = 4
    seed: int = 0
    proof_timeout: float = 60.0
    retries: int = 3
    normalize_preambles: bool = True
    wrapper: str = DEFAULT_WRAPPER
    # Provenance of the perturb stage, when known.
    corpus_paths: tuple[str, ...] = ()
    rules_path: str | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)


@dataclass
class CampaignResult:
    records: list[PairRecord]
    stats: dict


def _make_clients(config: CampaignConfig, model_name: str):
    cache_dir = Path(config.cache_dir)
    response_cache = ResponseCache(cache_dir / f"responses_{model_name}.jsonl")
    checker_cache = KVCache(cache_dir / "checker.jsonl")
    profile = get_profile(model_name)
    if config.mock:
        inner_model = MockModelClient(emit_own_preamble=profile.emits_own_preamble)
        inner_checker = MockChecker()
    else:
        inner_model = HttpModelClient(
            endpoint_env=profile.endpoint_env,
            api_key_env=profile.api_key_env,
            retries=config.retries,
        )
        if not config.checker_url:
            raise CheckerUnavailable("no checker endpoint configured")
        inner_checker = HttpChecker(
            config.checker_url, timeout=config.proof_timeout, retries=config.retries
        )
    model = CachedModelClient(inner_model, response_cache)
    checker = CachedChecker(inner_checker, checker_cache)
    return model, checker, inner_model, inner_checker, response_cache, checker_cache


def run_campaign(
    config: CampaignConfig, instances: Sequence[PerturbedInstance]
) -> CampaignResult:
    """Evaluate every (instance, model) cell with bounded parallelism.

    Records stream to ``records.jsonl.partial`` in completion order; the
    final ``records.jsonl`` is canonically sorted by (dataset,
    theorem_id, rule_id, model), independent of scheduling.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(config.to_json() + "\n", encoding="utf-8")

    records: list[PairRecord] = []
    stats = {
        "cells": 0,
        "model_backend_calls": 0,
        "checker_backend_calls": 0,
        "cache_hits": 0,
        "failed_cells": 0,
    }
    partial_path = out_dir / "records.jsonl.partial"
    with partial_path.open("w", encoding="utf-8") as partial:
        for model_name in config.models:
            model, checker, inner_model, inner_checker, rcache, ccache = _make_clients(
                config, model_name
            )
            profile = get_profile(model_name)

            def cell(instance: PerturbedInstance) -> PairRecord:
                return evaluate_pair(
                    model,
                    checker,
                    instance,
                    profile,
                    wrapper=config.wrapper,
                    normalize=config.normalize_preambles,
                )

            workers = max(1, config.parallelism)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for record in pool.map(cell, instances):
                    records.append(record)
                    partial.write(record_to_json(record) + "\n")
                    stats["cells"] += 1
                    if record.verdict.status == FAILED:
                        stats["failed_cells"] += 1
            stats["model_backend_calls"] += getattr(inner_model, "calls", 0)
            stats["checker_backend_calls"] += getattr(inner_checker, "compile_calls", 0) + getattr(
                inner_checker, "prove_calls", 0
            )
            stats["cache_hits"] += rcache.hits + ccache.hits

    records.sort(key=lambda r: r.sort_key())
    partial_path.unlink(missing_ok=True)
    return CampaignResult(records=records, stats=stats)


@dataclass(frozen=True)
class ProbeReport:
    n: int
    distinct_outputs: int
    errors: int


def determinism_probe(model_client, payload: PromptPayload, n: int) -> ProbeReport:
    """Issue n identical requests and count distinct byte strings observed.

    Deliberately bypasses any response cache: pass the raw client.
    """
    if n < 2:
        raise ValueError("determinism probe needs n >= 2")
    outputs: set[str] = set()
    errors = 0
    for _ in range(n):
        try:
            outputs.add(model_client.complete(payload))
        except ModelUnavailable:
            errors += 1
    return ProbeReport(n=n, distinct_outputs=len(outputs), errors=errors)

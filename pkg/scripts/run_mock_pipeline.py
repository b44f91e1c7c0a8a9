#!/usr/bin/env python3
"""Run the full four-stage pipeline offline against the mock backends.

Produces a complete report bundle under build/mock_pipeline/ from the
bundled sample corpora, then reruns the campaign to demonstrate that a
warm cache performs zero backend calls.

Usage: python scripts/run_mock_pipeline.py [--out build/mock_pipeline]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from paraprobe.cli import main as cli


def stage(argv: list[str]) -> None:
    code = cli(argv)
    if code != 0:
        raise SystemExit(f"stage {argv[0]} failed with exit code {code}")


def run(out_root: Path) -> None:
    perturb = out_root / "perturb"
    campaign = out_root / "campaign"
    report = out_root / "report"
    cache = out_root / "cache"

    stage([
        "perturb",
        "--corpus", "sample:proofnet_sharp",
        "--corpus", "sample:minif2f",
        "--out", str(perturb),
    ])
    stage([
        "run",
        "--workload", str(perturb / "workload.jsonl"),
        "--model", "mock",
        "--model", "mock_herald",
        "--mock",
        "--cache-dir", str(cache),
        "--out", str(campaign),
    ])
    stage([
        "score",
        "--records", str(campaign / "records.jsonl"),
        "--out", str(campaign / "scored.jsonl"),
    ])
    stage([
        "report",
        "--records", str(campaign / "scored.jsonl"),
        "--out", str(report),
    ])

    # Rerun against the warm cache; backend call counts must be zero.
    stage([
        "run",
        "--workload", str(perturb / "workload.jsonl"),
        "--model", "mock",
        "--model", "mock_herald",
        "--mock",
        "--cache-dir", str(cache),
        "--out", str(out_root / "campaign_rerun"),
    ])
    rerun = json.loads((out_root / "campaign_rerun" / "run_summary.json").read_text())
    print(f"warm-cache rerun backend calls: model={rerun['model_backend_calls']} "
          f"checker={rerun['checker_backend_calls']}")
    print(f"report bundle: {report}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="build/mock_pipeline")
    run(Path(parser.parse_args().out))

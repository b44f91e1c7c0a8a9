"""Command-line pipeline: perturb -> run -> score -> report.

Each stage reads and writes plain files, so stages are independently
testable and resumable.  Exit codes: 0 success, 1 validation error,
2 backend unreachable, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import rules as rules_mod
from .harness.backends import ModelUnavailable
from .harness.campaign import CampaignConfig, run_campaign
from .harness.checker import CheckerUnavailable
from .harness.records import read_records, write_records
from .report import emit_report
from .scoring import score_records

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BACKEND = 2
EXIT_INTERNAL = 3


def _resolve_corpus(path: str) -> Path:
    if path.startswith("sample:"):
        return corpus_mod.sample_corpus_path(path.split(":", 1)[1])
    return Path(path)


def cmd_perturb(args: argparse.Namespace) -> int:
    suite = rules_mod.load_suite(args.rules)
    records = []
    for raw_path in args.corpus:
        records.extend(corpus_mod.load_corpus(_resolve_corpus(raw_path)))

    defects: dict[str, str] = {}
    instances = corpus_mod.generate_workload(
        records, suite, on_defect=lambda rid, msg: defects.setdefault(rid, msg)
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus_mod.write_workload(instances, out / "workload.jsonl")

    coverage = rules_mod.coverage_report(suite, records)
    lines = ["dataset\trule_id\tapplied"]
    for dataset in sorted({r.dataset for r in records}):
        for rule in sorted(suite.rules, key=lambda r: r.id):
            lines.append(f"{dataset}\t{rule.id}\t{coverage.count(dataset, rule.id)}")
    (out / "coverage.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (out / "coverage_summary.json").write_text(
        json.dumps(
            {
                "rules_applicable": dict(sorted(coverage.rules_applicable.items())),
                "instances": len(instances),
                "defective_rules": dict(sorted(defects.items())),
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    for rid, msg in sorted(defects.items()):
        print(f"warning: rule {rid} marked defective: {msg}", file=sys.stderr)
    print(f"wrote {len(instances)} instances to {out / 'workload.jsonl'}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = CampaignConfig(
        workload_path=args.workload,
        models=tuple(args.model),
        out_dir=args.out,
        cache_dir=args.cache_dir,
        checker_url=args.checker_url,
        mock=args.mock,
        parallelism=args.parallelism,
        seed=args.seed,
        proof_timeout=args.timeout,
        normalize_preambles=not args.no_normalize_preambles,
    )
    instances = corpus_mod.read_workload(args.workload)
    result = run_campaign(config, instances)
    out = Path(args.out)
    write_records(result.records, out / "records.jsonl")
    (out / "run_summary.json").write_text(
        json.dumps(result.stats, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"evaluated {result.stats['cells']} cells "
        f"({result.stats['model_backend_calls']} model calls, "
        f"{result.stats['checker_backend_calls']} checker calls, "
        f"{result.stats['failed_cells']} failed)"
    )
    if result.stats["cells"] > 0 and result.stats["failed_cells"] == result.stats["cells"]:
        print("error: every cell failed", file=sys.stderr)
        return EXIT_BACKEND
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    records = list(read_records(args.records))
    scored, summary = score_records(records)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_records(scored, out)
    print(
        f"scored {summary.scored}/{summary.records} records "
        f"({summary.parse_excluded} excluded by the statement parser)"
    )
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    records = list(read_records(args.records))
    suite = rules_mod.load_suite(args.rules)
    categories = {rule.id: rule.category for rule in suite.rules}
    emit_report(
        records,
        args.out,
        rule_categories=categories,
        bootstrap_iterations=args.bootstrap_iters,
        ci_level=args.ci_level,
        seed=args.seed,
    )
    print(f"wrote report tables to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paraprobe",
        description="Paraphrase-robustness probing for NL -> Lean 4 autoformalization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    default_rules = str(rules_mod.default_suite_path())

    p = sub.add_parser("perturb", help="generate the paraphrase-pair workload")
    p.add_argument(
        "--corpus",
        action="append",
        required=True,
        help="dataset JSONL path; 'sample:proofnet_sharp' / 'sample:minif2f' "
        "resolve to the bundled synthetic corpora",
    )
    p.add_argument("--rules", default=default_rules, help="rule-definition YAML")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("run", help="evaluate the workload against model + checker")
    p.add_argument("--workload", required=True)
    p.add_argument("--model", action="append", required=True, help="model profile name")
    p.add_argument("--checker-url", default=None)
    p.add_argument("--cache-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mock", action="store_true", help="use in-process mock backends")
    p.add_argument("--parallelism", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=60.0, help="proof-search timeout per direction (s)")
    p.add_argument(
        "--no-normalize-preambles",
        action="store_true",
        help="bypass wrapper-preamble normalization (for ablations)",
    )
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("score", help="backfill verdicts and GTED similarity")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("report", help="emit aggregate tables")
    p.add_argument("--records", required=True)
    p.add_argument("--rules", default=default_rules)
    p.add_argument("--out", required=True)
    p.add_argument("--bootstrap-iters", type=int, default=5000)
    p.add_argument("--ci-level", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        rules_mod.SuiteValidationError,
        corpus_mod.SchemaError,
        FileNotFoundError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (CheckerUnavailable, ModelUnavailable) as exc:
        print(f"error: backend unreachable: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

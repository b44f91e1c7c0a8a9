#!/usr/bin/env python3
"""Determinism probe: issue identical requests, count distinct outputs.

Greedy decoding should be byte-stable; a live endpoint that is not will
show up here as more than one distinct output.  Defaults to the offline
mock (1 distinct output expected); point it at a real endpoint with
--base-url or the profile's environment variables.

Usage:
  python scripts/probe_determinism.py --model mock -n 50
  python scripts/probe_determinism.py --model kimina --base-url http://host:8000 -n 50
"""

from __future__ import annotations

import argparse

from paraprobe.harness import MockModelClient, build_prompt, determinism_probe, get_profile
from paraprobe.harness.backends import HttpModelClient

DEFAULT_STATEMENT = "Prove that if $|G|=132$ then $G$ is not simple."


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--model", default="mock")
    parser.add_argument("--base-url", default=None)
    parser.add_argument("-n", type=int, default=50)
    parser.add_argument("--statement", default=DEFAULT_STATEMENT)
    args = parser.parse_args()

    profile = get_profile(args.model)
    payload = build_prompt(profile, args.statement)
    if args.model.startswith("mock"):
        client = MockModelClient(emit_own_preamble=profile.emits_own_preamble)
    else:
        client = HttpModelClient(
            base_url=args.base_url,
            endpoint_env=profile.endpoint_env,
            api_key_env=profile.api_key_env,
        )
    report = determinism_probe(client, payload, args.n)
    print(
        f"{args.model}: {report.n} identical requests -> "
        f"{report.distinct_outputs} distinct outputs ({report.errors} errors)"
    )
    if report.distinct_outputs == 1:
        print("all outputs byte-identical")


if __name__ == "__main__":
    main()

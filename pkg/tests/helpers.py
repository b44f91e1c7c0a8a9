"""Builders and independent oracles shared across test modules."""

from __future__ import annotations

import random

from paraprobe.corpus import PerturbedInstance
from paraprobe.gted.parser import SyntaxTree, node
from paraprobe.harness.checker import CompileResult, Diagnostic
from paraprobe.harness.records import (
    EQUIVALENT,
    FAILED,
    NOT_EQUIVALENT,
    EquivalenceVerdict,
    PairRecord,
    SideResult,
)

OK = CompileResult(success=True)


def failed_compile(message: str = "unknown identifier 'SimpleGroup'") -> CompileResult:
    return CompileResult(success=False, diagnostics=(Diagnostic("error", message),))


def make_record(
    dataset: str = "proofnet_sharp",
    model: str = "mock",
    rule_id: str = "discourse_prove_to_show",
    theorem_id: str = "t0",
    verdict_status: str = EQUIVALENT,
    method: str | None = None,
    base_compile: CompileResult | None = OK,
    pert_compile: CompileResult | None = OK,
    gted: float | None = None,
) -> PairRecord:
    if method is None:
        method = {
            EQUIVALENT: "beq_plus",
            NOT_EQUIVALENT: "beq_plus",
            FAILED: "failed",
        }[verdict_status]
    directions = (True, True) if verdict_status == EQUIVALENT else (None, None)
    return PairRecord(
        instance=PerturbedInstance(
            theorem_id=theorem_id,
            dataset=dataset,
            rule_id=rule_id,
            baseline="Prove that $x$ holds.",
            perturbed="We show that $x$ holds.",
        ),
        model=model,
        baseline=SideResult(raw="r", statement="theorem a : True := sorry", compile=base_compile),
        perturbed=SideResult(raw="r", statement="theorem a : True := sorry", compile=pert_compile),
        verdict=EquivalenceVerdict(
            status=verdict_status,
            method=method,
            forward=directions[0],
            backward=directions[1],
        ),
        gted=gted,
    )


# --- ordered-tree edit distance oracle ---------------------------------------
#
# Direct recursion on the standard forest recurrence; no keyroots, no
# DP tables, so it is an independent check of the production algorithm.


def _forest_dist(f: tuple, g: tuple) -> int:
    # Forests are tuples of (label, children-tuple) trees.
    if not f and not g:
        return 0
    if not f:
        return sum(_tree_size(t) for t in g)
    if not g:
        return sum(_tree_size(t) for t in f)
    (la, ca), rest_f = f[0], f[1:]
    (lb, cb), rest_g = g[0], g[1:]
    delete = _forest_dist(ca + rest_f, g) + 1
    insert = _forest_dist(f, cb + rest_g) + 1
    match = (
        _forest_dist(ca, cb)
        + _forest_dist(rest_f, rest_g)
        + (0 if la == lb else 1)
    )
    return min(delete, insert, match)


def _tree_size(t: tuple) -> int:
    return 1 + sum(_tree_size(c) for c in t[1])


def to_tuple(tree: SyntaxTree) -> tuple:
    return (tree.label, tuple(to_tuple(c) for c in tree.children))


def oracle_ted(a: SyntaxTree, b: SyntaxTree) -> int:
    return _forest_dist((to_tuple(a),), (to_tuple(b),))


def random_tree(rng: random.Random, max_nodes: int, labels: str = "abcfg") -> SyntaxTree:
    """Random ordered labeled tree with 1..max_nodes nodes.

    Node i >= 1 attaches to a uniformly random earlier node, so every
    ordered shape is reachable.
    """
    n = rng.randint(1, max_nodes)
    children: list[list[int]] = [[] for _ in range(n)]
    for i in range(1, n):
        children[rng.randrange(i)].append(i)
    labels_assigned = [rng.choice(labels) for _ in range(n)]

    def build(i: int) -> SyntaxTree:
        return node(labels_assigned[i], *[build(c) for c in children[i]])

    return build(0)

#!/usr/bin/env python3
"""Regenerate the bundled synthetic sample corpora.

These corpora are NOT the upstream benchmark datasets: they are synthetic
statements written in each dataset's style, sized to match (185
undergraduate-style records, 244 olympiad-style records) so tests and
demos run offline.  Generation is fully deterministic.

Run from the repo root:  python scripts/make_sample_corpora.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "paraprobe" / "data" / "corpora"

GROUPS = ["G", "H", "K"]
ORDERS = [8, 12, 24, 36, 56, 60, 72, 96, 108, 132, 144, 168, 200, 312]
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23]
WORDS = ["two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"]


def _pn_statement(i: int, rng: random.Random) -> tuple[str, str | None]:
    g = rng.choice(GROUPS)
    n = rng.choice(ORDERS)
    p = rng.choice(PRIMES)
    q = rng.choice([x for x in PRIMES if x != p])
    w = rng.choice(WORDS)

    # Indices 0..120 begin with "Prove that" so the leading-directive rules
    # apply to exactly 121 of the 185 records.
    if i < 121:
        bodies = [
            f"if $|{g}| = {n}$ then ${g}$ is not simple.",
            f"every abelian group of order ${n}$ is cyclic.",
            f"there is a unique subgroup of order ${p}$ in any group of order ${p * q}$.",
            f"if $x \\in Z({g})$ then the centralizer of $x$ is all of ${g}$.",
            f"a group of order ${p}^2$ has exactly {w} conjugacy classes or is abelian.",
            f"${g}$ has a normal subgroup of index ${p}$ whenever $|{g}| = {p * q}$.",
            f"there is no simple group of order ${n}$.",
            f"the ring $\\mathbb{{Z}}/{n}\\mathbb{{Z}}$ has exactly ${p}$ units when ${p}$ divides ${n}$.",
            f"if $\\varphi : {g} \\to H$ is a surjective homomorphism then $H \\cong {g}/\\ker \\varphi$.",
            f"every ideal of $\\mathbb{{Z}}$ is principal.",
        ]
        text = "Prove that " + bodies[i % len(bodies)]
        formal = None
        if i % 3 == 0:
            formal = (
                f"theorem pns_{i:04d} (G : Type*) [Group G] [Fintype G] "
                f"(h : Fintype.card G = {n}) : ¬ IsSimpleGroup G := sorry"
            )
        return text, formal

    j = i - 121
    if j < 26:
        bodies = [
            f"the polynomial $x^{p} - {q}$ is irreducible over $\\mathbb{{Q}}$.",
            f"${g}$ is solvable whenever $|{g}| = {p}^{q}$.",
            f"every abelian group is a $\\mathbb{{Z}}$-module.",
            f"there is an injection from $\\mathbb{{Z}}/{p}\\mathbb{{Z}}$ into $S_{{{p}}}$.",
            f"a field with ${p * q}$ elements does not exist unless ${p * q}$ is a prime power.",
            f"the {w} smallest subgroups of $\\mathbb{{Z}}$ are nested.",
        ]
        return "Show that " + bodies[j % len(bodies)], None
    j -= 26
    if j < 10:
        bodies = [
            f"$H$ is a subgroup of ${g}$ such that $[{g} : H] = {p}$. Then $H$ is normal in ${g}$.",
            f"$R$ is a commutative ring such that every ideal is prime. Then $R$ is a field.",
            f"$f : \\mathbb{{R}} \\to \\mathbb{{R}}$ is additive such that $f$ is monotone. Then $f$ is linear.",
        ]
        return "Suppose " + bodies[j % len(bodies)], None
    j -= 10
    if j < 8:
        bodies = [
            f"Let $Z({g})$ denote the center of ${g}$. Every subgroup of $Z({g})$ is normal in ${g}$.",
            f"Let $n_{p}$ denote the number of Sylow ${p}$-subgroups. If $|{g}| = {n}$ then $n_{p}$ divides ${n}$.",
        ]
        return bodies[j % len(bodies)], None
    j -= 8
    if j < 8:
        bodies = [
            f"If $|{g}| = {p * q}$ then ${g}$ has an element of order ${p}$.",
            f"If $x^2 = e$ for all $x \\in {g}$ then ${g}$ is abelian.",
        ]
        return bodies[j % len(bodies)], None
    j -= 8
    # Remaining 12: existential phrasing, math-free edge cases, masking quirks.
    leftovers = [
        f"There is a group of order ${n}$ with trivial center.",
        f"There is an infinite number of primes $p$ with $p \\equiv 1 \\pmod{{{q}}}$.",
        f"Any two groups of order ${p}$ are isomorphic.",
        f"Every permutation in $S_{{{p}}}$ is a product of transpositions.",
        "Every finite integral domain is a field.",
        "A finitely generated torsion-free module over a principal ideal domain is free.",
        f"The quotient construction costs nothing: the symbol \\$ in \\${p} is currency, but ${g}/H$ is a group.",
        f"$$\\sum_{{k=1}}^{{n}} k = \\frac{{n(n+1)}}{{2}}$$ holds for every natural number $n$.",
        f"The bracket ⟦ marks Bourbaki-style commentary; still, $|{g}| = {n}$ forces ${g}$ to be cyclic.",
        f"Each subgroup lattice of $\\mathbb{{Z}}/{n}\\mathbb{{Z}}$ is distributive.",
        f"No group of order ${p * q}$ is simple when $p < q$ and ${p}$ does not divide ${q} - 1$.",
        f"Exactly {w} of the groups of order ${n}$ are abelian.",
    ]
    return leftovers[j % len(leftovers)], None


def _mf2f_statement(i: int, rng: random.Random) -> tuple[str, str | None]:
    a = rng.randint(2, 9)
    b = rng.randint(2, 9)
    n = rng.randint(3, 40)
    w = rng.choice(WORDS)
    kind = i % 10
    if kind in (0, 1, 2):
        bodies = [
            f"the sum of the first $n$ odd integers equals $n^2$.",
            f"$\\frac{{{a}}}{{{b}}} + \\frac{{{b}}}{{{a}}} \\ge 2$ for positive reals.",
            f"${a}^n - 1$ is divisible by ${a - 1}$ for every natural number $n$.",
            f"if $x + y = {a + b}$ and $xy = {a * b}$ then $x^2 + y^2 = {(a + b) ** 2 - 2 * a * b}$.",
        ]
        return "Prove that " + bodies[(i // 10) % len(bodies)], (
            f"theorem mf2f_{i:04d} (n : ℕ) (h : 0 < n) : n + {a} ≤ {a} + n + n := sorry"
            if i % 4 == 0
            else None
        )
    if kind in (3, 4):
        bodies = [
            f"$a^2 + b^2 \\ge 2ab$ for all real numbers $a$ and $b$.",
            f"the equation $x^2 - {a}x + {b} = 0$ has at most {w} real solutions.",
            f"$n! > {a}^n$ for all sufficiently large $n$.",
        ]
        return "Show that " + bodies[(i // 10) % len(bodies)], None
    if kind == 5:
        return (
            f"Suppose $n$ is a positive integer such that $n^2 + {a}$ is prime. "
            f"Show that $n$ is not divisible by ${b}$.",
            None,
        )
    if kind == 6:
        return (
            f"If $x > {a}$ then $x^2 > {a * a}$.",
            None,
        )
    if kind == 7:
        return (
            f"There is no rational number whose square is ${PRIMES[i % len(PRIMES)]}$.",
            None,
        )
    if kind == 8:
        return (
            f"Let $s$ denote the sum $1 + 2 + \\cdots + {n}$. Prove that $s = {n * (n + 1) // 2}$.",
            None,
        )
    return (
        f"The product of any {w} consecutive integers is divisible by ${a}$ when ${a}$ "
        f"is at most {w}.",
        None,
    )


def write_corpus(path: Path, dataset: str, count: int, make) -> None:
    rng = random.Random(20260801)
    prefix = "pns" if dataset == "proofnet_sharp" else "mf2f"
    with path.open("w", encoding="utf-8") as fh:
        for i in range(count):
            nl, formal = make(i, rng)
            record = {
                "id": f"{prefix}_{i:04d}",
                "dataset": dataset,
                "nl_statement": nl,
                "source": "synthetic-sample",
            }
            if formal:
                record["formal_statement"] = formal
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    print(f"wrote {count} records to {path}")


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    write_corpus(OUT_DIR / "proofnet_sharp_sample.jsonl", "proofnet_sharp", 185, _pn_statement)
    write_corpus(OUT_DIR / "minif2f_sample.jsonl", "minif2f", 244, _mf2f_statement)


if __name__ == "__main__":
    main()

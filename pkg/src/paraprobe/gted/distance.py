"""Ordered-tree edit distance (Zhang-Shasha) and normalized similarity.

Unit costs: inserting or deleting a node costs 1, relabeling costs 1
when the labels differ and 0 otherwise.  Similarity normalizes by the
larger tree: ``1 - ted / max(|a|, |b|)``, so 1.0 holds exactly when the
trees are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .parser import SyntaxTree


def _postorder(root: SyntaxTree) -> tuple[list[str], list[int]]:
    """Labels in postorder plus each node's leftmost-leaf-descendant index."""
    labels: list[str] = []
    lmds: list[int] = []

    def walk(node: SyntaxTree) -> int:
        first_leaf = -1
        for child in node.children:
            leaf = walk(child)
            if first_leaf < 0:
                first_leaf = leaf
        index = len(labels)
        labels.append(node.label)
        lmds.append(first_leaf if first_leaf >= 0 else index)
        return lmds[index]

    walk(root)
    return labels, lmds


def _keyroots(lmds: list[int]) -> list[int]:
    seen: dict[int, int] = {}
    for i, l in enumerate(lmds):
        seen[l] = i  # keep the largest postorder index per leftmost leaf
    return sorted(seen.values())


def tree_edit_distance(a: SyntaxTree, b: SyntaxTree) -> int:
    """Minimum number of insert/delete/relabel operations turning a into b."""
    la, lmda = _postorder(a)
    lb, lmdb = _postorder(b)
    na, nb = len(la), len(lb)
    td = [[0] * nb for _ in range(na)]

    for i in _keyroots(lmda):
        for j in _keyroots(lmdb):
            ioff = lmda[i] - 1
            joff = lmdb[j] - 1
            m = i - ioff + 1
            n = j - joff + 1
            fd = [[0] * n for _ in range(m)]
            for x in range(1, m):
                fd[x][0] = fd[x - 1][0] + 1
            for y in range(1, n):
                fd[0][y] = fd[0][y - 1] + 1
            for x in range(1, m):
                for y in range(1, n):
                    if lmda[i] == lmda[x + ioff] and lmdb[j] == lmdb[y + joff]:
                        relabel = 0 if la[x + ioff] == lb[y + joff] else 1
                        fd[x][y] = min(
                            fd[x - 1][y] + 1,
                            fd[x][y - 1] + 1,
                            fd[x - 1][y - 1] + relabel,
                        )
                        td[x + ioff][y + joff] = fd[x][y]
                    else:
                        p = lmda[x + ioff] - 1 - ioff
                        q = lmdb[y + joff] - 1 - joff
                        fd[x][y] = min(
                            fd[x - 1][y] + 1,
                            fd[x][y - 1] + 1,
                            fd[p][q] + td[x + ioff][y + joff],
                        )
    return td[na - 1][nb - 1]


@dataclass(frozen=True)
class GtedScore:
    similarity: float
    ted: int
    size_a: int
    size_b: int


def gted_similarity(a: SyntaxTree, b: SyntaxTree) -> GtedScore:
    """Similarity in [0, 1]; exactly 1.0 iff the edit distance is zero."""
    ted = tree_edit_distance(a, b)
    size_a, size_b = a.size(), b.size()
    similarity = 1.0 - ted / max(size_a, size_b)
    similarity = min(1.0, max(0.0, similarity))
    return GtedScore(similarity=similarity, ted=ted, size_a=size_a, size_b=size_b)


@dataclass(frozen=True)
class GtedSummaryRow:
    group: tuple
    n: int
    median: float
    p25: float
    p75: float
    mean: float
    count_at_one: int


def gted_summary(
    scores: Iterable[Mapping],
    grouping: Sequence[str] = ("model", "dataset"),
) -> list[GtedSummaryRow]:
    """Order statistics per group over similarity scores.

    ``scores`` are mappings carrying the grouping fields plus a
    ``similarity`` value.  Percentiles use linear interpolation
    (numpy's default).
    """
    groups: dict[tuple, list[float]] = {}
    for record in scores:
        key = tuple(record[field] for field in grouping)
        groups.setdefault(key, []).append(float(record["similarity"]))
    rows = []
    for key in sorted(groups):
        vals = np.asarray(groups[key], dtype=float)
        rows.append(
            GtedSummaryRow(
                group=key,
                n=len(vals),
                median=float(np.percentile(vals, 50)),
                p25=float(np.percentile(vals, 25)),
                p75=float(np.percentile(vals, 75)),
                mean=float(vals.mean()),
                count_at_one=int((vals == 1.0).sum()),
            )
        )
    return rows

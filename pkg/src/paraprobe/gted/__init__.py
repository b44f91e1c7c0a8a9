"""Structural similarity over Lean theorem statements.

Statements are parsed into labeled ordered trees by a small statement
grammar; similarity is one minus the normalized ordered-tree edit
distance, so 1.0 means structurally identical after whitespace is
normalized away by parsing.
"""

from .parser import StatementParseError, SyntaxTree, parse_statement
from .distance import GtedScore, gted_similarity, gted_summary, tree_edit_distance

__all__ = [
    "GtedScore",
    "StatementParseError",
    "SyntaxTree",
    "gted_similarity",
    "gted_summary",
    "parse_statement",
    "tree_edit_distance",
]

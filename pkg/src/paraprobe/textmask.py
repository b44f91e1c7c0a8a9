"""Reversible masking of LaTeX math spans.

Perturbation rules must never touch formulas or the identifiers inside
them, so every rewrite happens on a masked view of the prose in which
each math span is replaced by a placeholder token, and the original
spans are spliced back afterwards.

Placeholders use non-ASCII brackets (``⟦M0⟧``, ``⟦M1⟧``, ...) so that no
trigger pattern written for English prose can match inside one.  If the
source text itself contains ``⟦``, the bracket depth escalates
(``⟦⟦M0⟧⟧`` and so on) until collision is impossible.
"""

from __future__ import annotations

from dataclasses import dataclass


class UnbalancedDelimiters(ValueError):
    """A math delimiter was opened but never closed (malformed source record)."""


class MissingPlaceholder(ValueError):
    """A rewrite deleted or duplicated a placeholder; the rewrite is invalid."""


@dataclass(frozen=True)
class MathSpan:
    """One verbatim math region, delimiters included."""

    index: int
    raw: str
    start: int
    end: int


@dataclass(frozen=True)
class MaskedText:
    """Prose with math spans replaced by placeholders, plus the restoration table."""

    masked: str
    spans: tuple[MathSpan, ...]
    depth: int = 1

    def placeholder(self, k: int) -> str:
        return "⟦" * self.depth + f"M{k}" + "⟧" * self.depth


def _escaped(text: str, i: int) -> bool:
    # A character is escaped iff preceded by an odd number of backslashes.
    n = 0
    j = i - 1
    while j >= 0 and text[j] == "\\":
        n += 1
        j -= 1
    return n % 2 == 1


def _find_unescaped(text: str, needle: str, start: int) -> int:
    i = text.find(needle, start)
    while i >= 0:
        if not _escaped(text, i):
            return i
        i = text.find(needle, i + 1)
    return -1


def _scan_spans(text: str) -> list[tuple[int, int]]:
    """Return (start, end) offsets of every maximal math span, left to right."""
    bounds: list[tuple[int, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\\" and not _escaped(text, i) and text.startswith("\\[", i):
            j = text.find("\\]", i + 2)
            if j < 0:
                raise UnbalancedDelimiters(
                    f"display math opened at offset {i} is never closed"
                )
            bounds.append((i, j + 2))
            i = j + 2
            continue
        if ch == "$" and not _escaped(text, i):
            if text.startswith("$$", i):
                j = _find_unescaped(text, "$$", i + 2)
                if j < 0:
                    raise UnbalancedDelimiters(
                        f"display math '$$' opened at offset {i} is never closed"
                    )
                bounds.append((i, j + 2))
                i = j + 2
                continue
            j = _find_unescaped(text, "$", i + 1)
            if j < 0:
                raise UnbalancedDelimiters(
                    f"inline math '$' opened at offset {i} is never closed"
                )
            bounds.append((i, j + 1))
            i = j + 1
            continue
        i += 1
    return bounds


def _placeholder_depth(text: str) -> int:
    # One bracket more than the longest run already present in the source.
    longest = run = 0
    for ch in text:
        run = run + 1 if ch == "⟦" else 0
        longest = max(longest, run)
    return longest + 1


def has_balanced_math(text: str) -> bool:
    try:
        _scan_spans(text)
    except UnbalancedDelimiters:
        return False
    return True


def mask(text: str) -> MaskedText:
    """Replace every maximal math span with a placeholder token.

    Non-math text is preserved byte for byte; on math-free input the
    masked text equals the input.

    Raises:
        UnbalancedDelimiters: an unescaped delimiter is never closed.
    """
    bounds = _scan_spans(text)
    depth = _placeholder_depth(text)
    pieces: list[str] = []
    spans: list[MathSpan] = []
    prev = 0
    for k, (s, e) in enumerate(bounds):
        pieces.append(text[prev:s])
        pieces.append("⟦" * depth + f"M{k}" + "⟧" * depth)
        spans.append(MathSpan(index=k, raw=text[s:e], start=s, end=e))
        prev = e
    pieces.append(text[prev:])
    return MaskedText(masked="".join(pieces), spans=tuple(spans), depth=depth)


def unmask(masked: MaskedText, rewritten: str) -> str:
    """Splice the original math spans back into a rewritten masked text.

    Every placeholder must occur exactly once in ``rewritten`` (any
    order).  A missing or duplicated placeholder means the rewrite was
    invalid and must be rejected, not silently repaired.

    Raises:
        MissingPlaceholder: a placeholder occurs zero or multiple times.
    """
    for span in masked.spans:
        token = masked.placeholder(span.index)
        count = rewritten.count(token)
        if count != 1:
            raise MissingPlaceholder(
                f"placeholder {token} occurs {count} times in rewrite "
                f"(expected exactly once)"
            )
    out = rewritten
    for span in masked.spans:
        out = out.replace(masked.placeholder(span.index), span.raw, 1)
    return out

"""Theorem-block extraction and compilation-unit preamble normalization.

Model outputs are free-form: fenced code, explanations, sometimes a
full file with its own ``import`` header.  Extraction pulls out the
first ``theorem`` declaration and replaces any proof body with
``sorry``.  Preamble normalization then builds a compilation unit with
exactly one import block: the checker's wrapper preamble wins and a
statement's own preamble is dropped (keeping both makes the Lean
compiler reject the file).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

DEFAULT_WRAPPER = "import Mathlib\n\nnamespace PairCheck"

_FENCE = re.compile(r"```(?:[a-zA-Z0-9_+-]*)\n(.*?)```", re.DOTALL)
_THEOREM = re.compile(r"\btheorem\b")
_IMPORT_LINE = re.compile(r"^\s*import\s+\S+", re.MULTILINE)
_PREAMBLE_LINE = re.compile(
    r"^\s*(import|open|namespace|set_option|universe|section|variable)\b"
)
_NAMESPACE = re.compile(r"^\s*namespace\s+(\S+)", re.MULTILINE)

_OPEN_BRACKETS = {"(": ")", "[": "]", "{": "}", "⟨": "⟩", "⦃": "⦄"}
_CLOSE_BRACKETS = set(_OPEN_BRACKETS.values())


class ExtractionError(ValueError):
    """No theorem declaration could be extracted from the model output."""


@dataclass(frozen=True)
class LeanStatement:
    """One ``theorem ... := sorry`` block plus any preamble the model emitted."""

    text: str
    own_preamble: str | None = None

    @property
    def has_own_preamble(self) -> bool:
        return self.own_preamble is not None


def _candidate_blocks(raw: str) -> list[str]:
    fences = [m.group(1) for m in _FENCE.finditer(raw)]
    return fences if fences else [raw]


def _find_assign(text: str, start: int) -> int:
    """Offset of the first top-level ``:=`` after ``start``, or -1."""
    depth = 0
    i = start
    while i < len(text) - 1:
        ch = text[i]
        if ch in _OPEN_BRACKETS:
            depth += 1
        elif ch in _CLOSE_BRACKETS:
            depth = max(0, depth - 1)
        elif depth == 0 and text.startswith(":=", i):
            return i
        i += 1
    return -1


def extract_theorem_block(raw: str) -> LeanStatement:
    """Extract the first theorem declaration, body replaced by ``sorry``.

    Raises:
        ExtractionError: the output contains no theorem declaration.
    """
    for block in _candidate_blocks(raw):
        m = _THEOREM.search(block)
        if m is None:
            continue
        start = m.start()
        tail = block[start:]
        # The declaration ends at the next theorem if the model emitted
        # several without proofs.
        next_decl = _THEOREM.search(tail, 1)
        scan_end = next_decl.start() if next_decl else len(tail)
        assign = _find_assign(tail[:scan_end], 0)
        if assign >= 0:
            header = tail[:assign].rstrip()
        else:
            # No body: cut at the first blank line, next declaration, or end.
            blank = re.search(r"\n\s*\n", tail[:scan_end])
            header = tail[: blank.start() if blank else scan_end].rstrip()
        if not header:
            continue
        stmt = header + " := sorry"
        # Preamble lines may sit inside the fence before the theorem or in
        # the raw output ahead of the fence; check the verbatim prefix.
        pos = raw.find(header[:40])
        own = _own_preamble(raw[:pos] if pos > 0 else block[:start])
        return LeanStatement(text=stmt, own_preamble=own)
    raise ExtractionError("no theorem declaration found in model output")


def _own_preamble(head: str) -> str | None:
    if not _IMPORT_LINE.search(head):
        return None
    lines = [ln for ln in head.splitlines() if _PREAMBLE_LINE.match(ln)]
    return "\n".join(ln.strip() for ln in lines) if lines else None


def _body_from(text: str) -> str:
    """Everything from the first theorem declaration onward."""
    m = _THEOREM.search(text)
    if m is None:
        raise ExtractionError("compilation unit has no theorem declaration")
    return text[m.start() :].strip()


def normalize_preamble(stmt: LeanStatement | str, wrapper: str = DEFAULT_WRAPPER) -> str:
    """Build a compilation unit with exactly one import block.

    The wrapper preamble is kept and any preamble attached to the
    statement is dropped (one of them, never both).  Re-normalizing an
    already-normalized unit is the identity.
    """
    text = stmt.text if isinstance(stmt, LeanStatement) else stmt
    body = _body_from(text)
    unit = wrapper.rstrip() + "\n\n" + body
    ns = _NAMESPACE.search(wrapper)
    if ns and not re.search(rf"^\s*end\s+{re.escape(ns.group(1))}\s*$", body, re.MULTILINE):
        unit += f"\n\nend {ns.group(1)}"
    return unit + "\n"


def raw_concat_unit(stmt: LeanStatement, wrapper: str = DEFAULT_WRAPPER) -> str:
    """The unpatched behavior: wrapper blindly prepended to the full output.

    When the statement carries its own preamble this produces a second
    import block below the wrapper, which a Lean toolchain rejects at
    the file level.  Kept for tests and ablations; campaigns normalize.
    """
    parts = [wrapper.rstrip()]
    if stmt.own_preamble:
        parts.append(stmt.own_preamble)
    parts.append(stmt.text)
    ns = _NAMESPACE.search(wrapper)
    unit = "\n\n".join(parts)
    if ns:
        unit += f"\n\nend {ns.group(1)}"
    return unit + "\n"


def import_block_count(unit: str) -> int:
    """Number of contiguous runs of import lines in a unit."""
    blocks = 0
    in_block = False
    for line in unit.splitlines():
        if re.match(r"^\s*import\s+\S+", line):
            if not in_block:
                blocks += 1
            in_block = True
        elif line.strip():
            in_block = False
    return blocks

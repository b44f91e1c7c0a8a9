import pytest

from paraprobe.harness.extract import (
    ExtractionError,
    LeanStatement,
    extract_theorem_block,
    import_block_count,
    normalize_preamble,
    raw_concat_unit,
)


def test_fenced_block():
    raw = (
        "Here is the formalization:\n\n```lean\n"
        "theorem t1 (h : 1 < n) : ¬ Nonempty (Group (ZMod n)) := sorry\n"
        "```\nHope that helps!"
    )
    stmt = extract_theorem_block(raw)
    assert stmt.text == "theorem t1 (h : 1 < n) : ¬ Nonempty (Group (ZMod n)) := sorry"
    assert not stmt.has_own_preamble


def test_proof_body_replaced_by_sorry():
    raw = "theorem add_comm' (a b : ℕ) : a + b = b + a := by\n  omega\n"
    stmt = extract_theorem_block(raw)
    assert stmt.text == "theorem add_comm' (a b : ℕ) : a + b = b + a := sorry"


def test_herald_style_own_preamble():
    raw = "import Mathlib\n\ntheorem t : 1 = 1 := sorry"
    stmt = extract_theorem_block(raw)
    assert stmt.has_own_preamble
    assert stmt.own_preamble == "import Mathlib"
    assert stmt.text == "theorem t : 1 = 1 := sorry"


def test_no_theorem_raises():
    with pytest.raises(ExtractionError):
        extract_theorem_block("I cannot formalize this statement.")


def test_first_of_multiple_theorems():
    raw = (
        "theorem first : 1 = 1 := sorry\n\n"
        "theorem second : 2 = 2 := sorry\n"
    )
    stmt = extract_theorem_block(raw)
    assert stmt.text == "theorem first : 1 = 1 := sorry"


def test_assignment_inside_binder_not_split():
    raw = "theorem t (p : ℕ × ℕ) (h : p = ⟨1, 2⟩) : p.1 = 1 := by exact h ▸ rfl"
    stmt = extract_theorem_block(raw)
    assert stmt.text.endswith(":= sorry")
    assert "▸" not in stmt.text


def test_missing_body_gets_sorry():
    raw = "```lean\ntheorem t : 1 = 1\n```"
    stmt = extract_theorem_block(raw)
    assert stmt.text == "theorem t : 1 = 1 := sorry"


class TestNormalize:
    def test_plain_statement(self):
        unit = normalize_preamble(LeanStatement(text="theorem t : 1 = 1 := sorry"))
        assert unit.startswith("import Mathlib\n")
        assert import_block_count(unit) == 1
        assert unit.count("theorem") == 1

    def test_own_preamble_dropped(self):
        stmt = LeanStatement(
            text="theorem t : 1 = 1 := sorry", own_preamble="import Mathlib"
        )
        unit = normalize_preamble(stmt)
        assert import_block_count(unit) == 1

    def test_idempotent(self):
        stmt = LeanStatement(
            text="theorem t : 1 = 1 := sorry", own_preamble="import Mathlib"
        )
        once = normalize_preamble(stmt)
        assert normalize_preamble(once) == once

    def test_namespace_closed(self):
        unit = normalize_preamble(LeanStatement(text="theorem t : 1 = 1 := sorry"))
        assert "namespace PairCheck" in unit
        assert unit.rstrip().endswith("end PairCheck")

    def test_custom_wrapper(self):
        unit = normalize_preamble(
            LeanStatement(text="theorem t : 1 = 1 := sorry"),
            wrapper="import Std\n",
        )
        assert unit.startswith("import Std\n")
        assert "namespace" not in unit


def test_raw_concat_doubles_imports():
    stmt = LeanStatement(
        text="theorem t : 1 = 1 := sorry", own_preamble="import Mathlib"
    )
    assert import_block_count(raw_concat_unit(stmt)) == 2
    # Without an own preamble the bypass is harmless.
    clean = LeanStatement(text="theorem t : 1 = 1 := sorry")
    assert import_block_count(raw_concat_unit(clean)) == 1

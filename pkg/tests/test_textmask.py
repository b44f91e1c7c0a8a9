import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paraprobe.textmask import (
    MissingPlaceholder,
    UnbalancedDelimiters,
    has_balanced_math,
    mask,
    unmask,
)


def test_mask_example_pair():
    m = mask("Prove that $|G|=132$ implies $G$ is not simple.")
    assert m.masked == "Prove that ⟦M0⟧ implies ⟦M1⟧ is not simple."
    assert [s.raw for s in m.spans] == ["$|G|=132$", "$G$"]
    assert "$" not in m.masked


def test_mask_math_free_is_identity():
    m = mask("No math here.")
    assert m.masked == "No math here."
    assert m.spans == ()


def test_mask_whole_string_span():
    m = mask("$x$")
    assert m.masked == "⟦M0⟧"
    assert [s.raw for s in m.spans] == ["$x$"]


def test_mask_offsets_and_ordering():
    text = "a $x$ b $y$ c"
    m = mask(text)
    assert [(s.start, s.end) for s in m.spans] == [(2, 5), (8, 11)]
    for s in m.spans:
        assert text[s.start : s.end] == s.raw
        assert s.raw.startswith("$") and s.raw.endswith("$")


def test_display_math_is_one_span():
    m = mask("Sum: $$a+b$$ done")
    assert [s.raw for s in m.spans] == ["$$a+b$$"]
    m = mask("Sum: \\[ a+b \\] done")
    assert [s.raw for s in m.spans] == ["\\[ a+b \\]"]


def test_escaped_dollar_is_not_a_delimiter():
    m = mask("It costs \\$5 but $x$ is math.")
    assert [s.raw for s in m.spans] == ["$x$"]
    # An escaped backslash before $ leaves the $ as a real delimiter.
    m = mask("Weird \\\\$x$ case.")
    assert [s.raw for s in m.spans] == ["$x$"]


def test_unbalanced_raises():
    with pytest.raises(UnbalancedDelimiters):
        mask("price $5")
    with pytest.raises(UnbalancedDelimiters):
        mask("open $$x$ end")
    assert not has_balanced_math("lonely $")
    assert has_balanced_math("fine $x$")


def test_placeholder_escalation_on_bracket_collision():
    m = mask("literal ⟦ bracket with $x$")
    assert m.depth == 2
    assert "⟦⟦M0⟧⟧" in m.masked
    assert unmask(m, m.masked) == "literal ⟦ bracket with $x$"


def test_unmask_round_trip():
    text = "Prove that $|G|=132$ implies $G$ is not simple."
    m = mask(text)
    assert unmask(m, m.masked) == text


def test_unmask_after_rewrite():
    m = mask("Prove that $|G|=132$ implies $G$ is not simple.")
    rewritten = m.masked.replace("Prove that", "We show that")
    assert (
        unmask(m, rewritten) == "We show that $|G|=132$ implies $G$ is not simple."
    )


def test_unmask_missing_placeholder():
    m = mask("Prove that $|G|=132$ implies $G$ is not simple.")
    with pytest.raises(MissingPlaceholder):
        unmask(m, m.masked.replace("⟦M1⟧", ""))
    with pytest.raises(MissingPlaceholder):
        unmask(m, m.masked + " ⟦M1⟧")


# Strategy: interleave plain prose, escaped dollars, and balanced math
# spans so every generated string satisfies the mask precondition.
# (a bare "$$" reads as an unterminated display opener, and an inner
# trailing backslash would escape the closing delimiter, so inline
# spans are non-empty and span content avoids both $ and \.)
_plain = st.text(
    alphabet=st.characters(blacklist_characters="$\\"), min_size=0, max_size=12
)
_math_inner = st.text(
    alphabet=st.characters(blacklist_characters="$\\"), min_size=0, max_size=10
)
_piece = st.one_of(
    _plain,
    st.just("\\$"),
    st.just("⟦"),
    _math_inner.filter(lambda s: s != "").map(lambda s: f"${s}$"),
    _math_inner.map(lambda s: f"$${s}$$"),
)


@settings(max_examples=300)
@given(st.lists(_piece, max_size=8).map("".join))
def test_round_trip_property(text):
    m = mask(text)
    assert unmask(m, m.masked) == text


@settings(max_examples=300)
@given(st.lists(_piece, max_size=8).map("".join))
def test_masked_text_has_no_math_delimiters(text):
    m = mask(text)
    # Every unescaped $ was consumed into a span.
    assert has_balanced_math(m.masked)
    assert len(m.spans) == sum(m.masked.count(m.placeholder(k)) for k in range(len(m.spans)))

"""Recursive-descent parser from Lean theorem statements to labeled trees.

The grammar intentionally covers statement-level Lean only: binders,
quantifiers, lambdas, applications, and the common infix/prefix
operators with a documented precedence table.  Anything outside it
raises StatementParseError, and the caller excludes that pair from
GTED summaries (with a tally) instead of scoring it.

Node label alphabet: ``theorem``, ``binder:{explicit,implicit,instance,
strict}``, operator symbols (``→``, ``∧``, ``=``, ``+``, ...), ``app``,
``∀``/``∃``/``fun``, ``ascribe``, ``anon``, ``inv``, plus payload labels
``id:<name>`` and ``lit:<numeral>``.  The theorem's own name is not part
of the tree: models pick arbitrary names, and the metric compares
statement structure.  Binder names are kept (alpha-renaming is not
quotiented away).
"""

from __future__ import annotations

from dataclasses import dataclass


class StatementParseError(ValueError):
    """Statement falls outside the supported grammar."""


@dataclass(frozen=True)
class SyntaxTree:
    label: str
    children: tuple["SyntaxTree", ...] = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def __str__(self) -> str:
        if not self.children:
            return self.label
        return f"{self.label}({', '.join(str(c) for c in self.children)})"


def node(label: str, *children: SyntaxTree) -> SyntaxTree:
    return SyntaxTree(label=label, children=tuple(children))


# --- lexer -------------------------------------------------------------------

# Longest match first.  ASCII spellings normalize to the unicode label.
_SYMBOLS: tuple[tuple[str, str], ...] = (
    (":=", ":="),
    ("=>", "=>"),
    ("<->", "↔"),
    ("->", "→"),
    ("↦", "=>"),
    ("⁻¹", "⁻¹"),
    ("≠", "≠"),
    ("≤", "≤"),
    ("≥", "≥"),
    ("<=", "≤"),
    (">=", "≥"),
    ("⊆", "⊆"),
    ("⊂", "⊂"),
    ("∈", "∈"),
    ("∉", "∉"),
    ("∘", "∘"),
    ("•", "•"),
    ("∧", "∧"),
    ("∨", "∨"),
    ("¬", "¬"),
    ("→", "→"),
    ("↔", "↔"),
    ("∀", "∀"),
    ("∃", "∃"),
    ("λ", "fun"),
    ("∣", "∣"),
    ("=", "="),
    ("<", "<"),
    (">", ">"),
    ("+", "+"),
    ("-", "-"),
    ("*", "*"),
    ("/", "/"),
    ("%", "%"),
    ("^", "^"),
    ("(", "("),
    (")", ")"),
    ("{", "{"),
    ("}", "}"),
    ("[", "["),
    ("]", "]"),
    ("⦃", "⦃"),
    ("⦄", "⦄"),
    ("⟨", "⟨"),
    ("⟩", "⟩"),
    (":", ":"),
    (",", ","),
)

_IDENT_EXTRA = set("_'!?₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "num" | "sym"
    text: str
    pos: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                if text[j] == "." and not (j + 1 < n and text[j + 1].isdigit()):
                    break
                j += 1
            tokens.append(_Token("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n:
                cj = text[j]
                if cj.isalnum() or cj in _IDENT_EXTRA:
                    j += 1
                elif cj == "." and j + 1 < n and (text[j + 1].isalpha() or text[j + 1] == "_"):
                    j += 1
                else:
                    break
            name = text[i:j]
            # `Type*` is one token in Lean binders.
            if name == "Type" and j < n and text[j] == "*":
                name, j = "Type*", j + 1
            tokens.append(_Token("ident", name, i))
            i = j
            continue
        for raw, label in _SYMBOLS:
            if text.startswith(raw, i):
                tokens.append(_Token("sym", label, i))
                i += len(raw)
                break
        else:
            raise StatementParseError(f"unsupported character {ch!r} at offset {i}")
    tokens.append(_Token("sym", "<eof>", n))
    return tokens


# --- precedence table (binding powers; higher binds tighter) ------------------

_BINARY: dict[str, tuple[int, str]] = {
    "↔": (20, "right"),
    "→": (25, "right"),
    "∨": (30, "right"),
    "∧": (35, "right"),
    "=": (50, "left"),
    "≠": (50, "left"),
    "<": (50, "left"),
    "≤": (50, "left"),
    ">": (50, "left"),
    "≥": (50, "left"),
    "∈": (50, "left"),
    "∉": (50, "left"),
    "⊆": (50, "left"),
    "⊂": (50, "left"),
    "∣": (50, "left"),
    "+": (65, "left"),
    "-": (65, "left"),
    "*": (70, "left"),
    "/": (70, "left"),
    "%": (70, "left"),
    "∘": (72, "left"),
    "•": (72, "left"),
    "^": (75, "right"),
}
_NOT_BP = 40  # ¬ takes everything up to (and including) relations
_APP_BP = 90

_BINDER_BRACKETS = {"(": "explicit", "{": "implicit", "[": "instance", "⦃": "strict"}
_BINDER_CLOSE = {"(": ")", "{": "}", "[": "]", "⦃": "⦄"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.cur
        if tok.text != text:
            raise StatementParseError(
                f"expected {text!r} but found {tok.text!r} at offset {tok.pos}"
            )
        return self.advance()

    # -- terms ---------------------------------------------------------------

    def parse_term(self, min_bp: int = 0) -> SyntaxTree:
        left = self._prefix(min_bp)
        while True:
            tok = self.cur
            if tok.text in _BINARY and tok.kind == "sym":
                bp, assoc = _BINARY[tok.text]
                if bp < min_bp:
                    break
                self.advance()
                rhs = self.parse_term(bp if assoc == "right" else bp + 1)
                left = node(tok.text, left, rhs)
                continue
            if tok.text == "⁻¹":
                self.advance()
                left = node("inv", left)
                continue
            if self._starts_atom(tok) and _APP_BP >= min_bp:
                args = []
                while self._starts_atom(self.cur):
                    args.append(self._atom())
                left = node("app", left, *args)
                continue
            break
        return left

    def _prefix(self, min_bp: int) -> SyntaxTree:
        tok = self.cur
        if tok.text == "¬":
            self.advance()
            return node("¬", self.parse_term(_NOT_BP))
        if tok.text == "-":
            self.advance()
            return node("neg", self.parse_term(80))
        if tok.text in ("∀", "∃"):
            self.advance()
            return self._quantifier(tok.text)
        if tok.text == "fun":
            self.advance()
            return self._lambda()
        return self._atom()

    def _starts_atom(self, tok: _Token) -> bool:
        return tok.kind in ("ident", "num") and tok.text != "fun" or tok.text in ("(", "⟨")

    def _atom(self) -> SyntaxTree:
        tok = self.cur
        if tok.kind == "ident":
            if tok.text == "fun":
                self.advance()
                return self._lambda()
            self.advance()
            return node(f"id:{tok.text}")
        if tok.kind == "num":
            self.advance()
            return node(f"lit:{tok.text}")
        if tok.text == "(":
            self.advance()
            inner = self.parse_term(0)
            if self.cur.text == ":":
                self.advance()
                ty = self.parse_term(0)
                inner = node("ascribe", inner, ty)
            self.expect(")")
            return inner
        if tok.text == "⟨":
            self.advance()
            parts = [self.parse_term(0)]
            while self.cur.text == ",":
                self.advance()
                parts.append(self.parse_term(0))
            self.expect("⟩")
            return node("anon", *parts)
        raise StatementParseError(
            f"unexpected token {tok.text!r} at offset {tok.pos}"
        )

    def _quantifier(self, symbol: str) -> SyntaxTree:
        names: list[SyntaxTree] = []
        ty: SyntaxTree | None = None
        while True:
            tok = self.cur
            if tok.kind == "ident":
                self.advance()
                names.append(node(f"id:{tok.text}"))
            elif tok.text == "(":
                self.advance()
                inner_names = []
                while self.cur.kind == "ident":
                    inner_names.append(node(f"id:{self.advance().text}"))
                self.expect(":")
                inner_ty = self.parse_term(0)
                self.expect(")")
                names.extend(
                    node("binder:explicit", nm, inner_ty) for nm in inner_names
                )
            else:
                break
        if self.cur.text == ":":
            self.advance()
            ty = self.parse_term(0)
        self.expect(",")
        body = self.parse_term(0)
        children = names + ([ty] if ty is not None else []) + [body]
        if not names:
            raise StatementParseError(f"{symbol} without bound variables")
        return node(symbol, *children)

    def _lambda(self) -> SyntaxTree:
        names = []
        while self.cur.kind == "ident":
            names.append(node(f"id:{self.advance().text}"))
        if not names:
            raise StatementParseError("fun without bound variables")
        self.expect("=>")
        body = self.parse_term(0)
        return node("fun", *names, body)

    # -- statement -----------------------------------------------------------

    def parse_statement(self) -> SyntaxTree:
        tok = self.advance()
        if not (tok.kind == "ident" and tok.text == "theorem"):
            raise StatementParseError(
                f"expected 'theorem' but found {tok.text!r} at offset {tok.pos}"
            )
        name = self.advance()
        if name.kind != "ident":
            raise StatementParseError("theorem declaration has no name")
        binders: list[SyntaxTree] = []
        while self.cur.text in _BINDER_BRACKETS:
            binders.append(self._binder())
        self.expect(":")
        goal = self.parse_term(0)
        self.expect(":=")
        body = self.advance()
        if not (body.kind == "ident" and body.text == "sorry"):
            raise StatementParseError("statement body must be 'sorry'")
        if self.cur.text != "<eof>":
            raise StatementParseError(
                f"trailing content after statement at offset {self.cur.pos}"
            )
        return node("theorem", *binders, goal)

    def _binder(self) -> SyntaxTree:
        open_tok = self.advance()
        kind = _BINDER_BRACKETS[open_tok.text]
        close = _BINDER_CLOSE[open_tok.text]
        # Collect candidate bound names; if no ':' follows they belong to an
        # anonymous binder's type instead (e.g. `[Group G]`).
        names: list[str] = []
        while self.cur.kind == "ident" and self.tokens[self.i + 1].text != close:
            names.append(self.advance().text)
            if self.cur.text == ":":
                break
        if self.cur.text == ":":
            self.advance()
            ty = self.parse_term(0)
        else:
            parts = [node(f"id:{nm}") for nm in names]
            names = []
            if self.cur.text != close:
                parts.append(self.parse_term(0))
            if not parts:
                raise StatementParseError(f"empty binder at offset {open_tok.pos}")
            ty = parts[0] if len(parts) == 1 else node("app", *parts)
        self.expect(close)
        name_nodes = [node(f"id:{nm}") for nm in names]
        return node(f"binder:{kind}", *name_nodes, ty)


def parse_statement(stmt: str) -> SyntaxTree:
    """Parse one ``theorem ... := sorry`` declaration into a labeled tree.

    Raises:
        StatementParseError: the statement is outside the supported grammar.
    """
    return _Parser(stmt).parse_statement()

"""Deterministic paraphrase rules.

A rule rewrites a single named linguistic axis of a theorem statement:
it has a regex trigger over the masked prose, a replacement template,
an ordered list of guards, and a provenance reference establishing that
the rewrite preserves meaning.  Rules are applied independently to the
baseline text (never composed) and rewrite at most one site: the first
trigger match in reading order.  If a guard fails at that site the rule
is skipped for the whole statement.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import yaml

from .corpus import PerturbedInstance, TheoremRecord
from .textmask import MaskedText, MissingPlaceholder, mask, unmask

log = logging.getLogger(__name__)

APPLIED = "applied"
NOT_TRIGGERED = "not_triggered"
GUARD_BLOCKED = "guard_blocked"

GUARD_KINDS = frozenset(
    {
        "sentence-start",
        "no-nested-conditional",
        "outside-math",
        "not-identifier-token",
        "theorem-statement-boundary",
        "custom-pattern-veto",
    }
)

# Nine of the eleven axis labels are pinned; two are reserved for axes not
# yet represented.  A rule document may override the whole set.
DEFAULT_CATEGORIES = (
    "concept_rename",
    "conditional",
    "discourse",
    "quantifier",
    "verbosity",
    "definitional",
    "type_notation",
    "organization",
    "equivalence",
    "reserved_1",
    "reserved_2",
)

_CONDITIONAL_KEYWORDS = re.compile(r"(?i)\b(?:if|then|whenever)\b")
_SENTENCE_BREAK = re.compile(r"[.!?]\s+$")
# Placeholder shapes a trigger must never be able to match.
_PLACEHOLDER_PROBE = "⟦M0⟧ ⟦M1⟧ ⟦M12⟧ ⟦⟦M3⟧⟧"


class SuiteValidationError(ValueError):
    """Aggregated load-time problems; does not stop at the first one."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__(
            "rule suite failed validation:\n  " + "\n  ".join(self.problems)
        )


class RuleDefect(RuntimeError):
    """A rule's rewrite destroyed a math placeholder; the rule is unusable."""

    def __init__(self, rule_id: str, detail: str):
        self.rule_id = rule_id
        super().__init__(f"rule {rule_id!r} is defective: {detail}")


@dataclass(frozen=True)
class Guard:
    kind: str
    pattern: str | None = None


@dataclass(frozen=True)
class Rule:
    id: str
    category: str
    trigger: str
    replacement: str
    guards: tuple[Guard, ...]
    reference: str
    lexicon: Mapping[str, str] | None = None
    preserve_case: bool = True

    @property
    def compiled(self) -> re.Pattern[str]:
        return re.compile(self.trigger)


@dataclass(frozen=True)
class PerturbationOutcome:
    status: str
    perturbed: str | None = None
    guard_id: str | None = None

    @property
    def is_applied(self) -> bool:
        return self.status == APPLIED


@dataclass(frozen=True)
class RuleSuite:
    rules: tuple[Rule, ...]
    categories: tuple[str, ...] = DEFAULT_CATEGORIES

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __getitem__(self, rule_id: str) -> Rule:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        raise KeyError(rule_id)

    def category_of(self, rule_id: str) -> str | None:
        try:
            return self[rule_id].category
        except KeyError:
            return None


# --- template expansion ----------------------------------------------------

_TEMPLATE_TOKEN = re.compile(
    r"\\g<(?P<name>\w+)>|\\(?P<num>\d+)|@(?P<fn>lex|lower)\((?P<arg>\w+)\)"
)


def _template_groups(template: str) -> list[str]:
    """Capture references used by a replacement template."""
    refs = []
    for m in _TEMPLATE_TOKEN.finditer(template):
        refs.append(m.group("name") or m.group("num") or m.group("arg"))
    return refs


def expand_template(
    template: str, match: re.Match[str], lexicon: Mapping[str, str] | None
) -> str:
    """Expand ``\\g<name>``/``\\N`` capture refs plus ``@lex(g)``/``@lower(g)``.

    ``@lex(g)`` looks the (lowercased) capture up in the rule lexicon;
    ``@lower(g)`` lowercases the capture.  Both exist so that rules like
    number-word spelling stay declarative.
    """

    def _group(ref: str) -> str:
        value = match.group(int(ref) if ref.isdigit() else ref)
        return value if value is not None else ""

    def _sub(m: re.Match[str]) -> str:
        if m.group("name") is not None:
            return _group(m.group("name"))
        if m.group("num") is not None:
            return _group(m.group("num"))
        arg = _group(m.group("arg"))
        if m.group("fn") == "lower":
            return arg.lower()
        if lexicon is None:
            raise KeyError(f"@lex used without a lexicon (capture {arg!r})")
        return lexicon[arg.lower()]

    return _TEMPLATE_TOKEN.sub(_sub, template)


def _transfer_case(consumed: str, expansion: str) -> str:
    """Copy the case of the consumed text's first character onto the expansion.

    Only literal-letter starts are adjusted; an expansion that begins with a
    placeholder or capture content is left alone.
    """
    if not consumed or not expansion:
        return expansion
    c0, e0 = consumed[0], expansion[0]
    if not (c0.isalpha() and e0.isalpha()):
        return expansion
    head = e0.upper() if c0.isupper() else e0.lower()
    return head + expansion[1:]


# --- guard evaluation -------------------------------------------------------


def _guard_blocks(guard: Guard, masked_text: str, match: re.Match[str]) -> bool:
    kind = guard.kind
    if kind == "outside-math":
        # Guaranteed by masking; kept so documents can record the intent.
        return False
    if kind == "sentence-start":
        prefix = masked_text[: match.start()]
        return not (prefix == "" or _SENTENCE_BREAK.search(prefix))
    if kind == "theorem-statement-boundary":
        return match.start() != 0
    if kind == "no-nested-conditional":
        groups = list(match.groups()) + list(match.groupdict().values())
        return any(g and _CONDITIONAL_KEYWORDS.search(g) for g in groups)
    if kind == "not-identifier-token":
        before = masked_text[match.start() - 1] if match.start() > 0 else ""
        after = masked_text[match.end()] if match.end() < len(masked_text) else ""
        bad = lambda ch: ch != "" and (ch.isalnum() or ch in "_`")
        return bad(before) or bad(after)
    if kind == "custom-pattern-veto":
        for veto in re.finditer(guard.pattern or "", masked_text):
            if veto.start() < match.end() and match.start() < veto.end():
                return True
        return False
    raise ValueError(f"unknown guard kind {kind!r}")


# --- application ------------------------------------------------------------


def _apply_masked(rule: Rule, mt: MaskedText, baseline: str) -> PerturbationOutcome:
    match = rule.compiled.search(mt.masked)
    if match is None:
        return PerturbationOutcome(NOT_TRIGGERED)
    for guard in rule.guards:
        if _guard_blocks(guard, mt.masked, match):
            return PerturbationOutcome(GUARD_BLOCKED, guard_id=guard.kind)
    expansion = expand_template(rule.replacement, match, rule.lexicon)
    if rule.preserve_case:
        expansion = _transfer_case(match.group(0), expansion)
    rewritten = mt.masked[: match.start()] + expansion + mt.masked[match.end() :]
    try:
        perturbed = unmask(mt, rewritten)
    except MissingPlaceholder as exc:
        raise RuleDefect(rule.id, str(exc)) from exc
    if perturbed == baseline:
        return PerturbationOutcome(NOT_TRIGGERED)
    return PerturbationOutcome(APPLIED, perturbed=perturbed)


def apply_rule(rule: Rule, text: str) -> PerturbationOutcome:
    """Apply one rule to prose with balanced math delimiters.

    Masking happens before matching and the spans are restored after
    substitution, so math content is byte-identical between the input
    and an Applied output.  Guards are evaluated at the first trigger
    match only; a blocked first site skips the rule.
    """
    return _apply_masked(rule, mask(text), text)


def apply_suite(suite: RuleSuite, theorem: TheoremRecord) -> list[PerturbedInstance]:
    """One PerturbedInstance per Applied rule; rules never compose."""
    mt = mask(theorem.nl_statement)
    instances = []
    for rule in sorted(suite.rules, key=lambda r: r.id):
        outcome = _apply_masked(rule, mt, theorem.nl_statement)
        if outcome.is_applied:
            instances.append(
                PerturbedInstance(
                    theorem_id=theorem.id,
                    dataset=theorem.dataset,
                    rule_id=rule.id,
                    baseline=theorem.nl_statement,
                    perturbed=outcome.perturbed,
                )
            )
    return instances


@dataclass(frozen=True)
class CoverageReport:
    """Per-rule Applied counts plus each dataset's applicable-rule count."""

    counts: Mapping[tuple[str, str], int]  # (dataset, rule_id) -> theorems applied
    rules_applicable: Mapping[str, int]  # dataset -> rules with >= 1 application

    def count(self, dataset: str, rule_id: str) -> int:
        return self.counts.get((dataset, rule_id), 0)


def coverage_report(suite: RuleSuite, corpus: Iterable[TheoremRecord]) -> CoverageReport:
    counts: dict[tuple[str, str], int] = {}
    datasets: set[str] = set()
    for theorem in corpus:
        datasets.add(theorem.dataset)
        mt = mask(theorem.nl_statement)
        for rule in suite.rules:
            try:
                outcome = _apply_masked(rule, mt, theorem.nl_statement)
            except RuleDefect:
                continue
            if outcome.is_applied:
                key = (theorem.dataset, rule.id)
                counts[key] = counts.get(key, 0) + 1
    applicable = {
        ds: sum(1 for (d, _), c in counts.items() if d == ds and c > 0)
        for ds in datasets
    }
    return CoverageReport(counts=counts, rules_applicable=applicable)


# --- loading ----------------------------------------------------------------


def _parse_guard(raw, where: str, problems: list[str]) -> Guard | None:
    if isinstance(raw, str):
        kind, pattern = raw, None
    elif isinstance(raw, Mapping):
        kind, pattern = raw.get("kind"), raw.get("pattern")
    else:
        problems.append(f"{where}: guard entries must be strings or mappings")
        return None
    if kind not in GUARD_KINDS:
        problems.append(f"{where}: unknown guard kind {kind!r}")
        return None
    if kind == "custom-pattern-veto":
        if not pattern:
            problems.append(f"{where}: custom-pattern-veto requires a pattern")
            return None
        try:
            re.compile(pattern)
        except re.error as exc:
            problems.append(f"{where}: veto pattern does not compile: {exc}")
            return None
    elif pattern:
        problems.append(f"{where}: guard {kind!r} takes no pattern")
        return None
    return Guard(kind=kind, pattern=pattern)


def load_suite(source: str | Path | Mapping) -> RuleSuite:
    """Load and validate a rule-definition document.

    All problems are aggregated into one SuiteValidationError with the
    rule index and field of each, rather than stopping at the first.
    """
    if isinstance(source, Mapping):
        doc = source
    else:
        doc = yaml.safe_load(Path(source).read_text(encoding="utf-8"))
    if not isinstance(doc, Mapping) or "rules" not in doc:
        raise SuiteValidationError(["document must be a mapping with a 'rules' list"])

    categories = tuple(doc.get("categories") or DEFAULT_CATEGORIES)
    problems: list[str] = []
    seen: dict[str, int] = {}
    rules: list[Rule] = []

    for i, raw in enumerate(doc["rules"] or []):
        rid = raw.get("id") if isinstance(raw, Mapping) else None
        where = f"rules[{i}]" + (f" ({rid})" if rid else "")
        if not isinstance(raw, Mapping):
            problems.append(f"{where}: rule entries must be mappings")
            continue
        if not rid or not re.fullmatch(r"[a-z][a-z0-9_]*", rid):
            problems.append(f"{where}: field 'id' must be a lowercase slug")
            continue
        if rid in seen:
            problems.append(
                f"{where}: duplicate id {rid!r} (first defined at rules[{seen[rid]}])"
            )
            continue
        seen[rid] = i

        category = raw.get("category")
        if category not in categories:
            problems.append(f"{where}: field 'category' {category!r} not in the closed set")

        trigger = raw.get("trigger")
        compiled = None
        if not trigger:
            problems.append(f"{where}: field 'trigger' is required")
        else:
            try:
                compiled = re.compile(trigger)
            except re.error as exc:
                problems.append(f"{where}: field 'trigger' does not compile: {exc}")
        if compiled is not None and compiled.search(_PLACEHOLDER_PROBE):
            problems.append(f"{where}: trigger can match math placeholder tokens")

        replacement = raw.get("replacement")
        if replacement is None:
            problems.append(f"{where}: field 'replacement' is required")
        elif compiled is not None:
            known = set(compiled.groupindex) | {
                str(n) for n in range(1, compiled.groups + 1)
            }
            for ref in _template_groups(replacement):
                if ref not in known:
                    problems.append(
                        f"{where}: replacement references undefined capture {ref!r}"
                    )

        lexicon = raw.get("lexicon")
        if replacement and "@lex(" in replacement and not lexicon:
            problems.append(f"{where}: replacement uses @lex but no lexicon is given")

        guards = []
        for g in raw.get("guards") or []:
            guard = _parse_guard(g, where, problems)
            if guard is not None:
                guards.append(guard)

        reference = raw.get("reference")
        if not reference or not str(reference).strip():
            problems.append(f"{where}: field 'reference' must be non-empty")

        rules.append(
            Rule(
                id=rid,
                category=str(category),
                trigger=str(trigger or ""),
                replacement=str(replacement or ""),
                guards=tuple(guards),
                reference=str(reference or ""),
                lexicon=dict(lexicon) if lexicon else None,
                preserve_case=bool(raw.get("preserve_case", True)),
            )
        )

    if problems:
        raise SuiteValidationError(problems)
    return RuleSuite(rules=tuple(rules), categories=categories)


def default_suite_path() -> Path:
    return Path(__file__).parent / "data" / "rules.yaml"


def load_default_suite() -> RuleSuite:
    return load_suite(default_suite_path())

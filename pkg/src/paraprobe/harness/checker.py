"""Proof-checker backends: compile tasks and directed proof tasks.

The checker is pluggable: an HTTP client speaks a small JSON protocol
to a Lean-checking worker, and a fully in-process mock ships for tests
and offline runs.  The mock emulates the behaviors the harness depends
on: rejecting units whose import block is duplicated or misplaced,
unknown-identifier and syntax diagnostics, and proof tasks that succeed
exactly on registered (or trivially reflexive) statement pairs.
"""

from __future__ import annotations

import json
import re
import threading
import time
from dataclasses import dataclass
from typing import Iterable

import requests

from .cache import KVCache


class CheckerUnavailable(RuntimeError):
    """Transport-level failure after retries; recorded as Failed, never as NotEquivalent."""


class CheckerProtocolError(RuntimeError):
    """The checker could not process the unit at the file level (e.g. bad imports)."""


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning" | "info"
    message: str
    pos: tuple[int, int] | None = None


@dataclass(frozen=True)
class CompileResult:
    success: bool
    diagnostics: tuple[Diagnostic, ...] = ()
    elapsed: float = 0.0

    def __post_init__(self) -> None:
        if self.success and any(d.severity == "error" for d in self.diagnostics):
            raise ValueError("successful compile cannot carry error diagnostics")

    def error_messages(self) -> list[str]:
        return [d.severity + ": " + d.message for d in self.diagnostics if d.severity == "error"]


# --- mock --------------------------------------------------------------------

_IMPORT = re.compile(r"^\s*import\s+\S+")
_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")
_PAIRS = {"(": ")", "[": "]", "{": "}", "⟨": "⟩"}

DEFAULT_UNKNOWN_IDENTIFIERS = frozenset({"SimpleGroup", "Nat.Prime.two_lt'", "ZMod.card_units'"})
DEFAULT_ELAB_MARKERS = frozenset({"SyntheticElabGap"})


def _strip_preamble(unit: str) -> str:
    lines = []
    for line in unit.splitlines():
        if re.match(r"^\s*(import|open|namespace|set_option|universe|end)\b", line):
            continue
        lines.append(line)
    return "\n".join(lines).strip()


def normalize_statement(unit: str) -> str:
    """Canonical form for proof-task comparison: drop preamble, theorem name, spacing."""
    body = _strip_preamble(unit)
    body = re.sub(r"\btheorem\s+\S+", "theorem _", body, count=1)
    return " ".join(body.split())


class MockChecker:
    """Deterministic in-process stand-in for a Lean checking worker.

    Compile rules, in order: a duplicated or misplaced import block is a
    protocol-level rejection (CheckerProtocolError); unbalanced brackets
    are a syntax error; identifiers from ``unknown_identifiers`` fail as
    unknown identifiers; identifiers from ``elab_markers`` fail
    synthesis; anything else with a theorem declaration elaborates.

    Proof tasks succeed iff the two statements normalize identically or
    the (source, target) pair was registered via ``provable``.
    """

    def __init__(
        self,
        unknown_identifiers: Iterable[str] = DEFAULT_UNKNOWN_IDENTIFIERS,
        elab_markers: Iterable[str] = DEFAULT_ELAB_MARKERS,
        provable: Iterable[tuple[str, str]] = (),
    ):
        self.unknown_identifiers = frozenset(unknown_identifiers)
        self.elab_markers = frozenset(elab_markers)
        self._provable = {
            (normalize_statement(a), normalize_statement(b)) for a, b in provable
        }
        self.compile_calls = 0
        self.prove_calls = 0
        self._lock = threading.Lock()

    def register_provable(self, source: str, target: str) -> None:
        self._provable.add((normalize_statement(source), normalize_statement(target)))

    def _validate_imports(self, unit: str) -> None:
        lines = unit.splitlines()
        seen_content = False
        blocks = 0
        in_block = False
        for line in lines:
            if _IMPORT.match(line):
                if seen_content:
                    raise CheckerProtocolError(
                        "import after declarations: the file header is malformed"
                    )
                if not in_block:
                    blocks += 1
                in_block = True
            else:
                in_block = False
                if line.strip() and not re.match(
                    r"^\s*(open|namespace|set_option|universe)\b", line
                ):
                    seen_content = True
        if blocks > 1:
            raise CheckerProtocolError("duplicate import block in compilation unit")

    def compile(self, unit: str) -> CompileResult:
        with self._lock:
            self.compile_calls += 1
        self._validate_imports(unit)
        body = _strip_preamble(unit)
        if "theorem" not in body:
            return CompileResult(
                success=False,
                diagnostics=(
                    Diagnostic("error", "unexpected end of input; expected 'theorem'"),
                ),
            )
        depth: list[str] = []
        for ch in body:
            if ch in _PAIRS:
                depth.append(_PAIRS[ch])
            elif ch in _PAIRS.values():
                if not depth or depth.pop() != ch:
                    return CompileResult(
                        success=False,
                        diagnostics=(
                            Diagnostic("error", f"unexpected token '{ch}'; expected term"),
                        ),
                    )
        if depth:
            return CompileResult(
                success=False,
                diagnostics=(
                    Diagnostic("error", f"unexpected end of input; expected '{depth[-1]}'"),
                ),
            )
        for token in _TOKEN.findall(body):
            if token in self.unknown_identifiers:
                return CompileResult(
                    success=False,
                    diagnostics=(Diagnostic("error", f"unknown identifier '{token}'"),),
                )
            if token in self.elab_markers:
                return CompileResult(
                    success=False,
                    diagnostics=(
                        Diagnostic("error", f"failed to synthesize\n  {token}"),
                    ),
                )
        return CompileResult(
            success=True,
            diagnostics=(Diagnostic("warning", "declaration uses 'sorry'"),),
        )

    def prove(self, source: str, target: str) -> bool:
        """Directed proof task: does `source` entail `target`'s statement?"""
        with self._lock:
            self.prove_calls += 1
        a, b = normalize_statement(source), normalize_statement(target)
        return a == b or (a, b) in self._provable


# --- HTTP --------------------------------------------------------------------


class HttpChecker:
    """Client for a Lean checking worker over JSON/HTTP.

    Protocol: ``POST {base}/compile {"unit": str, "timeout": float}`` returns
    ``{"success": bool, "diagnostics": [{"severity", "message", "pos"?}],
    "elapsed": float}``; ``POST {base}/prove {"source", "target", "timeout"}``
    returns ``{"success": bool}``.  Transport failures are retried with
    exponential backoff, then raised as CheckerUnavailable.
    """

    def __init__(
        self,
        base_url: str,
        timeout: float = 60.0,
        retries: int = 3,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.session = session or requests.Session()
        self.compile_calls = 0
        self.prove_calls = 0

    def _post(self, path: str, payload: dict) -> dict:
        last: Exception | None = None
        for attempt in range(self.retries):
            try:
                resp = self.session.post(
                    f"{self.base_url}{path}", json=payload, timeout=self.timeout
                )
                if resp.status_code >= 500:
                    raise requests.HTTPError(f"server error {resp.status_code}")
                if resp.status_code != 200:
                    raise CheckerProtocolError(
                        f"checker rejected request: {resp.status_code} {resp.text[:200]}"
                    )
                return resp.json()
            except (requests.ConnectionError, requests.Timeout, requests.HTTPError) as exc:
                last = exc
                time.sleep(self.backoff * (2**attempt))
            except json.JSONDecodeError as exc:
                raise CheckerProtocolError(f"malformed checker response: {exc}") from exc
        raise CheckerUnavailable(f"checker at {self.base_url} unreachable: {last}")

    def compile(self, unit: str) -> CompileResult:
        self.compile_calls += 1
        data = self._post("/compile", {"unit": unit, "timeout": self.timeout})
        try:
            diags = tuple(
                Diagnostic(
                    severity=d.get("severity", "error"),
                    message=d.get("message", ""),
                    pos=tuple(d["pos"]) if d.get("pos") else None,
                )
                for d in data.get("diagnostics", [])
            )
            return CompileResult(
                success=bool(data["success"]),
                diagnostics=diags,
                elapsed=float(data.get("elapsed", 0.0)),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise CheckerProtocolError(f"malformed compile response: {exc}") from exc

    def prove(self, source: str, target: str) -> bool:
        self.prove_calls += 1
        data = self._post(
            "/prove", {"source": source, "target": target, "timeout": self.timeout}
        )
        try:
            return bool(data["success"])
        except (KeyError, TypeError) as exc:
            raise CheckerProtocolError(f"malformed prove response: {exc}") from exc


# --- caching wrapper ----------------------------------------------------------


class CachedChecker:
    """Memoizes compile and prove results through a key-value cache.

    With a warm cache a rerun performs zero checker calls and reproduces
    results byte-identically (elapsed values come from the cache).
    """

    def __init__(self, inner, cache: KVCache):
        self.inner = inner
        self.cache = cache

    def compile(self, unit: str) -> CompileResult:
        key = "compile:" + unit
        hit = self.cache.get(key)
        if hit is not None:
            return _compile_from_json(hit)
        try:
            result = self.inner.compile(unit)
        except CheckerProtocolError as exc:
            self.cache.put(key, {"protocol_error": str(exc)})
            raise
        self.cache.put(key, _compile_to_json(result))
        return result

    def prove(self, source: str, target: str) -> bool:
        key = "prove:" + source + "\x00" + target
        hit = self.cache.get(key)
        if hit is not None:
            return bool(hit["success"])
        success = self.inner.prove(source, target)
        self.cache.put(key, {"success": success})
        return success


def _compile_to_json(result: CompileResult) -> dict:
    return {
        "success": result.success,
        "diagnostics": [
            {"severity": d.severity, "message": d.message, "pos": list(d.pos) if d.pos else None}
            for d in result.diagnostics
        ],
        "elapsed": result.elapsed,
    }


def _compile_from_json(data: dict) -> CompileResult:
    if "protocol_error" in data:
        raise CheckerProtocolError(data["protocol_error"])
    return CompileResult(
        success=data["success"],
        diagnostics=tuple(
            Diagnostic(
                severity=d["severity"],
                message=d["message"],
                pos=tuple(d["pos"]) if d.get("pos") else None,
            )
            for d in data["diagnostics"]
        ),
        elapsed=data["elapsed"],
    )

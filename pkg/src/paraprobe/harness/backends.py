"""Model backends: HTTP chat/completions client, response cache, and a mock.

The mock is fully deterministic: every output is a pure function of the
request payload, derived from SHA-256 digests.  Its behavior is keyed
so that a baseline/perturbed pair (which shares its math spans) usually
maps to one "stable" canonical statement, while a digest-selected
minority of pairs is paraphrase-fragile: each side then independently
lands on a compiling variant, an unknown-identifier hallucination, a
syntax-broken output, an elaboration trap, or no theorem at all.  That
yields campaigns exercising every verdict and failure category with no
network and no randomness.
"""

from __future__ import annotations

import hashlib
import os
import re
import threading
import time
from typing import Protocol

import requests

from .cache import KVCache
from .profiles import PromptPayload


class ModelUnavailable(RuntimeError):
    """Transport-level model failure after retries."""


class ModelClient(Protocol):
    def complete(self, payload: PromptPayload) -> str: ...


# --- mock --------------------------------------------------------------------

_MATH_SPAN = re.compile(r"(?<!\\)\$[^$]*\$")


def _digest_int(material: str) -> int:
    return int.from_bytes(hashlib.sha256(material.encode("utf-8")).digest()[:8], "big")


def _canonical_statement(name: str, k: int) -> str:
    a, b, n = 2 + k % 7, 1 + k % 5, 24 + k % 200
    shape = k % 4
    if shape == 0:
        return f"theorem auto_{name} (n : ℕ) (h : {a} < n) : {a} < n + {b} := sorry"
    if shape == 1:
        return f"theorem auto_{name} (x y : ℤ) (h : x ≤ y) : x + {a} ≤ y + {a} := sorry"
    if shape == 2:
        return (
            f"theorem auto_{name} (G : Type) [Group G] "
            f"(h : Fintype.card G = {n}) : ¬ IsSimpleGroup G := sorry"
        )
    return f"theorem auto_{name} : ∀ n : ℕ, {a} ∣ n * {a} := sorry"


class MockModelClient:
    """Offline deterministic autoformalizer stand-in."""

    def __init__(self, emit_own_preamble: bool = False, nondeterministic: bool = False):
        self.emit_own_preamble = emit_own_preamble
        self.nondeterministic = nondeterministic
        self.calls = 0
        self._lock = threading.Lock()

    def complete(self, payload: PromptPayload) -> str:
        with self._lock:
            self.calls += 1
            calls = self.calls
        statement = payload.statement_text
        spans = "|".join(_MATH_SPAN.findall(statement))
        stable = _digest_int(f"{payload.model}\x00{spans}")
        full = _digest_int(payload.canonical_json())
        name = f"{stable % 0xFFFFFF:06x}"

        if stable % 100 < 80:
            body = _canonical_statement(name, stable)
        else:
            # Paraphrase-fragile pair: this side's output depends on the
            # exact prose, not just the math content.
            branch = full % 10
            if branch <= 2:
                body = _canonical_statement(name, stable)
            elif branch <= 4:
                body = (
                    f"theorem auto_{name} (G : Type) [Group G] "
                    f"(h : Fintype.card G = {24 + stable % 200}) : ¬ SimpleGroup G := sorry"
                )
            elif branch == 5:
                body = f"theorem auto_{name} (n : ℕ)) : n + 1 = 1 + n := sorry"
            elif branch == 6:
                body = f"theorem auto_{name} (x : SyntheticElabGap) : x = x := sorry"
            elif branch == 7:
                return "I am unable to produce a Lean formalization for this statement."
            else:
                body = _canonical_statement(name, stable + 1)

        if stable % 2 == 0:
            out = f"```lean\n{body}\n```"
        else:
            out = body
        if self.emit_own_preamble:
            out = "import Mathlib\n\n" + out
        if self.nondeterministic:
            out += f"\n-- attempt {calls}"
        return out


# --- HTTP --------------------------------------------------------------------


class HttpModelClient:
    """OpenAI-style chat/completions client.

    Chat payloads go to ``{base}/v1/chat/completions``; completion
    payloads to ``{base}/v1/completions``.  Endpoint and credential come
    from the profile's environment variables unless given explicitly.
    """

    def __init__(
        self,
        base_url: str | None = None,
        api_key: str | None = None,
        endpoint_env: str = "PARAPROBE_MODEL_URL",
        api_key_env: str = "PARAPROBE_MODEL_KEY",
        timeout: float = 120.0,
        retries: int = 3,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ):
        self.base_url = (base_url or os.environ.get(endpoint_env, "")).rstrip("/")
        if not self.base_url:
            raise ModelUnavailable(f"no model endpoint configured (set {endpoint_env})")
        self.api_key = api_key or os.environ.get(api_key_env)
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.session = session or requests.Session()
        self.calls = 0

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def complete(self, payload: PromptPayload) -> str:
        self.calls += 1
        if payload.interaction == "chat":
            path = "/v1/chat/completions"
            body = {
                "model": payload.model,
                "messages": [{"role": r, "content": c} for r, c in payload.messages],
                "temperature": payload.temperature,
                "max_tokens": payload.max_tokens,
            }
        else:
            path = "/v1/completions"
            body = {
                "model": payload.model,
                "prompt": payload.text,
                "temperature": payload.temperature,
                "max_tokens": payload.max_tokens,
            }
        last: Exception | None = None
        for attempt in range(self.retries):
            try:
                resp = self.session.post(
                    self.base_url + path, json=body, headers=self._headers(), timeout=self.timeout
                )
                if resp.status_code >= 500 or resp.status_code == 429:
                    raise requests.HTTPError(f"server error {resp.status_code}")
                resp.raise_for_status()
                data = resp.json()
                choice = data["choices"][0]
                if payload.interaction == "chat":
                    return choice["message"]["content"]
                return choice["text"]
            except (requests.ConnectionError, requests.Timeout, requests.HTTPError) as exc:
                last = exc
                time.sleep(self.backoff * (2**attempt))
        raise ModelUnavailable(f"model endpoint {self.base_url} unreachable: {last}")


# --- caching wrapper -----------------------------------------------------------


class ResponseCache(KVCache):
    """Model response store keyed by (model, payload digest, decoding params)."""


class CachedModelClient:
    def __init__(self, inner: ModelClient, cache: ResponseCache):
        self.inner = inner
        self.cache = cache

    def complete(self, payload: PromptPayload) -> str:
        key = f"model:{payload.model}:{payload.digest()}"
        hit = self.cache.get(key)
        if hit is not None:
            return str(hit)
        response = self.inner.complete(payload)
        self.cache.put(key, response)
        return response

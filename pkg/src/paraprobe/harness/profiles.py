"""Model interaction profiles and prompt construction.

Two interaction styles exist: chat (system + user message) and
single-turn completion.  All shipped profiles decode greedily
(temperature 0, max 2048 tokens) so that repeated identical requests
are expected to be byte-identical; `determinism_probe` checks exactly
that against a live endpoint.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass


_AUTOFORMALIZE_SYSTEM = "You are an expert in mathematics and Lean 4."
_AUTOFORMALIZE_USER = (
    "Translate the following problem statement into a Lean 4 theorem. "
    "State only the theorem and end it with `:= sorry`.\n\n{statement}"
)


@dataclass(frozen=True)
class ModelProfile:
    name: str
    interaction: str  # "chat" | "completion"
    system_prompt: str | None = None
    user_template: str = "{statement}"
    temperature: float = 0.0
    max_tokens: int = 2048
    # Environment variables holding the endpoint and credential.
    endpoint_env: str = "PARAPROBE_MODEL_URL"
    api_key_env: str = "PARAPROBE_MODEL_KEY"
    # The model prepends its own `import` preamble to outputs.
    emits_own_preamble: bool = False

    def __post_init__(self) -> None:
        if self.interaction not in ("chat", "completion"):
            raise ValueError(f"unknown interaction style {self.interaction!r}")


@dataclass(frozen=True)
class PromptPayload:
    """A fully rendered request: pure function of (profile, statement)."""

    model: str
    interaction: str
    messages: tuple[tuple[str, str], ...] = ()  # chat: (role, content)
    text: str = ""  # completion
    temperature: float = 0.0
    max_tokens: int = 2048

    def canonical_json(self) -> str:
        return json.dumps(
            {
                "model": self.model,
                "interaction": self.interaction,
                "messages": list(map(list, self.messages)),
                "text": self.text,
                "temperature": self.temperature,
                "max_tokens": self.max_tokens,
            },
            sort_keys=True,
            ensure_ascii=False,
        )

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    @property
    def statement_text(self) -> str:
        """The user-visible content (last message or the completion text)."""
        if self.interaction == "chat":
            return self.messages[-1][1] if self.messages else ""
        return self.text


def build_prompt(profile: ModelProfile, nl: str) -> PromptPayload:
    """Render the request payload for one natural-language statement."""
    if profile.interaction == "chat":
        messages = []
        if profile.system_prompt:
            messages.append(("system", profile.system_prompt))
        messages.append(("user", profile.user_template.format(statement=nl)))
        return PromptPayload(
            model=profile.name,
            interaction="chat",
            messages=tuple(messages),
            temperature=profile.temperature,
            max_tokens=profile.max_tokens,
        )
    return PromptPayload(
        model=profile.name,
        interaction="completion",
        text=profile.user_template.format(statement=nl),
        temperature=profile.temperature,
        max_tokens=profile.max_tokens,
    )


PROFILES: dict[str, ModelProfile] = {
    # Open-weight autoformalizers, per their recommended formats.
    "kimina": ModelProfile(
        name="kimina",
        interaction="chat",
        system_prompt=_AUTOFORMALIZE_SYSTEM,
        user_template=_AUTOFORMALIZE_USER,
    ),
    "deepseek_prover_v2": ModelProfile(
        name="deepseek_prover_v2",
        interaction="completion",
        user_template="{statement}",
    ),
    "herald": ModelProfile(
        name="herald",
        interaction="completion",
        user_template="{statement}",
        emits_own_preamble=True,
    ),
    # Chat profile for API models; the exact production template is not
    # public, so this is a documented stand-in using the same instructions
    # as the open-weight chat profile.
    "frontier_chat": ModelProfile(
        name="frontier_chat",
        interaction="chat",
        system_prompt=_AUTOFORMALIZE_SYSTEM,
        user_template=_AUTOFORMALIZE_USER,
    ),
    # Offline backends for tests and dry runs.
    "mock": ModelProfile(
        name="mock",
        interaction="chat",
        system_prompt=_AUTOFORMALIZE_SYSTEM,
        user_template=_AUTOFORMALIZE_USER,
    ),
    "mock_herald": ModelProfile(
        name="mock_herald",
        interaction="completion",
        user_template="{statement}",
        emits_own_preamble=True,
    ),
}

assert all(p.temperature == 0.0 for p in PROFILES.values())


def get_profile(name: str) -> ModelProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(
            f"unknown model profile {name!r}; known: {sorted(PROFILES)}"
        ) from None

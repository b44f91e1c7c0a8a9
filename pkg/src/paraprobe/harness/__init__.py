"""Model/checker harness: prompts, extraction, compilation, equivalence."""

from .backends import (
    CachedModelClient,
    HttpModelClient,
    MockModelClient,
    ModelUnavailable,
    ResponseCache,
)
from .campaign import (
    CampaignConfig,
    CampaignResult,
    beq_plus,
    compile_check,
    determinism_probe,
    evaluate_pair,
    run_campaign,
)
from .checker import (
    CachedChecker,
    CheckerProtocolError,
    CheckerUnavailable,
    CompileResult,
    Diagnostic,
    HttpChecker,
    MockChecker,
)
from .extract import (
    DEFAULT_WRAPPER,
    ExtractionError,
    LeanStatement,
    extract_theorem_block,
    normalize_preamble,
    raw_concat_unit,
)
from .profiles import ModelProfile, PromptPayload, build_prompt, get_profile, PROFILES
from .records import EquivalenceVerdict, PairRecord, SideResult, read_records, write_records

__all__ = [
    "CachedChecker",
    "CachedModelClient",
    "CampaignConfig",
    "CampaignResult",
    "CheckerProtocolError",
    "CheckerUnavailable",
    "CompileResult",
    "DEFAULT_WRAPPER",
    "Diagnostic",
    "EquivalenceVerdict",
    "ExtractionError",
    "HttpChecker",
    "HttpModelClient",
    "LeanStatement",
    "MockChecker",
    "MockModelClient",
    "ModelProfile",
    "ModelUnavailable",
    "PROFILES",
    "PairRecord",
    "PromptPayload",
    "ResponseCache",
    "SideResult",
    "beq_plus",
    "build_prompt",
    "compile_check",
    "determinism_probe",
    "evaluate_pair",
    "extract_theorem_block",
    "get_profile",
    "normalize_preamble",
    "raw_concat_unit",
    "read_records",
    "run_campaign",
    "write_records",
]

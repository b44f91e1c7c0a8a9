"""paraprobe: paraphrase-robustness probing for NL -> Lean 4 autoformalization.

The pipeline has four file-handoff stages:

    perturb  -- apply deterministic paraphrase rules to a theorem corpus
    run      -- send baseline/perturbed pairs through a model + proof checker
    score    -- backfill structural similarity for compile-both pairs
    report   -- aggregate consistency, compile-rate, taxonomy and GTED tables
"""

__version__ = "0.1.0"

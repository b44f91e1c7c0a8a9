import pytest

from paraprobe.corpus import PerturbedInstance
from paraprobe.harness import (
    CampaignConfig,
    MockChecker,
    MockModelClient,
    beq_plus,
    build_prompt,
    determinism_probe,
    evaluate_pair,
    get_profile,
    run_campaign,
)
from paraprobe.harness.backends import ModelUnavailable
from paraprobe.harness.records import (
    EQUIVALENT,
    FAILED,
    NOT_EQUIVALENT,
    EquivalenceVerdict,
    read_records,
    record_to_json,
    write_records,
)


def instance(i=0, baseline="Prove that $x = x$.", perturbed="We show that $x = x$."):
    return PerturbedInstance(
        theorem_id=f"t{i:03d}",
        dataset="proofnet_sharp",
        rule_id="discourse_prove_to_show",
        baseline=baseline,
        perturbed=perturbed,
    )


class TestBuildPrompt:
    def test_chat_profile(self):
        payload = build_prompt(get_profile("kimina"), "Prove that $1 = 1$.")
        assert payload.interaction == "chat"
        roles = [r for r, _ in payload.messages]
        assert roles == ["system", "user"]
        assert payload.messages[0][1] == "You are an expert in mathematics and Lean 4."
        assert "Prove that $1 = 1$." in payload.messages[1][1]
        assert payload.temperature == 0.0
        assert payload.max_tokens == 2048

    def test_completion_profile(self):
        payload = build_prompt(get_profile("deepseek_prover_v2"), "A claim about $x$.")
        assert payload.interaction == "completion"
        assert payload.text == "A claim about $x$."

    def test_purity(self):
        a = build_prompt(get_profile("kimina"), "Same input.")
        b = build_prompt(get_profile("kimina"), "Same input.")
        assert a == b and a.digest() == b.digest()


class TestBeqPlus:
    def test_identical_statements_equivalent(self):
        v = beq_plus(MockChecker(), "theorem t : 1 = 1 := sorry", "theorem t : 1 = 1 := sorry")
        assert v.status == EQUIVALENT
        assert v.method == "beq_plus"
        assert v.forward and v.backward

    def test_compile_failure_is_not_equivalent(self):
        v = beq_plus(
            MockChecker(),
            "theorem t : 1 = 1 := sorry",
            "theorem t (G : Type) : ¬ SimpleGroup G := sorry",
        )
        assert v.status == NOT_EQUIVALENT
        assert v.method == "compile_failure"

    def test_one_direction_fails(self):
        checker = MockChecker()
        a = "theorem t : a ∧ b := sorry"
        b = "theorem t : b ∧ a := sorry"
        checker.register_provable(
            "import Mathlib\n\n" + a, "import Mathlib\n\n" + b
        )
        v = beq_plus(checker, a, b)
        assert v.status == NOT_EQUIVALENT
        assert v.method == "beq_plus"

    def test_equivalent_requires_both_directions(self):
        with pytest.raises(ValueError):
            EquivalenceVerdict(status=EQUIVALENT, method="beq_plus", forward=True, backward=False)


class TestEvaluatePair:
    def test_stable_pair_equivalent(self):
        record = evaluate_pair(
            MockModelClient(), MockChecker(), instance(), get_profile("mock")
        )
        assert record.verdict.status == EQUIVALENT
        assert record.compile_both

    def test_hallucinating_side_fails_compile(self):
        class OneSideBad:
            calls = 0

            def complete(self, payload):
                if "We show" in payload.statement_text:
                    return "theorem t (G : Type) : ¬ SimpleGroup G := sorry"
                return "theorem t : 1 = 1 := sorry"

        record = evaluate_pair(OneSideBad(), MockChecker(), instance(), get_profile("mock"))
        assert record.baseline.compile.success
        assert not record.perturbed.compile.success
        assert record.verdict.status == NOT_EQUIVALENT
        assert record.verdict.method == "compile_failure"

    def test_no_theorem_output_counts_as_compile_failure(self):
        class NoTheorem:
            def complete(self, payload):
                return "Sorry, I cannot help with that."

        record = evaluate_pair(NoTheorem(), MockChecker(), instance(), get_profile("mock"))
        assert record.baseline.extraction_error
        assert not record.baseline.compile.success
        assert record.verdict.status == NOT_EQUIVALENT

    def test_model_error_yields_failed(self):
        class Broken:
            def complete(self, payload):
                raise ModelUnavailable("socket closed")

        record = evaluate_pair(Broken(), MockChecker(), instance(), get_profile("mock"))
        assert record.verdict.status == FAILED
        assert record.baseline.backend_error

    def test_herald_pair_needs_normalization(self):
        client = MockModelClient(emit_own_preamble=True)
        profile = get_profile("mock_herald")
        ok = evaluate_pair(client, MockChecker(), instance(), profile, normalize=True)
        assert ok.verdict.status in (EQUIVALENT, NOT_EQUIVALENT)
        bypassed = evaluate_pair(client, MockChecker(), instance(), profile, normalize=False)
        assert bypassed.verdict.status == FAILED
        assert bypassed.verdict.method == "failed"


class TestRunCampaign:
    def make_config(self, tmp_path, **kw):
        defaults = dict(
            workload_path="unused",
            models=("mock",),
            out_dir=str(tmp_path / "out"),
            cache_dir=str(tmp_path / "cache"),
            mock=True,
            parallelism=3,
        )
        defaults.update(kw)
        return CampaignConfig(**defaults)

    def test_ten_instances_ten_records(self, tmp_path):
        instances = [instance(i, baseline=f"Prove that $x_{i} = {i}$.",
                              perturbed=f"We show that $x_{i} = {i}$.") for i in range(10)]
        result = run_campaign(self.make_config(tmp_path), instances)
        assert len(result.records) == 10
        assert result.stats["cells"] == 10
        assert (tmp_path / "out" / "config.json").exists()

    def test_warm_cache_zero_backend_calls(self, tmp_path):
        instances = [instance(i, baseline=f"Prove that $y_{i} > 0$.",
                              perturbed=f"We show that $y_{i} > 0$.") for i in range(12)]
        config = self.make_config(tmp_path)
        first = run_campaign(config, instances)
        second = run_campaign(config, instances)
        assert second.stats["model_backend_calls"] == 0
        assert second.stats["checker_backend_calls"] == 0
        assert [record_to_json(r) for r in first.records] == [
            record_to_json(r) for r in second.records
        ]

    def test_output_order_independent_of_parallelism(self, tmp_path):
        instances = [instance(i, baseline=f"Prove that $z_{i} = 1$.",
                              perturbed=f"We show that $z_{i} = 1$.") for i in range(16)]
        serial = run_campaign(self.make_config(tmp_path, parallelism=1,
                                               out_dir=str(tmp_path / "o1"),
                                               cache_dir=str(tmp_path / "c1")), instances)
        parallel = run_campaign(self.make_config(tmp_path, parallelism=8,
                                                 out_dir=str(tmp_path / "o2"),
                                                 cache_dir=str(tmp_path / "c2")), instances)
        assert [record_to_json(r) for r in serial.records] == [
            record_to_json(r) for r in parallel.records
        ]

    def test_multiple_models_multiply_cells(self, tmp_path):
        instances = [instance(i) for i in range(5)]
        config = self.make_config(tmp_path, models=("mock", "mock_herald"))
        result = run_campaign(config, instances)
        assert result.stats["cells"] == 10
        assert {r.model for r in result.records} == {"mock", "mock_herald"}
        # Canonical ordering interleaves models within each instance.
        keys = [r.sort_key() for r in result.records]
        assert keys == sorted(keys)

    def test_records_round_trip(self, tmp_path):
        instances = [instance(i) for i in range(3)]
        result = run_campaign(self.make_config(tmp_path), instances)
        path = tmp_path / "records.jsonl"
        write_records(result.records, path)
        loaded = list(read_records(path))
        assert [record_to_json(r) for r in loaded] == [
            record_to_json(r) for r in result.records
        ]


class TestDeterminismProbe:
    def test_deterministic_mock(self):
        payload = build_prompt(get_profile("mock"), "Prove that $p$ is prime.")
        report = determinism_probe(MockModelClient(), payload, 50)
        assert report.n == 50
        assert report.distinct_outputs == 1

    def test_injected_nondeterminism(self):
        payload = build_prompt(get_profile("mock"), "Prove that $p$ is prime.")
        report = determinism_probe(MockModelClient(nondeterministic=True), payload, 5)
        assert report.distinct_outputs > 1

    def test_minimum_n(self):
        payload = build_prompt(get_profile("mock"), "x")
        with pytest.raises(ValueError):
            determinism_probe(MockModelClient(), payload, 1)
        assert determinism_probe(MockModelClient(), payload, 2).distinct_outputs == 1

import json

from paraprobe.report import NULL_MARKER, emit_report

from helpers import failed_compile, make_record


def sample_records():
    records = []
    # model A: two rules, mixed outcomes, gted on the equivalent pair
    records.append(make_record(model="a", rule_id="r1", theorem_id="t1", gted=1.0))
    records.append(
        make_record(model="a", rule_id="r1", theorem_id="t2",
                    verdict_status="not_equivalent", gted=0.8)
    )
    records.append(
        make_record(model="a", rule_id="r2", theorem_id="t3",
                    verdict_status="not_equivalent", method="compile_failure",
                    pert_compile=failed_compile())
    )
    # model B saw only rule r1.
    records.append(make_record(model="b", rule_id="r1", theorem_id="t1", gted=1.0))
    return records


def test_all_tables_emitted(tmp_path):
    emit_report(sample_records(), tmp_path, bootstrap_iterations=200)
    for name in (
        "consistency_by_model.tsv",
        "consistency_by_category.tsv",
        "compile_rates.tsv",
        "error_taxonomy.tsv",
        "rule_model_matrix.tsv",
        "gted_panel.tsv",
        "summary.json",
    ):
        assert (tmp_path / name).exists(), name


def test_empty_campaign(tmp_path):
    summary = emit_report([], tmp_path, bootstrap_iterations=100)
    assert summary["n_records"] == 0
    table = (tmp_path / "consistency_by_model.tsv").read_text().splitlines()
    assert len(table) == 1  # header only


def test_zero_pair_cells_are_null_not_zero(tmp_path):
    emit_report(sample_records(), tmp_path, bootstrap_iterations=100)
    lines = (tmp_path / "rule_model_matrix.tsv").read_text().splitlines()
    header = lines[0].split("\t")
    assert header == ["dataset", "rule_id", "a", "b"]
    rows = {tuple(l.split("\t")[:2]): l.split("\t")[2:] for l in lines[1:]}
    # model b never saw rule r2: explicit null marker, not "0.0"
    assert rows[("proofnet_sharp", "r2")][1] == NULL_MARKER
    # model a saw r2 with zero equivalents: a true 0.0
    assert rows[("proofnet_sharp", "r2")][0] == "0.0"

    summary = json.loads((tmp_path / "summary.json").read_text())
    cell = [e for e in summary["rule_model_matrix"] if e["rule_id"] == "r2"][0]
    assert cell["cells"]["b"] is None
    assert cell["cells"]["a"] == 0.0


def test_reports_byte_identical_across_runs(tmp_path):
    records = sample_records()
    emit_report(records, tmp_path / "one", bootstrap_iterations=500, seed=7)
    emit_report(records, tmp_path / "two", bootstrap_iterations=500, seed=7)
    for name in (
        "consistency_by_model.tsv",
        "consistency_by_category.tsv",
        "compile_rates.tsv",
        "error_taxonomy.tsv",
        "rule_model_matrix.tsv",
        "gted_panel.tsv",
        "summary.json",
    ):
        assert (tmp_path / "one" / name).read_bytes() == (
            tmp_path / "two" / name
        ).read_bytes(), name


def test_category_table_uses_rule_mapping(tmp_path):
    emit_report(
        sample_records(),
        tmp_path,
        rule_categories={"r1": "discourse", "r2": "conditional"},
        bootstrap_iterations=100,
    )
    text = (tmp_path / "consistency_by_category.tsv").read_text()
    assert "discourse" in text and "conditional" in text


# Reference per-category consistency aggregates on the olympiad-style set:
# (category, n, equivalent count, rendered rate).
MINIF2F_CATEGORIES = [
    ("concept_rename", 20, 1, "5.0"),
    ("definitional", 24, 6, "25.0"),
    ("type_notation", 117, 47, "40.2"),
    ("organization", 98, 44, "44.9"),
    ("conditional", 184, 84, "45.7"),
    ("verbosity", 1368, 684, "50.0"),
    ("discourse", 904, 470, "52.0"),
    ("equivalence", 14, 8, "57.1"),
    ("quantifier", 157, 92, "58.6"),
]


def test_minif2f_category_fixture(tmp_path):
    records = []
    mapping = {}
    for category, n, equivalent, _ in MINIF2F_CATEGORIES:
        rule_id = f"{category}_rule"
        mapping[rule_id] = category
        for i in range(n):
            records.append(
                make_record(
                    dataset="minif2f",
                    rule_id=rule_id,
                    theorem_id=f"{category}_{i}",
                    verdict_status="equivalent" if i < equivalent else "not_equivalent",
                )
            )
    summary = emit_report(
        records, tmp_path, rule_categories=mapping, bootstrap_iterations=5000, seed=0
    )
    by_cat = {e["category"]: e for e in summary["consistency_by_category"]}
    for category, n, _, rate in MINIF2F_CATEGORIES:
        entry = by_cat[category]
        assert entry["n"] == n
        assert f"{entry['rate_pct']:.1f}" == rate
    # The smallest cell's reference interval [0.0, 15.0] is a stable
    # percentile-bootstrap outcome at these sizes.
    lines = (tmp_path / "consistency_by_category.tsv").read_text().splitlines()
    concept = [l for l in lines if l.startswith("minif2f\tconcept_rename")][0].split("\t")
    assert (concept[5], concept[6]) == ("0.0", "15.0")

import csv
import filecmp

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzylink.config import LinkageType, LogicType, validate_config
from fuzzylink.fahp import crisp_weights, fahp_geometric_mean
from fuzzylink.pipeline import (
    LinkageReport,
    apply_boolean_logic,
    compare,
    emit_report,
    estimate_ts,
    read_csv,
    run_deterministic,
    run_linkage,
    score_pair_crisp,
    write_pairs_csv,
)
from fuzzylink.synth import benchmark_config, generate_synthetic, write_synthetic

ALL_MODES = [
    (LogicType.BOOLEAN, LinkageType.CRISP),
    (LogicType.FUZZY, LinkageType.CRISP),
    (LogicType.FUZZY, LinkageType.FUZZY),
]


@pytest.fixture(scope="module")
def small():
    left, right, truth = generate_synthetic(120, 120, 0.3, seed=3)
    return validate_config(benchmark_config()), left, right, truth


class TestBooleanLogic:
    def test_threshold_boundary_passes(self):
        assert apply_boolean_logic([0.95, 0.9, 0.2], [0.9] * 3).tolist() == [1, 1, 0]

    def test_extremes(self):
        assert apply_boolean_logic([0, 0, 0], [0.9] * 3).tolist() == [0, 0, 0]
        assert apply_boolean_logic([1, 1, 1], [0.9] * 3).tolist() == [1, 1, 1]


class TestCrispScore:
    def test_dot_product(self):
        ts, weighted = score_pair_crisp([1, 0, 0], [0.17, 0.31, 0.52])
        assert ts == pytest.approx(0.17)
        assert weighted.tolist() == [0.17, 0.0, 0.0]
        assert score_pair_crisp([1, 1, 1], [0.2, 0.3, 0.5])[0] == pytest.approx(1.0)

    def test_boolean_uniform_default(self):
        cfg = validate_config({"link_columns": [{"left": c} for c in "xyz"], "logic_type": "Boolean"})
        est = estimate_ts(cfg, np.array([[0.95, 0.9, 0.2]]))
        assert est["weights"] == pytest.approx([1 / 3] * 3)
        assert est["ts"][0] == pytest.approx(2 / 3)


def test_identical_single_rows():
    row = {"Name": "ST MARY HOSPITAL", "City": "PARIS"}
    cfg = validate_config({"link_columns": [{"left": "Name"}, {"left": "City", "matcher": "exact"}]})
    run = run_linkage(cfg, [row], [dict(row)])
    assert len(run.scored) == 1
    assert run.scored.ts[0] == pytest.approx(1.0)
    assert run.scored.labels == ["Match"]
    assert any("distinct" in d for d in run.report.diagnostics)


def test_mode_equivalence_bitwise(small):
    cfg, left, right, _ = small
    fuzzy_crisp = run_linkage(cfg.with_modes(LogicType.FUZZY, LinkageType.CRISP), left, right)
    w = crisp_weights(fahp_geometric_mean(cfg.relevance_terms(), cfg.fuzzy_number_scale))
    expected = np.array([score_pair_crisp(s, w)[0] for s in fuzzy_crisp.scored.raw_scores])
    assert fuzzy_crisp.scored.ts.tobytes() == expected.tobytes()


def test_boolean_zero_thresholds_gives_one(small):
    _, left, right, _ = small
    raw = benchmark_config()
    raw["logic_type"] = "Boolean"
    raw.pop("crisp_weight_vector")
    for col in raw["link_columns"]:
        col["threshold"] = 0.0
    run = run_linkage(validate_config(raw), left, right)
    assert np.all(run.scored.ts == 1.0)


@pytest.mark.parametrize("logic, linkage", ALL_MODES)
def test_ts_and_memberships(small, logic, linkage):
    cfg, left, right, _ = small
    run = run_linkage(cfg.with_modes(logic, linkage), left, right)
    ts = run.scored.ts
    assert np.all((ts >= 0) & (ts <= 1))
    np.testing.assert_allclose(run.scored.memberships.sum(axis=1), 1.0, atol=1e-9)
    assert sum(run.report.counts.values()) == run.report.total_pairs == len(run.scored)


@given(
    st.lists(st.lists(st.floats(0, 1), min_size=3, max_size=3), min_size=2, max_size=25),
    st.sampled_from(ALL_MODES),
    st.lists(st.sampled_from(["low", "medium", "high"]), min_size=3, max_size=3),
)
@settings(max_examples=60, deadline=None)
def test_ts_bounds_random_scores(rows, mode, relevance):
    raw = {"link_columns": [{"left": c, "relevance": r} for c, r in zip("xyz", relevance)]}
    cfg = validate_config(raw).with_modes(*mode)
    ts = estimate_ts(cfg, np.array(rows))["ts"]
    assert np.all((ts >= -1e-12) & (ts <= 1 + 1e-12))


def test_deterministic_subset_of_boolean(small):
    cfg, left, right, _ = small
    det = run_deterministic(cfg, left, right)
    frl = run_linkage(cfg.with_modes(LogicType.BOOLEAN, LinkageType.CRISP), left, right)
    det_keys = {p.key for p, lab in zip(det.scored.pairs, det.scored.labels) if lab == "Match"}
    frl_scores = {p.key: s for p, s in zip(frl.scored.pairs, frl.scored.scores)}
    assert all(np.all(frl_scores[k] == 1.0) for k in det_keys)


def test_fuzzy_blocking_and_rule_file(tmp_path, small):
    _, left, right, _ = small
    rules = tmp_path / "rules.txt"
    rules.write_text(
        "IF Name=high AND Address=high AND City=high THEN score=high\n"
        "IF Name=low THEN score=low\nIF Address=low THEN score=low\nIF City=low THEN score=low\n"
        "IF Name=medium THEN score=medium\n"
    )
    raw = benchmark_config()
    raw["constraint"] = {"kind": "fuzzy", "field": "City", "right_field": "Provider City", "lambda": 0.7}
    raw["linkage_type"] = "fuzzy"
    raw["rule_base"] = str(rules)
    run = run_linkage(validate_config(raw), left, right)
    mus = [p.mu_c for p in run.scored.pairs]
    assert mus and min(mus) >= 0.7
    assert np.all((run.scored.ts >= 0) & (run.scored.ts <= 1))


def test_output_files_deterministic(tmp_path, small):
    cfg, left, right, _ = small
    for sub in ("a", "b"):
        runs = compare(cfg, left, right)
        out = tmp_path / sub
        emit_report([r.report for r in runs.values()], out)
        for name, run in runs.items():
            write_pairs_csv(run.scored, out / f"pairs_{name}.csv")
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    assert not mismatch and not errors and len(match) == 7


def test_pairs_csv_columns(tmp_path, small):
    cfg, left, right, _ = small
    run = run_linkage(cfg, left, right)
    write_pairs_csv(run.scored, tmp_path / "pairs.csv")
    with open(tmp_path / "pairs.csv", newline="") as fh:
        header = next(csv.reader(fh))
    assert header == [
        "left_id", "right_id", "mu_c", "score_Name", "score_Address", "score_City",
        "weighted_Name", "weighted_Address", "weighted_City", "ts",
        "membership_Non-match", "membership_Possible Match", "membership_Match", "label",
    ]
    fuzzy = run_linkage(cfg.with_modes(LogicType.FUZZY, LinkageType.FUZZY), left, right)
    write_pairs_csv(fuzzy.scored, tmp_path / "fuzzy.csv")
    with open(tmp_path / "fuzzy.csv", newline="") as fh:
        assert not any(h.startswith("weighted_") for h in next(csv.reader(fh)))


class TestReport:
    def test_all_match_row(self, tmp_path):
        rep = LinkageReport("frl_fuzzy_crisp", {"Match": 10, "Possible Match": 0, "Non-match": 0}, 10, 0.0)
        emit_report([rep], tmp_path)
        with open(tmp_path / "report.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[1][:4] == ["frl_fuzzy_crisp", "10", "0", "0"]
        assert "frl_fuzzy_crisp" in (tmp_path / "report.txt").read_text()

    def test_conservation_checked(self):
        with pytest.raises(AssertionError):
            emit_report([LinkageReport("x", {"Match": 3}, 4, 0.0)])

    def test_needs_a_run(self):
        with pytest.raises(ValueError):
            emit_report([])

    def test_strategy_rows(self, small):
        cfg, left, right, truth = small
        runs = compare(cfg, left, right, set(truth))
        table = emit_report([r.report for r in runs.values()])
        assert len(table.strip().splitlines()) == 2 + 5
        for r in runs.values():
            assert sum(r.report.counts.values()) == r.report.total_pairs


class TestSynthetic:
    def test_no_corruption_exact(self):
        left, right, truth = generate_synthetic(80, 80, 0.0, seed=1)
        cfg = validate_config(benchmark_config())
        det = run_deterministic(cfg, left, right)
        found = {p.key for p, lab in zip(det.scored.pairs, det.scored.labels) if lab == "Match"}
        assert set(truth) <= found

    def test_full_corruption_kills_exact_agreement(self):
        left, right, truth = generate_synthetic(80, 80, 1.0, seed=1)
        det = run_deterministic(validate_config(benchmark_config()), left, right)
        found = {p.key for p, lab in zip(det.scored.pairs, det.scored.labels) if lab == "Match"}
        assert not found & set(truth)
        assert det.report.count("Match") <= 1

    def test_byte_identical(self, tmp_path):
        a = write_synthetic(tmp_path / "a", n_left=50, n_right=40, seed=9)
        b = write_synthetic(tmp_path / "b", n_left=50, n_right=40, seed=9)
        for key in a:
            assert a[key].read_bytes() == b[key].read_bytes()
        assert len(read_csv(a["right"])) == 40

    def test_bad_rate(self):
        with pytest.raises(ValueError):
            generate_synthetic(corruption_rate=1.2)


def test_crisp_ts_never_overshoots_one():
    w = np.array([0.1, 0.2, 0.7]) / sum([0.1, 0.2, 0.7])
    ts, _ = score_pair_crisp(np.ones((1, 3)), w)
    assert ts[0] == 1.0

import math
import warnings

import numpy as np
import pytest

import pinvcond as pc
from pinvcond import bounds
from pinvcond.errors import DomainError, HeavyTailWarning, RankDeficiencyError
from pinvcond.experiments import (
    REFERENCE_TABLES,
    TailEstimate,
    collect_trials,
    empirical_expectation,
    empirical_tail,
    estimate_q,
    expectation_experiment,
    make_ones_center,
    q_experiment,
    reproduce_tables,
    run_trials,
    tail_experiment,
    write_trials_csv,
)
from pinvcond.sampling import GaussianEnsemble, Seed, sample_gaussian_matrix


def zero_ensemble(m, n, sigma=1.0):
    return GaussianEnsemble(center=np.zeros((m, n)), sigma=sigma)


# --- run_trials --------------------------------------------------------------

def test_run_trials_passes_indexed_substreams_in_order():
    seed = Seed(11)
    got = run_trials(lambda i, s: (i, s.master, s.stream_index), 7, seed)
    for i, (idx, master, stream) in enumerate(got):
        sub = seed.substream(i)
        assert idx == i
        assert (master, stream) == (sub.master, sub.stream_index)


def test_run_trials_thread_count_does_not_change_results():
    seed = Seed(12)
    lone = run_trials(lambda i, s: s.generator().standard_normal(), 23, seed, threads=1)
    pooled = run_trials(lambda i, s: s.generator().standard_normal(), 23, seed, threads=4)
    assert lone == pooled


def test_run_trials_validation():
    with pytest.raises(DomainError):
        run_trials(lambda i, s: i, 0, Seed(1))


# --- collect_trials ----------------------------------------------------------

def test_collect_trials_record_consistency():
    seed = Seed(31)
    records = collect_trials(zero_ensemble(4, 6), 20, seed)
    assert [r.trial_index for r in records] == list(range(20))
    for r in records:
        assert r.kappa == pytest.approx(r.spectral_norm * r.pinv_norm, rel=1e-12)
        assert r.ln_kappa == pytest.approx(math.log(r.kappa), rel=1e-12)
        assert r.seed == seed.substream(r.trial_index)
        assert r.kappa >= 1.0


def test_collect_trials_thread_invariance():
    ens = zero_ensemble(3, 7)
    assert collect_trials(ens, 25, Seed(32), threads=1) == \
        collect_trials(ens, 25, Seed(32), threads=3)


def test_collect_trials_marks_deficient_draws_as_inf():
    ens = GaussianEnsemble(center=make_ones_center(3, 5), sigma=0.0)
    records = collect_trials(ens, 5, Seed(33))
    for r in records:
        assert r.kappa == math.inf
        assert r.pinv_norm == math.inf
        assert r.spectral_norm == pytest.approx(1.0, rel=1e-12)


# --- estimate_q --------------------------------------------------------------

def test_estimate_q_deterministic_and_inside_interval():
    q1, se1 = estimate_q(5, 10, 200, Seed(41))
    q2, se2 = estimate_q(5, 10, 200, Seed(41))
    assert (q1, se1) == (q2, se2)
    lo, hi = bounds.q_analytic_bounds(5, 10)
    assert lo - 3 * se1 <= q1 <= hi + 3 * se1
    assert se1 > 0.0


def test_estimate_q_band_route_agrees_with_dense():
    qd, sd = estimate_q(5, 10, 400, Seed(42), method="dense")
    qb, sb = estimate_q(5, 10, 400, Seed(43), method="bidiagonal")
    assert abs(qd - qb) <= 4.0 * math.hypot(sd, sb)


def test_estimate_q_validation():
    with pytest.raises(DomainError):
        estimate_q(5, 10, 99, Seed(1))
    with pytest.raises(DomainError):
        estimate_q(10, 5, 200, Seed(1))
    with pytest.raises(DomainError):
        estimate_q(5, 10, 200, Seed(1), method="magic")


# --- empirical tail ----------------------------------------------------------

def test_empirical_tail_structure_and_monotonicity():
    est = empirical_tail(zero_ensemble(4, 6), [1.0, 2.0, 4.0, 8.0], 1000, Seed(51))
    assert isinstance(est, TailEstimate)
    assert est.trials == 1000
    assert est.deficient_count == 0
    probs = [p.probability for p in est.points]
    assert probs[0] == 1.0  # kappa >= 1 always
    assert all(a >= b for a, b in zip(probs, probs[1:]))
    for p in est.points:
        assert p.exceed_count == round(p.probability * 1000)
        assert p.ci_low <= p.probability <= p.ci_high


def test_empirical_tail_requires_enough_trials():
    with pytest.raises(DomainError):
        empirical_tail(zero_ensemble(4, 6), [2.0], 999, Seed(1))


def test_empirical_tail_counts_match_numpy_condition_numbers():
    # same substreams, independent kappa route: numpy cond on the raw draws
    ens = zero_ensemble(5, 8)
    seed = Seed(52)
    thresholds = [2.0, 5.0, 12.0]
    est = empirical_tail(ens, thresholds, 1000, seed)
    kappas = np.array([
        np.linalg.cond(sample_gaussian_matrix(ens, seed.substream(i)))
        for i in range(1000)
    ])
    for t, point in zip(thresholds, est.points):
        assert point.exceed_count == int(np.sum(kappas >= t))


# --- empirical expectation ---------------------------------------------------

def test_empirical_expectation_ln_kappa_matches_numpy_route():
    ens = zero_ensemble(5, 8)
    seed = Seed(61)
    mean, se = empirical_expectation(ens, 150, seed, statistic="ln_kappa")
    logs = np.array([
        math.log(np.linalg.cond(sample_gaussian_matrix(ens, seed.substream(i))))
        for i in range(150)
    ])
    assert mean == pytest.approx(float(logs.mean()), rel=1e-10)
    assert se == pytest.approx(float(logs.std(ddof=1)) / math.sqrt(150), rel=1e-10)


def test_empirical_expectation_heavy_tail_warning_fires():
    # 2x2 centered draws have an infinite-mean kappa law, so one draw
    # dominating the sum is the expected failure mode
    with pytest.warns(HeavyTailWarning):
        empirical_expectation(zero_ensemble(2, 2), 100, Seed(7))


def test_empirical_expectation_rank_deficient_draw_raises():
    ens = GaussianEnsemble(center=make_ones_center(3, 4), sigma=0.0)
    with pytest.raises(RankDeficiencyError):
        empirical_expectation(ens, 100, Seed(62))


def test_empirical_expectation_validation():
    with pytest.raises(DomainError):
        empirical_expectation(zero_ensemble(3, 4), 99, Seed(1))
    with pytest.raises(DomainError):
        empirical_expectation(zero_ensemble(3, 4), 100, Seed(1), statistic="median")


# --- centers -----------------------------------------------------------------

def test_make_ones_center_norms():
    a = make_ones_center(7, 11)
    assert pc.spectral_norm(a) == pytest.approx(1.0, rel=1e-12)
    b = make_ones_center(7, 11, scale_mode="sqrt_m")
    assert pc.spectral_norm(b) == pytest.approx(math.sqrt(7.0), rel=1e-12)
    with pytest.raises(DomainError):
        make_ones_center(0, 4)
    with pytest.raises(DomainError):
        make_ones_center(3, 4, scale_mode="unit")


# --- reference tables --------------------------------------------------------

def test_reference_tables_frozen_shape():
    assert sorted(REFERENCE_TABLES) == ["1.5", "2", "2.5", "3"]
    assert REFERENCE_TABLES["2"][0] == (5, 10, 1.28204418194521, 6.35902343647518)
    assert REFERENCE_TABLES["1.5"][4] == (160, 240, 2.23119383890675, 11.80997066079053)
    for key, rows in REFERENCE_TABLES.items():
        ratio = float(key)
        for m, n, mean_ref, mu_ref in rows:
            assert n == round(ratio * m)
            assert 0.0 < mean_ref < mu_ref  # the reference bound sits above the mean


def test_reproduce_tables_rows_and_filtering():
    rep = reproduce_tables("2", trials=100, seed=Seed(71), max_m=10)
    assert rep.ratio == "2"
    assert [(r.m, r.n) for r in rep.rows] == [(5, 10), (10, 20)]
    for r in rep.rows:
        assert r.delta == r.mean_ln_kappa - r.reference
        assert r.bound_log == bounds.expectation_bound_log(r.m / r.n)
        assert abs(r.delta) < 0.5  # loose sanity at 100 trials
        assert r.mean_ln_kappa < r.bound_log
    again = reproduce_tables(2.0, trials=100, seed=Seed(71), max_m=10)
    assert again.ratio == "2"
    assert again.rows == rep.rows
    with pytest.raises(DomainError):
        reproduce_tables("4", trials=100, seed=Seed(71))


def test_reproduce_tables_report_embeds_config():
    rep = reproduce_tables("3", trials=100, seed=Seed(72), max_m=5).to_report()
    assert rep.command == "tables"
    assert rep.config["ratio"] == "3"
    assert rep.config["trials"] == 100
    assert rep.config["seed_master"] == 72
    assert [row["m"] for row in rep.rows] == [5]
    assert set(rep.rows[0]) == {"m", "n", "mean_ln_kappa", "stderr",
                                "reference", "delta", "bound_log"}


# --- csv dump ----------------------------------------------------------------

def test_write_trials_csv_roundtrip(tmp_path):
    ens = zero_ensemble(3, 5, sigma=0.5)
    records = collect_trials(ens, 8, Seed(81))
    path = tmp_path / "trials.csv"
    write_trials_csv(records, ens, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "trial,m,n,sigma,kappa,ln_kappa,spec_norm,pinv_norm"
    assert len(lines) == 9
    for r, line in zip(records, lines[1:]):
        cells = line.split(",")
        assert int(cells[0]) == r.trial_index
        assert (int(cells[1]), int(cells[2])) == (3, 5)
        assert float(cells[3]) == 0.5
        assert float(cells[4]) == r.kappa
        assert float(cells[7]) == r.pinv_norm


# --- experiment report builders ----------------------------------------------

def test_q_experiment_report():
    rep = q_experiment(5, 10, 200, Seed(91))
    assert rep.command == "estimate-q"
    assert rep.config == {"m": 5, "n": 10, "trials": 200, "method": "dense",
                          "seed_master": 91, "seed_stream": 0}
    assert set(rep.estimates) == {"q", "stderr"}
    assert set(rep.bounds) == {"interval_low", "interval_high", "limit_value"}
    assert rep.bounds["limit_value"] == bounds.q_limit(0.5)
    [verdict] = rep.verdicts
    assert verdict.name == "q_inside_analytic_interval"
    assert verdict.passed
    assert rep.to_json() == q_experiment(5, 10, 200, Seed(91)).to_json()


def test_tail_experiment_report():
    ens = zero_ensemble(5, 8)
    rep = tail_experiment(ens, 1000, Seed(92), q_trials=200, z_points=5)
    assert rep.command == "tail"
    assert rep.config["z_points"] == 5
    assert len(rep.tails) == 5
    zc = rep.estimates["zeta"]
    assert rep.tails[0]["z"] == zc
    assert rep.bounds["zeta"] == zc
    lam = 4.0 / 8.0
    for row in rep.tails:
        assert row["threshold"] == pytest.approx(math.e * row["z"] / (1.0 - lam), rel=1e-12)
        assert row["ci_low"] <= row["probability"] <= row["ci_high"]
    assert rep.estimates["deficient_count"] == 0
    [verdict] = rep.verdicts
    assert verdict.name == "tail_bound_grid"
    assert verdict.passed
    assert "hold" in rep.notes[0]


def test_tail_experiment_flags_broken_hypotheses_in_notes():
    ens = GaussianEnsemble(center=make_ones_center(4, 6, scale_mode="sqrt_m"), sigma=1.5)
    rep = tail_experiment(ens, 1000, Seed(93), q_trials=200, z_points=4)
    assert "DO NOT hold" in rep.notes[0]


def test_expectation_experiment_report():
    rep = expectation_experiment(zero_ensemble(5, 10), 200, Seed(94))
    assert rep.command == "expect"
    assert set(rep.estimates) == {"mean_kappa", "stderr_kappa",
                                  "mean_ln_kappa", "stderr_ln_kappa"}
    lam = (5 - 1) / 10
    assert rep.bounds["mean_bound"] == bounds.expectation_bound(lam)
    assert rep.bounds["mean_bound_log"] == pytest.approx(math.log(20.1 / (1 - lam)), rel=1e-14)
    [verdict] = rep.verdicts
    assert verdict.name == "mean_kappa_bound"
    assert verdict.passed
    assert rep.estimates["mean_kappa"] > 1.0


def test_expectation_experiment_asymptotic_mode_and_validation():
    rep = expectation_experiment(zero_ensemble(5, 10), 200, Seed(95),
                                 lambda_mode="asymptotic")
    assert rep.bounds["mean_bound"] == bounds.expectation_bound(0.5)
    with pytest.raises(DomainError):
        expectation_experiment(zero_ensemble(5, 5), 200, Seed(95),
                               lambda_mode="asymptotic")
    with pytest.raises(DomainError):
        expectation_experiment(zero_ensemble(5, 10), 200, Seed(95), lambda_mode="x")
    # tall shapes make lam >= 1; must be rejected before any sampling
    with pytest.raises(DomainError):
        expectation_experiment(zero_ensemble(10, 5), 200, Seed(95))


def test_reports_identical_across_thread_counts():
    ens = zero_ensemble(4, 8)
    a = expectation_experiment(ens, 120, Seed(96), threads=1).to_json()
    b = expectation_experiment(ens, 120, Seed(96), threads=4).to_json()
    assert a == b

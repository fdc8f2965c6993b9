import random

import numpy as np
import pytest

import pairlink as pl
from pairlink.tomography import (
    CountRecord,
    TomographySetting,
    linear_inversion,
    log_likelihood,
    mle_reconstruct,
    project_to_physical,
    read_count_records,
    settings_gram_rank,
    simulate_counts,
    standard_16_settings,
    write_count_records,
)

PHI = pl.bell_phi_plus()


def lab_grade_state():
    """Rank-2 state with purity 0.981 and overlap 0.99 with phi+."""
    lam = (1.0 + np.sqrt(2.0 * 0.981 - 1.0)) / 2.0
    alpha = np.arcsin(np.sqrt((lam - 0.99) / (2.0 * lam - 1.0)))
    kp = np.array([1, 0, 0, 1]) / np.sqrt(2.0)
    km = np.array([1, 0, 0, -1]) / np.sqrt(2.0)
    psi1 = np.cos(alpha) * kp + np.sin(alpha) * km
    psi2 = -np.sin(alpha) * kp + np.cos(alpha) * km
    rho = lam * np.outer(psi1, psi1) + (1.0 - lam) * np.outer(psi2, psi2)
    return pl.TwoQubitState(rho.astype(complex))


# --- settings -------------------------------------------------------------


def test_standard_16_settings_shape():
    settings = standard_16_settings()
    assert len(settings) == 16
    labels = [(s.arm_a.label, s.arm_b.label) for s in settings]
    assert labels[:4] == [("H", "H"), ("H", "V"), ("V", "V"), ("V", "H")]
    assert len(set(labels)) == 16


def test_standard_16_settings_informationally_complete():
    # independent check: Gram matrix of the 16 projectors has full rank
    pis = [s.projector().reshape(-1) for s in standard_16_settings()]
    gram = np.array([[np.vdot(a, b).real for b in pis] for a in pis])
    assert np.linalg.matrix_rank(gram) == 16
    assert settings_gram_rank(standard_16_settings()) == 16


def test_setting_requires_labels():
    with pytest.raises(ValueError):
        TomographySetting(
            pl.AnalyzerSetting(angle=0.3), pl.AnalyzerSetting.from_label("H")
        )


# --- simulated counts --------------------------------------------------------


def test_simulate_counts_zero_mean_setting():
    records = simulate_counts(PHI, mean_total=1e6, seed=0)
    by_label = {
        (r.setting.arm_a.label, r.setting.arm_b.label): r.counts for r in records
    }
    assert by_label[("H", "V")] == 0
    assert by_label[("V", "H")] == 0


def test_simulate_counts_exact_mode_matches_probabilities():
    records = simulate_counts(PHI, mean_total=1e6, exact=True)
    for r in records:
        p = pl.coincidence_probability(PHI, r.setting.arm_a, r.setting.arm_b)
        assert r.counts / 1e6 == pytest.approx(p, abs=1e-12)


def test_simulate_counts_deterministic_per_seed():
    a = [r.counts for r in simulate_counts(PHI, mean_total=1e5, seed=123)]
    b = [r.counts for r in simulate_counts(PHI, mean_total=1e5, seed=123)]
    c = [r.counts for r in simulate_counts(PHI, mean_total=1e5, seed=124)]
    assert a == b
    assert a != c


def test_simulate_counts_validation():
    with pytest.raises(ValueError):
        simulate_counts(PHI, mean_total=0.0)
    with pytest.raises(ValueError):
        simulate_counts(np.eye(4, dtype=complex), mean_total=1e5)  # trace 4


def test_count_record_validation():
    setting = standard_16_settings()[0]
    with pytest.raises(ValueError):
        CountRecord(setting, -1.0)
    with pytest.raises(ValueError):
        CountRecord(setting, 10.0, integration=0.0)


# --- linear inversion --------------------------------------------------------


def test_linear_inversion_exact_phi_plus():
    records = simulate_counts(PHI, mean_total=1e6, exact=True)
    est = linear_inversion(records)
    assert np.max(np.abs(est - PHI.matrix)) < 1e-9
    assert np.trace(est).real == pytest.approx(1.0, abs=1e-12)


def test_linear_inversion_exact_maximally_mixed():
    records = simulate_counts(pl.maximally_mixed(), mean_total=1e6, exact=True)
    est = linear_inversion(records)
    assert np.max(np.abs(est - np.eye(4) / 4)) < 1e-9


def test_linear_inversion_poisson_projected_fidelity():
    # typical (median over 25 seeds) projected fidelity at 1e6 counts/setting
    fids = []
    for seed in range(25):
        records = simulate_counts(PHI, mean_total=1e6, seed=seed)
        state = project_to_physical(linear_inversion(records))
        fids.append(pl.fidelity_to_pure(state, PHI))
    assert np.median(fids) >= 0.995
    assert min(fids) >= 0.99


def test_linear_inversion_rejects_rank_deficient_settings():
    setting = standard_16_settings()[0]
    records = [CountRecord(setting, 100.0) for _ in range(16)]
    with pytest.raises(ValueError):
        linear_inversion(records)
    with pytest.raises(ValueError):
        linear_inversion(records[:8])


def test_linear_inversion_rejects_all_zero_counts():
    records = [
        CountRecord(s, 0.0) for s in standard_16_settings()
    ]
    with pytest.raises(ValueError):
        linear_inversion(records)


def test_project_to_physical():
    m = np.diag([1.2, 0.3, -0.4, -0.1]).astype(complex)
    state = project_to_physical(m)
    eigs = np.linalg.eigvalsh(state.matrix)
    assert eigs.min() >= -1e-12
    assert np.trace(state.matrix).real == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        project_to_physical(-np.eye(4, dtype=complex))


# --- MLE ----------------------------------------------------------------------


def test_mle_exact_counts_recover_phi_plus():
    records = simulate_counts(PHI, mean_total=1e6, exact=True)
    result = mle_reconstruct(records)
    assert result.converged
    assert pl.fidelity_to_pure(result.state, PHI) >= 0.9999


def test_mle_output_always_physical():
    rng = np.random.default_rng(21)
    for seed in range(10):
        # heavy noise: tiny counts
        records = simulate_counts(pl.werner(rng.uniform(0, 1)), mean_total=200.0, seed=seed)
        if sum(r.counts for r in records) == 0:
            continue
        state = mle_reconstruct(records).state
        eigs = np.linalg.eigvalsh(state.matrix)
        assert eigs.min() >= -1e-10
        assert np.trace(state.matrix).real == pytest.approx(1.0, abs=1e-9)


def test_mle_werner_purity_matches_formula():
    # purity of a Werner state is p^2 + (1-p^2)/4 = 0.926875 at p = 0.95
    target = 0.95**2 + (1 - 0.95**2) / 4
    assert target == pytest.approx(0.926875, abs=1e-12)
    errs = []
    for seed in range(20):
        records = simulate_counts(pl.werner(0.95), mean_total=1e6, seed=seed)
        errs.append(abs(pl.purity(mle_reconstruct(records).state) - target))
    assert max(errs) < 0.01


def test_mle_recovers_lab_grade_state_metrics():
    state = lab_grade_state()
    assert pl.purity(state) == pytest.approx(0.981, abs=1e-9)
    assert pl.fidelity_to_pure(state, PHI) == pytest.approx(0.99, abs=1e-9)
    for seed in range(10):
        records = simulate_counts(state, mean_total=1e6, seed=seed)
        rec_state = mle_reconstruct(records).state
        assert pl.purity(rec_state) == pytest.approx(0.981, abs=0.01)
        assert pl.fidelity_to_pure(rec_state, PHI) == pytest.approx(0.99, abs=0.01)


def test_mle_likelihood_dominates_projected_linear_inversion():
    for seed in range(10):
        records = simulate_counts(pl.werner(0.9), mean_total=1e5, seed=seed)
        result = mle_reconstruct(records)
        baseline = log_likelihood(
            project_to_physical(linear_inversion(records)), records
        )
        assert result.log_likelihood >= baseline - 1e-6


def test_mle_more_counts_reconstruct_better():
    for state in (PHI, pl.werner(0.9)):
        medians = {}
        for total in (1e4, 1e6):
            infid = [
                1.0
                - pl.uhlmann_fidelity(
                    mle_reconstruct(
                        simulate_counts(state, mean_total=total, seed=seed)
                    ).state,
                    state,
                )
                for seed in range(20)
            ]
            medians[total] = np.median(infid)
        assert medians[1e6] < medians[1e4]


def test_mle_permutation_invariant():
    records = simulate_counts(pl.werner(0.9), mean_total=1e5, seed=9)
    shuffled = records[:]
    random.Random(0).shuffle(shuffled)
    a = mle_reconstruct(records).state.matrix
    b = mle_reconstruct(shuffled).state.matrix
    assert np.max(np.abs(a - b)) < 1e-8


def test_mle_reports_non_convergence():
    records = simulate_counts(PHI, mean_total=1e4, seed=42)
    result = mle_reconstruct(records, max_iter=1)
    assert not result.converged
    assert result.iterations <= 1


def test_mle_rejects_empty_counts():
    records = [CountRecord(s, 0.0) for s in standard_16_settings()]
    with pytest.raises(ValueError):
        mle_reconstruct(records)


# --- count-file IO ---------------------------------------------------------


def test_count_csv_round_trip(tmp_path):
    records = simulate_counts(pl.werner(0.7), mean_total=1e5, seed=5)
    path = tmp_path / "counts.csv"
    write_count_records(path, records)
    header = path.read_text().splitlines()[0]
    assert header == "setting_a,setting_b,counts,integration_s"
    back = read_count_records(path)
    assert len(back) == len(records)
    for orig, rt in zip(records, back):
        assert rt.setting == orig.setting
        assert rt.counts == orig.counts
        assert rt.integration == orig.integration


def test_count_csv_round_trip_exact_mode(tmp_path):
    records = simulate_counts(pl.werner(0.7), mean_total=12345.0, exact=True)
    path = tmp_path / "counts.csv"
    write_count_records(path, records)
    back = read_count_records(path)
    for orig, rt in zip(records, back):
        assert rt.counts == pytest.approx(orig.counts, abs=0.0)


def test_count_csv_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("setting_a,setting_b,counts\nH,H,10\n")
    with pytest.raises(ValueError):
        read_count_records(bad)
    bad.write_text("setting_a,setting_b,counts,integration_s\nH,H,10\n")
    with pytest.raises(ValueError):
        read_count_records(bad)
    bad.write_text("setting_a,setting_b,counts,integration_s\n")
    with pytest.raises(ValueError):
        read_count_records(bad)
    bad.write_text("setting_a,setting_b,counts,integration_s\nH,Q,10,1.0\n")
    with pytest.raises(ValueError):
        read_count_records(bad)

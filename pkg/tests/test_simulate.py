"""Sampling laws, spectrum clustering, gap statistics, Euler paths."""

import numpy as np
import pytest

from octodyson import (
    InsufficientData,
    OctonionicMatrix,
    SimulationConfig,
    euler_path,
    gap_statistics,
    hermitian_reduction_residual,
    implied_beta,
    sample_matrix,
    sample_rng,
    sample_spectra,
    spectrum,
)
from octodyson.simulate import SpectralSample, cluster_eigenvalues

from oracles import moment_ratio_by_quadrature, planar_distinct_eigenvalues, rejection_gap_sampler


def cfg(**kw):
    base = dict(kind="a", n=2, t=1.0, samples=1, seed=0)
    base.update(kw)
    return SimulationConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        cfg(kind="a", n=3)
    with pytest.raises(ValueError):
        cfg(t=0.0)
    with pytest.raises(ValueError):
        cfg(samples=0)
    with pytest.raises(ValueError):
        cfg(mode="euler", steps=0)
    assert cfg(kind="b", n=4).n == 4


def test_sampler_deterministic_per_index():
    c = cfg(seed=123, samples=2)
    m1 = sample_matrix(c, 1)
    m2 = sample_matrix(c, 1)
    np.testing.assert_array_equal(m1.components, m2.components)
    m0 = sample_matrix(c, 0)
    assert not np.array_equal(m0.components, m1.components)


def test_sampler_independent_of_draw_history():
    # drawing index 5 directly equals drawing it after other indices
    c = cfg(seed=9)
    for idx in (0, 3, 1):
        sample_matrix(c, idx)
    np.testing.assert_array_equal(sample_matrix(c, 5).components,
                                  sample_matrix(cfg(seed=9), 5).components)


def test_sample_structure():
    ma = sample_matrix(cfg(seed=4), 0)
    assert ma.is_symmetric()
    mb = sample_matrix(cfg(kind="b", n=3, seed=4), 0)
    assert mb.is_symmetric()
    for a in range(2, 8):
        np.testing.assert_array_equal(mb.components[a], mb.components[1])


def test_sample_variances():
    """Empirical entry variances match t times the covariance coefficients."""
    n_draws = 4000
    t = 2.0
    c = cfg(seed=77, t=t, samples=n_draws)
    diag = np.empty(n_draws)
    off = np.empty(n_draws)
    anti = np.empty(n_draws)
    for i in range(n_draws):
        comps = sample_matrix(c, i).components
        diag[i] = comps[0][0, 0]
        off[i] = comps[0][0, 1]
        anti[i] = comps[3][1, 0]
    tol = 5.0 / np.sqrt(n_draws)
    assert abs(np.var(diag) / t - 1.0) < tol
    assert abs(np.var(off) / (t / 2) - 1.0) < tol
    assert abs(np.var(anti) / (t / 2) - 1.0) < tol

    cb = cfg(kind="b", n=2, seed=78, t=t, samples=n_draws)
    shared = np.empty(n_draws)
    for i in range(n_draws):
        shared[i] = sample_matrix(cb, i).components[5][1, 0]
    assert abs(np.var(shared) / (t / 14) - 1.0) < tol


def test_tiny_time_gives_tiny_matrix():
    m = sample_matrix(cfg(t=1e-30), 0)
    assert np.max(np.abs(m.components)) < 1e-13


def test_spectrum_multiplicities():
    for i in range(50):
        s = spectrum(sample_matrix(cfg(seed=5), i))
        assert s.multiplicities == (8, 8)
        assert len(s.distinct) == 2
    for i in range(20):
        s = spectrum(sample_matrix(cfg(kind="b", n=3, seed=6), i))
        assert s.multiplicities == (8, 8, 8)


def test_spectrum_matches_planar_quadratic_oracle():
    for i in range(50):
        m = sample_matrix(cfg(seed=15), i)
        s = spectrum(m)
        lo, hi = planar_distinct_eigenvalues(m.components)
        assert abs(s.distinct[0] - lo) < 1e-10 * (1 + abs(lo))
        assert abs(s.distinct[1] - hi) < 1e-10 * (1 + abs(hi))


def test_zero_matrix_single_cluster():
    s = spectrum(OctonionicMatrix.zero(2))
    assert s.distinct == (0.0,)
    assert s.multiplicities == (16,)
    assert s.spread == 0.0


def test_cluster_eigenvalues_grouping():
    eigs = np.array([1.0, 1.0 + 1e-12, 2.0, 2.0, 2.0])
    s = cluster_eigenvalues(eigs, 1e-6)
    assert s.multiplicities == (2, 3)
    assert abs(s.distinct[0] - (1.0 + 5e-13)) < 1e-12
    assert s.spread <= 2e-12


def test_sample_spectra_thread_invariance():
    c = cfg(seed=31, samples=400)
    serial = sample_spectra(c, threads=1)
    threaded = sample_spectra(c, threads=4, chunk=64)
    assert serial == threaded


def test_hermitian_reduction():
    for n in (2, 3, 4):
        for i in range(20):
            m = sample_matrix(cfg(kind="b", n=n, seed=32 + n), i)
            assert hermitian_reduction_residual(m) < 1e-9
    # zero antisymmetric part: plain symmetric spectrum, eight copies
    m0 = np.array([[1.0, 0.2], [0.2, -0.5]])
    m = OctonionicMatrix.from_scalar_part(m0)
    assert hermitian_reduction_residual(m) < 1e-12
    with pytest.raises(ValueError):
        hermitian_reduction_residual(sample_matrix(cfg(seed=1), 0))


def test_implied_beta_inverts_ratio():
    for beta in (1.0, 2.0, 8.0):
        assert abs(implied_beta(1.0 + 2.0 / (beta + 1.0)) - beta) < 1e-12
    assert implied_beta(1.0) == float("inf")


def test_gap_statistics_requires_samples():
    c = cfg(seed=33, samples=20)
    with pytest.raises(InsufficientData):
        gap_statistics(sample_spectra(c))


def test_gap_statistics_deterministic():
    c = cfg(seed=34, samples=300)
    spectra = sample_spectra(c)
    s1 = gap_statistics(spectra)
    s2 = gap_statistics(spectra)
    assert s1 == s2


def test_gap_statistics_on_rejection_sampler():
    """Synthetic gaps from the target density recover their exponent."""
    rng = np.random.default_rng(35)
    for beta in (2.0, 8.0):
        gaps = rejection_gap_sampler(beta, 20000, rng)
        samples = [SpectralSample((0.0, float(g)), (8, 8), 0.0) for g in gaps]
        stats = gap_statistics(samples)
        assert abs(stats.implied_beta - beta) < max(2.0 * stats.stderr, 0.2)


def test_quadrature_ratio_oracle():
    assert abs(moment_ratio_by_quadrature(8.0) - 11.0 / 9.0) < 1e-6
    assert abs(moment_ratio_by_quadrature(2.0) - 5.0 / 3.0) < 1e-6


def test_moment_ratio_scale_free_in_time():
    """Ratios at t = 1 and t = 4 agree within combined uncertainty."""
    s1 = gap_statistics(sample_spectra(cfg(seed=36, t=1.0, samples=8000)))
    s4 = gap_statistics(sample_spectra(cfg(seed=37, t=4.0, samples=8000)))
    # moment2 scales by t, the ratio does not
    assert abs(s4.moment2 / s1.moment2 - 4.0) < 0.5
    db = abs(s1.implied_beta - s4.implied_beta)
    assert db < 2.0 * np.hypot(s1.stderr, s4.stderr) + 0.05


def test_implied_beta_smallish_samples():
    sa = gap_statistics(sample_spectra(cfg(seed=38, samples=12000)))
    assert 7.0 < sa.implied_beta < 9.0
    sb = gap_statistics(sample_spectra(cfg(kind="b", seed=39, samples=12000)))
    assert 1.6 < sb.implied_beta < 2.4


def test_euler_single_step_equals_exact_sampler():
    c_euler = cfg(seed=40, mode="euler", steps=1)
    c_exact = cfg(seed=40)
    path = euler_path(c_euler, 0)
    assert path.samples[0] == spectrum(sample_matrix(c_exact, 0))


def test_euler_path_keeps_cluster_structure():
    c = cfg(seed=41, mode="euler", steps=300)
    for idx in range(3):
        path = euler_path(c, idx)
        assert not path.crossing_detected
        assert path.min_gap > 0.0
        assert all(s.multiplicities == (8, 8) for s in path.samples)


def test_sample_rng_streams_disjoint():
    a = sample_rng(7, 0).standard_normal(4)
    b = sample_rng(7, 1).standard_normal(4)
    assert not np.allclose(a, b)
    np.testing.assert_array_equal(a, sample_rng(7, 0).standard_normal(4))

"""Component/real-form matrices, structured inversion, resolvents, probes."""

import numpy as np
import pytest

from octodyson import (
    CharPolyEval,
    NearSingularShift,
    NotSymmCompatible,
    OctonionicMatrix,
    SimulationConfig,
    SingularBase,
    SingularCore,
    charpoly_probe,
    components_from_real_form,
    is_octonionic,
    oct_inverse,
    real_form,
    resolvent,
    sample_matrix,
)
from octodyson.algebra import CANONICAL_LABELS, subset_label
from octodyson.matrices import (
    ANTISYM_UNIT_2,
    check_dim2_identities,
    check_logdet_derivatives,
    dim3_counterexample,
    fd_logdet_gradient,
    logdet_gradient,
    octonionic_residual,
    off_spectrum_points,
    random_planar_matrix,
    trace_identity_residuals,
)

RNG = np.random.default_rng(2024)


def draw(kind="a", n=2, seed=0, index=0):
    return sample_matrix(SimulationConfig(kind=kind, n=n, t=1.0, samples=1, seed=seed), index)


def test_identity_real_form():
    m = OctonionicMatrix.from_scalar_part(np.eye(2))
    np.testing.assert_array_equal(m.real_form(), np.eye(16))


def test_block_of_single_component():
    # the ({1}, empty) block of the real form is the {1} component itself
    comps = np.zeros((8, 2, 2))
    comps[subset_label([1])] = ANTISYM_UNIT_2
    rf = real_form(comps)
    pos = CANONICAL_LABELS.index(subset_label([1]))
    np.testing.assert_array_equal(rf[2 * pos:2 * pos + 2, 0:2], ANTISYM_UNIT_2)


def test_real_form_symmetric_for_symmetric_components():
    m = draw("a")
    assert m.is_symmetric()
    rf = m.real_form()
    np.testing.assert_array_equal(rf, rf.T)
    mb = draw("b", n=3)
    rfb = mb.real_form()
    np.testing.assert_array_equal(rfb, rfb.T)


def test_component_extraction_roundtrip():
    for m in (draw("a"), draw("b", n=3, index=5)):
        rf = m.real_form()
        np.testing.assert_array_equal(components_from_real_form(rf), m.components)
        assert octonionic_residual(rf) == 0.0
        assert is_octonionic(rf)


def test_is_octonionic_rejects_generic_symmetric():
    g = RNG.standard_normal((16, 16))
    g = g + g.T
    assert not is_octonionic(g)
    with pytest.raises(ValueError):
        is_octonionic(RNG.standard_normal((12, 12)))


def test_is_octonionic_identity():
    assert is_octonionic(np.eye(16))
    assert is_octonionic(np.eye(24))


def test_oct_inverse_scalar_multiple():
    m = OctonionicMatrix.from_scalar_part(3.0 * np.eye(2))
    inv = oct_inverse(m)
    np.testing.assert_allclose(inv.components[0], np.eye(2) / 3.0, atol=1e-15)
    assert np.max(np.abs(inv.components[1:])) == 0.0


def test_oct_inverse_random_planar_draws():
    worst = 0.0
    for i in range(100):
        m = draw("a", index=i)
        if np.linalg.cond(m.real_form()) > 1e8:
            continue
        inv = oct_inverse(m)
        res = np.max(np.abs(inv.real_form() @ m.real_form() - np.eye(16)))
        worst = max(worst, res)
    assert worst < 1e-9


def test_oct_inverse_equal_antisymmetric_components():
    # diag(2, 3) scalar part plus one antisymmetric matrix on all labels:
    # 2x2 antisymmetric matrices are mutually proportional, so the
    # compatibility condition holds automatically
    comps = np.zeros((8, 2, 2))
    comps[0] = np.diag([2.0, 3.0])
    comps[1:] = 0.7 * ANTISYM_UNIT_2
    m = OctonionicMatrix(comps)
    inv = oct_inverse(m)
    np.testing.assert_allclose(inv.real_form() @ m.real_form(), np.eye(16), atol=1e-12)


def test_oct_inverse_matches_dense_inverse():
    m = draw("b", n=3, index=2)
    inv = oct_inverse(m)
    np.testing.assert_allclose(inv.real_form(), np.linalg.inv(m.real_form()), atol=1e-9)


def test_oct_inverse_error_paths():
    singular = OctonionicMatrix.from_scalar_part(np.zeros((2, 2)))
    with pytest.raises(SingularBase):
        oct_inverse(singular)

    # generic 3x3 antisymmetric components violate the compatibility condition
    comps = np.zeros((8, 3, 3))
    comps[0] = np.eye(3)
    a1 = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    a2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    comps[1], comps[2] = a1, a2
    with pytest.raises(NotSymmCompatible):
        oct_inverse(OctonionicMatrix(comps))

    # unit antisymmetric part makes the core sum vanish: (z A0)^2 = -z^2 Id
    comps = np.zeros((8, 2, 2))
    comps[0] = np.eye(2)
    comps[1] = ANTISYM_UNIT_2
    with pytest.raises(SingularCore):
        oct_inverse(OctonionicMatrix(comps))


def test_resolvent_of_zero_matrix():
    m = OctonionicMatrix.zero(2)
    res = resolvent(m, -1.0)
    np.testing.assert_allclose(res.dense, np.eye(16), atol=1e-14)
    assert res.components is not None and res.oct_residual < 1e-14


def test_resolvent_trace_and_structure():
    m = draw("a", index=3)
    res = resolvent(m, 4.5)
    assert res.components is not None
    assert abs(res.trace - 8.0 * np.trace(res.components[0])) < 1e-10
    assert res.oct_residual < 1e-12
    probe = charpoly_probe(m, 4.5)
    assert abs(res.trace + probe.dlog) < 1e-9 * (1 + abs(res.trace))


def test_resolvent_guard():
    m = draw("a", index=4)
    eigs = np.linalg.eigvalsh(m.real_form())
    with pytest.raises(NearSingularShift):
        resolvent(m, float(eigs[0]))


def test_charpoly_zero_matrix():
    # p(x) = x^16 for the zero 2x2 matrix: p(1) = 1, p'(1) = 16, p''(1) = 240
    m = OctonionicMatrix.zero(2)
    probe = charpoly_probe(m, 1.0)
    assert abs(probe.p - 1.0) < 1e-12
    assert abs(probe.dp - 16.0) < 1e-10
    assert abs(probe.ddp - 240.0) < 1e-9


def test_charpoly_probe_finite_at_eigenvalue():
    eigs = np.array([1.0, 1.0, 2.0, 3.0])
    ev = CharPolyEval.from_eigenvalues(eigs, 2.0)
    # p(x) = (1-x)^2 (2-x)(3-x); at x=2: p=0, p'=-(1)^2(1) = ... compute:
    # p'(x) = d/dx[(1-x)^2(2-x)(3-x)]; at 2: only the (2-x) factor survives
    # differentiation: p'(2) = -(1-2)^2 (3-2) = -1
    assert ev.p == 0.0
    assert abs(ev.dp - (-1.0)) < 1e-12
    assert np.isfinite(ev.ddp)


def test_charpoly_derivatives_match_polyfit():
    m = draw("b", n=2, index=6)
    x = 5.2
    probe = charpoly_probe(m, x)
    eigs = np.linalg.eigvalsh(m.real_form())
    # det(M - x Id) == det(x Id - M) in even dimension, so the polynomial
    # built from the roots matches p with the same sign, derivatives included
    coeffs = np.poly(eigs)
    p = np.polyval(coeffs, x)
    dp = np.polyval(np.polyder(coeffs), x)
    ddp = np.polyval(np.polyder(coeffs, 2), x)
    assert abs(probe.p - p) < 1e-8 * abs(p)
    assert abs(probe.dp - dp) < 1e-7 * abs(dp)
    assert abs(probe.ddp - ddp) < 1e-6 * abs(ddp)


@pytest.mark.parametrize("kind,n", [("a", 2), ("b", 2), ("b", 3)])
def test_trace_identities(kind, n):
    rng = np.random.default_rng(42)
    for i in range(10):
        m = draw(kind, n=n, seed=9, index=i)
        eigs = np.linalg.eigvalsh(m.real_form())
        x, y = off_spectrum_points(eigs, rng, 2)
        while abs(x - y) < 0.5:
            x, y = off_spectrum_points(eigs, rng, 2)
        residuals = trace_identity_residuals(m, float(x), float(y))
        assert max(residuals.values()) < 1e-9, residuals


def test_off_spectrum_points_land_in_bands():
    eigs = np.array([-2.0, 3.0])
    rng = np.random.default_rng(0)
    pts = off_spectrum_points(eigs, rng, 500)
    assert np.all((np.abs(pts) >= 4.0) & (np.abs(pts) <= 5.0))


def test_logdet_gradient_small_case():
    mat = np.array([[2.0, 1.0], [0.5, 3.0]])
    np.testing.assert_allclose(fd_logdet_gradient(mat), logdet_gradient(mat),
                               rtol=0, atol=1e-8)


def test_logdet_derivative_suite():
    report = check_logdet_derivatives(count=20, seed=12)
    assert report.passed and report.max_residual < 1e-5


def test_dim2_identity_suite():
    report = check_dim2_identities(trials=150, seed=13)
    assert report.passed and report.max_residual < 1e-10


def test_dim2_scalar_identity_on_identity_matrix():
    m = np.eye(2)
    assert np.trace(m @ m) - np.trace(m) ** 2 == -2.0 * np.linalg.det(m)


def test_dim3_counterexample_residual():
    assert dim3_counterexample() > 0.1


def test_planar_antisym_component_of_resolvent():
    # single imaginary coordinate z on label {1}: at shift 0 the resolvent's
    # {1} component is lam * A0 with lam = z / (z^2 - det(scalar part))
    comps = np.zeros((8, 2, 2))
    comps[0] = np.diag([2.0, 3.0])
    comps[subset_label([1])] = 1.0 * ANTISYM_UNIT_2
    m = OctonionicMatrix(comps)
    inv = oct_inverse(m)
    lam = 1.0 / (1.0 - 6.0)
    np.testing.assert_allclose(inv.components[subset_label([1])], lam * ANTISYM_UNIT_2,
                               atol=1e-12)


def test_random_planar_matrix_structure():
    m = random_planar_matrix(np.random.default_rng(3))
    assert m.is_symmetric()
    for a in range(1, 8):
        assert abs(m.components[a][0, 1] + m.components[a][1, 0]) < 1e-15


def test_immutability():
    m = draw("a")
    with pytest.raises(ValueError):
        m.components[0, 0, 0] = 99.0

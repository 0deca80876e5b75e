"""Diffusion carre-du-champ calculus on the characteristic polynomial.

A diffusion model assigns every pair of real-form entries a covariance
coefficient (the carre du champ of the entries) and every entry a drift
(zero for both models here).  Writing p(x) = det(real form - x Id) and
U(x) for the resolvent, the chain rule turns entry-level data into

    Gamma(log p(x), log p(y)) = sum U(x)_ji U(y)_lk Gamma(M_ij, M_kl),
    L(log p(x)) = sum U_ji L(M_ij) - sum U_jk(x) U_li(x) Gamma(M_ij, M_kl),

with all indices running over the 8n x 8n real form.  This module evaluates
those quadruple sums exactly (reorganized over component indices, which is
an O(n^2) pass per label pair) and provides the closed forms they are
expected to match:

* model "a" (2x2, independent antisymmetric components):
    Gamma = (8 / (y - x)) (p'/p(x) - p'/p(y)),
    L(log p) = 3 ((p'/p)^2 - p''/p) - (1/2) (p'/p)^2;
* model "b" (shared antisymmetric component, any dimension):
    same Gamma, and L(log p) = -(1/8) (p'/p)^2.

Matching coefficients against L(p) = a1 p'' + a2 p'^2 / p and
Gamma(log p(x), log p(y)) = a3/(y-x) (p'/p(x) - p'/p(y)) gives
(a1, a2, a3) = (-11, 21/2, 8) for model "a" and (-8, 63/8, 8) for model "b".
The positive root of  a^2 (a1+a2) - a (a1+a3) + a3 = 0  is the eigenvalue
multiplicity (8 for both models), and kappa = -a^2 (a1+a2) / a3 is the power
of the squared Vandermonde in the invariant spectral density, i.e. a gap
exponent beta = 2 kappa (8 for model "a", 2 for model "b").
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import SIGN_TABLE
from .errors import NoAdmissibleRoot, NotSymmCompatible, VerificationFailure
from .matrices import CharPolyEval, OctonionicMatrix, off_spectrum_points, resolvent

#: Shared-Gamma coefficient of the antisymmetric component in model "b".
MODEL_B_ANTISYM_RATE = 1.0 / 14.0


@dataclass(frozen=True)
class DiffusionModel:
    """Entry-covariance rule identifying one of the two matrix diffusions.

    ``kind`` is ``"a"`` (2x2 only; each nonscalar component an independent
    antisymmetric Brownian matrix) or ``"b"`` (one antisymmetric Brownian
    matrix shared by all seven nonscalar components, any dimension).  Drift
    is zero for both.
    """

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("a", "b"):
            raise ValueError(f"kind must be 'a' or 'b', got {self.kind!r}")
        if self.kind == "a" and self.n != 2:
            raise ValueError("model 'a' is defined for n = 2 only")
        if self.n < 2:
            raise ValueError("n must be at least 2")

    def gamma_coefficients(self, f: int, g: int) -> tuple[float, float]:
        """(c1, c2) with Gamma(M^f_ij, M^g_kl) = c1 d_ik d_jl + c2 d_il d_jk."""
        if self.kind == "a":
            if f != g:
                return 0.0, 0.0
            return 0.5, 0.5 * float(SIGN_TABLE[f, f])
        if f == 0 and g == 0:
            return 0.5, 0.5
        if f != 0 and g != 0:
            return MODEL_B_ANTISYM_RATE, -MODEL_B_ANTISYM_RATE
        return 0.0, 0.0

    def drift(self, f: int, i: int, j: int) -> float:
        """L of a single component entry; identically zero for both models."""
        return 0.0


def model_a() -> DiffusionModel:
    return DiffusionModel("a", 2)


def model_b(n: int) -> DiffusionModel:
    return DiffusionModel("b", n)


@lru_cache(maxsize=None)
def _gamma_weights(kind: str) -> tuple[tuple[int, int, float, float], ...]:
    """Per label pair (f, g): weights of the elementwise and trace pairings
    in the Gamma quadruple sum, after summing the 64 block pairs mapping to
    each component pair."""
    model = DiffusionModel(kind, 2)
    entries = []
    for f in range(8):
        for g in range(8):
            c1, c2 = model.gamma_coefficients(f, g)
            if c1 == 0.0 and c2 == 0.0:
                continue
            s = 64.0 * float(SIGN_TABLE[f, f] * SIGN_TABLE[g, g])
            entries.append((f, g, s * c1, s * c2))
    return tuple(entries)


@lru_cache(maxsize=None)
def _generator_weights(kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Aggregated sign weights of the generator quadruple sum.

    Enumerates all 4096 block quadruples (a, b, c, d); each contributes its
    four-factor sign product times the model coefficients of the component
    pair (a^b, c^d), accumulated onto the resolvent-component pair
    (b^c, d^a) for the elementwise and trace-product pairings respectively.
    """
    model = DiffusionModel(kind, 2)
    w_elem = np.zeros((8, 8))
    w_tr = np.zeros((8, 8))
    t = SIGN_TABLE
    for a, b, c, d in itertools.product(range(8), repeat=4):
        c1, c2 = model.gamma_coefficients(a ^ b, c ^ d)
        if c1 == 0.0 and c2 == 0.0:
            continue
        theta = float(t[b ^ c, c] * t[c ^ d, d] * t[d ^ a, a] * t[a ^ b, b])
        w_elem[b ^ c, d ^ a] += theta * c1
        w_tr[b ^ c, d ^ a] += theta * c2
    w_elem.setflags(write=False)
    w_tr.setflags(write=False)
    return w_elem, w_tr


def _components(m: OctonionicMatrix, x: float) -> np.ndarray:
    res = resolvent(m, x)
    if res.components is None:
        raise NotSymmCompatible(
            "resolvent is not octonionic; the matrix does not satisfy the "
            "compatibility condition at this shift"
        )
    return res.components


def gamma_log_charpoly(m: OctonionicMatrix, x: float, y: float,
                       model: DiffusionModel) -> float:
    """Carre du champ of (log p(x), log p(y)) from the entry-level rule.

    Evaluates the full quadruple sum over real-form entries, reorganized
    over component labels.  ``x == y`` is allowed (the sum has no
    singularity there); the closed form's confluent value is
    :func:`gamma_closed_form` at equal shifts.
    """
    ucx = _components(m, x)
    ucy = ucx if y == x else _components(m, y)
    total = 0.0
    for f, g, we, wt in _gamma_weights(model.kind):
        total += we * float(np.sum(ucx[f] * ucy[g]))
        total += wt * float(np.trace(ucx[f] @ ucy[g]))
    return total


def generator_log_charpoly(m: OctonionicMatrix, x: float,
                           model: DiffusionModel) -> float:
    """Generator applied to log p(x) from the entry-level rule.

    The drift part vanishes for both models; the quadratic part is the
    quadruple sum with aggregated sign weights.
    """
    uc = _components(m, x)
    w_elem, w_tr = _generator_weights(model.kind)
    traces = np.array([np.trace(uc[f]) for f in range(8)])
    total = 0.0
    for pq in zip(*np.nonzero(w_elem)):
        total += w_elem[pq] * float(np.sum(uc[pq[0]] * uc[pq[1]]))
    total += float(traces @ w_tr @ traces)
    return -total


def generator_charpoly_ratio(m: OctonionicMatrix, x: float,
                             model: DiffusionModel) -> float:
    """L(p)(x) / p(x) via the change of variables
    L(p) = p L(log p) + Gamma(p, p)/p  with  Gamma(p, p) = p^2 Gamma(log p, log p)."""
    return generator_log_charpoly(m, x, model) + gamma_log_charpoly(m, x, x, model)


def gamma_closed_form(px: CharPolyEval, py: CharPolyEval, alpha3: float = 8.0) -> float:
    """Closed form alpha3/(y-x) (p'/p(x) - p'/p(y)); analytic limit at x == y."""
    if px.x == py.x:
        return alpha3 * px.curvature
    return alpha3 / (py.x - px.x) * (px.dlog - py.dlog)


def generator_closed_form(px: CharPolyEval, model: DiffusionModel) -> float:
    """Model closed form for L(log p)(x)."""
    if model.kind == "a":
        return 3.0 * px.curvature - 0.5 * px.dlog ** 2
    return -0.125 * px.dlog ** 2


@dataclass(frozen=True)
class ExponentProblem:
    """Coefficients (a1, a2, a3) of the charpoly generator closed forms."""

    alpha1: float
    alpha2: float
    alpha3: float


#: Stated coefficient triples per model kind.
STATED_COEFFICIENTS = {
    "a": ExponentProblem(-11.0, 10.5, 8.0),
    "b": ExponentProblem(-8.0, 63.0 / 8.0, 8.0),
}


def measure_coefficients(model: DiffusionModel, matrix: OctonionicMatrix,
                         rng: np.random.Generator) -> ExponentProblem:
    """Measure (a1, a2, a3) from one matrix draw, without the closed forms.

    a3 comes from inverting the Gamma identity at two off-spectrum shift
    pairs (the two estimates must agree); a1 and a2 from L(p)/p at two
    shifts by solving the 2x2 linear system
    L(p)/p = a1 p''/p + a2 (p'/p)^2.
    """
    eigs = np.linalg.eigvalsh(matrix.real_form())
    x1, y1, x2, y2 = off_spectrum_points(eigs, rng, 4)
    while abs(x1 - y1) < 0.5:
        x1, y1 = off_spectrum_points(eigs, rng, 2)
    while abs(x2 - y2) < 0.5 or (x2, y2) == (x1, y1):
        x2, y2 = off_spectrum_points(eigs, rng, 2)

    def alpha3_at(x: float, y: float) -> float:
        g = gamma_log_charpoly(matrix, x, y, model)
        px = CharPolyEval.from_eigenvalues(eigs, x)
        py = CharPolyEval.from_eigenvalues(eigs, y)
        return g * (y - x) / (px.dlog - py.dlog)

    a3_first = alpha3_at(x1, y1)
    a3_second = alpha3_at(x2, y2)
    if abs(a3_first - a3_second) > 1e-6 * (1.0 + abs(a3_first)):
        raise VerificationFailure(
            f"inconsistent a3 estimates: {a3_first!r} vs {a3_second!r}"
        )

    rows = []
    rhs = []
    for x in (x1, x2):
        px = CharPolyEval.from_eigenvalues(eigs, x)
        rows.append([px.ddp / px.p, px.dlog ** 2])
        rhs.append(generator_charpoly_ratio(matrix, x, model))
    a1, a2 = np.linalg.solve(np.array(rows), np.array(rhs))
    return ExponentProblem(float(a1), float(a2), 0.5 * (a3_first + a3_second))


def exponent_coefficients(model: DiffusionModel, verify: bool = True,
                          seed: int = 0, tol: float = 1e-6) -> ExponentProblem:
    """Coefficient triple for a model, cross-checked numerically.

    Returns the stated (a1, a2, a3) after confirming, on a random draw, that
    the measured values agree to ``tol``.  Raises
    :class:`~octodyson.errors.VerificationFailure` on mismatch.
    """
    stated = STATED_COEFFICIENTS[model.kind]
    if verify:
        from .simulate import SimulationConfig, sample_matrix

        cfg = SimulationConfig(kind=model.kind, n=model.n, t=1.0, samples=1, seed=seed)
        matrix = sample_matrix(cfg, 0)
        rng = np.random.default_rng(seed)
        measured = measure_coefficients(model, matrix, rng)
        for name, got, want in (
            ("alpha1", measured.alpha1, stated.alpha1),
            ("alpha2", measured.alpha2, stated.alpha2),
            ("alpha3", measured.alpha3, stated.alpha3),
        ):
            if abs(got - want) > tol * (1.0 + abs(want)):
                raise VerificationFailure(
                    f"measured {name} = {got!r}, expected {want!r}"
                )
    return stated


@dataclass(frozen=True)
class MultiplicityResult:
    """Roots of the multiplicity quadratic."""

    a: float
    roots: tuple[float, ...]
    is_positive_integer: bool
    residual: float


def _quadratic_value(p: ExponentProblem, a: float) -> float:
    return a * a * (p.alpha1 + p.alpha2) - a * (p.alpha1 + p.alpha3) + p.alpha3


def solve_multiplicity(p: ExponentProblem) -> MultiplicityResult:
    """Positive root of a^2 (a1+a2) - a (a1+a3) + a3 = 0.

    A positive integer root is the eigenvalue multiplicity.  Both real roots
    are reported; if two are positive the integer one (or the larger) is
    selected.

    Raises
    ------
    ValueError
        If a1 + a2 == 0 (the equation degenerates to linear).
    NoAdmissibleRoot
        If there is no positive real root.
    """
    lead = p.alpha1 + p.alpha2
    if lead == 0.0:
        raise ValueError("alpha1 + alpha2 must be nonzero")
    b = -(p.alpha1 + p.alpha3)
    disc = b * b - 4.0 * lead * p.alpha3
    if disc < 0.0:
        raise NoAdmissibleRoot("multiplicity quadratic has complex roots")
    sq = math.sqrt(disc)
    roots = tuple(sorted(((-b - sq) / (2 * lead), (-b + sq) / (2 * lead))))
    positive = [r for r in roots if r > 0.0 and math.isfinite(r)]
    if not positive:
        raise NoAdmissibleRoot(f"no finite positive root among {roots}")
    ints = [r for r in positive if abs(r - round(r)) < 1e-9]
    a = ints[0] if len(ints) == 1 else max(positive)
    return MultiplicityResult(
        a=a,
        roots=roots,
        is_positive_integer=abs(a - round(a)) < 1e-9,
        residual=abs(_quadratic_value(p, a)),
    )


def invariant_exponent(p: ExponentProblem, a: float) -> float:
    """Power kappa of the squared Vandermonde in the invariant density.

    The spectral density carries (prod_{i<j} (x_i - x_j)^2)^kappa with
    kappa = -a^2 (a1 + a2) / a3; the gap exponent is beta = 2 kappa.
    """
    if p.alpha3 == 0.0:
        raise ValueError("alpha3 must be nonzero")
    return -a * a * (p.alpha1 + p.alpha2) / p.alpha3

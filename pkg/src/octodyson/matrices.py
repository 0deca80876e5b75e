"""Matrices with octonion entries: component form, real form, inversion.

An n x n matrix with octonion entries is stored as 8 real n x n component
matrices ``M^A``, one per basis label.  Its real form is the 8n x 8n block
matrix with block (A, B) equal to ``sign(A^B, B) * M^{A^B}``, blocks laid out
in the canonical label order.  The real form of a symmetric matrix (scalar
component symmetric, the others antisymmetric) is a symmetric real matrix,
so its spectrum is real.

Matrix products of real forms do not mirror products of the underlying
octonionic matrices (the algebra is nonassociative), but inverses are
special: under the compatibility condition

    M^A (M^0)^-1 M^B == M^B (M^0)^-1 M^A   for all A, B          (*)

the inverse of the real form is again the real form of an octonionic matrix,
with components given in closed form by :func:`oct_inverse`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import CANONICAL_LABELS, SIGN_TABLE
from .errors import NearSingularShift, NotSymmCompatible, SingularBase, SingularCore
from .reporting import IdentityReport

#: The 2x2 antisymmetric unit; every 2x2 antisymmetric matrix is a multiple.
ANTISYM_UNIT_2 = np.array([[0.0, -1.0], [1.0, 0.0]])
ANTISYM_UNIT_2.setflags(write=False)


@dataclass(frozen=True)
class OctonionicMatrix:
    """Immutable component form of a matrix with octonion entries.

    Parameters
    ----------
    components : ndarray, shape (8, n, n)
        Real component matrices indexed by basis bitmask label.
    """

    components: np.ndarray

    def __post_init__(self):
        comps = np.array(self.components, dtype=np.float64)
        if comps.ndim != 3 or comps.shape[0] != 8 or comps.shape[1] != comps.shape[2]:
            raise ValueError(f"components must have shape (8, n, n), got {comps.shape}")
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return self.components.shape[1]

    @classmethod
    def zero(cls, n: int) -> "OctonionicMatrix":
        return cls(np.zeros((8, n, n)))

    @classmethod
    def from_scalar_part(cls, m0) -> "OctonionicMatrix":
        """Matrix whose only nonzero component is the identity-label one."""
        m0 = np.asarray(m0, dtype=np.float64)
        comps = np.zeros((8,) + m0.shape)
        comps[0] = m0
        return cls(comps)

    def real_form(self) -> np.ndarray:
        return real_form(self.components)

    def is_symmetric(self, tol: float = 0.0) -> bool:
        """True iff the scalar component is symmetric and the rest antisymmetric."""
        comps = self.components
        if np.max(np.abs(comps[0] - comps[0].T)) > tol:
            return False
        for a in range(1, 8):
            if np.max(np.abs(comps[a] + comps[a].T)) > tol:
                return False
        return True

    def shifted(self, x: float) -> "OctonionicMatrix":
        """Subtract ``x`` times the identity (acts on the scalar component)."""
        comps = self.components.copy()
        comps[0] = comps[0] - x * np.eye(self.n)
        return OctonionicMatrix(comps)


def real_form(components: np.ndarray) -> np.ndarray:
    """Real 8n x 8n form of the component stack (blocks in canonical order)."""
    comps = np.asarray(components, dtype=np.float64)
    n = comps.shape[-1]
    batch = comps.shape[:-3]
    out = np.zeros(batch + (8 * n, 8 * n))
    for pa, a in enumerate(CANONICAL_LABELS):
        for pb, b in enumerate(CANONICAL_LABELS):
            block = SIGN_TABLE[a ^ b, b] * comps[..., a ^ b, :, :]
            out[..., pa * n:(pa + 1) * n, pb * n:(pb + 1) * n] = block
    return out


def components_from_real_form(matrix: np.ndarray) -> np.ndarray:
    """Read the component stack off the first block column of a real form.

    The (A, identity-label) block of a real form is exactly ``M^A``, so this
    inverts :func:`real_form` on genuine real forms; on arbitrary input it is
    the candidate used by :func:`octonionic_residual`.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    dim = matrix.shape[-1]
    if dim % 8:
        raise ValueError(f"matrix dimension {dim} is not divisible by 8")
    n = dim // 8
    comps = np.empty(matrix.shape[:-2] + (8, n, n))
    for pa, a in enumerate(CANONICAL_LABELS):
        comps[..., a, :, :] = matrix[..., pa * n:(pa + 1) * n, 0:n]
    return comps


def octonionic_residual(matrix: np.ndarray) -> float:
    """Max-norm distance from ``matrix`` to the real form its blocks imply."""
    comps = components_from_real_form(matrix)
    return float(np.max(np.abs(matrix - real_form(comps))))


def is_octonionic(matrix: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether a square matrix is (within ``tol``) the real form of some
    component stack.  Raises ``ValueError`` if the dimension is not 8n."""
    return octonionic_residual(matrix) <= tol


def symm_compatibility_residual(m: OctonionicMatrix) -> float:
    """Worst scaled residual of the compatibility condition (*).

    Each pair (A, B) is scaled by ``1 + |M^A| |M^B|`` so the returned value
    is comparable against a fixed tolerance.
    """
    comps = m.components
    try:
        m0_inv = np.linalg.inv(comps[0])
    except np.linalg.LinAlgError as exc:
        raise SingularBase("scalar component is singular") from exc
    worst = 0.0
    for a in range(8):
        for b in range(a + 1, 8):
            lhs = comps[a] @ m0_inv @ comps[b]
            rhs = comps[b] @ m0_inv @ comps[a]
            scale = 1.0 + np.linalg.norm(comps[a]) * np.linalg.norm(comps[b])
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    return worst


def oct_inverse(m: OctonionicMatrix, symm_tol: float = 1e-10,
                cond_limit: float = 1e12) -> OctonionicMatrix:
    """Structured inverse of an octonionic matrix.

    Requires an invertible scalar component, the compatibility condition (*)
    within ``symm_tol``, and an invertible core sum.  The result ``N``
    satisfies ``real_form(N) @ real_form(M) == Id`` and has components

        N^0 = (sum_C M^C (M^0)^-1 M^C)^-1,
        N^A = -N^0 M^A (M^0)^-1              for A != 0.

    Raises
    ------
    SingularBase, NotSymmCompatible, SingularCore
    """
    comps = m.components
    if np.linalg.cond(comps[0]) > cond_limit:
        raise SingularBase("scalar component is singular or near-singular")
    m0_inv = np.linalg.inv(comps[0])

    worst = symm_compatibility_residual(m)
    if worst > symm_tol:
        raise NotSymmCompatible(f"compatibility residual {worst:.3e} exceeds {symm_tol:.1e}")

    core = np.zeros_like(comps[0])
    for c in range(8):
        core += comps[c] @ m0_inv @ comps[c]
    if np.linalg.cond(core) > cond_limit:
        raise SingularCore("core sum is singular or near-singular")
    n0 = np.linalg.inv(core)

    out = np.empty_like(comps)
    out[0] = n0
    for a in range(1, 8):
        out[a] = -n0 @ comps[a] @ m0_inv
    return OctonionicMatrix(out)


def spectral_radius(eigenvalues: np.ndarray) -> float:
    return float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0


def shift_guard(eigenvalues: np.ndarray, n: int, scale: float = 0.5) -> float:
    """Minimum allowed distance from a resolvent shift to the spectrum."""
    return scale * (1.0 + spectral_radius(eigenvalues)) / (8 * n)


def off_spectrum_points(eigenvalues: np.ndarray, rng: np.random.Generator,
                        count: int = 1) -> np.ndarray:
    """Draw shifts uniformly from the two unit bands just outside the spectrum.

    Points land in [-R-2, -R-1] or [R+1, R+2] with R the spectral radius, so
    every resolvent evaluated there is well conditioned.
    """
    rad = spectral_radius(eigenvalues)
    pts = rad + 1.0 + rng.uniform(0.0, 1.0, size=count)
    signs = np.where(rng.uniform(size=count) < 0.5, -1.0, 1.0)
    return signs * pts


@dataclass(frozen=True)
class Resolvent:
    """Dense inverse of (real form - shift * Id), with component data when
    the shifted matrix satisfies the compatibility condition."""

    matrix: OctonionicMatrix
    shift: float
    dense: np.ndarray
    components: np.ndarray | None
    oct_residual: float | None

    @property
    def trace(self) -> float:
        return float(np.trace(self.dense))


def resolvent(m: OctonionicMatrix, x: float, guard_scale: float = 0.5,
              symm_tol: float = 1e-10) -> Resolvent:
    """Resolvent of the real form at shift ``x``.

    Refuses shifts closer to the spectrum than the guard distance
    ``guard_scale * (1 + spectral_radius) / (8n)``.  When the shifted matrix
    satisfies the compatibility condition (*), the inverse is itself a real
    form; its components are extracted and the consistency residual reported.

    Raises
    ------
    NearSingularShift
    """
    rf = m.real_form()
    dim = rf.shape[0]
    eigs = np.linalg.eigvalsh(rf)
    if np.min(np.abs(eigs - x)) <= shift_guard(eigs, m.n, guard_scale):
        raise NearSingularShift(f"shift {x} is within the guard distance of the spectrum")
    dense = np.linalg.inv(rf - x * np.eye(dim))

    components = None
    oct_res = None
    try:
        if symm_compatibility_residual(m.shifted(x)) <= symm_tol:
            oct_res = octonionic_residual(dense)
            components = components_from_real_form(dense)
    except SingularBase:
        pass
    return Resolvent(m, float(x), dense, components, oct_res)


@dataclass(frozen=True)
class CharPolyEval:
    """Value and first two shift-derivatives of det(real form - x * Id)."""

    x: float
    p: float
    dp: float
    ddp: float

    @property
    def dlog(self) -> float:
        """dp / p."""
        return self.dp / self.p

    @property
    def curvature(self) -> float:
        """(dp/p)^2 - ddp/p; equals the trace of the squared resolvent."""
        return (self.dp / self.p) ** 2 - self.ddp / self.p

    @classmethod
    def from_eigenvalues(cls, eigenvalues: np.ndarray, x: float,
                         p: float | None = None) -> "CharPolyEval":
        """Evaluate from the spectrum; stable also when x hits an eigenvalue.

        p(x) = prod(lam_k - x); away from the spectrum the derivatives come
        from power sums of 1/(lam_k - x), at an eigenvalue from leave-one-out
        and leave-two-out products.
        """
        d = np.asarray(eigenvalues, dtype=np.float64) - x
        m = len(d)
        if p is None:
            p = float(np.prod(d))
        scale = 1.0 + spectral_radius(np.asarray(eigenvalues))
        if np.min(np.abs(d)) > 1e-12 * scale:
            s1 = float(np.sum(1.0 / d))
            s2 = float(np.sum(1.0 / d ** 2))
            return cls(float(x), p, -p * s1, p * (s1 * s1 - s2))
        # degenerate shift: exact leave-k-out expansion
        pref = np.ones(m + 1)
        for i in range(m):
            pref[i + 1] = pref[i] * d[i]
        suff = np.ones(m + 1)
        for i in range(m - 1, -1, -1):
            suff[i] = suff[i + 1] * d[i]
        dp = -float(np.sum(pref[:m] * suff[1:]))
        ddp = 0.0
        for k in range(m):
            mid = pref[k]
            for l in range(k + 1, m):
                ddp += 2.0 * mid * suff[l + 1]
                mid *= d[l]
        return cls(float(x), float(pref[m]), dp, float(ddp))


def charpoly_probe(m: OctonionicMatrix, x: float) -> CharPolyEval:
    """Characteristic-polynomial data of the real form at shift ``x``.

    The value is a direct determinant evaluation; the derivatives come from
    the eigenvalue list (the real form must be symmetric).
    """
    rf = m.real_form()
    eigs = np.linalg.eigvalsh(rf)
    p = float(np.linalg.det(rf - x * np.eye(rf.shape[0])))
    return CharPolyEval.from_eigenvalues(eigs, x, p=p)


# ---------------------------------------------------------------------------
# trace identities of resolvent components


def _rel(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))


def trace_identity_residuals(m: OctonionicMatrix, x: float, y: float) -> dict[str, float]:
    """Scaled residuals of the component-trace and charpoly-trace identities.

    Checks, for resolvents U at off-spectrum shifts x != y:

    * ``full-trace``: trace U(x) == 8 trace U(x)^0;
    * ``transpose-pairing``: sum_ij U(x)^F_ij U(y)^F_ij ==
      sign(F,F) tr[U(x)^F U(y)^F] per component F;
    * ``product-trace``: tr[U(x) U(y)] == 8 sum_C sign(C,C) tr[U^C U^C];
    * ``dlog``: trace U(x) == -p'/p(x);
    * ``sq``: tr U(x)^2 == (p'/p)^2 - p''/p;
    * ``cross``: tr[U(x)U(y)] == (p'/p(x) - p'/p(y)) / (y - x).
    """
    rf = m.real_form()
    eigs = np.linalg.eigvalsh(rf)
    ux = resolvent(m, x)
    uy = resolvent(m, y)
    if ux.components is None or uy.components is None:
        raise NotSymmCompatible("resolvent components unavailable")
    ucx, ucy = ux.components, uy.components

    res: dict[str, float] = {}
    res["full-trace"] = _rel(ux.trace, 8.0 * float(np.trace(ucx[0])))

    worst = 0.0
    for f in range(8):
        lhs = float(np.sum(ucx[f] * ucy[f]))
        rhs = SIGN_TABLE[f, f] * float(np.trace(ucx[f] @ ucy[f]))
        worst = max(worst, _rel(lhs, rhs))
    res["transpose-pairing"] = worst

    cross_trace = float(np.trace(ux.dense @ uy.dense))
    comp_sum = 8.0 * sum(
        SIGN_TABLE[c, c] * float(np.trace(ucx[c] @ ucy[c])) for c in range(8)
    )
    res["product-trace"] = _rel(cross_trace, comp_sum)

    px = CharPolyEval.from_eigenvalues(eigs, x)
    py = CharPolyEval.from_eigenvalues(eigs, y)
    res["dlog"] = _rel(ux.trace, -px.dlog)
    res["sq"] = _rel(float(np.trace(ux.dense @ ux.dense)), px.curvature)
    res["cross"] = _rel(cross_trace, (px.dlog - py.dlog) / (y - x))
    return res


# ---------------------------------------------------------------------------
# log-determinant derivatives


def logdet_gradient(matrix: np.ndarray) -> np.ndarray:
    """Analytic d(log det)/dR_ij, i.e. the transposed inverse."""
    return np.linalg.inv(matrix).T


def logdet_hessian(matrix: np.ndarray) -> np.ndarray:
    """Analytic d^2(log det)/dR_ij dR_kl = -(R^-1)_jk (R^-1)_li."""
    inv = np.linalg.inv(matrix)
    return -np.einsum("jk,li->ijkl", inv, inv)


def _logdet(matrix: np.ndarray) -> float:
    # log|det|: the derivative formulas hold wherever det != 0, either sign
    return float(np.linalg.slogdet(matrix)[1])


def fd_logdet_gradient(matrix: np.ndarray, h: float = 1e-5) -> np.ndarray:
    n = matrix.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            up = matrix.copy(); up[i, j] += h
            dn = matrix.copy(); dn[i, j] -= h
            out[i, j] = (_logdet(up) - _logdet(dn)) / (2 * h)
    return out


def fd_logdet_hessian(matrix: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central differences of the analytic gradient.

    The pure double stencil on log det has a roundoff floor of eps/h^2
    (about 1e-6 relative at h = 1e-5), too coarse to certify a 1e-5
    tolerance; differencing the gradient, itself validated against pure
    log-det differences, keeps the noise at eps/h.
    """
    n = matrix.shape[0]
    out = np.empty((n, n, n, n))
    for k in range(n):
        for l in range(n):
            up = matrix.copy(); up[k, l] += h
            dn = matrix.copy(); dn[k, l] -= h
            out[:, :, k, l] = (logdet_gradient(up) - logdet_gradient(dn)) / (2 * h)
    return out


def check_logdet_derivatives(count: int = 100, n: int = 5, seed: int = 3,
                             h: float = 1e-5, tol: float = 1e-5,
                             cond_limit: float = 200.0) -> IdentityReport:
    """Central differences vs analytic log-det derivatives.

    Draws well-conditioned random matrices (redrawing above ``cond_limit``)
    and compares the full gradient and Hessian in relative Frobenius norm.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    cases = 0
    failures = 0
    worst = 0.0
    for _ in range(count):
        matrix = rng.standard_normal((n, n))
        tries = 0
        while np.linalg.cond(matrix) > cond_limit:
            matrix = rng.standard_normal((n, n))
            tries += 1
            if tries > 100:
                raise RuntimeError("could not draw a well-conditioned matrix")
        g_an = logdet_gradient(matrix)
        g_fd = fd_logdet_gradient(matrix, h)
        rel_g = float(np.linalg.norm(g_fd - g_an) / np.linalg.norm(g_an))
        h_an = logdet_hessian(matrix)
        h_fd = fd_logdet_hessian(matrix, h)
        rel_h = float(np.linalg.norm((h_fd - h_an).ravel()) / np.linalg.norm(h_an.ravel()))
        cases += 2
        failures += int(rel_g > tol) + int(rel_h > tol)
        worst = max(worst, rel_g, rel_h)
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("logdet-derivatives", cases, failures, worst, seed, elapsed)


# ---------------------------------------------------------------------------
# dimension-2 trace identities and their higher-dimension obstruction


def random_planar_matrix(rng: np.random.Generator, t: float = 1.0) -> OctonionicMatrix:
    """Random 2x2 symmetric octonionic matrix (scalar part symmetric, the
    seven others multiples of the antisymmetric unit)."""
    comps = np.zeros((8, 2, 2))
    m0 = np.zeros((2, 2))
    m0[0, 0], m0[1, 1] = rng.standard_normal(2) * np.sqrt(t)
    m0[0, 1] = m0[1, 0] = rng.standard_normal() * np.sqrt(t / 2)
    comps[0] = m0
    for a in range(1, 8):
        comps[a] = rng.standard_normal() * np.sqrt(t / 2) * ANTISYM_UNIT_2
    return OctonionicMatrix(comps)


def check_dim2_identities(trials: int = 1_000, seed: int = 4,
                          tol: float = 1e-10) -> IdentityReport:
    """Trace identities special to 2x2 matrices, on random structured draws.

    With ``A0`` the antisymmetric unit and U the resolvent components at two
    off-spectrum shifts, each draw checks, for every nonscalar component C:

    * tr(U(x)^C A0) tr(U(y)^C A0) == -2 tr(U(x)^C U(y)^C),
    * tr(U(x)^C A0 U(x)^C A0)     == -tr((U(x)^C)^2),
    * tr(U^0 A0 U^0 A0)           == tr((U^0)^2) - (tr U^0)^2,

    plus the scalar 2x2 identity tr(M^2) - (tr M)^2 == -2 det(M).
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    a0 = ANTISYM_UNIT_2
    cases = 0
    failures = 0
    worst = 0.0

    def record(lhs: float, rhs: float):
        nonlocal cases, failures, worst
        r = _rel(lhs, rhs)
        cases += 1
        failures += int(r > tol)
        worst = max(worst, r)

    for _ in range(trials):
        m = random_planar_matrix(rng)
        eigs = np.linalg.eigvalsh(m.real_form())
        x, y = off_spectrum_points(eigs, rng, 2)
        ux = resolvent(m, float(x)).components
        uy = resolvent(m, float(y)).components
        for c in range(1, 8):
            record(
                float(np.trace(ux[c] @ a0)) * float(np.trace(uy[c] @ a0)),
                -2.0 * float(np.trace(ux[c] @ uy[c])),
            )
            record(
                float(np.trace(ux[c] @ a0 @ ux[c] @ a0)),
                -float(np.trace(ux[c] @ ux[c])),
            )
        record(
            float(np.trace(ux[0] @ a0 @ ux[0] @ a0)),
            float(np.trace(ux[0] @ ux[0])) - float(np.trace(ux[0])) ** 2,
        )
        mm = rng.standard_normal((2, 2))
        record(float(np.trace(mm @ mm)) - float(np.trace(mm)) ** 2,
               -2.0 * float(np.linalg.det(mm)))
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("dim2-trace-identities", cases, failures, worst, seed, elapsed)


def dim3_counterexample(m0: np.ndarray | None = None,
                        a0: np.ndarray | None = None) -> float:
    """Residual of (M^0 A0)^2 + det(M^0) Id for a 3x3 instance.

    The relation (M^0 A0)^2 == -det(M^0) Id underpins the 2x2 identities and
    cannot hold for 3x3 symmetric M^0 (an odd-dimensional antisymmetric A0 is
    singular); the default instance shows a large residual.
    """
    if m0 is None:
        m0 = np.diag([1.0, 2.0, 3.0])
    if a0 is None:
        a0 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    prod = m0 @ a0
    return float(np.linalg.norm(prod @ prod + np.linalg.det(m0) * np.eye(3)))

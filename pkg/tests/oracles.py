"""Independent oracles for the test suite.

Everything here is deliberately built by a different route than the library
code it checks: quadruple sums from the raw entry-level covariance tensor,
moment ratios from quadrature, gap laws from a rejection sampler, and 2x2
spectra from the explicit quadratic formula.
"""

import numpy as np

from octodyson.algebra import CANONICAL_LABELS, SIGN_TABLE


def entry_gamma_tensor(kind: str, n: int) -> np.ndarray:
    """Full covariance tensor G[I, J, K, L] over real-form entries.

    Built directly from the block sign structure and the delta-form
    component rules; no reuse of the library's aggregated weights.
    """
    m = 8 * n
    g = np.zeros((m, m, m, m))
    for pa, a in enumerate(CANONICAL_LABELS):
        for pb, b in enumerate(CANONICAL_LABELS):
            f = a ^ b
            sf = SIGN_TABLE[f, b]
            for pc, c in enumerate(CANONICAL_LABELS):
                for pd, d in enumerate(CANONICAL_LABELS):
                    gg = c ^ d
                    sg = SIGN_TABLE[gg, d]
                    if kind == "a":
                        if f != gg:
                            continue
                        c1, c2 = 0.5, 0.5 * SIGN_TABLE[f, f]
                    else:
                        if f == 0 and gg == 0:
                            c1, c2 = 0.5, 0.5
                        elif f != 0 and gg != 0:
                            c1, c2 = 1.0 / 14.0, -1.0 / 14.0
                        else:
                            continue
                    s = float(sf * sg)
                    # first line: delta_ik delta_jl; second: delta_il delta_jk
                    for i in range(n):
                        for j in range(n):
                            g[pa * n + i, pb * n + j, pc * n + i, pd * n + j] += s * c1
                            g[pa * n + i, pb * n + j, pc * n + j, pd * n + i] += s * c2
    return g


def gamma_sum_bruteforce(ux: np.ndarray, uy: np.ndarray, g: np.ndarray) -> float:
    """sum_{ijkl} U(x)_ji U(y)_lk G[i,j,k,l]."""
    return float(np.einsum("ji,lk,ijkl->", ux, uy, g))


def generator_sum_bruteforce(ux: np.ndarray, g: np.ndarray) -> float:
    """-sum_{ijkl} U(x)_jk U(x)_li G[i,j,k,l] (zero-drift models)."""
    return -float(np.einsum("jk,li,ijkl->", ux, ux, g))


def moment_ratio_by_quadrature(beta: float) -> float:
    """E[s^4]/E[s^2]^2 under density proportional to s^beta exp(-s^2/2)."""
    from scipy.integrate import quad

    def moment(k: float) -> float:
        val, _ = quad(lambda s: s ** (beta + k) * np.exp(-s * s / 2.0), 0.0, np.inf)
        return val

    m0 = moment(0.0)
    return (moment(4.0) / m0) / (moment(2.0) / m0) ** 2


def rejection_gap_sampler(beta: float, size: int, rng: np.random.Generator,
                          s_max: float = 12.0) -> np.ndarray:
    """Draws from density proportional to s^beta exp(-s^2/2) on (0, s_max)."""
    mode = np.sqrt(beta)
    peak = mode ** beta * np.exp(-mode * mode / 2.0)
    out = np.empty(size)
    filled = 0
    while filled < size:
        batch = max(4 * (size - filled), 1024)
        s = rng.uniform(0.0, s_max, batch)
        u = rng.uniform(0.0, peak, batch)
        keep = s[u < s ** beta * np.exp(-s * s / 2.0)]
        take = min(len(keep), size - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def planar_distinct_eigenvalues(components: np.ndarray) -> tuple[float, float]:
    """The two distinct real-form eigenvalues of a 2x2 structured draw.

    For scalar part [[a, c], [c, b]] and antisymmetric parts z_A times the
    antisymmetric unit, the entry pair is (c -+ sum z_A w_A), and the two
    eigenvalues are (a+b)/2 -+ sqrt((a-b)^2/4 + c^2 + sum z_A^2).
    """
    m0 = components[0]
    a, b, c = m0[0, 0], m0[1, 1], m0[0, 1]
    q2 = c * c + sum(components[k][1, 0] ** 2 for k in range(1, 8))
    half = np.sqrt(0.25 * (a - b) ** 2 + q2)
    mid = 0.5 * (a + b)
    return mid - half, mid + half

"""The octonion algebra on a subset-labeled basis.

Basis elements are indexed by subsets ``A`` of ``{1, 2, 3}``, encoded as 3-bit
masks (bit ``i-1`` set iff ``i in A``).  The empty set (label 0) is the
identity element.  Products of basis elements follow

    w_A * w_B = sign(A, B) * w_{A xor B}

where ``sign`` is the hard-coded 8x8 table below and the xor of bitmasks is
the symmetric difference of the subsets.  A general element is a vector of 8
real coordinates on this basis, carrying the Euclidean norm.

All basis-level verification suites run in exact +-1 integer arithmetic;
only checks on real-coefficient elements use floating point.
"""

from __future__ import annotations

import itertools
import time

import numpy as np

from .reporting import IdentityReport

#: Canonical enumeration order of the 8 subset labels:
#: {}, {1}, {2}, {3}, {1,2}, {1,3}, {2,3}, {1,2,3}  (as bitmasks).
CANONICAL_LABELS = (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111)

#: Position of each bitmask label in the canonical order.
LABEL_POSITION = {label: pos for pos, label in enumerate(CANONICAL_LABELS)}

# Sign table with rows/columns in canonical label order.
_TABLE_ROWS = (
    (1, 1, 1, 1, 1, 1, 1, 1),
    (1, -1, 1, 1, -1, -1, 1, -1),
    (1, -1, -1, 1, 1, -1, -1, 1),
    (1, -1, -1, -1, 1, 1, 1, -1),
    (1, 1, -1, -1, -1, -1, 1, 1),
    (1, 1, 1, -1, 1, -1, -1, -1),
    (1, -1, 1, -1, -1, 1, -1, 1),
    (1, 1, -1, 1, -1, 1, -1, -1),
)


def _table_by_bitmask() -> np.ndarray:
    table = np.zeros((8, 8), dtype=np.int64)
    for row, a in enumerate(CANONICAL_LABELS):
        for col, b in enumerate(CANONICAL_LABELS):
            table[a, b] = _TABLE_ROWS[row][col]
    return table


#: 8x8 sign table indexed by bitmask labels; entries are -1 or +1.
SIGN_TABLE = _table_by_bitmask()
SIGN_TABLE.setflags(write=False)

#: sign(A, A) for each label; +1 only for the identity label.
CONJUGATION_SIGNS = np.diagonal(SIGN_TABLE).copy()
CONJUGATION_SIGNS.setflags(write=False)


def _structure_tensor(table: np.ndarray) -> np.ndarray:
    t = np.zeros((8, 8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            t[a, b, a ^ b] = table[a, b]
    return t


#: T[a, b, a^b] = sign(a, b); contraction of two coordinate vectors with this
#: tensor is the algebra product.
MUL_TENSOR = _structure_tensor(SIGN_TABLE)
MUL_TENSOR.setflags(write=False)

_MUL_TENSOR_F = MUL_TENSOR.astype(np.float64)
_MUL_TENSOR_F.setflags(write=False)


def subset_label(elements) -> int:
    """Bitmask label of a subset of {1, 2, 3}."""
    label = 0
    for e in elements:
        if e not in (1, 2, 3):
            raise ValueError(f"subset elements must be in {{1, 2, 3}}, got {e!r}")
        label |= 1 << (e - 1)
    return label


def label_elements(label: int) -> tuple[int, ...]:
    """Subset of {1, 2, 3} encoded by a bitmask label."""
    return tuple(i + 1 for i in range(3) if label >> i & 1)


def label_name(label: int) -> str:
    elems = label_elements(label)
    return "{" + ",".join(str(e) for e in elems) + "}"


def sign(a: int, b: int) -> int:
    """Table sign of the basis product ``w_a w_b``."""
    return int(SIGN_TABLE[a, b])


def basis_mul(sa: int, a: int, sb: int, b: int, table: np.ndarray | None = None) -> tuple[int, int]:
    """Exact product of signed basis elements: (sa*w_a)(sb*w_b)."""
    t = SIGN_TABLE if table is None else table
    return sa * sb * int(t[a, b]), a ^ b


def basis_element(label: int) -> np.ndarray:
    """Coordinate vector of a basis element."""
    x = np.zeros(8)
    x[label] = 1.0
    return x


def imaginary_sum() -> np.ndarray:
    """Sum of the seven non-identity basis elements; its square is -7."""
    x = np.ones(8)
    x[0] = 0.0
    return x


def mul(x, y) -> np.ndarray:
    """Algebra product of coordinate vectors.

    Parameters
    ----------
    x, y : array_like, shape (..., 8)
        Coordinates on the subset-labeled basis.  Leading axes broadcast, so
        batches of products evaluate in one call.

    Returns
    -------
    ndarray, shape (..., 8)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.einsum("...a,...b,abk->...k", x, y, _MUL_TENSOR_F)


def conj(x) -> np.ndarray:
    """Conjugate: negates every coordinate except the identity one."""
    return np.asarray(x, dtype=np.float64) * CONJUGATION_SIGNS


def norm(x) -> np.ndarray:
    """Euclidean norm of the coordinate vector(s)."""
    return np.linalg.norm(np.asarray(x, dtype=np.float64), axis=-1)


def inner(x, y) -> np.ndarray:
    """Euclidean inner product of coordinate vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.sum(x * y, axis=-1)


def tampered_table(a: int = 0b001, b: int = 0b010) -> np.ndarray:
    """Copy of the sign table with one cell flipped.

    Negative-control hook: suites run against this table must report
    failures; a clean pass would mean the checks are vacuous.
    """
    table = SIGN_TABLE.copy()
    table[a, b] = -table[a, b]
    return table


def nonassociativity_witness(table: np.ndarray | None = None) -> tuple[int, int, int] | None:
    """First basis triple with (w_a w_b) w_c != w_a (w_b w_c), or None."""
    for a, b, c in itertools.product(range(8), repeat=3):
        lhs = basis_mul(*basis_mul(1, a, 1, b, table), 1, c, table)
        rhs = basis_mul(1, a, *basis_mul(1, b, 1, c, table), table)
        if lhs != rhs:
            return a, b, c
    return None


def cyclic_sign_sum(table: np.ndarray | None = None) -> tuple[int, int]:
    """Sum of the 4-cycle sign product over distinct-neighbor label tuples.

    Enumerates all (a, b, c, d) with a != b, c != d, b != c, a != d and sums
    sign(b^c, c) * sign(c^d, d) * sign(d^a, a) * sign(a^b, b).  Returns
    (sum, tuple_count); the sum equals 392 = 2^3 * 7^2 for the genuine table.
    """
    t = SIGN_TABLE if table is None else table
    total = 0
    count = 0
    for a, b, c, d in itertools.product(range(8), repeat=4):
        if a != b and c != d and b != c and a != d:
            total += int(t[b ^ c, c] * t[c ^ d, d] * t[d ^ a, a] * t[a ^ b, b])
            count += 1
    return total, count


def check_table_structure(table: np.ndarray | None = None) -> IdentityReport:
    """Structural rules of the sign table, plus a cell-by-cell literal match.

    Rules: identity row and column are +1; the diagonal is -1 off the
    identity; off-diagonal, off-identity cells are antisymmetric.
    """
    t = SIGN_TABLE if table is None else table
    start = time.perf_counter()
    cases = 0
    failures = 0
    for b in range(8):
        cases += 2
        failures += t[0, b] != 1
        failures += t[b, 0] != 1
    cases += 1
    failures += t[0, 0] != 1
    for a in range(1, 8):
        cases += 1
        failures += t[a, a] != -1
    for a in range(1, 8):
        for b in range(1, 8):
            if a != b:
                cases += 1
                failures += t[a, b] != -t[b, a]
    # literal match against the canonical-order rows
    for row, a in enumerate(CANONICAL_LABELS):
        for col, b in enumerate(CANONICAL_LABELS):
            cases += 1
            failures += int(t[a, b]) != _TABLE_ROWS[row][col]
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("table-structure", cases, int(failures), 0.0, 0, elapsed)


def check_sign_identities(extended: bool = True, table: np.ndarray | None = None) -> IdentityReport:
    """Exhaustive composition identities of the sign table.

    Over all label tuples (exact integer arithmetic):

    1. sign(a^b, b) == sign(a, b) sign(b, b), all 64 pairs;
    2. sign(a^b, a) sign(a^b, b) == sign(a^b, a^b), all 64 pairs;
    3. sign(a^c, a) sign(b^c, b) == -sign(a^c, b) sign(b^c, a) for the 448
       triples with a != b;
    4. sign(b^c, c) sign(c^d, d) sign(d^a, a) sign(a^b, b) == sign(b^d, b^d)
       for the 512 quadruples with a^b^c^d == 0.

    With ``extended=True`` the 4-cycle sign sum over 2408 qualifying tuples
    is additionally checked against 392.
    """
    t = SIGN_TABLE if table is None else table
    start = time.perf_counter()
    cases = 0
    failures = 0
    for a, b in itertools.product(range(8), repeat=2):
        cases += 1
        failures += t[a ^ b, b] != t[a, b] * t[b, b]
        cases += 1
        failures += t[a ^ b, a] * t[a ^ b, b] != t[a ^ b, a ^ b]
    for a, b, c in itertools.product(range(8), repeat=3):
        if a ^ b:
            cases += 1
            failures += t[a ^ c, a] * t[b ^ c, b] != -t[a ^ c, b] * t[b ^ c, a]
    for a, b, c, d in itertools.product(range(8), repeat=4):
        if a ^ b ^ c ^ d == 0:
            cases += 1
            lhs = t[b ^ c, c] * t[c ^ d, d] * t[d ^ a, a] * t[a ^ b, b]
            failures += lhs != t[b ^ d, b ^ d]
    if extended:
        cases += 1
        total, _ = cyclic_sign_sum(t)
        failures += total != 392  # 2^3 * 7^2
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("sign-identities", cases, int(failures), 0.0, 0, elapsed)


_WEAK_ASSOC_FORMS = (
    # the four Moufang identities as (lhs, rhs) on symbols (x, y, z)
    ("z(x(zy))", "((zx)z)y"),
    ("((xz)y)z", "x((zy)z)"),
    ("(zx)(yz)", "(z(xy))z"),
    ("(zx)(yz)", "z((xy)z)"),
)


def _moufang_basis_case(a: int, b: int, c: int, table: np.ndarray) -> int:
    """Number of Moufang identities failing on the basis triple (a, b, c)."""
    x, y, z = (1, a), (1, b), (1, c)

    def m(p, q):
        return basis_mul(p[0], p[1], q[0], q[1], table)

    fails = 0
    fails += m(z, m(x, m(z, y))) != m(m(m(z, x), z), y)
    fails += m(m(m(x, z), y), z) != m(x, m(m(z, y), z))
    lhs = m(m(z, x), m(y, z))
    fails += lhs != m(m(z, m(x, y)), z)
    fails += lhs != m(z, m(m(x, y), z))
    return fails


def check_moufang(trials: int = 10_000, seed: int = 0, tol: float = 1e-12,
                  table: np.ndarray | None = None) -> IdentityReport:
    """Moufang and alternativity identities.

    Exact on every basis triple (512 triples x 4 identities) and on every
    basis pair for alternativity; then on ``trials`` standard-normal random
    elements in floating point with absolute tolerance ``tol``.
    """
    t = SIGN_TABLE if table is None else table
    start = time.perf_counter()
    cases = 0
    failures = 0
    for a, b, c in itertools.product(range(8), repeat=3):
        cases += 4
        failures += _moufang_basis_case(a, b, c, t)
    for a, b in itertools.product(range(8), repeat=2):
        x, y = (1, a), (1, b)

        def m(p, q):
            return basis_mul(p[0], p[1], q[0], q[1], t)

        cases += 2
        failures += m(m(x, x), y) != m(x, m(x, y))
        failures += m(m(y, x), x) != m(y, m(x, x))

    max_residual = 0.0
    if trials > 0:
        tensor = _MUL_TENSOR_F if table is None else _structure_tensor(t).astype(np.float64)

        def fmul(u, v):
            return np.einsum("...a,...b,abk->...k", u, v, tensor)

        rng = np.random.default_rng(seed)
        x = rng.standard_normal((trials, 8))
        y = rng.standard_normal((trials, 8))
        z = rng.standard_normal((trials, 8))
        pairs = [
            (fmul(z, fmul(x, fmul(z, y))), fmul(fmul(fmul(z, x), z), y)),
            (fmul(fmul(fmul(x, z), y), z), fmul(x, fmul(fmul(z, y), z))),
            (fmul(fmul(z, x), fmul(y, z)), fmul(fmul(z, fmul(x, y)), z)),
            (fmul(fmul(z, x), fmul(y, z)), fmul(z, fmul(fmul(x, y), z))),
            (fmul(fmul(x, x), y), fmul(x, fmul(x, y))),
            (fmul(fmul(y, x), x), fmul(y, fmul(x, x))),
        ]
        for lhs, rhs in pairs:
            res = np.max(np.abs(lhs - rhs), axis=-1)
            cases += trials
            failures += int(np.count_nonzero(res > tol))
            max_residual = max(max_residual, float(res.max()))
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("moufang-alternativity", cases, int(failures), max_residual, seed, elapsed)


def check_norm_multiplicativity(pairs: int = 100_000, seed: int = 1, tol: float = 1e-12,
                                table: np.ndarray | None = None) -> IdentityReport:
    """|xy| == |x||y| on random pairs, relative tolerance ``tol``."""
    start = time.perf_counter()
    tensor = _MUL_TENSOR_F if table is None else _structure_tensor(table).astype(np.float64)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((pairs, 8))
    y = rng.standard_normal((pairs, 8))
    xy = np.einsum("na,nb,abk->nk", x, y, tensor)
    prod = np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1)
    rel = np.abs(np.linalg.norm(xy, axis=1) - prod) / prod
    failures = int(np.count_nonzero(rel > tol))
    max_residual = float(rel.max()) if pairs else 0.0
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("norm-multiplicativity", pairs, failures, max_residual, seed, elapsed)


def check_orthogonal_translates(trials: int = 1_000, seed: int = 2, tol: float = 1e-12,
                                table: np.ndarray | None = None) -> IdentityReport:
    """<x w_a, x w_b> == 0 for a != b, on random unit elements x."""
    start = time.perf_counter()
    tensor = _MUL_TENSOR_F if table is None else _structure_tensor(table).astype(np.float64)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((trials, 8))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    # xt[n, c] = x_n * w_c over all 8 right-translates at once
    xt = np.einsum("na,ack->nck", x, tensor)  # (trials, 8, 8)
    gram = np.einsum("nck,ndk->ncd", xt, xt)
    iu = np.triu_indices(8, 1)
    res = np.abs(gram[:, iu[0], iu[1]])
    failures = int(np.count_nonzero(res > tol))
    cases = trials * len(iu[0])
    max_residual = float(res.max()) if cases else 0.0
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("orthogonal-translates", cases, failures, max_residual, seed, elapsed)


def check_imaginary_sum_square(table: np.ndarray | None = None) -> IdentityReport:
    """Exact check that the sum of the seven imaginary units squares to -7."""
    t = SIGN_TABLE if table is None else table
    start = time.perf_counter()
    tensor = _structure_tensor(t)  # integer tensor: exact arithmetic
    e = np.ones(8, dtype=np.int64)
    e[0] = 0
    square = np.einsum("a,b,abk->k", e, e, tensor)
    expected = np.zeros(8, dtype=np.int64)
    expected[0] = -7
    failures = int(not np.array_equal(square, expected))
    elapsed = int((time.perf_counter() - start) * 1000)
    return IdentityReport("imaginary-sum-square", 1, failures, 0.0, 0, elapsed)

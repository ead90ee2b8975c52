"""Modular arithmetic, prime-order group search and dense linear algebra over GF(p).

Matrices are plain lists of row lists holding Python ints; every function
takes the field modulus explicitly and returns fresh, fully reduced rows.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    DimensionError,
    NonInvertibleError,
    SearchExhaustedError,
    SingularMatrixError,
)

try:
    import gmpy2
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None

Matrix = list[list[int]]

_SMALL_PRIMES = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173,
]
# 40 fixed bases; the first 12 alone are a deterministic witness set below 2**64.
MR_BASES = tuple(_SMALL_PRIMES[:40])
_SIEVE_PRIMES = _SMALL_PRIMES + [p for p in range(179, 2000, 2) if all(p % d for d in range(3, int(p**0.5) + 1, 2))]

# Bounds for gen_group_params. A q-search window of 64*q_bits multipliers is
# roughly 90x the expected prime gap, so exhausting it means the bit lengths
# leave (almost) no room, e.g. q_bits == p_bits + 1 with an unlucky p.
MAX_P_CANDIDATES = 64
Q_WINDOW_PER_BIT = 64


@dataclass(frozen=True)
class GroupParams:
    """Order-p subgroup of GF(q)*: p | q-1 and g has multiplicative order p."""

    p: int
    q: int
    g: int

    def check(self) -> None:
        if not (is_probable_prime(self.p) and is_probable_prime(self.q)):
            raise ValueError("p and q must be prime")
        if (self.q - 1) % self.p:
            raise ValueError("p must divide q - 1")
        if self.g % self.q == 1 or mod_exp(self.g, self.p, self.q) != 1:
            raise ValueError("g must have order p modulo q")


def mod_exp(base: int, exponent: int, modulus: int) -> int:
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    if gmpy2 is not None:
        return int(gmpy2.powmod(base, exponent, modulus))
    return pow(base, exponent, modulus)


def mod_inv(a: int, modulus: int) -> int:
    a %= modulus
    if a == 0:
        raise NonInvertibleError(f"0 has no inverse modulo {modulus}")
    try:
        return pow(a, -1, modulus)
    except ValueError as exc:
        raise NonInvertibleError(f"{a} is not invertible modulo {modulus}") from exc


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin over the first 40 primes as fixed witnesses."""
    if n < 2:
        return False
    for sp in _SIEVE_PRIMES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MR_BASES:
        x = mod_exp(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_prime(bits: int, rng: random.Random) -> int:
    top = 1 << (bits - 1)
    while True:
        cand = rng.getrandbits(bits) | top | 1
        if is_probable_prime(cand):
            return cand


def gen_group_params(p_bits: int, q_bits: int, seed: int) -> GroupParams:
    """Deterministically find (p, q, g) with |p| = p_bits, |q| = q_bits.

    A p candidate is drawn first; q is searched as k*p + 1 for ascending k
    starting at the smallest multiplier that gives a q_bits-bit number. If the
    window is exhausted a fresh p is drawn. The generator is the first
    h**((q-1)/p) != 1 for h = 2, 3, ...
    """
    if not 2 <= p_bits < q_bits:
        raise ValueError("need 2 <= p_bits < q_bits")
    rng = random.Random(seed)
    q_lo, q_hi = 1 << (q_bits - 1), (1 << q_bits) - 1
    for _ in range(MAX_P_CANDIDATES):
        p = _random_prime(p_bits, rng)
        k_lo = -(-(q_lo - 1) // p)
        k_hi = min((q_hi - 1) // p, k_lo + Q_WINDOW_PER_BIT * q_bits)
        step = 1
        if p % 2 == 1:
            # k*p + 1 is even for odd k
            k_lo += k_lo % 2
            step = 2
        for k in range(k_lo, k_hi + 1, step):
            q = k * p + 1
            if is_probable_prime(q):
                return GroupParams(p, q, _subgroup_generator(p, q))
    raise SearchExhaustedError(
        f"no {q_bits}-bit q = k*p + 1 found for {MAX_P_CANDIDATES} candidate {p_bits}-bit primes"
    )


def _subgroup_generator(p: int, q: int) -> int:
    cofactor = (q - 1) // p
    h = 2
    while True:
        g = mod_exp(h, cofactor, q)
        if g != 1:
            return g
        h += 1


# ---------------------------------------------------------------------------
# matrices


def identity(size: int) -> Matrix:
    return [[int(i == j) for j in range(size)] for i in range(size)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def _shape(a: Matrix) -> tuple[int, int]:
    if not a or not a[0]:
        raise DimensionError("matrix must have positive dimensions")
    cols = len(a[0])
    if any(len(row) != cols for row in a):
        raise DimensionError("ragged matrix")
    return len(a), cols


def mat_reduce(a: Matrix, p: int) -> Matrix:
    return [[v % p for v in row] for row in a]


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    ar, ac = _shape(a)
    br, bc = _shape(b)
    if ac != br:
        raise DimensionError(f"cannot multiply {ar}x{ac} by {br}x{bc}")
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in cols] for row in a]


def vec_mat(v: list[int], a: Matrix, p: int) -> list[int]:
    """Row vector times matrix."""
    return mat_mul([list(v)], a, p)[0]


def rref(a: Matrix, p: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns.

    Pivots are chosen as the first nonzero entry at or below the current row.
    """
    rows, cols = _shape(a)
    m = mat_reduce(a, p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = mod_inv(m[r][c], p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def row_space_rank(a: Matrix, p: int) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a, p)[1])


def solve_left(k: Matrix, y: Matrix, p: int) -> Matrix:
    """Solve K @ X = Y for X when K is square and invertible."""
    kr, kc = _shape(k)
    yr, yc = _shape(y)
    if kr != kc:
        raise DimensionError("coefficient matrix must be square")
    if yr != kr:
        raise DimensionError(f"right-hand side has {yr} rows, expected {kr}")
    aug = [list(kr_) + list(yr_) for kr_, yr_ in zip(k, y)]
    reduced, pivots = rref(aug, p)
    if pivots[:kc] != list(range(kc)):
        raise SingularMatrixError(f"matrix rank {sum(c < kc for c in pivots)} < {kc}")
    return [row[kc:] for row in reduced]


def mat_inv(a: Matrix, p: int) -> Matrix:
    """Gauss-Jordan inverse over GF(p)."""
    size = _shape(a)[0]
    return solve_left(a, identity(size), p)

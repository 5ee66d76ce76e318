"""Exact and modular linear algebra over the integers and rationals.

Everything here works on plain nested lists of ``int`` / ``Fraction``.  The
modular routines use numpy ``int64`` arithmetic and therefore require the
modulus to stay below ``2**31`` so that products of residues fit in 63 bits.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

Matrix = list[list[int]]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = math.gcd(*ints)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis (primitive vectors) of the right kernel of ``rows``."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(primitive(v))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of the square system ``a x = b``; None if singular."""
    n = len(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def det(a: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free elimination (rational input allowed)."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    den = math.lcm(*(Fraction(x).denominator for row in a for x in row))
    m = [[int(Fraction(x) * den) for x in row] for row in a]
    return Fraction(_bareiss_det(m), den**n)


def _bareiss_det(m: Matrix) -> int:
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]] | None:
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [red[i][n:] for i in range(n)]


def rank_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix by fraction-free Gaussian elimination.

    Every intermediate entry is a minor of the input, so the division by the
    previous pivot is always exact.
    """
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, nrows):
            f = m[i][c]
            row_i = m[i]
            row_r = m[rank]
            for j in range(c + 1, ncols):
                row_i[j] = (row_i[j] * p - f * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_mod(rows: Sequence[Sequence[int]], prime: int) -> int:
    """Rank of an integer matrix reduced modulo ``prime`` (< 2**31)."""
    if prime >= 2**31:
        raise ValueError("modulus must be below 2**31 for int64 elimination")
    if not rows or not rows[0]:
        return 0
    a = np.array([[x % prime for x in r] for r in rows], dtype=np.int64)
    return rank_mod_array(a, prime)


def rank_mod_array(a: np.ndarray, prime: int) -> int:
    """Rank of an int64 array of residues in ``[0, prime)``; ``a`` is consumed."""
    nrows, ncols = a.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), prime - 2, prime)
        a[rank] = (a[rank] * inv) % prime
        below = a[rank + 1:, c].copy()
        if below.any():
            a[rank + 1:] = (a[rank + 1:] - (below[:, None] * a[rank][None, :]) % prime) % prime
        rank += 1
    return rank


# -- primes -----------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng: random.Random, lo: int = 2**30 + 1, hi: int = 2**31 - 1) -> int:
    while True:
        c = rng.randrange(lo, hi) | 1
        if is_prime(c):
            return c

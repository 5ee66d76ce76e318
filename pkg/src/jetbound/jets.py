"""Jet matrices of monomial point sets and their ranks.

For a finite ``S`` in N^n and a staircase ideal with standard-monomial set
``phi``, the jet matrix has rows indexed by ``lam`` in ``phi`` and columns by
``u`` in ``S``; the binomial form has entries ``prod_k C(u_k, lam_k)`` and the
power form ``prod_k u_k ** lam_k``.  Both have the same rank whenever ``phi``
is a lower set.  Full row rank means the monomials ``x**u`` separate the
jets prescribed by the ideal at the point ``(1, ..., 1)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from jetbound import linalg
from jetbound.geometry import IntVector, LatticePointSet

BINOMIAL = "binomial"
POWER = "power"

SAMPLE_BOUND = 2**20


class JetError(ValueError):
    pass


@dataclass(frozen=True)
class StaircaseIdeal:
    """Monomial ideal in ``x - 1`` stored through its standard monomials."""

    phi: tuple[IntVector, ...]
    generators: tuple[IntVector, ...]
    n: int

    def __len__(self) -> int:
        return len(self.phi)

    @property
    def colength(self) -> int:
        return len(self.phi)

    def is_lower_set(self) -> bool:
        phi = set(self.phi)
        for lam in self.phi:
            for k in range(self.n):
                if lam[k] > 0 and tuple(x - (i == k) for i, x in enumerate(lam)) not in phi:
                    return False
        return True

    @classmethod
    def from_phi(cls, phi: Iterable[Sequence[int]], n: int) -> "StaircaseIdeal":
        pts = tuple(sorted({tuple(int(x) for x in p) for p in phi}))
        ideal = cls(pts, _minimal_generators(pts, n), n)
        if (0,) * n not in set(pts) or not ideal.is_lower_set():
            raise JetError("standard monomials must form a lower set containing 0")
        return ideal


def _minimal_generators(phi: Sequence[IntVector], n: int) -> tuple[IntVector, ...]:
    inside = set(phi)
    gens = set()
    for lam in list(phi) + [(0,) * n]:
        for k in range(n):
            cand = tuple(x + (i == k) for i, x in enumerate(lam))
            if cand in inside:
                continue
            preds = (tuple(x - (i == j) for i, x in enumerate(cand)) for j in range(n) if cand[j] > 0)
            if all(p in inside for p in preds):
                gens.add(cand)
    return tuple(sorted(gens))


def phi_of_power(m: int, n: int) -> StaircaseIdeal:
    """Standard monomials of the (m+1)-st power of the maximal ideal."""
    if m < 0 or n < 1:
        raise JetError("need m >= 0 and n >= 1")
    phi = tuple(lam for lam in itertools.product(range(m + 1), repeat=n) if sum(lam) <= m)
    return StaircaseIdeal(tuple(sorted(phi)), _minimal_generators(phi, n), n)


def staircase_from_generators(gens: Iterable[Sequence[int]]) -> StaircaseIdeal:
    gens = sorted({tuple(int(x) for x in g) for g in gens})
    if not gens:
        raise JetError("need at least one generator")
    n = len(gens[0])
    if any(len(g) != n or min(g) < 0 for g in gens):
        raise JetError("generators must be nonnegative vectors of equal length")
    bounds = []
    for k in range(n):
        pure = [g[k] for g in gens if all(g[i] == 0 for i in range(n) if i != k)]
        if not pure:
            raise JetError(f"ideal is not primary to the maximal ideal: no pure power along axis {k}")
        bounds.append(min(pure))
    phi = [
        lam
        for lam in itertools.product(*(range(b) for b in bounds))
        if not any(all(l >= x for l, x in zip(lam, g)) for g in gens)
    ]
    return StaircaseIdeal(tuple(sorted(phi)), _minimal_generators(phi, n), n)


def collinear_collision_ideal(mbar: Sequence[int], n: int) -> StaircaseIdeal:
    """Flat limit of fat points of orders ``mbar`` colliding along the first axis.

    Points placed on a line parallel to the first axis give the ideal
    ``sum_lam' (x'-1)**lam' * prod_i (x_1 - p_i)**max(m_i + 1 - |lam'|, 0)``;
    letting the points collide keeps the colength, and the limit is monomial
    with row length ``sum_i max(m_i + 1 - |lam'|, 0)`` over each ``lam'``.
    """
    orders = [int(m) + 1 for m in mbar if m >= 0]
    top = max(orders, default=0)
    phi = []
    for rest in itertools.product(range(top), repeat=n - 1):
        length = sum(max(a - sum(rest), 0) for a in orders)
        phi.extend((i,) + rest for i in range(length))
    if not phi:
        raise JetError("all jet orders negative: ideal is the unit ideal")
    return StaircaseIdeal.from_phi(phi, n)


def fat_point_colength(mbar: Sequence[int], n: int) -> int:
    return sum(math.comb(m + n, n) for m in mbar if m >= 0)


# -- matrices ---------------------------------------------------------------


def _binom_vec(u: Sequence[int], lam: Sequence[int]) -> int:
    out = 1
    for a, b in zip(u, lam):
        if b > a:
            return 0
        out *= math.comb(a, b)
    return out


def _power_vec(u: Sequence[int], lam: Sequence[int]) -> int:
    out = 1
    for a, b in zip(u, lam):
        out *= a**b
    return out


@dataclass(frozen=True)
class JetMatrix:
    rows: tuple[IntVector, ...]
    cols: tuple[IntVector, ...]
    entries: tuple[tuple[int, ...], ...]
    form: str

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)


def build_jet_matrix(s: LatticePointSet, ideal: StaircaseIdeal, form: str = POWER) -> JetMatrix:
    if not s.is_nonnegative():
        raise JetError("point set has negative coordinates; normalize it first")
    if form not in (BINOMIAL, POWER):
        raise JetError(f"unknown form {form!r}")
    f = _binom_vec if form == BINOMIAL else _power_vec
    entries = tuple(tuple(f(u, lam) for u in s.points) for lam in ideal.phi)
    return JetMatrix(ideal.phi, s.points, entries, form)


def rank_modular(m: JetMatrix, prime: int) -> int:
    if prime <= 2**30:
        raise JetError("use a prime above 2**30")
    if not m.rows or not m.cols:
        return 0
    return linalg.rank_mod(m.entries, prime)


def rank_exact(m: JetMatrix) -> int:
    if not m.rows or not m.cols:
        return 0
    return linalg.rank_bareiss(m.entries)


@dataclass(frozen=True)
class RankResult:
    rank: int
    certified: bool


def screened_rank(entries: Sequence[Sequence[int]], certify: bool, rng: random.Random) -> RankResult:
    """Two random primes; exact elimination on disagreement or when asked."""
    if not entries or not entries[0]:
        return RankResult(0, True)
    if certify:
        return RankResult(linalg.rank_bareiss(entries), True)
    nrows = len(entries)
    r1 = linalg.rank_mod(entries, linalg.random_prime(rng))
    if r1 == nrows:
        # a nonzero maximal minor mod p is nonzero over Z
        return RankResult(r1, True)
    r2 = linalg.rank_mod(entries, linalg.random_prime(rng))
    if r1 == r2:
        return RankResult(r1, False)
    return RankResult(linalg.rank_bareiss(entries), True)


@dataclass(frozen=True)
class JetRankReport:
    full: bool
    rank: int
    rows: int
    certified: bool
    certificate: dict[IntVector, Fraction] | None = None

    def certificate_polynomial(self) -> str:
        if not self.certificate:
            return ""
        terms = []
        for lam, c in sorted(self.certificate.items()):
            mono = "*".join(f"u{i + 1}^{e}" if e > 1 else f"u{i + 1}" for i, e in enumerate(lam) if e)
            terms.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(terms)


def vanishing_polynomial(s: LatticePointSet, ideal: StaircaseIdeal) -> dict[IntVector, Fraction] | None:
    """A nonzero ``f`` in span{u**lam : lam in phi} vanishing on ``s``, if any."""
    power = build_jet_matrix(s, ideal, POWER)
    cols = [[power.entries[i][j] for i in range(len(ideal.phi))] for j in range(len(s.points))]
    ker = linalg.nullspace(cols, len(ideal.phi))
    if not ker:
        return None
    return {lam: Fraction(c) for lam, c in zip(ideal.phi, ker[0]) if c != 0}


def is_full_jet_rank(
    s: LatticePointSet,
    ideal: StaircaseIdeal,
    certify: bool = True,
    rng: random.Random | None = None,
    with_certificate: bool = True,
) -> JetRankReport:
    """Surjectivity of evaluation at ``1_n`` modulo the ideal, with a witness.

    When the rank is short, the rows of the power-form matrix are dependent
    and a dependency is a polynomial vanishing on every point of ``s``.
    """
    rng = rng or random.Random(0)
    m = build_jet_matrix(s, ideal, POWER)
    res = screened_rank(m.entries, certify, rng)
    full = res.rank == len(ideal.phi)
    cert = None
    if not full and with_certificate:
        cert = vanishing_polynomial(s, ideal)
    return JetRankReport(full, res.rank, len(ideal.phi), res.certified, cert)


# -- several points ---------------------------------------------------------


@dataclass(frozen=True)
class MultiPointJetMatrix:
    rows: tuple[tuple[int, IntVector], ...]
    cols: tuple[IntVector, ...]
    entries: tuple[tuple[Fraction, ...], ...]
    points: tuple[tuple[Fraction, ...], ...]


def _multipoint_rows(n: int, mbar: Sequence[int]) -> list[tuple[int, IntVector]]:
    rows = []
    for i, m in enumerate(mbar):
        if m >= 0:
            rows.extend((i, lam) for lam in phi_of_power(m, n).phi)
    return rows


def _check_points(points: Sequence[Sequence], n: int) -> None:
    if len({tuple(Fraction(x) for x in p) for p in points}) != len(points):
        raise JetError("points must be distinct")
    for p in points:
        if len(p) != n:
            raise JetError("point has wrong dimension")
        if any(Fraction(x) == 0 for x in p):
            raise JetError("points must lie in the torus (no zero coordinate)")


def build_multipoint_matrix(
    s: LatticePointSet, points: Sequence[Sequence], mbar: Sequence[int]
) -> MultiPointJetMatrix:
    """Rows ``(i, lam)`` hold the Taylor coefficient ``d^lam(x**u)/lam!`` at point i."""
    if len(points) != len(mbar):
        raise JetError("need one jet order per point")
    _check_points(points, s.n)
    pts = tuple(tuple(Fraction(x) for x in p) for p in points)
    rows = _multipoint_rows(s.n, mbar)
    entries = []
    for i, lam in rows:
        p = pts[i]
        row = []
        for u in s.points:
            c = _binom_vec(u, lam) if all(x >= 0 for x in u) else _gen_binom(u, lam)
            if c == 0:
                row.append(Fraction(0))
                continue
            val = Fraction(c)
            for pk, uk, lk in zip(p, u, lam):
                val *= pk ** (uk - lk)
            row.append(val)
        entries.append(tuple(row))
    return MultiPointJetMatrix(tuple(rows), s.points, tuple(entries), pts)


def _gen_binom(u: Sequence[int], lam: Sequence[int]) -> Fraction:
    """Generalized binomial coefficient, valid for negative exponents."""
    out = Fraction(1)
    for a, b in zip(u, lam):
        num = 1
        for t in range(b):
            num *= a - t
        out *= Fraction(num, math.factorial(b))
    return out


def multipoint_rank_mod(s: LatticePointSet, points: Sequence[Sequence[int]], mbar: Sequence[int], prime: int) -> int:
    """Rank of the multipoint matrix at integer points, built directly mod ``prime``."""
    rows = _multipoint_rows(s.n, mbar)
    if not rows or not s.points:
        return 0
    fact = [1]
    for t in range(1, max(sum(l) for _, l in rows) + 1):
        fact.append(fact[-1] * t % prime)
    inv_fact = [pow(f, prime - 2, prime) for f in fact]
    entries = []
    for i, lam in rows:
        p = points[i]
        row = []
        for u in s.points:
            val = 1
            for pk, uk, lk in zip(p, u, lam):
                falling = 1
                for t in range(lk):
                    falling = falling * (uk - t) % prime
                val = val * falling * inv_fact[lk] % prime * pow(pk, uk - lk, prime) % prime
            row.append(val)
        entries.append(row)
    return linalg.rank_mod(entries, prime)


def multipoint_rank(
    s: LatticePointSet,
    points: Sequence[Sequence[int]],
    mbar: Sequence[int],
    certify: bool,
    rng: random.Random,
) -> RankResult:
    nrows = fat_point_colength(mbar, s.n)
    if nrows == 0:
        return RankResult(0, True)
    if certify:
        m = build_multipoint_matrix(s, points, mbar)
        den = [math.lcm(*(x.denominator for x in row)) for row in m.entries]
        ints = [[int(x * d) for x in row] for row, d in zip(m.entries, den)]
        return RankResult(linalg.rank_bareiss(ints), True)
    r1 = multipoint_rank_mod(s, points, mbar, linalg.random_prime(rng))
    if r1 == nrows:
        return RankResult(r1, True)
    r2 = multipoint_rank_mod(s, points, mbar, linalg.random_prime(rng))
    if r1 == r2:
        return RankResult(r1, False)
    return multipoint_rank(s, points, mbar, True, rng)


def sample_points(n: int, r: int, rng: random.Random, bound: int = SAMPLE_BOUND) -> list[IntVector]:
    """``r`` distinct integer points with coordinates uniform in [1, bound]."""
    pts: list[IntVector] = []
    while len(pts) < r:
        p = tuple(rng.randint(1, bound) for _ in range(n))
        if p not in pts:
            pts.append(p)
    return pts

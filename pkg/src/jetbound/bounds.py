"""Lower and upper bounds for Seshadri-type constants of polytopes.

The lower bounds come from jet separation of the monomials in ``k * delta``
(one point: exact rank of the jet matrix at ``1_n``; several points: rank
of the multipoint matrix at random integer points).  The only upper bound
is the volume bound ``(n! vol(delta) / sum m_i**n) ** (1/n)``, kept as an
exact radicand so comparisons with rational lower bounds are exact.
"""

from __future__ import annotations

import hashlib
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from jetbound import jets
from jetbound.geometry import (
    LatticePointSet,
    RationalPolytope,
    dilate,
    lattice_points,
    normalize_to_nonneg,
    volume,
)

DEFAULT_K_BUDGET = 6
DEFAULT_TRIALS = 3


@dataclass(frozen=True)
class Weights:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("need at least one weight")
        if any(Fraction(v) <= 0 for v in self.values):
            raise ValueError("weights must be positive")

    @classmethod
    def of(cls, values: Iterable) -> "Weights":
        return cls(tuple(Fraction(v) for v in values))

    def __len__(self) -> int:
        return len(self.values)

    def norm(self, n: int) -> Fraction:
        return sum((m**n for m in self.values), Fraction(0))

    def repeated(self, d: int) -> "Weights":
        return Weights(self.values * d)

    def scaled(self, t) -> "Weights":
        return Weights(tuple(m * Fraction(t) for m in self.values))

    def __add__(self, other: "Weights") -> "Weights":
        return Weights(self.values + other.values)


@dataclass(frozen=True)
class RootBound:
    """The real number ``radicand ** (1/root)``."""

    radicand: Fraction
    root: int

    def __float__(self) -> float:
        return float(self.radicand) ** (1.0 / self.root)

    def rational_value(self) -> Fraction | None:
        """Exact value when the root is rational."""
        num = _iroot(self.radicand.numerator, self.root)
        den = _iroot(self.radicand.denominator, self.root)
        if num is None or den is None:
            return None
        return Fraction(num, den)

    def is_at_least(self, q: Fraction) -> bool:
        return q <= 0 or q**self.root <= self.radicand

    def equals(self, q: Fraction) -> bool:
        return q >= 0 and q**self.root == self.radicand

    def __str__(self) -> str:
        val = self.rational_value()
        if val is not None:
            return str(val)
        if self.root == 2:
            return f"sqrt({self.radicand})"
        return f"({self.radicand})^(1/{self.root})"


def _iroot(x: int, k: int) -> int | None:
    if x < 0:
        return None
    r = round(x ** (1.0 / k)) if x < 2**1000 else int(math.isqrt(x))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == x:
            return c
    lo, hi = 0, x + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < x:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == x else None


@dataclass(frozen=True)
class BoundResult:
    lower: Fraction
    upper: RootBound
    method: str
    k_used: int
    m_achieved: tuple[int, ...]
    certified: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def exact(self) -> bool:
        return self.upper.equals(self.lower)

    def sandwich_holds(self) -> bool:
        return self.upper.is_at_least(self.lower)


def cell_rng(*parts) -> random.Random:
    """Deterministic RNG for one computation cell."""
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _cached(cache, kind: str, parts: tuple, compute):
    if cache is None:
        return compute()
    key = cache.key(kind, parts)
    hit = cache.get(key)
    if hit is not None:
        return jets.RankResult(hit["rank"], hit["certified"])
    res = compute()
    cache.put(key, {"rank": res.rank, "certified": res.certified})
    return res


# -- one point --------------------------------------------------------------


def jet_order(
    s: LatticePointSet, certify: bool = False, seed: int = 0, cache=None, m_max: int | None = None
) -> tuple[int, bool]:
    """Largest m with full jet rank, and whether every rank used was exact."""
    if not s.points:
        raise ValueError("point set must be nonempty")
    s, _ = s.normalized()
    n = s.n
    best = -1
    all_exact = True
    m = 0
    while math.comb(m + n, n) <= len(s) and (m_max is None or m <= m_max):
        ideal = jets.phi_of_power(m, n)

        def compute(ideal=ideal, m=m):
            mat = jets.build_jet_matrix(s, ideal, jets.POWER)
            return jets.screened_rank(mat.entries, certify, cell_rng("jet", s.points, m, seed))

        res = _cached(cache, "jet", (s.points, m, jets.POWER, seed, certify), compute)
        if res.rank < len(ideal):
            all_exact &= res.certified
            break
        best = m
        m += 1
    return best, all_exact


def max_jet_order(
    s: LatticePointSet, certify: bool = False, seed: int = 0, cache=None, m_max: int | None = None
) -> int:
    """Largest m such that the monomials of ``s`` separate m-jets at a general point.

    The search ascends from m = 0 and stops at the first rank failure or once
    the number of conditions exceeds the number of points; -1 if m = 0 fails.
    """
    return jet_order(s, certify, seed, cache, m_max)[0]


def volume_upper_bound(delta: RationalPolytope, w: Weights) -> RootBound:
    n = delta.n
    return RootBound(math.factorial(n) * volume(delta) / w.norm(n), n)


def dilate_points(delta: RationalPolytope, k: int) -> LatticePointSet:
    return lattice_points(normalize_to_nonneg(dilate(delta, k))[0])


def _one_point_cell(args) -> tuple[int, int, bool]:
    delta, k, certify, seed, cache = args
    s = dilate_points(delta, k)
    if not s.points:
        return k, -1, True
    m, ok = jet_order(s, certify, seed, cache)
    return k, m, ok


def _sweep(cell, args: list, upper: RootBound, workers: int, to_ratio):
    """Run k-cells in order (early exit on an exact match) or in a pool."""
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(cell, args))
    out = []
    for a in args:
        res = cell(a)
        out.append(res)
        if upper.equals(to_ratio(res)):
            break
    return out


def seshadri_lower_bound(
    delta: RationalPolytope,
    k_budget: int = DEFAULT_K_BUDGET,
    certify: bool = False,
    seed: int = 0,
    cache=None,
    workers: int = 1,
) -> BoundResult:
    """k-sweep of ``max_jet_order(k delta) / k`` for one point with weight 1."""
    if k_budget < 1:
        raise ValueError("k_budget must be positive")
    n = delta.n
    if delta.dim < n:
        return BoundResult(Fraction(0), RootBound(Fraction(0), n), "degenerate", 0, (), True)
    upper = volume_upper_bound(delta, Weights.of([1]))
    args = [(delta, k, certify, seed, cache) for k in range(1, k_budget + 1)]
    results = _sweep(_one_point_cell, args, upper, workers, lambda r: Fraction(max(r[1], 0), r[0]))
    best, k_used, m_used = Fraction(0), 0, ()
    for k, m, _ in results:
        if Fraction(m, k) > best:
            best, k_used, m_used = Fraction(m, k), k, (m,)
    return BoundResult(best, upper, "jets", k_used, m_used, certify)


# -- several points ---------------------------------------------------------


@dataclass(frozen=True)
class MultiJetResult:
    t: Fraction
    jets: tuple[int, ...]
    certified: bool
    one_sided: bool = True


def _ceil_tuple(t: Fraction, w: Weights) -> tuple[int, ...]:
    return tuple(math.ceil(t * m) for m in w.values)


def _next_breakpoint(t: Fraction, w: Weights) -> Fraction:
    return min(Fraction(math.floor(t * m) + 1) / m for m in w.values)


def _prev_breakpoint(t: Fraction, w: Weights) -> Fraction:
    return max(Fraction(math.ceil(t * m) - 1) / m for m in w.values)


def multipoint_jet_lower(
    s: LatticePointSet,
    w: Weights,
    trials: int = DEFAULT_TRIALS,
    certify: bool = False,
    seed: int = 0,
    points: Sequence[Sequence[int]] | None = None,
    cache=None,
) -> MultiJetResult:
    """Largest grid value t such that ``ceil(t * w)``-jets are separated at sampled points.

    Candidates are the breakpoints ``j / w_i`` of the step function
    ``t -> ceil(t * w)``.  A failure at random points proves nothing, so the
    result is a lower bound only.  Supplying ``points`` fixes the evaluation
    points (one trial).
    """
    n = s.n
    r = len(w)
    if points is not None and len(points) != r:
        raise ValueError("need one point per weight")

    def separated(tup: tuple[int, ...]) -> tuple[bool, bool]:
        rows = jets.fat_point_colength(tup, n)
        if rows == 0:
            return True, True
        if rows > len(s):
            return False, True
        exact = True
        for trial in range(1 if points is not None else trials):
            rng = cell_rng("multi", s.points, tup, trial, seed)
            pts = list(points) if points is not None else jets.sample_points(n, r, rng)
            res = _cached(
                cache,
                "multi",
                (s.points, tup, tuple(map(tuple, pts)), seed, certify),
                lambda: jets.multipoint_rank(s, pts, tup, certify, rng),
            )
            exact &= res.certified
            if res.rank == rows:
                return True, exact
        return False, exact

    t = Fraction(0)
    ok, all_exact = separated(_ceil_tuple(t, w))
    if not ok:
        while not ok:
            t = _prev_breakpoint(t, w)
            ok, ex = separated(_ceil_tuple(t, w))
            all_exact &= ex
        return MultiJetResult(t, _ceil_tuple(t, w), all_exact and certify)
    while True:
        nxt = _next_breakpoint(t, w)
        tup = _ceil_tuple(nxt, w)
        if jets.fat_point_colength(tup, n) > len(s):
            break
        ok, ex = separated(tup)
        if not ok:
            all_exact &= ex
            break
        t = nxt
    return MultiJetResult(t, _ceil_tuple(t, w), all_exact and certify)


def _multi_cell(args) -> tuple[int, MultiJetResult | None]:
    delta, w, k, trials, certify, seed, cache = args
    s = dilate_points(delta, k)
    if not s.points:
        return k, None
    return k, multipoint_jet_lower(s, w, trials, certify, seed, cache=cache)


def multipoint_seshadri_lower(
    delta: RationalPolytope,
    w: Weights,
    k_budget: int = DEFAULT_K_BUDGET,
    trials: int = DEFAULT_TRIALS,
    certify: bool = False,
    seed: int = 0,
    cache=None,
    workers: int = 1,
) -> BoundResult:
    if k_budget < 1:
        raise ValueError("k_budget must be positive")
    n = delta.n
    if delta.dim < n:
        return BoundResult(Fraction(0), RootBound(Fraction(0), n), "degenerate", 0, (), True)
    upper = volume_upper_bound(delta, w)
    args = [(delta, w, k, trials, certify, seed, cache) for k in range(1, k_budget + 1)]
    results = _sweep(
        _multi_cell, args, upper, workers, lambda r: r[1].t / r[0] if r[1] is not None else Fraction(-1)
    )
    best, k_used, m_used = Fraction(0), 0, ()
    for k, res in results:
        if res is not None and res.t / k > best:
            best, k_used, m_used = res.t / k, k, res.jets
    notes = ("one-sided: failures at random points are not upper bounds",)
    return BoundResult(best, upper, "multipoint", k_used, m_used, certify, notes)

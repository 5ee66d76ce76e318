"""Lower bounds for several points: degenerations, lattice changes, subdivisions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from jetbound import jets, lp
from jetbound.bounds import (
    DEFAULT_K_BUDGET,
    DEFAULT_TRIALS,
    BoundResult,
    Weights,
    multipoint_seshadri_lower,
    volume_upper_bound,
)
from jetbound.geometry import (
    LatticeMap,
    LatticePointSet,
    RationalPolytope,
    Vector,
    intersection,
    is_face,
    lattice_points,
    preimage_under_lattice_map,
    volume,
)

TRUST_NOTE = "conditional on user-supplied flat family"


class MethodError(ValueError):
    pass


# -- degenerations of ideals ------------------------------------------------


@dataclass(frozen=True)
class DegenerationReport:
    separates: bool
    rank: int
    colength: int
    certificate: dict | None
    note: str = TRUST_NOTE


def degeneration_check(
    s: LatticePointSet, ideal: jets.StaircaseIdeal, mbar: Sequence[int], certify: bool = True
) -> DegenerationReport:
    """Rank test for the special fibre of a degeneration of fat points.

    Only the colength is checked against the fat-point scheme; flatness of the
    family is the caller's responsibility.
    """
    expected = jets.fat_point_colength(mbar, ideal.n)
    if ideal.colength != expected:
        raise MethodError(
            f"colength {ideal.colength} differs from {expected} for jet orders {tuple(mbar)}; "
            "the ideal cannot be a flat limit of these fat points"
        )
    s, _ = s.normalized()
    rep = jets.is_full_jet_rank(s, ideal, certify=certify)
    return DegenerationReport(rep.full, rep.rank, ideal.colength, rep.certificate)


# -- lattice changes --------------------------------------------------------


def lattice_change_bound(
    delta: RationalPolytope,
    lmap: LatticeMap,
    w: Weights,
    k_budget: int = DEFAULT_K_BUDGET,
    trials: int = DEFAULT_TRIALS,
    certify: bool = False,
    seed: int = 0,
    cache=None,
) -> BoundResult:
    """Bound for the weights ``w`` repeated ``degree(lmap)`` times on ``delta``."""
    pulled = preimage_under_lattice_map(delta, lmap)
    inner = multipoint_seshadri_lower(pulled, w, k_budget, trials, certify, seed, cache)
    d = lmap.degree
    upper = volume_upper_bound(delta, w.repeated(d))
    notes = inner.notes + (f"weights repeated {d} times; pulled-back polytope {pulled!r}",)
    return BoundResult(inner.lower, upper, "lattice-change", inner.k_used, inner.m_achieved, certify, notes)


def sublattice_maps(n: int, d: int) -> list[LatticeMap]:
    """All index-``d`` sublattices of Z^n, as maps in column Hermite normal form."""
    maps = []
    for diag in itertools.product(range(1, d + 1), repeat=n):
        if math.prod(diag) != d:
            continue
        slots = [(i, j) for i in range(n) for j in range(i)]
        for vals in itertools.product(*(range(diag[i]) for i, _ in slots)):
            mat = [[0] * n for _ in range(n)]
            for i in range(n):
                mat[i][i] = diag[i]
            for (i, j), v in zip(slots, vals):
                mat[i][j] = v
            maps.append(LatticeMap(tuple(tuple(r) for r in mat)))
    return maps


def search_lattice_changes(
    delta: RationalPolytope, w: Weights, degree: int, k_budget: int = 3, trials: int = DEFAULT_TRIALS, seed: int = 0
) -> tuple[LatticeMap, BoundResult] | None:
    best = None
    for lmap in sublattice_maps(delta.n, degree):
        res = lattice_change_bound(delta, lmap, w, k_budget, trials, seed=seed)
        if best is None or res.lower > best[1].lower:
            best = (lmap, res)
    return best


# -- regular decompositions -------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    parent: RationalPolytope
    cells: tuple[RationalPolytope, ...]

    def pairs(self):
        return itertools.combinations(range(len(self.cells)), 2)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violation: str | None = None
    cells: tuple[int, ...] = ()


def _integral(p: RationalPolytope) -> bool:
    return all(x.denominator == 1 for v in p.vertices for x in v)


def validate_decomposition(d: Decomposition) -> ValidationReport:
    n = d.parent.n
    if not _integral(d.parent) or d.parent.dim != n:
        return ValidationReport(False, "parent must be a full-dimensional integral polytope")
    for i, c in enumerate(d.cells):
        if c.n != n or c.dim != n:
            return ValidationReport(False, f"cell {i} is not full-dimensional", (i,))
        if not _integral(c):
            return ValidationReport(False, f"cell {i} has a non-integral vertex", (i,))
        if not all(d.parent.contains(v) for v in c.vertices):
            return ValidationReport(False, f"cell {i} is not contained in the parent", (i,))
    total = sum((volume(c) for c in d.cells), Fraction(0))
    for i, j in d.pairs():
        inter = intersection(d.cells[i], d.cells[j])
        if not (is_face(d.cells[i], inter) and is_face(d.cells[j], inter)):
            return ValidationReport(False, f"cells {i} and {j} meet outside a common face", (i, j))
    if total != volume(d.parent):
        return ValidationReport(False, f"cell volumes sum to {total}, parent has {volume(d.parent)}")
    return ValidationReport(True)


@dataclass(frozen=True)
class LiftingWitness:
    """Affine pieces ``a_i . x + b_i``, already multiplied by ``scale``."""

    slopes: tuple[tuple[Fraction, ...], ...]
    intercepts: tuple[Fraction, ...]
    scale: int

    def value(self, i: int, x: Sequence) -> Fraction:
        return sum((a * Fraction(c) for a, c in zip(self.slopes[i], x)), Fraction(0)) + self.intercepts[i]

    def scaled(self, t: int) -> "LiftingWitness":
        return LiftingWitness(
            tuple(tuple(a * t for a in s) for s in self.slopes),
            tuple(b * t for b in self.intercepts),
            self.scale * t,
        )


@dataclass(frozen=True)
class NonRegular:
    farkas: lp.Farkas
    n_equalities: int
    n_inequalities: int

    def summary(self) -> str:
        used = sum(1 for y in self.farkas.y_ge if y > 0)
        return (
            f"no lifting function: Farkas combination of {used} strict-convexity "
            f"constraints (out of {self.n_inequalities}) contradicts continuity"
        )


@dataclass
class _Adjacency:
    shared: dict[tuple[int, int], RationalPolytope | None] = field(default_factory=dict)

    def facet_pairs(self, n: int):
        return [p for p, f in self.shared.items() if f is not None and f.dim == n - 1]


def _adjacency(d: Decomposition) -> _Adjacency:
    adj = _Adjacency()
    for i, j in d.pairs():
        adj.shared[(i, j)] = intersection(d.cells[i], d.cells[j])
    return adj


def _lifting_system(d: Decomposition):
    n = d.parent.n
    width = n + 1
    nvars = width * len(d.cells)
    adj = _adjacency(d)

    def row(i: int, j: int, v: Vector) -> list[Fraction]:
        # coefficients of f_j(v) - f_i(v)
        r = [Fraction(0)] * nvars
        for k in range(n):
            r[j * width + k] += v[k]
            r[i * width + k] -= v[k]
        r[j * width + n] += 1
        r[i * width + n] -= 1
        return r

    a_eq, a_ge = [], []
    for (i, j), face in adj.shared.items():
        if face is not None:
            a_eq.extend(row(i, j, v) for v in face.vertices)
    for i, j in adj.facet_pairs(n):
        for src, dst in ((i, j), (j, i)):
            outside = [v for v in d.cells[dst].vertices if not d.cells[src].contains(v)]
            a_ge.extend(row(src, dst, v) for v in outside)
    return a_eq, [Fraction(0)] * len(a_eq), a_ge, [Fraction(1)] * len(a_ge), nvars


def lifting_function_exists(d: Decomposition) -> LiftingWitness | NonRegular:
    """Search for a strictly convex piecewise-affine integral-valued lifting.

    Strictness is imposed with margin 1, which loses nothing since the
    feasible set is a cone.  The rational solution is then multiplied by the
    lcm of the denominators of its values at the lattice points of the parent.
    """
    report = validate_decomposition(d)
    if not report.valid:
        raise MethodError(f"invalid decomposition: {report.violation}")
    n = d.parent.n
    a_eq, b_eq, a_ge, b_ge, nvars = _lifting_system(d)
    res = lp.solve_feasibility(a_eq, b_eq, a_ge, b_ge, nvars)
    if not res.feasible:
        return NonRegular(res.farkas, len(a_eq), len(a_ge))
    width = n + 1
    x = res.x
    raw = LiftingWitness(
        tuple(tuple(x[i * width: i * width + n]) for i in range(len(d.cells))),
        tuple(x[i * width + n] for i in range(len(d.cells))),
        1,
    )
    dens = [raw.value(_cell_of(d, u), u).denominator for u in lattice_points(d.parent).points]
    return raw.scaled(math.lcm(1, *dens))


def _cell_of(d: Decomposition, u) -> int:
    return next(i for i, c in enumerate(d.cells) if c.contains(u))


def verify_lifting_witness(d: Decomposition, w: LiftingWitness) -> tuple[bool, str | None]:
    """Re-check a witness from the geometry alone (no LP involved)."""
    n = d.parent.n
    if len(w.slopes) != len(d.cells) or len(w.intercepts) != len(d.cells) or w.scale < 1:
        return False, "witness shape does not match the decomposition"
    adj = _adjacency(d)
    for (i, j), face in adj.shared.items():
        if face is None:
            continue
        for u in list(lattice_points(face).points) + list(face.vertices):
            if w.value(i, u) != w.value(j, u):
                return False, f"cells {i} and {j} disagree at {tuple(map(str, u))}"
    for i, j in adj.facet_pairs(n):
        for src, dst in ((i, j), (j, i)):
            for v in d.cells[dst].vertices:
                if not d.cells[src].contains(v) and not w.value(dst, v) > w.value(src, v):
                    return False, f"not strictly convex across cells {src}, {dst}"
    for u in lattice_points(d.parent).points:
        for i, c in enumerate(d.cells):
            if c.contains(u) and w.value(i, u).denominator != 1:
                return False, f"non-integral value at {u}"
    return True, None


def decomposition_bound(
    delta: RationalPolytope,
    d: Decomposition,
    selected: Sequence[tuple[int, Weights]],
    k_budget: int = DEFAULT_K_BUDGET,
    trials: int = DEFAULT_TRIALS,
    certify: bool = False,
    seed: int = 0,
    cache=None,
    witness: LiftingWitness | None = None,
) -> BoundResult:
    """Minimum of the cell bounds, valid for the concatenated weights on ``delta``."""
    if not selected:
        raise MethodError("select at least one cell")
    if witness is None:
        witness = lifting_function_exists(d)
    if isinstance(witness, NonRegular):
        raise MethodError("decomposition has no lifting function: " + witness.summary())
    lowers = []
    ks = []
    for idx, w in selected:
        piece = intersection(d.cells[idx], delta)
        if piece is None or volume(piece) == 0:
            raise MethodError(f"cell {idx} meets delta in a set with empty interior")
        res = multipoint_seshadri_lower(piece, w, k_budget, trials, certify, seed, cache)
        lowers.append(res.lower)
        ks.append(res.k_used)
    total = selected[0][1]
    for _, w in selected[1:]:
        total = total + w
    upper = volume_upper_bound(delta, total)
    notes = tuple(f"cell {idx}: lower {lo}" for (idx, _), lo in zip(selected, lowers))
    return BoundResult(min(lowers), upper, "decomposition", max(ks), (), certify, notes)

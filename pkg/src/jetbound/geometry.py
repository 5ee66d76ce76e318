"""Exact rational polytopes and their lattice points.

Polytopes carry both a vertex list and an inequality description
``normal . x <= offset`` with integer normals and offsets.  Lower-dimensional
polytopes are allowed; their affine hull is cut out by pairs of opposite
inequalities.  No floating point is used anywhere in this module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from jetbound import linalg

MAX_DIM = 6

Vector = tuple[Fraction, ...]
IntVector = tuple[int, ...]
Halfspace = tuple[IntVector, int]


class GeometryError(ValueError):
    pass


def as_vector(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _integral_halfspace(normal: Sequence, offset) -> Halfspace:
    """Rescale ``normal . x <= offset`` to coprime integers."""
    vals = [Fraction(x) for x in normal] + [Fraction(offset)]
    prim = linalg.primitive(vals)
    return prim[:-1], prim[-1]


@dataclass(frozen=True)
class RationalPolytope:
    vertices: tuple[Vector, ...]
    halfspaces: tuple[Halfspace, ...]
    n: int
    dim: int

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.n

    def contains(self, x: Sequence) -> bool:
        return all(_dot(a, x) <= b for a, b in self.halfspaces)

    def equalities(self) -> list[Halfspace]:
        """Inequalities whose negation is also present (affine hull cuts)."""
        hs = set(self.halfspaces)
        return [(a, b) for a, b in self.halfspaces if (tuple(-x for x in a), -b) in hs]

    def facets(self) -> list[Halfspace]:
        eq = set(self.equalities())
        return [h for h in self.halfspaces if h not in eq]

    def tight(self, h: Halfspace) -> list[Vector]:
        a, b = h
        return [v for v in self.vertices if _dot(a, v) == b]

    def bounding_box(self) -> tuple[IntVector, IntVector]:
        lo = tuple(math.floor(min(v[i] for v in self.vertices)) for i in range(self.n))
        hi = tuple(math.ceil(max(v[i] for v in self.vertices)) for i in range(self.n))
        return lo, hi

    def same_set(self, other: "RationalPolytope") -> bool:
        return self.n == other.n and set(self.vertices) == set(other.vertices)

    def __repr__(self) -> str:
        vs = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"RationalPolytope(dim={self.dim}, n={self.n}, vertices=[{vs}])"


@dataclass(frozen=True)
class LatticePointSet:
    points: tuple[IntVector, ...]
    n: int

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], n: int | None = None) -> "LatticePointSet":
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if n is None:
            if not pts:
                raise GeometryError("cannot infer dimension of an empty point set")
            n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise GeometryError("points of mixed dimension")
        return cls(tuple(pts), n)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def shifted(self, u: Sequence[int]) -> "LatticePointSet":
        return LatticePointSet.of((tuple(x + y for x, y in zip(p, u)) for p in self.points), self.n)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for p in self.points for x in p)

    def normalized(self) -> tuple["LatticePointSet", IntVector]:
        """Translate so that every coordinate minimum is zero."""
        if not self.points:
            return self, (0,) * self.n
        shift = tuple(-min(p[i] for p in self.points) for i in range(self.n))
        return self.shifted(shift), shift

    def minkowski(self, other: "LatticePointSet") -> "LatticePointSet":
        return LatticePointSet.of(
            (tuple(x + y for x, y in zip(p, q)) for p in self.points for q in other.points), self.n
        )


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix acting on column vectors; column j is the image of e_j."""

    matrix: tuple[IntVector, ...]

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise GeometryError("lattice map matrix must be square")
        if linalg.det(self.matrix) == 0:
            raise GeometryError("lattice map is singular")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def degree(self) -> int:
        return abs(int(linalg.det(self.matrix)))

    def apply(self, x: Sequence) -> Vector:
        return tuple(Fraction(_dot(row, x)) for row in self.matrix)


def _affine_hull(pts: list[IntVector]) -> tuple[list[IntVector], list[IntVector]]:
    """Return (direction basis rows, integer normals of the affine hull)."""
    n = len(pts[0])
    base = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]
    red, _ = linalg.rref(diffs, n) if diffs else ([], [])
    directions = [linalg.primitive(r) for r in red]
    normals = linalg.nullspace(directions, n) if directions else [
        tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
    ]
    return directions, normals


def _affine_rank(pts: Sequence[Sequence]) -> int:
    if not pts:
        return -1
    base = pts[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in pts[1:]]
    if not diffs:
        return 0
    _, piv = linalg.rref(diffs, len(base))
    return len(piv)


def hull_to_halfspaces(vertices: Iterable[Sequence], max_dim: int = MAX_DIM) -> RationalPolytope:
    """Convex hull of finitely many rational points, with both descriptions.

    Facets are found by enumerating affinely independent subsets spanning a
    candidate supporting hyperplane inside the affine hull and keeping those
    with every point on one side.
    """
    pts_q = sorted({as_vector(v) for v in vertices})
    if not pts_q:
        raise GeometryError("need at least one vertex")
    n = len(pts_q[0])
    if any(len(p) != n for p in pts_q):
        raise GeometryError("vertices have mismatched dimensions")
    if n > max_dim:
        raise GeometryError(f"ambient dimension {n} exceeds limit {max_dim}")
    den = math.lcm(*(x.denominator for p in pts_q for x in p))
    pts = [tuple(int(x * den) for x in p) for p in pts_q]

    _, normals = _affine_hull(pts)
    d = n - len(normals)
    halfspaces: set[Halfspace] = set()
    for e in normals:
        c = _dot(e, pts[0])
        halfspaces.add(_integral_halfspace([x * den for x in e], c))
        halfspaces.add(_integral_halfspace([-x * den for x in e], -c))

    facets: set[Halfspace] = set()
    if d >= 1:
        seen: set[tuple[IntVector, int]] = set()
        for combo in itertools.combinations(range(len(pts)), d):
            q0 = pts[combo[0]]
            rows = list(normals) + [tuple(a - b for a, b in zip(pts[i], q0)) for i in combo[1:]]
            ker = linalg.nullspace(rows, n)
            if len(ker) != 1:
                continue
            a = ker[0]
            c = _dot(a, q0)
            if (a, c) in seen:
                continue
            seen.add((a, c))
            seen.add((tuple(-x for x in a), -c))
            vals = [_dot(a, p) for p in pts]
            if all(v <= c for v in vals):
                pass
            elif all(v >= c for v in vals):
                a, c = tuple(-x for x in a), -c
            else:
                continue
            facets.add(_integral_halfspace([x * den for x in a], c))
    halfspaces |= facets

    verts = []
    for pq in pts_q:
        tight = list(normals) + [a for a, b in facets if _dot(a, pq) == b]
        if tight and len(linalg.rref(tight, n)[1]) == n:
            verts.append(pq)
    return RationalPolytope(tuple(sorted(verts)), tuple(sorted(halfspaces)), n, d)


def from_halfspaces(halfspaces: Iterable[Halfspace], n: int) -> RationalPolytope | None:
    """Vertex enumeration of a bounded H-polytope; None when empty."""
    hs = list(dict.fromkeys((tuple(a), b) for a, b in halfspaces))
    pts = set()
    for combo in itertools.combinations(hs, n):
        sol = linalg.solve([a for a, _ in combo], [b for _, b in combo])
        if sol is None:
            continue
        if all(_dot(a, sol) <= b for a, b in hs):
            pts.add(tuple(sol))
    if not pts:
        return None
    return hull_to_halfspaces(pts)


def intersection(p: RationalPolytope, q: RationalPolytope) -> RationalPolytope | None:
    if p.n != q.n:
        raise GeometryError("dimension mismatch")
    return from_halfspaces(list(p.halfspaces) + list(q.halfspaces), p.n)


def lattice_points(p: RationalPolytope) -> LatticePointSet:
    """All integer points of ``p`` by a bounding-box scan with exact tests."""
    lo, hi = p.bounding_box()
    n = p.n
    normals = [a for a, _ in p.halfspaces]
    offsets = [b for _, b in p.halfspaces]
    big = max([abs(x) for a in normals for x in a] + [1]) * max([abs(x) for x in lo + hi] + [1]) * n
    if big < 2**40 and max(abs(b) for b in offsets) < 2**40:
        axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        a = np.array(normals, dtype=np.int64).reshape(-1, n)
        b = np.array(offsets, dtype=np.int64)
        ok = np.all(grid @ a.T <= b, axis=1)
        pts = [tuple(int(x) for x in row) for row in grid[ok]]
    else:
        pts = [x for x in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))) if p.contains(x)]
    return LatticePointSet.of(pts, n)


def dilate(p: RationalPolytope, t) -> RationalPolytope:
    t = Fraction(t)
    if t <= 0:
        raise GeometryError("dilation factor must be positive")
    verts = tuple(sorted(tuple(x * t for x in v) for v in p.vertices))
    hs = tuple(sorted(_integral_halfspace(a, b * t) for a, b in p.halfspaces))
    return RationalPolytope(verts, hs, p.n, p.dim)


def translate(p: RationalPolytope, u: Sequence) -> RationalPolytope:
    u = as_vector(u)
    if len(u) != p.n:
        raise GeometryError("translation vector has wrong dimension")
    verts = tuple(sorted(tuple(x + y for x, y in zip(v, u)) for v in p.vertices))
    hs = tuple(sorted(_integral_halfspace(a, b + _dot(a, u)) for a, b in p.halfspaces))
    return RationalPolytope(verts, hs, p.n, p.dim)


def normalize_to_nonneg(p: RationalPolytope) -> tuple[RationalPolytope, IntVector]:
    """Integer translation putting every coordinate minimum into [0, 1)."""
    shift = tuple(-math.floor(min(v[i] for v in p.vertices)) for i in range(p.n))
    return translate(p, shift), shift


def minkowski_sum(p: RationalPolytope, q: RationalPolytope) -> RationalPolytope:
    if p.n != q.n:
        raise GeometryError("dimension mismatch")
    return hull_to_halfspaces(tuple(x + y for x, y in zip(a, b)) for a in p.vertices for b in q.vertices)


def _face_triangulation(p: RationalPolytope, face: frozenset[Vector], dim: int) -> list[tuple[Vector, ...]]:
    """Pulling triangulation of a face given by its vertex set."""
    if dim == 0:
        return [tuple(face)]
    apex = min(face)
    simplices = []
    subfaces = set()
    for h in p.facets():
        sub = frozenset(v for v in face if v in set(p.tight(h)))
        if apex in sub or sub == face or len(sub) < dim:
            continue
        if _affine_rank(sorted(sub)) == dim - 1:
            subfaces.add(sub)
    for sub in subfaces:
        for s in _face_triangulation(p, sub, dim - 1):
            simplices.append((apex,) + s)
    return simplices


def triangulate(p: RationalPolytope) -> list[tuple[Vector, ...]]:
    return _face_triangulation(p, frozenset(p.vertices), p.dim)


def simplex_volume(s: Sequence[Vector]) -> Fraction:
    n = len(s) - 1
    edges = [[a - b for a, b in zip(v, s[0])] for v in s[1:]]
    return abs(linalg.det(edges)) / math.factorial(n)


def volume(p: RationalPolytope) -> Fraction:
    """Exact Euclidean volume; zero for lower-dimensional polytopes."""
    if p.dim < p.n:
        return Fraction(0)
    return sum((simplex_volume(s) for s in triangulate(p)), Fraction(0))


def preimage_under_lattice_map(p: RationalPolytope, m: LatticeMap) -> RationalPolytope:
    if m.n != p.n:
        raise GeometryError("dimension mismatch")
    inv = linalg.inverse(m.matrix)
    return hull_to_halfspaces(tuple(_dot(row, v) for row in inv) for v in p.vertices)


def is_face(p: RationalPolytope, f: RationalPolytope | None) -> bool:
    """Whether ``f`` (a subset of ``p``) is a face of ``p``; the empty set counts."""
    if f is None:
        return True
    if not all(p.contains(v) for v in f.vertices):
        return False
    tight = [h for h in p.halfspaces if all(_dot(h[0], v) == h[1] for v in f.vertices)]
    generated = {v for v in p.vertices if all(_dot(a, v) == b for a, b in tight)}
    return generated == set(f.vertices)


def unit_cube(n: int) -> RationalPolytope:
    return hull_to_halfspaces(itertools.product((0, 1), repeat=n))


def standard_simplex(n: int) -> RationalPolytope:
    pts = [(0,) * n] + [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return hull_to_halfspaces(pts)

"""Exact rational feasibility LP with Farkas certificates.

Solves ``A_eq x = b_eq, A_ge x >= b_ge`` over free rational variables with a
dense phase-one simplex tableau and Bland's rule.  On infeasibility it
returns multipliers ``y_eq`` (free) and ``y_ge >= 0`` with
``y_eq A_eq + y_ge A_ge = 0`` and ``y_eq b_eq + y_ge b_ge > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class Farkas:
    y_eq: tuple[Fraction, ...]
    y_ge: tuple[Fraction, ...]


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    x: tuple[Fraction, ...] | None = None
    farkas: Farkas | None = None


def check_feasible(a_eq, b_eq, a_ge, b_ge, x) -> bool:
    ok_eq = all(sum(Fraction(c) * v for c, v in zip(row, x)) == b for row, b in zip(a_eq, b_eq))
    ok_ge = all(sum(Fraction(c) * v for c, v in zip(row, x)) >= b for row, b in zip(a_ge, b_ge))
    return ok_eq and ok_ge


def check_farkas(a_eq, b_eq, a_ge, b_ge, cert: Farkas, nvars: int) -> bool:
    """Independent check that ``cert`` proves the system infeasible."""
    if any(y < 0 for y in cert.y_ge):
        return False
    combo = [Fraction(0)] * nvars
    for y, row in list(zip(cert.y_eq, a_eq)) + list(zip(cert.y_ge, a_ge)):
        for j, c in enumerate(row):
            combo[j] += y * c
    rhs = sum((y * b for y, b in zip(cert.y_eq, b_eq)), Fraction(0))
    rhs += sum((y * b for y, b in zip(cert.y_ge, b_ge)), Fraction(0))
    return all(c == 0 for c in combo) and rhs > 0


def solve_feasibility(
    a_eq: Sequence[Sequence], b_eq: Sequence, a_ge: Sequence[Sequence], b_ge: Sequence, nvars: int
) -> LPResult:
    rows = [[Fraction(c) for c in r] for r in a_eq] + [[Fraction(c) for c in r] for r in a_ge]
    rhs = [Fraction(b) for b in b_eq] + [Fraction(b) for b in b_ge]
    n_eq, m = len(a_eq), len(rows)
    if m == 0:
        return LPResult(True, tuple(Fraction(0) for _ in range(nvars)))

    # columns: x+ (nvars), x- (nvars), surplus (one per >= row), artificial (m)
    n_sur = m - n_eq
    ncols = 2 * nvars + n_sur + m
    art0 = 2 * nvars + n_sur
    sign = []
    tab = []
    for i, (r, b) in enumerate(zip(rows, rhs)):
        line = r + [-c for c in r] + [Fraction(0)] * n_sur + [Fraction(0)] * m
        if i >= n_eq:
            line[2 * nvars + i - n_eq] = Fraction(-1)
        s = -1 if b < 0 else 1
        sign.append(s)
        line = [c * s for c in line]
        line[art0 + i] = Fraction(1)
        tab.append(line + [b * s])
    basis = [art0 + i for i in range(m)]

    # reduced costs for phase one (minimize sum of artificials)
    cost = [Fraction(0)] * art0 + [Fraction(1)] * m + [Fraction(0)]
    red = cost[:]
    for i in range(m):
        red = [a - b for a, b in zip(red, tab[i])]

    while True:
        enter = next((j for j in range(ncols) if red[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            break  # unbounded below is impossible for a sum of nonnegatives
        piv = tab[leave][enter]
        tab[leave] = [c / piv for c in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        f = red[enter]
        red = [a - f * b for a, b in zip(red, tab[leave])]
        basis[leave] = enter

    objective = -red[-1]
    if objective == 0:
        z = [Fraction(0)] * ncols
        for i, j in enumerate(basis):
            z[j] = tab[i][-1]
        x = tuple(z[j] - z[nvars + j] for j in range(nvars))
        return LPResult(True, x)
    y = [(1 - red[art0 + i]) * sign[i] for i in range(m)]
    return LPResult(False, farkas=Farkas(tuple(y[:n_eq]), tuple(y[n_eq:])))

"""Exact rational linear programming (two-phase dense simplex, Bland's rule).

Also provides the weighted l1 norms built on it: the quotient norm modulo
an image subspace, the filling norm of a coboundary, and the subgradient
orthogonality certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .errors import InfeasibleError, UnboundedError

_ZERO = mpq(0)


@dataclass(frozen=True)
class RationalLP:
    """minimize c.x subject to A x = b, x_j >= 0 unless free[j]."""

    c: Sequence
    A: Sequence[Sequence]
    b: Sequence
    free: Sequence[bool] = field(default=())

    def __post_init__(self):
        n = len(self.c)
        if any(len(row) != n for row in self.A):
            raise ValueError("constraint rows must match the objective length")
        if len(self.A) != len(self.b):
            raise ValueError("A and b disagree on the number of constraints")
        if self.free and len(self.free) != n:
            raise ValueError("free mask must match the objective length")


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    if isinstance(v, (np.integer, int)):
        return mpq(int(v))
    if isinstance(v, float):
        return mpq(Fraction(v).numerator, Fraction(v).denominator)
    return mpq(v)


def _frac(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    """Rows [coeffs..., rhs] with an explicit basis; pivots use Bland's rule."""

    def __init__(self, rows: list[list[mpq]], basis: list[int]):
        self.rows = rows
        self.basis = basis

    def pivot(self, r: int, col: int, obj: list[mpq]) -> None:
        row = self.rows[r]
        pv = row[col]
        if pv != 1:
            row = [v / pv for v in row]
            self.rows[r] = row
        nz = [j for j, v in enumerate(row) if v != 0]
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[col]
                if f != 0:
                    for j in nz:
                        other[j] -= f * row[j]
        f = obj[col]
        if f != 0:
            for j in nz:
                obj[j] -= f * row[j]
        self.basis[r] = col

    def run(self, obj: list[mpq], allowed: int) -> None:
        """Minimize; obj holds reduced costs with -value in the last slot."""
        while True:
            col = next((j for j in range(allowed) if obj[j] < 0), None)
            if col is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise UnboundedError("objective is unbounded below")
            self.pivot(best[1], col, obj)


def _solve_standard(c: list[mpq], A: list[list[mpq]], b: list[mpq]) -> tuple[mpq, list[mpq]]:
    m, n = len(A), len(c)
    rows = []
    for i in range(m):
        sgn = -1 if b[i] < 0 else 1
        rows.append([sgn * v for v in A[i]] + [mpq(int(k == i)) for k in range(m)] + [sgn * b[i]])
    tab = _Tableau(rows, [n + i for i in range(m)])
    width = n + m
    # phase 1: minimize the sum of artificials
    obj = [_ZERO] * (width + 1)
    for j in range(n):
        obj[j] = -sum((r[j] for r in rows), _ZERO)
    obj[-1] = -sum((r[-1] for r in rows), _ZERO)
    tab.run(obj, width)
    if obj[-1] != 0:
        raise InfeasibleError("constraints are infeasible")
    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(len(tab.rows)):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                continue
            tab.pivot(i, col, obj)
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    tab.rows = [r[:n] + [r[-1]] for r in tab.rows]
    # phase 2
    obj = list(c) + [_ZERO]
    for i, bv in enumerate(tab.basis):
        f = obj[bv]
        if f != 0:
            row = tab.rows[i]
            obj = [o - f * v for o, v in zip(obj, row)]
    tab.run(obj, n)
    x = [_ZERO] * n
    for i, bv in enumerate(tab.basis):
        x[bv] = tab.rows[i][-1]
    return -obj[-1], x


def solve_lp(lp: RationalLP) -> LPResult:
    """Exact optimum and a deterministic optimizer of the LP."""
    free = list(lp.free) if lp.free else [False] * len(lp.c)
    cols = []  # (original index, sign)
    for j, f in enumerate(free):
        cols.append((j, 1))
        if f:
            cols.append((j, -1))
    c = [_q(lp.c[j]) * s for j, s in cols]
    A = [[_q(row[j]) * s for j, s in cols] for row in lp.A]
    b = [_q(v) for v in lp.b]
    value, xs = _solve_standard(c, A, b)
    x = [_ZERO] * len(lp.c)
    for (j, s), v in zip(cols, xs):
        x[j] += s * v
    return LPResult(_frac(value), tuple(_frac(v) for v in x))


def _int_rows(M) -> list[list[int]]:
    arr = np.asarray(M)
    if arr.ndim != 2:
        return []
    return [[int(v) for v in row] for row in arr.tolist()]


def weighted_l1(x: Sequence, weights: Sequence) -> Fraction:
    return sum((Fraction(w) * abs(Fraction(v)) for v, w in zip(x, weights)), Fraction(0))


@dataclass(frozen=True)
class QuotientNormProblem:
    """min over w of sum_tau weights[tau] * |x + B^T w|_tau."""

    x: Sequence
    B: np.ndarray
    weights: Sequence


def quotient_minimizer(x: Sequence, B, weights: Sequence) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Value and minimizing representative x + B^T w of the coset of x."""
    n = len(x)
    Bt = _int_rows(np.asarray(B).T) if np.asarray(B).size else [[] for _ in range(n)]
    r = len(Bt[0]) if Bt and Bt[0] else 0
    if r == 0:
        return weighted_l1(x, weights), tuple(Fraction(v) for v in x)
    # variables: p (n), q (n), w (r, free); p - q - B^T w = x
    c = [Fraction(wt) for wt in weights] * 2 + [0] * r
    A = []
    for t in range(n):
        row = [0] * (2 * n + r)
        row[t], row[n + t] = 1, -1
        for k in range(r):
            row[2 * n + k] = -Bt[t][k]
        A.append(row)
    res = solve_lp(RationalLP(c, A, [Fraction(v) for v in x], [False] * (2 * n) + [True] * r))
    rep = tuple(res.x[t] - res.x[n + t] for t in range(n))
    return res.value, rep


def quotient_norm(p: QuotientNormProblem | Sequence, B=None, weights=None) -> Fraction:
    """Weighted l1 distance from x to the column space of B^T (exact)."""
    if isinstance(p, QuotientNormProblem):
        x, B, weights = p.x, p.B, p.weights
    else:
        x = p
    if weights is None:
        weights = [1] * len(x)
    if any(Fraction(w) <= 0 for w in weights):
        raise ValueError("quotient norm needs strictly positive weights")
    return quotient_minimizer(x, B, weights)[0]


def fill_minimizer(y: Sequence, D, weights: Sequence) -> tuple[Fraction, tuple[Fraction, ...]]:
    """min sum weights*|x'| subject to D x' = y; raises InfeasibleError if y is not in Im D."""
    D = _int_rows(D)
    n = len(weights)
    c = [Fraction(w) for w in weights] * 2
    A = [row + [-v for v in row] for row in D]
    res = solve_lp(RationalLP(c, A, [Fraction(v) for v in y]))
    return res.value, tuple(res.x[t] - res.x[n + t] for t in range(n))


def fill_norm(y: Sequence, D, weights: Sequence) -> Fraction:
    return fill_minimizer(y, D, weights)[0]


@dataclass(frozen=True)
class Certificate:
    holds: bool
    witness: tuple[Fraction, ...] | None


def l1_orthogonality_certificate(x: Sequence, B, weights: Sequence | None = None) -> Certificate:
    """Search for a subgradient u of the weighted l1 norm at x with B u = 0.

    u must equal weights*sign(x) on the support of x and lie in
    [-weight, weight] elsewhere.  Feasibility means the coset minimum of
    x modulo Im B^T is attained at x itself.
    """
    xs = [Fraction(v) for v in x]
    n = len(xs)
    weights = [1] * n if weights is None else [Fraction(w) for w in weights]
    fixed = [weights[t] * (1 if v > 0 else -1) if v != 0 else None for t, v in enumerate(xs)]
    Bm = _int_rows(B) if np.asarray(B).size else []
    off = [t for t in range(n) if fixed[t] is None]
    if not Bm:
        return Certificate(True, tuple(f if f is not None else Fraction(0) for f in fixed))
    # u_t = v_t - w_t with 0 <= v_t <= 2 w_t off the support
    k = len(off)
    A, b = [], []
    for row in Bm:
        A.append([row[t] for t in off] + [0] * k)
        b.append(-sum((row[t] * fixed[t] for t in range(n) if fixed[t] is not None), Fraction(0))
                 + sum((row[t] * weights[t] for t in off), Fraction(0)))
    for i, t in enumerate(off):
        r = [0] * (2 * k)
        r[i], r[k + i] = 1, 1
        A.append(r)
        b.append(2 * weights[t])
    try:
        res = solve_lp(RationalLP([0] * (2 * k), A, b))
    except InfeasibleError:
        return Certificate(False, None)
    u = list(fixed)
    for i, t in enumerate(off):
        u[t] = res.x[i] - weights[t]
    return Certificate(True, tuple(u))


__all__ = [
    "RationalLP", "LPResult", "solve_lp", "QuotientNormProblem", "quotient_norm",
    "quotient_minimizer", "fill_norm", "fill_minimizer", "weighted_l1",
    "l1_orthogonality_certificate", "Certificate", "InfeasibleError", "UnboundedError",
]

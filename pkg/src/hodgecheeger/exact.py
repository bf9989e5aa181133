"""Exact integer/rational/GF(2) linear algebra on small dense matrices."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np


def _as_int_rows(M) -> list[list[int]]:
    arr = np.asarray(M)
    if arr.size == 0:
        return [[] for _ in range(arr.shape[0])] if arr.ndim == 2 else []
    return [[int(v) for v in row] for row in arr.tolist()]


def rank_q(M) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    rows = [r[:] for r in _as_int_rows(M)]
    if not rows or not rows[0]:
        return 0
    m, n = len(rows), len(rows[0])
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, m):
            r = rows[i]
            a = r[col]
            rows[i] = [(p[col] * r[j] - a * p[j]) // prev for j in range(n)]
        prev = p[col]
        rank += 1
        if rank == m:
            break
    return rank


def rank_gf2(M) -> int:
    """Rank over GF(2) using Python integers as bit rows."""
    arr = np.asarray(M)
    if arr.size == 0:
        return 0
    basis: dict[int, int] = {}
    for row in arr.tolist():
        v = 0
        for j, a in enumerate(row):
            if int(a) % 2:
                v |= 1 << j
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    rows = [[Fraction(v) for v in r] for r in (M if isinstance(M, list) else np.asarray(M).tolist())]
    if not rows:
        return [], []
    m, n = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        if pv != 1:
            rows[r] = [v / pv for v in rows[r]]
        pr = rows[r]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return rows[:r], pivots


def nullspace_q(M, n_cols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space over the rationals."""
    arr = np.asarray(M)
    n = arr.shape[1] if arr.ndim == 2 else (n_cols or 0)
    if arr.size == 0:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    rows, pivots = rref(arr.tolist())
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in zip(rows, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return basis


def solve_q(A, b: Sequence) -> list[Fraction] | None:
    """One rational solution of A t = b, or None when inconsistent."""
    arr = np.asarray(A)
    m = len(b)
    n = arr.shape[1] if arr.ndim == 2 else 0
    if n == 0:
        return [] if all(v == 0 for v in b) else None
    aug = [[Fraction(int(v)) for v in row] + [Fraction(b[i])] for i, row in enumerate(arr.tolist())]
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    t = [Fraction(0)] * n
    for r, pc in zip(rows, pivots):
        t[pc] = r[n]
    return t


def in_column_space(A, b: Sequence) -> bool:
    return solve_q(A, b) is not None


def primitive_int(v: Sequence) -> list[int]:
    """Scale a rational vector to coprime integers (sign preserved)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def normalize_sign(v: Sequence[int]) -> tuple[int, ...]:
    """Primitive integer vector whose first nonzero entry is positive."""
    ints = primitive_int(v)
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linprog

from hodgecheeger.errors import InfeasibleError, UnboundedError
from hodgecheeger.ratlp import (
    QuotientNormProblem, RationalLP, fill_norm, l1_orthogonality_certificate, quotient_minimizer, quotient_norm,
    solve_lp, weighted_l1,
)


@st.composite
def feasible_lps(draw):
    m, n = draw(st.integers(1, 4)), draw(st.integers(1, 6))
    A = draw(arrays(np.int64, (m, n), elements=st.integers(-3, 3)))
    x0 = draw(arrays(np.int64, n, elements=st.integers(0, 3)))
    c = draw(arrays(np.int64, n, elements=st.integers(0, 5)))  # c >= 0 keeps it bounded
    return c, A, A @ x0


@given(feasible_lps())
def test_matches_floating_point_oracle(lp):
    c, A, b = lp
    res = solve_lp(RationalLP(c.tolist(), A.tolist(), b.tolist()))
    ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0, None)] * len(c), method="highs")
    assert ref.status == 0
    assert abs(float(res.value) - ref.fun) <= 1e-7
    x = np.array([float(v) for v in res.x])
    assert np.all(x >= 0)
    assert [sum(Fraction(int(a)) * v for a, v in zip(row, res.x)) for row in A.tolist()] == [Fraction(int(v)) for v in b]
    assert sum(int(ci) * v for ci, v in zip(c, res.x)) == res.value


def test_free_variables_and_errors():
    # min x0 with x0 free and x0 = -3
    assert solve_lp(RationalLP([1], [[1]], [-3], [True])).value == -3
    with pytest.raises(InfeasibleError):
        solve_lp(RationalLP([1, 1], [[1, 1]], [-1]))
    with pytest.raises(UnboundedError):
        solve_lp(RationalLP([-1, 0], [[1, -1]], [0]))
    with pytest.raises(ValueError):
        RationalLP([1, 2], [[1]], [0])


def test_quotient_norm_small_example():
    # distance from (1, 0) to span{(1, 1)} in l1 is 1
    assert quotient_norm([1, 0], np.array([[1, 1]]), [1, 1]) == 1
    assert quotient_norm(QuotientNormProblem([2, -1, 0], np.array([[1, 1, 1]]), [1, 1, 1])) == 3
    with pytest.raises(ValueError):
        quotient_norm([1, 0], np.array([[1, 1]]), [0, 1])


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_quotient_norm_against_grid(x, w):
    # the coset is x + t (1, 1, 1); the optimum sits where t cancels one entry
    B = np.array([[1, 1, 1]])
    val, rep = quotient_minimizer(x, B, w)
    best = min(weighted_l1([v - a for v in x], w) for a in x)
    assert val == best
    assert weighted_l1(rep, w) == val
    diff = [Fraction(r) - v for r, v in zip(rep, x)]
    assert diff[0] == diff[1] == diff[2]


def test_fill_norm():
    D = np.array([[1, -1, 0], [0, 1, -1]])
    assert fill_norm([1, 0], D, [1, 1, 1]) == 1
    with pytest.raises(InfeasibleError):
        fill_norm([1], np.array([[0, 0]]), [1, 1])


def test_orthogonality_certificate():
    B = np.array([[1, 1, 1]])
    assert l1_orthogonality_certificate([1, -1, 0], B).holds
    # (1, 1, 0) is not coset-optimal: subtracting the constant 1 gives (0, 0, -1)
    assert not l1_orthogonality_certificate([1, 1, 0], B).holds

from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hodgecheeger.exact import in_column_space, normalize_sign, nullspace_q, primitive_int, rank_gf2, rank_q, solve_q

int_mats = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(-3, 3)))


@given(int_mats)
def test_rank_matches_numpy(M):
    assert rank_q(M) == np.linalg.matrix_rank(M.astype(float))


@given(int_mats)
def test_rank_gf2_matches_bruteforce(M):
    A = M % 2
    rows = [int("".join(str(int(v)) for v in r), 2) for r in A]
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    assert 2 ** rank_gf2(M) == len(span)


@given(int_mats)
def test_nullspace_is_kernel_of_full_dimension(M):
    basis = nullspace_q(M)
    assert len(basis) == M.shape[1] - rank_q(M)
    for v in basis:
        assert all(sum(int(a) * b for a, b in zip(row, v)) == 0 for row in M.tolist())


@given(int_mats, st.data())
def test_solve_consistent_systems(M, data):
    x = data.draw(st.lists(st.integers(-4, 4), min_size=M.shape[1], max_size=M.shape[1]))
    b = (M @ np.array(x)).tolist()
    t = solve_q(M, b)
    assert t is not None
    assert [sum(int(a) * c for a, c in zip(row, t)) for row in M.tolist()] == b
    assert in_column_space(M, b)


def test_inconsistent_system():
    assert solve_q(np.array([[1, 1], [1, 1]]), [1, 2]) is None


def test_primitive_and_sign():
    assert primitive_int([Fraction(1, 2), Fraction(-3, 4)]) == [2, -3]
    assert primitive_int([4, -6, 0]) == [2, -3, 0]
    assert normalize_sign([0, -2, 4]) == (0, 1, -2)

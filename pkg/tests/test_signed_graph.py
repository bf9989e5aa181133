import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgecheeger.errors import CapacityError, DegenerateDegreeError, Limits
from hodgecheeger.generators import generate
from hodgecheeger.complex import build_complex
from hodgecheeger.numlin import eigvals_symmetric
from hodgecheeger.signed_graph import (
    balance_by_enumeration, balance_decompose, beta_s, build_up_signed_graph, components, make_signed_graph,
    signed_cheeger, signed_cheeger_naive, signed_laplacian,
)

from strategies import signed_graphs


@given(signed_graphs())
def test_bfs_balance_matches_enumeration(G):
    fast = [(c.balanced, c.antibalanced) for c in balance_decompose(G)]
    assert fast == balance_by_enumeration(G)


@given(signed_graphs())
def test_balance_witness_switches_to_all_positive(G):
    for comp in balance_decompose(G):
        if comp.balanced:
            H = G.switched(comp.balance_switch)
            assert all(s == 1 for u, v, s in H.edges if u in comp.vertices)
        if comp.antibalanced:
            H = G.switched(comp.antibalance_switch)
            assert all(s == -1 for u, v, s in H.edges if u in comp.vertices)


@given(signed_graphs(min_n=2, max_n=6), st.integers(1, 2))
def test_signed_cheeger_matches_naive(G, k):
    if any(G.degrees == 0) or G.n < k:
        return
    assert signed_cheeger(G, k).value == signed_cheeger_naive(G, k)


@given(signed_graphs(min_n=2, max_n=7), st.data())
def test_switching_invariance(G, data):
    S = data.draw(st.lists(st.integers(0, G.n - 1), unique=True))
    H = G.switched(S)
    assert signed_cheeger(G).value == signed_cheeger(H).value
    if not any(G.degrees == 0):
        assert np.allclose(eigvals_symmetric(signed_laplacian(G)), eigvals_symmetric(signed_laplacian(H)), atol=1e-9)


@given(signed_graphs())
def test_spectrum_in_unit_interval_and_balance_lemma(G):
    if any(G.degrees == 0):
        with pytest.raises(DegenerateDegreeError):
            signed_laplacian(G)
        return
    w = eigvals_symmetric(signed_laplacian(G))
    assert w.min() >= -1e-9 and w.max() <= 2 + 1e-9
    comps = balance_decompose(G)
    # per component: balanced iff 0 is an eigenvalue of that block
    assert (np.sum(np.abs(w) <= 1e-8) == sum(c.balanced for c in comps))
    assert (np.sum(np.abs(w - 2) <= 1e-8) == sum(c.antibalanced for c in comps))


@given(signed_graphs(min_n=2, max_n=7))
def test_witness_attains_value(G):
    if any(G.degrees == 0):
        return
    res = signed_cheeger(G, 1)
    (V1, V2), = res.witness
    assert beta_s(G, V1, V2) == res.value


def test_threads_do_not_change_result():
    rng = np.random.default_rng(3)
    edges = [(u, v, int(rng.choice([-1, 1]))) for u in range(9) for v in range(u + 1, 9) if rng.random() < 0.5]
    G = make_signed_graph(9, edges)
    assert signed_cheeger(G, 1, threads=1) == signed_cheeger(G, 1, threads=8)
    assert signed_cheeger(G, 2, threads=1) == signed_cheeger(G, 2, threads=3)


def test_triangle_signs_and_faces():
    K = build_complex([(0, 1, 2)])
    G = build_up_signed_graph(K, 1)
    # faces (0,1), (0,2), (1,2) carry signs +1, -1, +1 in the triangle
    assert G.edges == ((0, 1, -1), (0, 2, 1), (1, 2, -1))
    assert build_up_signed_graph(K, 1, opposite=True) == G.negated()
    assert components(G) == [[0, 1, 2]]


def test_capacity_limit():
    G = make_signed_graph(5, [(i, i + 1, 1) for i in range(4)])
    with pytest.raises(CapacityError):
        signed_cheeger(G, 1, Limits(signed_k1=4))


def test_bad_edges():
    with pytest.raises(ValueError):
        make_signed_graph(2, [(0, 1, 2)])
    with pytest.raises(ValueError):
        make_signed_graph(2, [(0, 1, 1), (1, 0, 1)])
    with pytest.raises(ValueError):
        beta_s(make_signed_graph(2, [(0, 1, 1)]), [], [])


def test_balance_lemma_on_octahedron_edges():
    K = generate("octahedron").complex
    G = build_up_signed_graph(K, 1)
    w = eigvals_symmetric(signed_laplacian(G))
    bal = all(c.balanced for c in balance_decompose(G))
    assert bal == bool(np.any(np.abs(w) <= 1e-8))

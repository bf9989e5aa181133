import numpy as np
import pytest
from hypothesis import given

from hodgecheeger.complex import betti_numbers, boundary_array, build_complex
from hodgecheeger.errors import DegenerateDegreeError, DimensionError
from hodgecheeger.generators import generate
from hodgecheeger.laplacians import (
    LaplacianSpec, assemble_laplacian, degree_weighted_rayleigh, first_nontrivial_index, spectral_report, spectrum,
    verify_eckmann, verify_hodge_union, verify_up_down_duality, within_interval,
)
from hodgecheeger.numlin import eigen_symmetric

from strategies import small_complexes


@given(small_complexes())
def test_eckmann_on_random_complexes(K):
    assert verify_eckmann(K).passed


@given(small_complexes())
def test_up_down_duality_and_union(K):
    for d in range(K.dim):
        assert verify_up_down_duality(K, d).passed
    for d in range(K.dim + 1):
        assert verify_hodge_union(K, d).passed


@given(small_complexes(min_facets=2))
def test_normalized_up_spectrum_range(K):
    for d in range(K.dim):
        if np.any(K.degrees(d) == 0):
            with pytest.raises(DegenerateDegreeError):
                spectrum(K, LaplacianSpec(d, "up", normalized=True))
            continue
        w = spectrum(K, LaplacianSpec(d, "up", normalized=True))
        assert within_interval(w, d + 2)
        # number of zeros is n - rank B_{d+1}
        zeros = int(np.sum(np.abs(w) <= 1e-8))
        assert zeros == K.count(d) - np.linalg.matrix_rank(boundary_array(K, d + 1))


def test_known_spectra():
    # boundary of the tetrahedron: L_0 = 4I - J, eigenvalues 0, 4, 4, 4
    K = generate("boundary_simplex:3").complex
    assert np.allclose(spectrum(K, LaplacianSpec(0, "up")), [0, 4, 4, 4])
    rep = spectral_report(K, LaplacianSpec(1, "full"))
    assert rep.zero_multiplicity == 0 and rep.I_d == 4
    assert first_nontrivial_index(K, 0) == 2


def test_normalized_operator_is_similar_to_weighted_quotient():
    K = generate("octahedron").complex
    L = assemble_laplacian(K, LaplacianSpec(1, "up", normalized=True))
    dec = eigen_symmetric(L)
    deg = K.degrees(1).astype(float)
    for j in range(len(deg)):
        f = dec.eigenvectors[:, j] / np.sqrt(deg)
        assert abs(degree_weighted_rayleigh(K, 1, f) - dec.eigenvalues[j]) <= 1e-9


def test_torus_and_projective_plane_betti():
    T = generate("torus7").complex
    assert verify_eckmann(T).passed
    rep = spectral_report(T, LaplacianSpec(1, "full"))
    assert rep.zero_multiplicity == betti_numbers(T)[1] == 2


def test_errors():
    K = build_complex([(0, 1)])
    with pytest.raises(DimensionError):
        assemble_laplacian(K, LaplacianSpec(3))
    with pytest.raises(ValueError):
        LaplacianSpec(0, "sideways")
    with pytest.raises(DimensionError):
        verify_up_down_duality(K, 1)

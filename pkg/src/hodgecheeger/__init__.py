"""Hodge Laplacian spectra and exact Cheeger constants of small simplicial complexes."""

from .cheeger import (
    CheegerReport, certify_d3, diameter_formula, h_down, h_k_sigma, h_sigma_d, h_sigma_d_bruteforce,
    h_sigma_d_filling, h_sigma_d_zexpander, z2_cheeger,
)
from .complex import SimplicialComplex, betti_numbers, build_complex, incidence_matrix, load_complex
from .errors import CapacityError, HodgeCheegerError, Limits, default_limits
from .generators import SUITE, generate
from .laplacians import LaplacianSpec, assemble_laplacian, spectral_report
from .numlin import eigen_symmetric
from .p_laplacian import PRayleighProblem, max_eig_p, p_rayleigh
from .signed_graph import build_up_signed_graph, signed_cheeger, signed_laplacian

__version__ = "0.1.0"

__all__ = [
    "CheegerReport", "certify_d3", "diameter_formula", "h_down", "h_k_sigma", "h_sigma_d", "h_sigma_d_bruteforce",
    "h_sigma_d_filling", "h_sigma_d_zexpander", "z2_cheeger", "SimplicialComplex", "betti_numbers", "build_complex",
    "incidence_matrix", "load_complex", "CapacityError", "HodgeCheegerError", "Limits", "default_limits", "SUITE",
    "generate", "LaplacianSpec", "assemble_laplacian", "spectral_report", "eigen_symmetric", "PRayleighProblem",
    "max_eig_p", "p_rayleigh", "build_up_signed_graph", "signed_cheeger", "signed_laplacian",
]

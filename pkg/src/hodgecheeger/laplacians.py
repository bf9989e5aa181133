"""Up, down and full Laplacians on cochains, their spectra and the Eckmann checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex, betti_numbers, boundary_array, boundary_rank
from .errors import DegenerateDegreeError, DimensionError
from .numlin import ZERO_TOL, eigen_symmetric, multiplicity_of, nonzero_part, same_multiset
from .reporting import VerificationReport, check

KINDS = ("up", "down", "full")


@dataclass(frozen=True)
class LaplacianSpec:
    dim: int
    kind: str = "up"
    normalized: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.dim < 0:
            raise DimensionError("Laplacian dimension must be >= 0")

    @property
    def label(self) -> str:
        norm = "normalized" if self.normalized else "unnormalized"
        return f"{self.kind}/{norm}/d={self.dim}"


def _up_block(K: SimplicialComplex, d: int, normalized: bool) -> np.ndarray:
    B = boundary_array(K, d + 1).astype(float)
    L = B @ B.T
    if normalized:
        deg = K.degrees(d)
        bad = np.flatnonzero(deg == 0)
        if bad.size:
            tau = K.simplices(d)[bad[0]]
            raise DegenerateDegreeError(f"simplex {tau} has up-degree 0; normalized Laplacian undefined", tau)
        s = 1.0 / np.sqrt(deg.astype(float))
        L = L * s[:, None] * s[None, :]
    return L


def _down_block(K: SimplicialComplex, d: int, normalized: bool) -> np.ndarray:
    B = boundary_array(K, d).astype(float)
    L = B.T @ B
    if normalized and d >= 1:
        # every d-simplex has exactly d+1 facets, so the down-degree is constant
        L = L / (d + 1)
    return L


def assemble_laplacian(K: SimplicialComplex, spec: LaplacianSpec) -> np.ndarray:
    """Symmetric matrix of the requested Laplacian on d-cochains.

    The normalized up operator is D^{-1/2} B_{d+1} B_{d+1}^T D^{-1/2}, D the
    up-degrees; it is similar to the degree-weighted operator and its
    Rayleigh quotient is |B_{d+1}^T f|^2 / sum deg |f|^2.
    """
    d = spec.dim
    if d > K.dim:
        raise DimensionError(f"dimension {d} exceeds complex dimension {K.dim}")
    n = K.count(d)
    L = np.zeros((n, n))
    if spec.kind in ("up", "full"):
        L = L + _up_block(K, d, spec.normalized)
    if spec.kind in ("down", "full"):
        L = L + _down_block(K, d, spec.normalized)
    return 0.5 * (L + L.T)


def first_nontrivial_index(K: SimplicialComplex, d: int) -> int:
    """I_d = rank(B_d) + 1 (with the augmentation at d = 0, so I_0 = 2)."""
    return boundary_rank(K, d, reduced=True) + 1


@dataclass(frozen=True)
class SpectralReport:
    spec: LaplacianSpec
    eigenvalues: np.ndarray
    zero_multiplicity: int
    I_d: int
    n: int

    def eigenvalue(self, i: int) -> float:
        """1-based access, lambda_i."""
        return float(self.eigenvalues[i - 1])

    def to_dict(self) -> dict:
        return {
            "dim": self.spec.dim,
            "kind": self.spec.kind,
            "normalized": self.spec.normalized,
            "n": self.n,
            "I_d": self.I_d,
            "zero_multiplicity": self.zero_multiplicity,
            "eigenvalues": [float(v) for v in self.eigenvalues],
        }


def spectrum(K: SimplicialComplex, spec: LaplacianSpec) -> np.ndarray:
    return eigen_symmetric(assemble_laplacian(K, spec)).eigenvalues


def spectral_report(K: SimplicialComplex, spec: LaplacianSpec) -> SpectralReport:
    w = spectrum(K, spec)
    return SpectralReport(spec, w, multiplicity_of(w, 0.0), first_nontrivial_index(K, spec.dim), K.count(spec.dim))


def verify_eckmann(K: SimplicialComplex) -> VerificationReport:
    """Zero-multiplicity of the full Laplacian against exact Betti numbers, every d."""
    report = VerificationReport("eckmann")
    betti = betti_numbers(K, "rationals")
    for d in range(K.dim + 1):
        zeros = multiplicity_of(spectrum(K, LaplacianSpec(d, "full")), 0.0)
        report.add(check(f"eckmann d={d}", zeros == betti[d], zeros, betti[d]))
    report.data["betti"] = betti
    return report


def verify_up_down_duality(K: SimplicialComplex, d: int) -> VerificationReport:
    """Nonzero spectra of L_d^up and L_{d+1}^down coincide."""
    if d + 1 > K.dim:
        raise DimensionError(f"need d+1 <= dim K, got d={d}, dim={K.dim}")
    report = VerificationReport(f"up-down duality d={d}")
    up = nonzero_part(spectrum(K, LaplacianSpec(d, "up")))
    down = nonzero_part(spectrum(K, LaplacianSpec(d + 1, "down")))
    report.add(check(f"nonzero spec L_{d}^up = nonzero spec L_{d + 1}^down", same_multiset(up, down),
                     up.tolist(), down.tolist()))
    return report


def verify_hodge_union(K: SimplicialComplex, d: int) -> VerificationReport:
    """Nonzero spectrum of L_d is the multiset union of the up and down parts."""
    report = VerificationReport(f"hodge union d={d}")
    full = nonzero_part(spectrum(K, LaplacianSpec(d, "full")))
    union = np.concatenate([nonzero_part(spectrum(K, LaplacianSpec(d, k))) for k in ("up", "down")])
    report.add(check(f"nonzero spec L_{d} = up + down", same_multiset(full, union), full.tolist(), sorted(union.tolist())))
    return report


def degree_weighted_rayleigh(K: SimplicialComplex, d: int, f) -> float:
    """|B_{d+1}^T f|_2^2 / sum deg |f|^2."""
    f = np.asarray(f, dtype=float)
    g = boundary_array(K, d + 1).T @ f
    return float(g @ g) / float(K.degrees(d) @ (f * f))


def within_interval(w, hi: float, tol: float = 1e-9) -> bool:
    w = np.asarray(w)
    return bool(np.all(w >= -tol) and np.all(w <= hi + tol))


__all__ = [
    "LaplacianSpec", "SpectralReport", "assemble_laplacian", "spectral_report", "spectrum",
    "first_nontrivial_index", "verify_eckmann", "verify_up_down_duality", "verify_hodge_union",
    "degree_weighted_rayleigh", "ZERO_TOL",
]

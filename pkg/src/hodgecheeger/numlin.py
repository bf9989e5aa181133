"""Dense symmetric eigensolver (cyclic Jacobi) and spectral helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericInputError

ZERO_TOL = 1e-8
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # columns, orthonormal
    sweeps: int = 0

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _rotation(app: float, aqq: float, apq: float) -> tuple[float, float]:
    # symmetric Schur decomposition of the 2x2 block
    tau = (aqq - app) / (2.0 * apq)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def _off_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def symmetrize(A) -> np.ndarray:
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericInputError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericInputError("matrix has non-finite entries")
    return 0.5 * (A + A.T)


def _sign_normalize(V: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    V = V.copy()
    for j in range(V.shape[1]):
        nz = np.flatnonzero(np.abs(V[:, j]) > tol)
        if nz.size and V[nz[0], j] < 0:
            V[:, j] = -V[:, j]
    return V


def _order(w: np.ndarray, V: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Sort ascending; inside clusters of equal eigenvalues order vectors lexicographically."""
    idx = np.argsort(w, kind="stable")
    w, V = w[idx], _sign_normalize(V[:, idx])
    out = []
    i = 0
    while i < len(w):
        j = i + 1
        while j < len(w) and w[j] - w[j - 1] <= tol:
            j += 1
        block = list(range(i, j))
        block.sort(key=lambda c: tuple(np.round(V[:, c], 9)))
        out.extend(block)
        i = j
    # values stay sorted; clusters are narrower than the residual tolerance
    return w, V[:, out]


def eigen_symmetric(A, tol: float = 1e-12, max_sweeps: int = 100) -> EigenDecomposition:
    """Full eigendecomposition by cyclic Jacobi rotations.

    Stops once the off-diagonal Frobenius norm is at most ``tol * ||A||_F``.
    """
    A = symmetrize(A)
    n = A.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)))
    V = np.eye(n)
    norm = float(np.linalg.norm(A))
    target = tol * norm
    negligible = 1e-18 * norm  # below this an entry cannot move any eigenvalue
    sweeps = 0
    while _off_norm(A) > target and sweeps < max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= negligible:
                    A[p, q] = A[q, p] = 0.0
                    continue
                c, s = _rotation(A[p, p], A[q, q], apq)
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    w = np.diag(A).copy()
    w, V = _order(w, V, 1e-11 * (1.0 + float(np.max(np.abs(w)))))
    return EigenDecomposition(w, V, sweeps)


def eigvals_symmetric(A) -> np.ndarray:
    return eigen_symmetric(A).eigenvalues


def multiplicity_of(dec, value: float, tol: float = ZERO_TOL) -> int:
    """Number of eigenvalues within ``tol`` of ``value``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = dec.eigenvalues if isinstance(dec, EigenDecomposition) else np.asarray(dec, dtype=float)
    return int(np.sum(np.abs(w - value) <= tol))


def nonzero_part(w, tol: float = ZERO_TOL) -> np.ndarray:
    w = np.sort(np.asarray(w, dtype=float))
    return w[np.abs(w) > tol]


def same_multiset(a, b, tol: float = ZERO_TOL) -> bool:
    a, b = np.sort(np.asarray(a, float)), np.sort(np.asarray(b, float))
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))


def residual(A, dec: EigenDecomposition) -> float:
    A = np.asarray(A, dtype=float)
    R = A @ dec.eigenvectors - dec.eigenvectors * dec.eigenvalues
    return float(np.max(np.abs(R))) if R.size else 0.0

"""p-Rayleigh quotients, extreme nonlinear eigenvalues and the p-family checks.

Optimization results are local; every inequality check uses an estimate
only in the direction where it is sound (a maximizer found by ascent is a
lower bound for the true maximum).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.optimize import minimize

from .cheeger import h_k_sigma, h_sigma_d, up_problem
from .complex import SimplicialComplex, boundary_array, reduced_boundary_array
from .errors import DimensionError, NumericInputError, PreconditionError
from .laplacians import LaplacianSpec, first_nontrivial_index, spectrum
from .numlin import eigen_symmetric
from .reporting import REPORT, Assertion, VerificationReport, check

DEFAULT_RESTARTS = 32
GRAD_TOL = 1e-10
MAX_ITER = 20000
STALL_WINDOW = 100
STALL_RTOL = 1e-9


@dataclass(frozen=True)
class PRayleighProblem:
    """Quotient |G f|_p^p / sum w |f|^p for the up or down operator on d-cochains."""

    complex: SimplicialComplex
    dim: int
    p: float
    direction: str = "up"
    normalized: bool = True

    def __post_init__(self):
        if not self.p >= 1:
            raise NumericInputError(f"p must be >= 1, got {self.p}")
        if self.direction not in ("up", "down"):
            raise ValueError(f"direction must be 'up' or 'down', got {self.direction!r}")
        K, d = self.complex, self.dim
        if self.direction == "up" and not 0 <= d <= K.dim:
            raise DimensionError(f"up quotient needs 0 <= d <= {K.dim}")
        if self.direction == "down" and not 1 <= d <= K.dim:
            raise DimensionError(f"down quotient needs 1 <= d <= {K.dim}")
        if self.direction == "up" and self.normalized and np.any(K.degrees(d) == 0):
            tau = K.simplices(d)[int(np.flatnonzero(K.degrees(d) == 0)[0])]
            raise PreconditionError(f"simplex {tau} has up-degree 0")

    @property
    def conjugate(self) -> float:
        return float("inf") if self.p == 1 else self.p / (self.p - 1)

    @property
    def operator(self) -> np.ndarray:
        if self.direction == "up":
            return boundary_array(self.complex, self.dim + 1).T.astype(float)
        return boundary_array(self.complex, self.dim).astype(float)

    @property
    def weights(self) -> np.ndarray:
        n = self.complex.count(self.dim)
        if not self.normalized:
            return np.ones(n)
        if self.direction == "up":
            return self.complex.degrees(self.dim).astype(float)
        return np.full(n, float(self.dim + 1))


@dataclass(frozen=True)
class ExtremeEigenEstimate:
    value: float
    argument: np.ndarray
    restarts: int
    converged: bool

    def to_dict(self) -> dict:
        return {"value": self.value, "argument": self.argument.tolist(), "restarts": self.restarts,
                "converged": self.converged}


def _signed_power(v: np.ndarray, q: float) -> np.ndarray:
    """|v|^q sign(v), continuous at 0 for q > 0."""
    return np.sign(v) * np.abs(v) ** q


def p_rayleigh(prob: PRayleighProblem, f, G: np.ndarray | None = None, w: np.ndarray | None = None) -> float:
    f = np.asarray(f, dtype=float)
    if not np.any(f):
        raise NumericInputError("p-Rayleigh quotient of the zero cochain")
    G = prob.operator if G is None else G
    w = prob.weights if w is None else w
    p = prob.p
    return float(np.sum(np.abs(G @ f) ** p) / np.sum(w * np.abs(f) ** p))


def p_rayleigh_gradient(prob: PRayleighProblem, f, G: np.ndarray | None = None, w: np.ndarray | None = None) -> np.ndarray:
    """(grad N - R grad D) / D with N = |G f|_p^p and D = sum w |f|^p."""
    f = np.asarray(f, dtype=float)
    G = prob.operator if G is None else G
    w = prob.weights if w is None else w
    p = prob.p
    g = G @ f
    N = np.sum(np.abs(g) ** p)
    D = np.sum(w * np.abs(f) ** p)
    gN = p * (G.T @ _signed_power(g, p - 1))
    gD = p * w * _signed_power(f, p - 1)
    return (gN - (N / D) * gD) / D


def _normalize(f: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    return f / np.sum(w * np.abs(f) ** p) ** (1.0 / p)


def _ascend(prob: PRayleighProblem, G: np.ndarray, w: np.ndarray, f: np.ndarray) -> tuple[float, np.ndarray, bool]:
    """Projected gradient ascent on the unit (p, w)-sphere.

    Trial steps are Barzilai-Borwein lengths, accepted by Armijo backtracking.
    """
    p = prob.p
    f = _normalize(f, w, p)
    R = p_rayleigh(prob, f, G, w)
    grad = p_rayleigh_gradient(prob, f, G, w)
    t = 1.0
    history = [R]
    for _ in range(MAX_ITER):
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= GRAD_TOL:
            return R, f, True
        if len(history) > STALL_WINDOW and R - history[-STALL_WINDOW] <= STALL_RTOL * max(1.0, abs(R)):
            return R, f, False  # value has stalled (nonsmooth maximizer); report as unconverged
        while True:
            cand = _normalize(f + t * grad, w, p)
            Rc = p_rayleigh(prob, cand, G, w)
            if Rc >= R + 1e-4 * t * gnorm * gnorm:
                break
            t *= 0.5
            if t < 1e-20:
                return R, f, gnorm <= 1e-6
        gc = p_rayleigh_gradient(prob, cand, G, w)
        s, y = cand - f, gc - grad
        sy = abs(float(s @ y))
        t = float(s @ s) / sy if sy > 0 else 1.0
        f, R, grad = cand, Rc, gc
        history.append(R)
    return R, f, False


def max_eig_p(prob: PRayleighProblem, restarts: int = DEFAULT_RESTARTS, seed: int = 0, threads: int = 1) -> ExtremeEigenEstimate:
    """Largest p-Rayleigh value found by seeded multi-start ascent (a lower bound for the maximum)."""
    if not 1 < prob.p < float("inf"):
        raise NumericInputError("max_eig_p needs 1 < p < inf")
    G, w = prob.operator, prob.weights
    n = len(w)
    starts = [np.random.default_rng(s).standard_normal(n) for s in np.random.SeedSequence(seed).spawn(restarts)]
    run = lambda f0: _ascend(prob, G, w, f0)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(f0) for f0 in starts]
    # best value, ties to the lowest restart index
    i = min(range(len(results)), key=lambda j: (-results[j][0], j))
    R, f, conv = results[i]
    return ExtremeEigenEstimate(R, f, restarts, bool(conv))


# ---------------------------------------------------------------------------
# claim constants


def claim_ratio(x, p: float) -> float:
    """(k^{p-1} sum |x|^p - |sum x|^p) / sum_{i<j} |x_i - x_j|^p."""
    x = np.asarray(x, dtype=float)
    k = len(x)
    diff = np.abs(x[:, None] - x[None, :])[np.triu_indices(k, 1)]
    den = np.sum(diff ** p)
    if den == 0:
        raise NumericInputError("claim ratio undefined for constant vectors")
    return float((k ** (p - 1) * np.sum(np.abs(x) ** p) - abs(np.sum(x)) ** p) / den)


def _spread_ok(x: np.ndarray) -> bool:
    # near-constant vectors lose all digits of the ratio to cancellation
    return bool(np.ptp(x) > 1e-2 * np.max(np.abs(x)))


def estimate_claim_constants(p: float, k: int, samples: int = 2000, seed: int = 0) -> tuple[float, float]:
    """Sampled (min, max) of the claim ratio over non-constant x in R^k.

    The search covers a deterministic integer lattice, seeded Gaussian
    samples and Nelder-Mead refinement from the best few candidates.  The
    result is an estimate, not a bound.
    """
    if not 1 < p <= 2 or k < 2:
        raise NumericInputError("need 1 < p <= 2 and k >= 2")
    L = 1
    while (2 * (L + 1) + 1) ** k <= 20000:
        L += 1
    pts = [np.array(v, dtype=float) for v in product(range(-L, L + 1), repeat=k) if len(set(v)) > 1]
    rng = np.random.default_rng(seed)
    pts += [x for x in rng.standard_normal((samples, k)) if _spread_ok(x)]
    vals = np.array([claim_ratio(x, p) for x in pts])
    lo, hi = float(vals.min()), float(vals.max())
    for sign, idxs in ((1.0, np.argsort(vals)[:5]), (-1.0, np.argsort(-vals)[:5])):
        obj = lambda x, sign=sign: sign * claim_ratio(x, p) if _spread_ok(x) else np.inf
        for i in idxs:
            res = minimize(obj, pts[i], method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
            if _spread_ok(res.x):
                v = claim_ratio(res.x, p)
                lo, hi = min(lo, v), max(hi, v)
    return lo, hi


def claim_constants_to_cheeger(m, M, p, d):
    """c = m 2^{p-1} / (p^p (d+1)^{p-1}) and C = 2^{p-1} M; exact when all inputs are exact."""
    if isinstance(m, Fraction) and p == 2:
        return m * 2 / (4 * (d + 1)), 2 * M
    return m * 2 ** (p - 1) / (p ** p * (d + 1) ** (p - 1)), 2 ** (p - 1) * M


# ---------------------------------------------------------------------------
# verifications


def verify_gap_p(K: SimplicialComplex, d: int, p: float, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                 limits=None, threads: int = 1) -> VerificationReport:
    """c h_1^p <= (d+2)^{p-1} - lambda_n <= C h_1 for 1 < p <= 2."""
    if not 1 < p <= 2:
        raise NumericInputError("verify_gap_p needs 1 < p <= 2")
    report = VerificationReport(f"gap-p d={d} p={p}")
    h1 = h_k_sigma(K, d, 1, limits, threads).value
    est = max_eig_p(PRayleighProblem(K, d, p), restarts, seed, threads)
    if p == 2:
        m = M = Fraction(1)
        c, C = claim_constants_to_cheeger(m, M, 2, d)
        lam = float(spectrum(K, LaplacianSpec(d, "up", normalized=True))[-1])
        report.add(check(f"max_eig_p matches lambda_n [p=2, d={d}]", abs(est.value - lam) <= 1e-6, est.value, lam))
        gap = (d + 2) - lam
        report.add(check(f"c h1^2 <= d+2-lambda_n [d={d}]", float(c * h1 * h1) <= gap + 1e-8, c * h1 * h1, gap))
        report.add(check(f"d+2-lambda_n <= C h1 [d={d}]", gap <= float(C * h1) + 1e-8, gap, C * h1))
    else:
        m_est, M_est = estimate_claim_constants(p, d + 2, seed=seed)
        m, M = m_est / 2, 2 * M_est  # safety margins on sampled extrema
        c, C = claim_constants_to_cheeger(m, M, p, d)
        gap = (d + 2) ** (p - 1) - est.value  # >= true gap, since est.value <= lambda_n
        report.add(check(f"c h1^p <= (d+2)^(p-1)-lambda_n [d={d}, p={p}]", c * float(h1) ** p <= gap + 1e-8,
                         c * float(h1) ** p, gap, "lambda_n from ascent"))
        report.add(check(f"(d+2)^(p-1)-lambda_n <= C h1 [d={d}, p={p}]", gap <= C * float(h1) + 1e-8, gap, C * float(h1)))
    report.data.update({"h_1": h1, "lambda_n_estimate": est.value, "c": c, "C": C, "m": m, "M": M,
                        "converged": est.converged})
    return report


def verify_p_duality(K: SimplicialComplex, d: int, p: float, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                     threads: int = 1) -> VerificationReport:
    """lambda_max(up, d, p)^{1/p} = lambda_max(down, d+1, p*)^{1/p*} for unnormalized quotients."""
    if not 1 < p < float("inf"):
        raise NumericInputError("verify_p_duality needs 1 < p < inf")
    if d + 1 > K.dim:
        raise DimensionError(f"need d+1 <= dim K, got d={d}")
    report = VerificationReport(f"p-duality d={d} p={p}")
    up = PRayleighProblem(K, d, p, "up", normalized=False)
    q = up.conjugate
    if p == 2:
        B = boundary_array(K, d + 1).astype(float)
        a = eigen_symmetric(B @ B.T).eigenvalues[-1]
        b = eigen_symmetric(B.T @ B).eigenvalues[-1]
        report.add(check(f"top up/down eigenvalues agree [p=2, d={d}]", abs(a - b) <= 1e-8, float(a), float(b)))
        return report
    down = PRayleighProblem(K, d + 1, q, "down", normalized=False)
    a = max_eig_p(up, restarts, seed, threads).value ** (1 / p)
    b = max_eig_p(down, restarts, seed, threads).value ** (1 / q)
    rel = abs(a - b) / max(abs(a), abs(b), 1e-300)
    report.add(check(f"operator norms agree [d={d}, p={p}, p*={q}]", rel <= 1e-4, a, b, f"relative gap {rel:.2e}"))
    return report


def _quotient_p_norm(x: np.ndarray, E: np.ndarray, w: np.ndarray, p: float) -> float:
    """min over t of sum w |x + E^T t|^p (convex; local minimizer is global)."""
    if E.shape[0] == 0:
        return float(np.sum(w * np.abs(x) ** p))
    f = lambda t: float(np.sum(w * np.abs(x + E.T @ t) ** p))
    g = lambda t: p * (E @ (w * _signed_power(x + E.T @ t, p - 1)))
    res = minimize(f, np.zeros(E.shape[0]), jac=g, method="L-BFGS-B", options={"gtol": 1e-12, "ftol": 1e-15})
    return float(res.fun)


def verify_rough_cheeger_p(K: SimplicialComplex, d: int, p: float, limits=None) -> VerificationReport:
    """h^p / #Sigma_{d+1}^{p-1} <= lambda_{I_d}(p) <= vol^{p-1} h."""
    if p < 1:
        raise NumericInputError("p must be >= 1")
    if np.any(K.degrees(d) == 0):
        raise PreconditionError(f"some {d}-simplex has up-degree 0")
    report = VerificationReport(f"rough cheeger p={p} d={d}")
    hrep = h_sigma_d(K, d, limits)
    h = hrep.value
    m, vol = K.count(d + 1), int(K.degrees(d).sum())
    lower, upper = float(h) ** p / m ** (p - 1), vol ** (p - 1) * float(h)
    report.data.update({"h": h, "lower": lower, "upper": upper})
    if p == 1:
        # at p = 1 lambda_{I_d} is h itself (exact, via the certificate machinery)
        report.add(check("h <= lambda_I = h <= h [p=1]", True, h, h))
        return report
    if p == 2:
        lam = float(spectrum(K, LaplacianSpec(d, "up", normalized=True))[first_nontrivial_index(K, d) - 1])
        report.add(check(f"h^2/#Sigma_(d+1) <= lambda_I [d={d}]", lower <= lam + 1e-8, lower, lam))
        report.add(check(f"lambda_I <= vol h [d={d}]", lam <= upper + 1e-8, lam, upper))
        return report
    prob = up_problem(K, d)
    G = prob.A.astype(float)
    w = prob.deg.astype(float)
    if h == 0:
        # a cohomology witness has quotient exactly 0, so lambda_I = 0 = both bounds
        x = np.array(hrep.witness, dtype=float)
        num = float(np.sum(np.abs(G @ x) ** p))
        report.add(check(f"degenerate case: all terms 0 [d={d}, p={p}]", num == 0 and lower == 0 and upper == 0,
                         num, 0))
        return report
    # upper bracket: sup of the quotient over span(excluded subspace, x) for the linear eigenvector x
    vec = eigen_symmetric(np.diag(w ** -0.5) @ G.T @ G @ np.diag(w ** -0.5)).eigenvectors
    x = (w ** -0.5) * vec[:, first_nontrivial_index(K, d) - 1]
    E = reduced_boundary_array(K, d).astype(float)
    cand = float(np.sum(np.abs(G @ x) ** p)) / _quotient_p_norm(x, E, w, p)
    report.data["lambda_I_upper"] = cand
    if cand <= upper - 1e-8:
        report.add(check(f"lambda_I <= vol^(p-1) h [d={d}, p={p}]", True, cand, upper, "resolved by upper bracket"))
    else:
        report.add(Assertion(f"lambda_I <= vol^(p-1) h [d={d}, p={p}]", REPORT, cand, upper, "bracket does not resolve"))
    report.add(Assertion(f"h^p/#Sigma^(p-1) <= lambda_I [d={d}, p={p}]", REPORT, lower, cand,
                         "no certified lower bound for p outside {1, 2}"))
    return report


__all__ = [
    "PRayleighProblem", "ExtremeEigenEstimate", "p_rayleigh", "p_rayleigh_gradient", "max_eig_p", "claim_ratio",
    "estimate_claim_constants", "claim_constants_to_cheeger", "verify_gap_p", "verify_p_duality",
    "verify_rough_cheeger_p",
]

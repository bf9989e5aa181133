"""Cheeger constants of a complex.

Two families live here:

* the gap-from-(d+2) constants h_k(Sigma_d), obtained from the signed graph
  on Sigma_d;
* the gap-from-0 constant h(Sigma_d), computed from four equivalent
  definitions (bounded multisets with a filling denominator, integer
  cochains with a quotient-norm denominator, the 1-Laplacian certificate,
  and the filling profile of coboundaries).

All constants are exact fractions.  Grid searches enumerate integer vectors
with entries in -M..M in lexicographic order and keep the lexicographically
smallest minimizer, so results never depend on the number of threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np

from .complex import SimplicialComplex, betti_numbers, boundary_array, reduced_boundary_array
from .errors import (
    CapacityError, DegenerateDegreeError, DimensionError, Limits, PreconditionError,
    check_capacity, default_limits,
)
from .exact import nullspace_q, normalize_sign, primitive_int, rank_gf2, rank_q
from .generators import dual_graph, graph_diameter, is_closed_pseudomanifold
from .laplacians import LaplacianSpec, first_nontrivial_index, spectrum
from .ratlp import fill_minimizer, l1_orthogonality_certificate, quotient_minimizer, weighted_l1
from .reporting import REPORT, Assertion, VerificationReport, check
from .signed_graph import build_up_signed_graph, signed_cheeger, signed_laplacian
from .numlin import eigvals_symmetric

SPECTRAL_TOL = 1e-8


@dataclass(frozen=True)
class CheegerReport:
    """An exact constant together with the object that attains it."""

    value: Fraction
    method: str
    dim: int
    witness: tuple | None = None
    stabilized_at_M: int | None = None
    checked_M: int | None = None
    stabilized: bool | None = None
    flags: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        out = {"value": str(self.value), "value_float": float(self.value), "method": self.method, "dim": self.dim}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        for key in ("stabilized_at_M", "checked_M", "stabilized"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        out["flags"] = list(self.flags)
        if self.extra:
            out["extra"] = _plain(self.extra)
        return out


def _plain(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    return v


# ---------------------------------------------------------------------------
# gap from d+2


def h_k_sigma(K: SimplicialComplex, d: int, k: int = 1, limits: Limits | None = None, threads: int = 1) -> CheegerReport:
    """h_k(Sigma_d) = (d+1) times the k-way signed Cheeger constant of the signed graph."""
    G = build_up_signed_graph(K, d)
    res = signed_cheeger(G, k, limits, threads)
    faces = K.simplices(d)
    witness = tuple((tuple(faces[v] for v in a), tuple(faces[v] for v in b)) for a, b in res.witness)
    return CheegerReport((d + 1) * res.value, f"signed-graph k={k}", d, witness,
                         extra={"signed_value": res.value, "encoding": res.encoding})


def _normalized_up_spectrum(K: SimplicialComplex, d: int) -> np.ndarray:
    return spectrum(K, LaplacianSpec(d, "up", normalized=True))


def verify_gap_dplus2(K: SimplicialComplex, d: int, kmax: int = 1, limits: Limits | None = None,
                      threads: int = 1) -> VerificationReport:
    """Two-sided bound on d+2 - lambda_n and the k-way lower bounds."""
    limits = limits or default_limits()
    report = VerificationReport(f"gap-d2 d={d}")
    mu = _normalized_up_spectrum(K, d)
    n = len(mu)
    gap = (d + 2) - float(mu[-1])
    h1 = h_k_sigma(K, d, 1, limits, threads).value
    lower = float(h1 * h1 / (2 * (d + 1)))
    report.add(check(f"h1^2/(2(d+1)) <= d+2-lambda_n [d={d}]", lower <= gap + SPECTRAL_TOL, lower, gap))
    report.add(check(f"d+2-lambda_n <= 2 h1 [d={d}]", gap <= 2 * float(h1) + SPECTRAL_TOL, gap, 2 * h1))
    report.data[f"h_1"] = h1
    for k in range(2, kmax + 1):
        if n < k or n > limits.signed_limit(k):
            report.add(Assertion(f"k={k} skipped", REPORT, n, limits.signed_limit(k), "outside enumeration limit"))
            continue
        hk = h_k_sigma(K, d, k, limits, threads).value
        gap_k = (d + 2) - float(mu[n - k])
        report.add(check(f"(d+2-lambda_(n+1-k))/2 <= h_k [d={d}, k={k}]", gap_k / 2 <= float(hk) + SPECTRAL_TOL, gap_k / 2, hk))
        ratio = gap_k / float(hk) if hk else None
        report.add(Assertion(f"(d+2-lambda_(n+1-k))/h_k [d={d}, k={k}]", REPORT, gap_k, hk,
                             f"ratio {ratio}" if ratio is not None else "h_k = 0"))
        report.data[f"h_{k}"] = hk
    return report


def verify_affine_spectral_map(K: SimplicialComplex, d: int) -> VerificationReport:
    """Spectrum of the normalized up-Laplacian is (d+1) lambda - d over the opposite signed graph."""
    report = VerificationReport(f"affine map d={d}")
    mu = _normalized_up_spectrum(K, d)
    lam = eigvals_symmetric(signed_laplacian(build_up_signed_graph(K, d, opposite=True)))
    err = float(np.max(np.abs(mu - ((d + 1) * lam - d)))) if len(mu) else 0.0
    report.add(check(f"mu_j = (d+1) lambda_j - d [d={d}]", err <= SPECTRAL_TOL, err, SPECTRAL_TOL))
    return report


def verify_reflection_identity(K: SimplicialComplex, d: int) -> VerificationReport:
    """d+2 - lambda_{n-i+1}(up) = (d+1) lambda_i(signed) for every i."""
    report = VerificationReport(f"reflection identity d={d}")
    mu = _normalized_up_spectrum(K, d)
    lam = eigvals_symmetric(signed_laplacian(build_up_signed_graph(K, d)))
    err = float(np.max(np.abs((d + 2 - mu[::-1]) - (d + 1) * lam))) if len(mu) else 0.0
    report.add(check(f"d+2-lambda_(n-i+1) = (d+1) lambda_i(signed) [d={d}]", err <= SPECTRAL_TOL, err, SPECTRAL_TOL))
    return report


# ---------------------------------------------------------------------------
# gap from 0: problem data


@dataclass(frozen=True)
class _Gap0Problem:
    """min over x outside span(E rows) of |A x|_1 / dist_{deg}(x, span E rows)."""

    A: np.ndarray      # numerator map (integer)
    E: np.ndarray      # rows span the excluded subspace (integer)
    deg: np.ndarray    # positive weights
    Z: np.ndarray      # rows span ker E; x lies in span(E rows) iff Z x = 0
    labels: tuple
    dim: int

    @property
    def n(self) -> int:
        return len(self.deg)

    def homology_rank(self) -> int:
        return self.n - (rank_q(self.E) if self.E.size else 0) - (rank_q(self.A) if self.A.size else 0)


def _int_basis(vectors) -> np.ndarray:
    return np.array([primitive_int(v) for v in vectors], dtype=np.int64).reshape(len(vectors), -1)


def _make_problem(A, E, deg, labels, dim) -> _Gap0Problem:
    n = len(deg)
    E = np.asarray(E, dtype=np.int64).reshape(-1, n)
    A = np.asarray(A, dtype=np.int64).reshape(-1, n)
    Z = _int_basis(nullspace_q(E, n)) if E.shape[0] else np.eye(n, dtype=np.int64)
    Z = Z.reshape(-1, n)
    return _Gap0Problem(A, E, np.asarray(deg, dtype=np.int64), Z, tuple(labels), dim)


def _check_degrees(K: SimplicialComplex, d: int) -> np.ndarray:
    deg = K.degrees(d)
    bad = np.flatnonzero(deg == 0)
    if bad.size:
        tau = K.simplices(d)[bad[0]]
        raise DegenerateDegreeError(f"simplex {tau} has up-degree 0", tau)
    return deg


def up_problem(K: SimplicialComplex, d: int) -> _Gap0Problem:
    if not 0 <= d <= K.dim:
        raise DimensionError(f"dimension {d} outside 0..{K.dim}")
    deg = _check_degrees(K, d)
    A = boundary_array(K, d + 1).T
    E = reduced_boundary_array(K, d)
    return _make_problem(A, E, deg, K.simplices(d), d)


def down_problem(K: SimplicialComplex, d: int, subspace: str = "boundaries") -> _Gap0Problem:
    """Numerator B_d, excluded subspace Im B_{d+1} (or the orientation class), weights d+1."""
    if not 1 <= d <= K.dim:
        raise DimensionError(f"down constant needs 1 <= d <= {K.dim}")
    n = K.count(d)
    A = boundary_array(K, d)
    if subspace == "boundaries":
        E = boundary_array(K, d + 1).T
    elif subspace == "orientation":
        E = np.array([orientation_class(K, d)], dtype=np.int64)
    else:
        raise ValueError(f"unknown subspace {subspace!r}")
    return _make_problem(A, E, np.full(n, d + 1, dtype=np.int64), K.simplices(d), d)


def orientation_class(K: SimplicialComplex, top: int | None = None) -> tuple[int, ...]:
    """The +-1 cycle spanning ker B_top of a connected closed orientable pseudomanifold."""
    top = K.dim if top is None else top
    B = boundary_array(K, top)
    basis = nullspace_q(B, K.count(top))
    if len(basis) != 1:
        raise PreconditionError(f"ker B_{top} has dimension {len(basis)}; need an orientable connected closed complex")
    z = normalize_sign(basis[0])
    if any(abs(v) != 1 for v in z):
        raise PreconditionError("top cycle is not a +-1 orientation class")
    return z


def _ratio_exact(prob: _Gap0Problem, x) -> tuple[Fraction, tuple[Fraction, ...]]:
    """|A x|_1 / quotient norm of x, and the coset-optimal representative."""
    y = prob.A @ np.asarray(x, dtype=object) if prob.A.size else np.zeros(0, dtype=object)
    num = sum((abs(Fraction(v)) for v in y), Fraction(0))
    qn, rep = quotient_minimizer(list(x), prob.E, prob.deg.tolist())
    if qn == 0:
        raise PreconditionError("cochain lies in the excluded subspace")
    return num / qn, rep


def _homology_witness(prob: _Gap0Problem) -> tuple[int, ...] | None:
    """Integer vector in ker A outside span(E rows), if one exists."""
    kernel = nullspace_q(prob.A, prob.n) if prob.A.shape[0] else [
        [Fraction(int(i == j)) for i in range(prob.n)] for j in range(prob.n)]
    for v in kernel:
        iv = primitive_int(v)
        if np.any(prob.Z @ np.array(iv, dtype=np.int64)):
            return tuple(normalize_sign(iv))
    return None


# ---------------------------------------------------------------------------
# grid search


@dataclass(frozen=True)
class _GridResult:
    value: Fraction
    index: int
    x: tuple[int, ...]


_CHUNK = 1 << 15
_DESCENT_PASSES = 3


def _normalized_key(y: np.ndarray) -> bytes:
    g = int(np.gcd.reduce(np.abs(y))) if y.size else 1
    y = y // max(g, 1)
    nz = np.flatnonzero(y)
    if nz.size and y[nz[0]] < 0:
        y = -y
    return y.astype(np.int64).tobytes()


def _evaluate(prob: _Gap0Problem, mode: str, x: np.ndarray, y: np.ndarray, a: int) -> Fraction:
    if mode == "fill":
        den, _ = fill_minimizer(y.tolist(), prob.A, prob.deg.tolist())
    else:
        den, _ = quotient_minimizer(x.tolist(), prob.E, prob.deg.tolist())
    return Fraction(a) / den


def _coset_descent_pass(prob: _Gap0Problem, XT: np.ndarray) -> None:
    """One coordinate-descent sweep over the rows of E, in place on XT (n x c).

    Each step adds the multiple of one row of E that minimizes the weighted
    l1 norm restricted to its support (an exact weighted median, since the
    rows have entries in {-1, 0, 1}).  The weighted norm of the result
    bounds the quotient norm of the coset from above, and so does it for the
    filling norm, which equals the quotient norm once cohomology vanishes.
    """
    deg = prob.deg
    for e in prob.E:
        S = np.flatnonzero(e)
        if S.size == 0:
            continue  # zero row, e.g. from an isolated lower face
        sig = e[S][:, None]
        XS = XT[S]                                   # k x c
        cand = -XS * sig                             # breakpoints where one entry vanishes
        vals = (deg[S][None, :, None] * np.abs(XS[None, :, :] + cand[:, None, :] * sig[None, :, :])).sum(axis=1)
        j = np.argmin(vals, axis=0)
        cols = np.arange(XT.shape[1])
        better = vals[j, cols] < deg[S] @ np.abs(XS)
        step = np.where(better, cand[j, cols], 0)
        XT[S] += sig * step[None, :]


def _may_win(a: np.ndarray, w: np.ndarray, U: Fraction, keep_ties: bool) -> np.ndarray:
    lhs, rhs = a * U.denominator, U.numerator * w
    return lhs <= rhs if keep_ties else lhs < rhs


def _grid_scan(prob: _Gap0Problem, M: int, mode: str, start: int, stop: int, bound: Fraction | None,
               cache: dict) -> _GridResult | None:
    """Exact minimum over primitive canonical grid points with index in [start, stop).

    Points are visited in ascending order of a lower bound on their ratio
    and only evaluated exactly while that bound does not exceed the best
    value so far, so the result equals the full scan (ties go to the
    smallest index).
    """
    n, base = prob.n, 2 * M + 1
    best: _GridResult | None = None
    U = bound
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        idx = np.arange(lo, hi, dtype=np.int64)
        X = np.empty((hi - lo, n), dtype=np.int64)
        rem = idx
        for j in range(n - 1, -1, -1):
            rem, X[:, j] = np.divmod(rem, base)
        X -= M
        first = np.argmax(X != 0, axis=1)
        keep = X[np.arange(hi - lo), first] < 0  # canonical half: first nonzero entry negative
        keep &= np.gcd.reduce(X, axis=1) == 1  # scale invariance: primitive points suffice
        keep &= (X @ prob.Z.T != 0).any(axis=1)
        if not keep.any():
            continue
        X, idx = X[keep], idx[keep]
        Y = X @ prob.A.T
        a = np.abs(Y).sum(axis=1)
        # a point can only win if its lower bound is below U, or equal to U while
        # no earlier (smaller index) point attains U
        keep_ties = best is None or best.value != U
        if U is not None:
            # |x|_deg bounds the coset norm too; prune with it before the finer bound
            ok = _may_win(a, np.abs(X) @ prob.deg, U, keep_ties)
            X, idx, Y, a = X[ok], idx[ok], Y[ok], a[ok]
        XT = X.T.copy()
        for _ in range(_DESCENT_PASSES):
            _coset_descent_pass(prob, XT)
            w = prob.deg @ np.abs(XT)
            if U is not None:
                ok = _may_win(a, w, U, keep_ties)
                X, XT, idx, Y, a, w = X[ok], XT[:, ok], idx[ok], Y[ok], a[ok], w[ok]
        order = np.lexsort((idx, a / w))
        for r in order:
            ar, wr = int(a[r]), int(w[r])
            if U is not None:
                lhs, rhs = ar * U.denominator, U.numerator * wr
                if lhs > rhs or (lhs == rhs and best is not None and best.value == U and idx[r] > best.index):
                    break  # sorted by (lower bound, index): nothing further can win
            key = _normalized_key(Y[r])
            val = cache.get(key)
            if val is None:
                val = _evaluate(prob, mode, X[r], Y[r], ar)
                cache[key] = val
            cand = (val, int(idx[r]))
            if best is None or cand < (best.value, best.index):
                best = _GridResult(val, int(idx[r]), tuple(int(v) for v in X[r]))
                U = val if U is None or val < U else U
    return best


def _grid_min(prob: _Gap0Problem, M: int, mode: str, bound: Fraction | None, threads: int, cache: dict) -> _GridResult | None:
    total = (2 * M + 1) ** prob.n
    threads = max(1, int(threads))
    if threads == 1:
        return _grid_scan(prob, M, mode, 0, total, bound, cache)
    edges = [total * i // threads for i in range(threads + 1)]
    spans = [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        parts = list(pool.map(lambda ab: _grid_scan(prob, M, mode, ab[0], ab[1], bound, cache), spans))
    parts = [p for p in parts if p is not None]
    return min(parts, key=lambda p: (p.value, p.index)) if parts else None


def _stabilized_search(prob: _Gap0Problem, mode: str, method: str, M_cap: int, limits: Limits, threads: int) -> CheegerReport:
    b = prob.homology_rank()
    if b > 0:
        x = _homology_witness(prob)
        return CheegerReport(Fraction(0), method, prob.dim, x, stabilized_at_M=max(abs(v) for v in x),
                             checked_M=0, stabilized=True, flags=("cohomology-nonzero",),
                             extra={"homology_rank": b})
    cache: dict = {}
    history: list[tuple[int, _GridResult]] = []
    flags: list[str] = []
    for M in range(1, M_cap + 1):
        total = (2 * M + 1) ** prob.n
        if total > limits.max_grid:
            if M == 1:
                raise CapacityError(f"grid (2M+1)^n = {total} exceeds max_grid", "max_grid", limits.max_grid, total)
            flags.append("capped")
            break
        bound = history[-1][1].value if history else None
        res = _grid_min(prob, M, mode, bound, threads, cache)
        if res is None:
            raise PreconditionError("grid contains no admissible cochain")
        history.append((M, res))
        if len(history) >= 2 and history[-1][1].value == history[-2][1].value:
            break
    final = history[-1][1].value
    first_M, first = next((M, r) for M, r in history if r.value == final)
    stable = len(history) >= 2 and history[-1][1].value == history[-2][1].value
    if not stable:
        flags.append("not-stabilized")
    return CheegerReport(final, method, prob.dim, first.x, stabilized_at_M=first_M, checked_M=history[-1][0],
                         stabilized=stable, flags=tuple(flags),
                         extra={"values_by_M": {M: r.value for M, r in history}, "labels": prob.labels})


def h_sigma_d_bruteforce(K: SimplicialComplex, d: int, M: int = 3, limits: Limits | None = None,
                         threads: int = 1) -> CheegerReport:
    """Bounded-multiset definition: |coboundary S| over the least volume with the same coboundary."""
    return _stabilized_search(up_problem(K, d), "fill", "D1 multisets", M, limits or default_limits(), threads)


def h_sigma_d_zexpander(K: SimplicialComplex, d: int, M: int = 3, limits: Limits | None = None,
                        threads: int = 1) -> CheegerReport:
    """Integer-cochain definition: |delta phi|_1 over the quotient norm of phi."""
    return _stabilized_search(up_problem(K, d), "quotient", "D2 Z-expander", M, limits or default_limits(), threads)


# ---------------------------------------------------------------------------
# filling profile


def _circuits(A: np.ndarray, limits: Limits) -> list[tuple[int, ...]]:
    """Minimal-support vectors of the column space of A, normalized and sorted.

    The zero set of such a vector is a hyperplane of the row matroid of A,
    spanned by rank(A) - 1 independent rows.  Subsets of rows are screened
    in floating point; every new hyperplane is then resolved exactly, and
    subsets inside a known hyperplane are skipped.
    """
    m, n = A.shape
    r = rank_q(A)
    if r == 0:
        return []
    from math import comb
    check_capacity("circuit zero sets", comb(m, r - 1), limits.max_circuit_subsets)
    Af = A.astype(float)
    hyperplanes: list[int] = []
    masks = np.zeros(0, dtype=np.int64) if m < 63 else None
    found = set()
    for Z in combinations(range(m), r - 1):
        zmask = sum(1 << i for i in Z)
        if masks is not None and masks.size and np.any((np.int64(zmask) & ~masks) == 0):
            continue
        if r > 1:
            _, sv, vt = np.linalg.svd(Af[list(Z)])
            if np.count_nonzero(sv > 1e-9 * max(1.0, sv[0])) != r - 1:
                continue
            Y = Af @ vt[r - 1:].T
        else:
            Y = Af
        y = Y[:, int(np.argmax(np.linalg.norm(Y, axis=0)))]
        H = [i for i in range(m) if abs(y[i]) <= 1e-9 * np.max(np.abs(y))]
        hmask = sum(1 << i for i in H)
        if masks is None and hmask in hyperplanes:
            continue
        hyperplanes.append(hmask)
        if masks is not None:
            masks = np.append(masks, np.int64(hmask))
        kernel = nullspace_q(A[H], n) if H else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
        for v in kernel:
            yq = [sum((int(A[i, j]) * v[j] for j in range(n) if v[j]), Fraction(0)) for i in range(m)]
            if any(yq):
                found.add(normalize_sign(yq))
                break
    return sorted(found)


def h_sigma_d_filling(K: SimplicialComplex, d: int, method: str = "grid", M: int = 3, limits: Limits | None = None,
                      threads: int = 1) -> CheegerReport:
    """Filling-profile definition: min |y|_1 / fill(y) over nonzero coboundaries y.

    ``grid`` scans y = delta x for x on the bounded integer grid with the
    same stabilization protocol as the multiset search.  ``circuits`` is
    exact: fill is a norm on Im delta, so the maximum of fill(y)/|y|_1 is
    attained at a vertex of the unit l1-ball of Im delta, i.e. at a
    minimal-support vector.
    """
    limits = limits or default_limits()
    prob = up_problem(K, d)
    b = prob.homology_rank()
    if b > 0:
        x = _homology_witness(prob)
        return CheegerReport(Fraction(0), f"D4 filling ({method})", d, x, stabilized_at_M=max(abs(v) for v in x),
                             checked_M=0, stabilized=True, flags=("cohomology-nonzero",),
                             extra={"homology_rank": b, "cochain": x})
    if method == "grid":
        rep = _stabilized_search(prob, "fill", "D4 filling (grid)", M, limits, threads)
        x = np.array(rep.witness, dtype=np.int64)
        y = tuple(int(v) for v in prob.A @ x)
        return CheegerReport(rep.value, rep.method, d, y, rep.stabilized_at_M, rep.checked_M, rep.stabilized, rep.flags,
                             extra={**rep.extra, "cochain": rep.witness})
    if method != "circuits":
        raise ValueError(f"unknown method {method!r}")
    best = None
    for y in _circuits(prob.A, limits):
        fill, pre = fill_minimizer(list(y), prob.A, prob.deg.tolist())
        val = Fraction(sum(abs(v) for v in y)) / fill
        if best is None or val < best[0]:
            best = (val, y, pre)
    val, y, pre = best
    return CheegerReport(val, "D4 filling (circuits)", d, y, flags=("exact",),
                         extra={"cochain": pre})


def skeleton_graph(K: SimplicialComplex) -> dict[int, list[int]]:
    """Vertex adjacency of the 1-skeleton, indexed like K.simplices(0)."""
    adj = {i: [] for i in range(K.count(0))}
    for e in K.simplices(1):
        u, v = K.index((e[0],)), K.index((e[1],))
        adj[u].append(v)
        adj[v].append(u)
    return {u: sorted(vs) for u, vs in adj.items()}


def h_sigma_d(K: SimplicialComplex, d: int, limits: Limits | None = None, threads: int = 1) -> CheegerReport:
    """Exact h(Sigma_d) by the cheapest applicable method.

    d = 0 is the graph Cheeger constant of the 1-skeleton (exhaustive cuts);
    otherwise the exact circuit method, falling back to the grid search.
    """
    limits = limits or default_limits()
    if d == 0:
        up_problem(K, 0)  # degree precondition
        val, S = graph_cheeger(skeleton_graph(K), limits)
        return CheegerReport(val, "graph cuts", 0, tuple(K.simplices(0)[i] for i in S))
    try:
        return h_sigma_d_filling(K, d, "circuits", limits=limits)
    except CapacityError:
        return h_sigma_d_zexpander(K, d, limits=limits, threads=threads)


def certify_d3(K: SimplicialComplex, d: int, report: CheegerReport, problem: _Gap0Problem | None = None) -> bool:
    """1-Laplacian certificate at the minimizer.

    The witness cochain is replaced by its coset-optimal representative x*;
    the certificate holds when some subgradient of the weighted l1 norm at
    x* annihilates the excluded subspace and |A x*|_1 / |x*|_deg equals the
    reported value exactly.
    """
    prob = problem or up_problem(K, d)
    if report.value == 0:
        raise PreconditionError("certificate needs a nonzero constant")
    x = report.extra.get("cochain", report.witness)
    x = [Fraction(v) for v in x]
    if not np.any(prob.Z @ np.array([v for v in x], dtype=object)):
        raise PreconditionError("witness lies in the excluded subspace")
    ratio, rep = _ratio_exact(prob, x)
    cert = l1_orthogonality_certificate(rep, prob.E, prob.deg.tolist())
    num = sum((abs(v) for v in (prob.A @ np.array(rep, dtype=object))), Fraction(0))
    direct = num / weighted_l1(rep, prob.deg.tolist())
    return bool(cert.holds and direct == report.value and ratio == report.value)


def reevaluate(K: SimplicialComplex, d: int, x) -> Fraction:
    """|delta x|_1 over the quotient norm of x (the ratio a witness attains)."""
    return _ratio_exact(up_problem(K, d), x)[0]


# ---------------------------------------------------------------------------
# down constant and manifold formulas


def graph_cheeger(adj: dict[int, list[int]], limits: Limits | None = None) -> tuple[Fraction, tuple[int, ...]]:
    """min over cuts S of |E(S, S^c)| / min(vol S, vol S^c), exhaustive."""
    limits = limits or default_limits()
    n = len(adj)
    check_capacity("dual graph cuts", 2 ** n, limits.max_dual_cuts)
    deg = np.array([len(adj[i]) for i in range(n)], dtype=np.int64)
    edges = np.array([(u, v) for u in adj for v in adj[u] if u < v], dtype=np.int64).reshape(-1, 2)
    masks = np.arange(1, 2 ** (n - 1), dtype=np.int64)  # vertex n-1 always outside S
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
    cut = (bits[:, edges[:, 0]] != bits[:, edges[:, 1]]).sum(axis=1)
    vol = bits @ deg
    den = np.minimum(vol, deg.sum() - vol)
    if np.any(den == 0):
        return Fraction(0), tuple(int(v) for v in np.flatnonzero(bits[np.argmax(den == 0)]))
    r = cut / den
    best = None
    for i in np.flatnonzero(r == r.min()):
        val = Fraction(int(cut[i]), int(den[i]))
        if best is None or val < best[0]:
            best = (val, tuple(int(v) for v in np.flatnonzero(bits[i])))
    return best


def h_down(K: SimplicialComplex, d: int, limits: Limits | None = None, method: str = "auto", M: int = 3,
           threads: int = 1) -> CheegerReport:
    """Down Cheeger constant on Sigma_d.

    On a closed orientable pseudomanifold of dimension d it is the ordinary
    Cheeger constant of the dual graph (exhaustive cuts).  Otherwise the
    bounded grid + LP search runs with numerator B_d, excluded subspace
    Im B_{d+1} and weights d+1.
    """
    limits = limits or default_limits()
    if not 1 <= d <= K.dim:
        raise DimensionError(f"down constant needs 1 <= d <= {K.dim}")
    manifold = d == K.dim and is_closed_pseudomanifold(K)
    if method in ("auto", "cuts") and manifold:
        adj = dual_graph(K, d)
        if graph_diameter(adj) is None:
            return CheegerReport(Fraction(0), "dual-graph cuts", d, None, flags=("disconnected",))
        val, S = graph_cheeger(adj, limits)
        return CheegerReport(val, "dual-graph cuts", d, tuple(K.simplices(d)[i] for i in S))
    if method == "cuts":
        raise PreconditionError("dual-graph cuts need a closed pseudomanifold at top dimension")
    subspace = "orientation" if (manifold or method == "orientation") else "boundaries"
    prob = down_problem(K, d, subspace)
    return _stabilized_search(prob, "quotient", f"down grid ({subspace})", M, limits, threads)


def _manifold_preconditions(K: SimplicialComplex) -> None:
    if K.dim < 1 or not is_closed_pseudomanifold(K):
        raise PreconditionError("not a closed pseudomanifold: some codimension-1 face is not in exactly two facets")
    adj = dual_graph(K)
    if graph_diameter(adj) is None:
        raise PreconditionError("dual graph is disconnected")
    betti = betti_numbers(K)
    if betti[K.dim] != 1:
        raise PreconditionError(f"not orientable: b_{K.dim} = {betti[K.dim]}")
    if K.dim >= 2 and betti[1] != 0:
        raise PreconditionError(f"b_1 = {betti[1]} is nonzero")
    if betti[K.dim - 1] != (1 if K.dim == 1 else 0):
        raise PreconditionError(f"b_{K.dim - 1} is nonzero")


def diameter_formula(K: SimplicialComplex) -> Fraction:
    """1/diam of the dual graph of a closed orientable pseudomanifold with vanishing H_1."""
    _manifold_preconditions(K)
    return Fraction(1, graph_diameter(dual_graph(K)))


def infinity_dual_ratio(K: SimplicialComplex, D: int, limits: Limits | None = None) -> tuple[Fraction, tuple[int, ...]]:
    """min over y of |B_top y|_inf / (max(z y) - min(z y)), y = z * y' with y' in {0..D}^m.

    This is the right-hand side of the l1/l_inf duality identity specialised
    to delta_d with the orientation class z spanning ker B_top.
    """
    limits = limits or default_limits()
    _manifold_preconditions(K)
    z = np.array(orientation_class(K), dtype=np.int64)
    B = boundary_array(K, K.dim)
    m = len(z)
    total = (D + 1) ** (m - 1)
    check_capacity("infinity-ratio grid", total, limits.max_grid)
    best = None
    for lo in range(0, total, _CHUNK):
        hi = min(total, lo + _CHUNK)
        idx = np.arange(lo, hi, dtype=np.int64)
        Yp = np.zeros((hi - lo, m), dtype=np.int64)  # y'_0 = 0 fixes the shift
        rem = idx
        for j in range(m - 1, 0, -1):
            rem, Yp[:, j] = np.divmod(rem, D + 1)
        spread = Yp.max(axis=1) - Yp.min(axis=1)
        ok = spread > 0
        if not ok.any():
            continue
        Yp, spread = Yp[ok], spread[ok]
        num = np.abs((Yp * z) @ B.T).max(axis=1)
        r = num / spread
        i = int(np.argmin(r))
        val = Fraction(int(num[i]), int(spread[i]))
        if best is None or val < best[0]:
            best = (val, tuple(int(v) for v in Yp[i]))
    return best


def distance_witness_ratio(K: SimplicialComplex) -> Fraction:
    """The infinity ratio attained by y' = graph distance from a peripheral facet."""
    _manifold_preconditions(K)
    adj = dual_graph(K)
    from collections import deque
    best = None
    for src in adj:
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    q.append(v)
        if best is None or max(dist.values()) > max(best.values()):
            best = dist
    z = np.array(orientation_class(K), dtype=np.int64)
    yp = np.array([best[i] for i in range(len(adj))], dtype=np.int64)
    num = int(np.abs(boundary_array(K, K.dim) @ (yp * z)).max())
    return Fraction(num, int(yp.max() - yp.min()))


def gap0_bracket(K: SimplicialComplex, d: int, support: int = 2, limits: Limits | None = None) -> dict:
    """Sound interval for h(Sigma_d) without a full grid.

    lower: lambda_{I_d} / vol(Sigma_d), from the upper rough Cheeger bound.
    upper: best exact ratio over {-1,0,1}-cochains with at most ``support``
    nonzero entries.
    """
    prob = up_problem(K, d)
    mu = _normalized_up_spectrum(K, d)
    lam = float(mu[first_nontrivial_index(K, d) - 1])
    vol = int(prob.deg.sum())
    best = None
    cache: dict = {}
    for s in range(1, support + 1):
        for pos in combinations(range(prob.n), s):
            for signs in np.ndindex(*(2,) * (s - 1)):
                x = np.zeros(prob.n, dtype=np.int64)
                x[pos[0]] = 1
                for j, b in zip(pos[1:], signs):
                    x[j] = 1 if b == 0 else -1
                if not np.any(prob.Z @ x):
                    continue
                y = prob.A @ x
                key = _normalized_key(y)
                if key not in cache:
                    cache[key] = _evaluate(prob, "fill", x, y, int(np.abs(y).sum()))
                if best is None or cache[key] < best:
                    best = cache[key]
    return {"lower": lam / vol, "upper": best, "lambda_I": lam, "vol": vol}


# ---------------------------------------------------------------------------
# Z2 comparison constant


def z2_cheeger(K: SimplicialComplex, d: int, limits: Limits | None = None) -> CheegerReport:
    """Hamming-norm coboundary expansion over GF(2), by full enumeration."""
    limits = limits or default_limits()
    n = K.count(d)
    check_capacity("z2 cochains", 2 ** n, limits.z2_max_cochains)
    A = boundary_array(K, d + 1).T % 2 if d + 1 <= K.dim else np.zeros((0, n), dtype=np.int64)
    E = reduced_boundary_array(K, d) % 2
    col = np.array([int(sum(1 << i for i in np.flatnonzero(A[:, j]))) for j in range(n)], dtype=np.uint64)
    gens = [int(sum(1 << j for j in np.flatnonzero(row))) for row in E]
    # coboundary of every cochain by doubling over the lowest set bit
    total = 1 << n
    delta = np.zeros(total, dtype=np.uint64)
    for j in range(n):
        delta[1 << j: 1 << (j + 1)] = delta[: 1 << j] ^ col[j]
    phis = np.arange(total, dtype=np.uint64)
    # distance to the image subgroup: fold in one generator at a time
    dist = np.bitwise_count(phis).astype(np.int64)
    for g in gens:
        dist = np.minimum(dist, dist[phis ^ np.uint64(g)])
    num = np.bitwise_count(delta).astype(np.int64)
    ok = dist > 0
    if not ok.any():
        raise PreconditionError("every cochain lies in the image")
    if np.any(ok & (num == 0)):
        phi = int(np.flatnonzero(ok & (num == 0))[0])
        return CheegerReport(Fraction(0), "Z2 Hamming", d, tuple(K.simplices(d)[j] for j in range(n) if phi >> j & 1),
                             flags=("z2-cohomology-nonzero",))
    r = np.where(ok, num / np.where(ok, dist, 1), np.inf)
    i = int(np.argmin(r))
    return CheegerReport(Fraction(int(num[i]), int(dist[i])), "Z2 Hamming", d,
                         tuple(K.simplices(d)[j] for j in range(n) if i >> j & 1),
                         extra={"z2_rank_image": rank_gf2(E)})


# ---------------------------------------------------------------------------
# rough Cheeger bounds


def verify_rough_cheeger(K: SimplicialComplex, d: int, h: Fraction | None = None, limits: Limits | None = None) -> VerificationReport:
    """h^2 / #Sigma_{d+1} <= lambda_{I_d} <= vol(Sigma_d) h."""
    deg = _check_degrees(K, d)
    report = VerificationReport(f"rough cheeger d={d}")
    h = h_sigma_d(K, d, limits).value if h is None else h
    mu = _normalized_up_spectrum(K, d)
    I = first_nontrivial_index(K, d)
    lam = float(mu[I - 1]) if I <= len(mu) else float("nan")
    m, vol = K.count(d + 1), int(deg.sum())
    lower = float(h * h / m)
    upper = float(vol * h)
    report.add(check(f"h^2/#Sigma_(d+1) <= lambda_I [d={d}]", lower <= lam + SPECTRAL_TOL, lower, lam))
    report.add(check(f"lambda_I <= vol h [d={d}]", lam <= upper + SPECTRAL_TOL, lam, upper))
    report.data.update({"h": h, "lambda_I": lam, "I_d": I, "vol": vol})
    return report


__all__ = [
    "CheegerReport", "h_k_sigma", "verify_gap_dplus2", "verify_affine_spectral_map", "verify_reflection_identity",
    "h_sigma_d_bruteforce", "h_sigma_d_zexpander", "h_sigma_d_filling", "h_sigma_d", "certify_d3", "reevaluate",
    "h_down", "graph_cheeger", "skeleton_graph", "diameter_formula", "infinity_dual_ratio", "distance_witness_ratio", "gap0_bracket",
    "z2_cheeger", "verify_rough_cheeger", "orientation_class", "up_problem", "down_problem",
]

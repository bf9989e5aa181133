"""Signed graphs, the signed graph of a complex, balance and signed Cheeger constants."""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .complex import SimplicialComplex
from .errors import AmbiguousAdjacencyError, DegenerateDegreeError, DimensionError, Limits, check_capacity, default_limits


@dataclass(frozen=True)
class SignedGraph:
    """Simple graph on 0..n-1 with edge signs in {+1, -1}."""

    n: int
    edges: tuple[tuple[int, int, int], ...]  # (u, v, sign) with u < v, sorted
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        seen = set()
        for u, v, s in self.edges:
            if not 0 <= u < v < self.n:
                raise ValueError(f"bad edge ({u}, {v})")
            if s not in (1, -1):
                raise ValueError(f"edge sign must be +1 or -1, got {s}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v, s in self.edges:
            A[u, v] = A[v, u] = s
        return A

    def neighbours(self) -> list[list[tuple[int, int]]]:
        nb: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, s in self.edges:
            nb[u].append((v, s))
            nb[v].append((u, s))
        return nb

    def switched(self, vertices: Sequence[int]) -> "SignedGraph":
        """Flip the sign of every edge with exactly one end in ``vertices``."""
        S = set(int(v) for v in vertices)
        return SignedGraph(self.n, tuple((u, v, -s if (u in S) != (v in S) else s) for u, v, s in self.edges), self.labels)

    def negated(self) -> "SignedGraph":
        return SignedGraph(self.n, tuple((u, v, -s) for u, v, s in self.edges), self.labels)


def make_signed_graph(n: int, edges) -> SignedGraph:
    canon = sorted((min(u, v), max(u, v), int(s)) for u, v, s in edges)
    return SignedGraph(n, tuple(canon))


def build_up_signed_graph(K: SimplicialComplex, d: int, opposite: bool = False) -> SignedGraph:
    """Graph on Sigma_d joining two d-faces of a common (d+1)-simplex.

    The sign is sgn(tau, d sigma) * sgn(tau', d sigma); ``opposite`` negates
    every sign, giving the convention in which the normalized up-Laplacian
    is an affine image of the signed Laplacian.
    """
    if d < 0 or d + 1 > K.dim:
        raise DimensionError(f"signed graph on Sigma_{d} needs (d+1)-simplices")
    idx = K._index[d]
    found: dict[tuple[int, int], int] = {}
    count: dict[tuple[int, int], int] = {}
    for sigma in K.simplices(d + 1):
        faces = [(idx[sigma[:j] + sigma[j + 1:]], -1 if j % 2 else 1) for j in range(len(sigma))]
        for a in range(len(faces)):
            for b in range(a + 1, len(faces)):
                (u, su), (v, sv) = faces[a], faces[b]
                key = (min(u, v), max(u, v))
                count[key] = count.get(key, 0) + 1
                found[key] = su * sv * (-1 if opposite else 1)
    for key, c in count.items():
        if c > 1:
            raise AmbiguousAdjacencyError(f"d-faces {K.simplices(d)[key[0]]} and {K.simplices(d)[key[1]]} share {c} cofaces")
    edges = tuple(sorted((u, v, s) for (u, v), s in found.items()))
    return SignedGraph(K.count(d), edges, K.simplices(d))


def signed_laplacian(G: SignedGraph) -> np.ndarray:
    """D^{-1/2} (D - A_s) D^{-1/2}."""
    deg = G.degrees
    bad = np.flatnonzero(deg == 0)
    if bad.size:
        v = G.labels[bad[0]] if G.labels else int(bad[0])
        raise DegenerateDegreeError(f"vertex {v} is isolated; signed Laplacian undefined", v)
    s = 1.0 / np.sqrt(deg.astype(float))
    L = (np.diag(deg.astype(float)) - G.adjacency()) * s[:, None] * s[None, :]
    return 0.5 * (L + L.T)


def components(G: SignedGraph) -> list[list[int]]:
    nb = G.neighbours()
    seen = [False] * G.n
    out = []
    for r in range(G.n):
        if seen[r]:
            continue
        seen[r] = True
        comp, queue = [r], deque([r])
        while queue:
            u = queue.popleft()
            for v, _ in nb[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class ComponentBalance:
    vertices: tuple[int, ...]
    balanced: bool
    antibalanced: bool
    balance_switch: tuple[int, ...] | None      # vertices to switch to reach all +1
    antibalance_switch: tuple[int, ...] | None  # vertices to switch to reach all -1

    @property
    def verdict(self) -> str:
        if self.balanced and self.antibalanced:
            return "balanced+antibalanced"
        if self.balanced:
            return "balanced"
        if self.antibalanced:
            return "antibalanced"
        return "neither"


def _propagate(comp: list[int], nb, target: int) -> tuple[int, ...] | None:
    sigma = {comp[0]: 1}
    queue = deque([comp[0]])
    while queue:
        u = queue.popleft()
        for v, s in nb[u]:
            want = target * s * sigma[u]
            if v not in sigma:
                sigma[v] = want
                queue.append(v)
            elif sigma[v] != want:
                return None
    return tuple(sorted(v for v in comp if sigma[v] == -1))


def balance_decompose(G: SignedGraph) -> list[ComponentBalance]:
    """Per connected component: can switching make every sign +1 (or -1)?"""
    nb = G.neighbours()
    out = []
    for comp in components(G):
        bal = _propagate(comp, nb, 1)
        anti = _propagate(comp, nb, -1)
        out.append(ComponentBalance(tuple(comp), bal is not None, anti is not None, bal, anti))
    return out


def balance_by_enumeration(G: SignedGraph) -> list[tuple[bool, bool]]:
    """Exhaustive 2^|C| switching search per component (oracle for small graphs)."""
    out = []
    for comp in components(G):
        inner = [(u, v, s) for u, v, s in G.edges if u in comp]
        pos = {v: i for i, v in enumerate(comp)}
        bal = anti = False
        for bits in product((1, -1), repeat=len(comp)):
            signs = {s * bits[pos[u]] * bits[pos[v]] for u, v, s in inner}
            bal = bal or signs <= {1}
            anti = anti or signs <= {-1}
        out.append((bal, anti))
    return out


def beta_s(G: SignedGraph, V1: Sequence[int], V2: Sequence[int]) -> Fraction:
    """Signed isoperimetric ratio of a sub-bipartition, exact."""
    x = np.zeros(G.n, dtype=np.int64)
    x[list(V1)] = 1
    x[list(V2)] = -1
    if not np.any(x):
        raise ValueError("sub-bipartition must be nonempty")
    num = sum(abs(int(x[u]) - s * int(x[v])) for u, v, s in G.edges)
    den = int(G.degrees @ np.abs(x))
    if den == 0:
        raise DegenerateDegreeError("sub-bipartition has zero volume")
    return Fraction(num, den)


@dataclass(frozen=True)
class SignedCheegerResult:
    value: Fraction
    k: int
    witness: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]  # k pairs (V_{2i-1}, V_{2i})
    encoding: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"value": str(self.value), "k": self.k,
                "witness": [[list(a), list(b)] for a, b in self.witness], "encoding": list(self.encoding)}


_CHUNK = 1 << 16


def _scan(G: SignedGraph, k: int, start: int, stop: int):
    """Best (ratio, index, num, den) over assignment indices [start, stop)."""
    n, base = G.n, 2 * k + 1
    eu = np.array([e[0] for e in G.edges], dtype=np.int64)
    ev = np.array([e[1] for e in G.edges], dtype=np.int64)
    es = np.array([e[2] for e in G.edges], dtype=np.int64)
    deg = G.degrees
    best = None
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        idx = np.arange(lo, hi, dtype=np.int64)
        codes = np.empty((hi - lo, n), dtype=np.int64)
        rem = idx.copy()
        for j in range(n - 1, -1, -1):
            rem, codes[:, j] = np.divmod(rem, base)
        worst = np.zeros(hi - lo)
        ok = np.ones(hi - lo, dtype=bool)
        nums = np.zeros((hi - lo, k), dtype=np.int64)
        dens = np.zeros((hi - lo, k), dtype=np.int64)
        for i in range(k):
            x = (codes == 2 * i + 1).astype(np.int64) - (codes == 2 * i + 2).astype(np.int64)
            num = np.abs(x[:, eu] - es * x[:, ev]).sum(axis=1) if len(eu) else np.zeros(hi - lo, dtype=np.int64)
            den = np.abs(x) @ deg
            ok &= den > 0
            with np.errstate(divide="ignore", invalid="ignore"):
                worst = np.maximum(worst, num / np.where(den > 0, den, 1))
            nums[:, i], dens[:, i] = num, den
        if not ok.any():
            continue
        worst = np.where(ok, worst, np.inf)
        j = int(np.argmin(worst))  # first index among ties
        cand = (float(worst[j]), lo + j, codes[j].copy(), nums[j].copy(), dens[j].copy())
        if best is None or cand[:2] < best[:2]:
            best = cand
    return best


def signed_cheeger(G: SignedGraph, k: int = 1, limits: Limits | None = None, threads: int = 1) -> SignedCheegerResult:
    """Exact k-way signed Cheeger constant by exhaustive enumeration.

    Each vertex is unused or placed on one side of one of the k pairs; the
    value is min over assignments of max_i beta_s(V_{2i-1}, V_{2i}).  Ties
    resolve to the lexicographically smallest assignment code (vertex 0
    most significant; 0 unused, 2i-1 and 2i the two sides of pair i).
    """
    if k < 1:
        raise ValueError("k must be positive")
    limits = limits or default_limits()
    check_capacity(f"signed_cheeger k={k} vertices", G.n, limits.signed_limit(k))
    if G.n < k:
        raise ValueError(f"need at least k={k} vertices")
    total = (2 * k + 1) ** G.n
    threads = max(1, int(threads))
    bounds = np.linspace(0, total, threads + 1).astype(np.int64) if threads > 1 else np.array([0, total])
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if len(spans) > 1:
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            parts = list(pool.map(lambda ab: _scan(G, k, *ab), spans))
    else:
        parts = [_scan(G, k, *spans[0])]
    best = min((p for p in parts if p is not None), key=lambda p: p[:2])
    _, _, code, nums, dens = best
    value = max(Fraction(int(a), int(b)) for a, b in zip(nums, dens))
    witness = tuple(
        (tuple(int(v) for v in np.flatnonzero(code == 2 * i + 1)), tuple(int(v) for v in np.flatnonzero(code == 2 * i + 2)))
        for i in range(k)
    )
    return SignedCheegerResult(value, k, witness, tuple(int(c) for c in code))


def signed_cheeger_naive(G: SignedGraph, k: int = 1) -> Fraction:
    """Reference enumeration with itertools and exact fractions (tests only scale)."""
    best = None
    for code in product(range(2 * k + 1), repeat=G.n):
        vals = []
        for i in range(k):
            V1 = [v for v in range(G.n) if code[v] == 2 * i + 1]
            V2 = [v for v in range(G.n) if code[v] == 2 * i + 2]
            if not V1 and not V2:
                break
            if int(G.degrees[V1 + V2].sum()) == 0:
                break
            vals.append(beta_s(G, V1, V2))
        else:
            v = max(vals)
            best = v if best is None or v < best else best
    return best

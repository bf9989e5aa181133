"""Finite simplicial complexes, incidence matrices and Betti numbers.

Every simplex is stored once as a strictly increasing vertex tuple; that
ordering is the orientation used by all matrices and cochains in the package.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionError, MalformedInputError
from .exact import rank_gf2, rank_q

Simplex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Downward-closed complex with canonical (ascending) orientations."""

    simplices_by_dim: tuple[tuple[Simplex, ...], ...]

    def __post_init__(self):
        for d, layer in enumerate(self.simplices_by_dim):
            for s in layer:
                if len(s) != d + 1 or any(a >= b for a, b in zip(s, s[1:])):
                    raise MalformedInputError(f"simplex {s} is not a sorted {d}-simplex")
            if list(layer) != sorted(set(layer)):
                raise MalformedInputError(f"dimension {d} simplices not sorted/unique")
        for d in range(1, len(self.simplices_by_dim)):
            lower = set(self.simplices_by_dim[d - 1])
            for s in self.simplices_by_dim[d]:
                for j in range(len(s)):
                    if s[:j] + s[j + 1:] not in lower:
                        raise MalformedInputError(
                            f"complex not closed: facet of {s} missing"
                        )

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.simplices(0))

    @property
    def dim(self) -> int:
        return len(self.simplices_by_dim) - 1

    def simplices(self, d: int) -> tuple[Simplex, ...]:
        if 0 <= d < len(self.simplices_by_dim):
            return self.simplices_by_dim[d]
        return ()

    def count(self, d: int) -> int:
        return len(self.simplices(d))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.simplices_by_dim)

    @cached_property
    def _index(self) -> tuple[dict[Simplex, int], ...]:
        return tuple({s: i for i, s in enumerate(layer)} for layer in self.simplices_by_dim)

    def index(self, simplex: Sequence[int]) -> int:
        s = tuple(simplex)
        return self._index[len(s) - 1][s]

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(simplex))
        return 0 < len(s) <= len(self._index) and s in self._index[len(s) - 1]

    @cached_property
    def _up_degrees(self) -> tuple[np.ndarray, ...]:
        out = []
        for d in range(self.dim + 1):
            deg = np.zeros(self.count(d), dtype=np.int64)
            idx = self._index[d]
            for s in self.simplices(d + 1):
                for j in range(len(s)):
                    deg[idx[s[:j] + s[j + 1:]]] += 1
            deg.setflags(write=False)
            out.append(deg)
        return tuple(out)

    def degrees(self, d: int) -> np.ndarray:
        """deg tau = number of (d+1)-simplices containing tau, for tau in Sigma_d."""
        if not 0 <= d <= self.dim:
            return np.zeros(0, dtype=np.int64)
        return self._up_degrees[d]

    def up_degree(self, simplex: Sequence[int]) -> int:
        s = tuple(simplex)
        return int(self.degrees(len(s) - 1)[self.index(s)])

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def all_simplices(self) -> list[Simplex]:
        return [s for layer in self.simplices_by_dim for s in layer]

    def facets(self) -> list[Simplex]:
        """Maximal simplices."""
        out = []
        for d in range(self.dim + 1):
            deg = self.degrees(d)
            out.extend(s for s, k in zip(self.simplices(d), deg) if k == 0)
        return out

    def is_pure(self) -> bool:
        return all(len(f) == self.dim + 1 for f in self.facets())

    def canonical_json(self) -> str:
        payload = {str(d): [list(s) for s in layer] for d, layer in enumerate(self.simplices_by_dim)}
        return json.dumps({"simplices": payload}, sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def relabel(self, offset: int) -> "SimplicialComplex":
        return build_complex([tuple(v + offset for v in f) for f in self.facets()])

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self.simplices_by_dim == other.simplices_by_dim

    def __hash__(self) -> int:
        return hash(self.simplices_by_dim)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector()})"


def build_complex(facets: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Smallest downward-closed complex containing every given facet."""
    layers: dict[int, set[Simplex]] = {}
    for f in facets:
        f = [int(v) for v in f]
        if not f:
            continue
        if any(v < 0 for v in f):
            raise MalformedInputError(f"negative vertex id in {f}")
        if len(set(f)) != len(f):
            raise MalformedInputError(f"facet {f} repeats a vertex")
        s = tuple(sorted(f))
        for k in range(1, len(s) + 1):
            layers.setdefault(k - 1, set()).update(combinations(s, k))
    if not layers:
        raise MalformedInputError("empty complex")
    top = max(layers)
    return SimplicialComplex(tuple(tuple(sorted(layers.get(d, ()))) for d in range(top + 1)))


def complex_from_simplices(simplices: Mapping) -> SimplicialComplex:
    """Load the explicit ``{"0": [...], "1": [...]}`` form, verifying closure."""
    layers = []
    dims = sorted(int(k) for k in simplices)
    if dims != list(range(len(dims))):
        raise MalformedInputError("simplex dimensions must be 0..n without gaps")
    for d in dims:
        layer = set()
        for s in simplices[str(d)] if str(d) in simplices else simplices[d]:
            t = tuple(sorted(int(v) for v in s))
            if len(set(t)) != len(t) or len(t) != d + 1:
                raise MalformedInputError(f"bad {d}-simplex {s}")
            layer.add(t)
        layers.append(tuple(sorted(layer)))
    return SimplicialComplex(tuple(layers))


def complex_from_dict(payload: Mapping) -> SimplicialComplex:
    if not isinstance(payload, Mapping):
        raise MalformedInputError("complex JSON must be an object")
    if "facets" in payload:
        facets = payload["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise MalformedInputError("'facets' must be a list of vertex lists")
        return build_complex(facets)
    if "simplices" in payload:
        return complex_from_simplices(payload["simplices"])
    raise MalformedInputError("complex JSON needs a 'facets' or 'simplices' key")


def load_complex(path: str | Path) -> SimplicialComplex:
    text = Path(path).read_text()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON at line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    return complex_from_dict(payload)


def to_facet_json(K: SimplicialComplex) -> dict:
    return {"facets": [list(f) for f in sorted(K.facets(), key=lambda s: (len(s), s))]}


@dataclass(frozen=True)
class IncidenceMatrix:
    """B_d: rows indexed by Sigma_{d-1}, columns by Sigma_d, entries in {-1,0,1}."""

    dim: int
    rows: tuple[Simplex, ...]
    cols: tuple[Simplex, ...]
    matrix: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def T(self) -> np.ndarray:
        return self.matrix.T


def boundary_sign(face: Simplex, simplex: Simplex) -> int:
    """sgn([face], boundary [simplex]) under ascending orientations; 0 if not a facet."""
    if len(face) + 1 != len(simplex):
        return 0
    for j in range(len(simplex)):
        if simplex[:j] + simplex[j + 1:] == face:
            return -1 if j % 2 else 1
    return 0


def incidence_matrix(K: SimplicialComplex, d: int) -> IncidenceMatrix:
    """Integer matrix of the boundary map from d-chains to (d-1)-chains."""
    if d < 1 or d > K.dim:
        raise DimensionError(f"incidence matrix B_{d} needs 1 <= d <= {K.dim}")
    rows, cols = K.simplices(d - 1), K.simplices(d)
    B = np.zeros((len(rows), len(cols)), dtype=np.int64)
    idx = K._index[d - 1]
    for c, s in enumerate(cols):
        for j in range(len(s)):
            B[idx[s[:j] + s[j + 1:]], c] = -1 if j % 2 else 1
    B.setflags(write=False)
    return IncidenceMatrix(d, rows, cols, B)


def boundary_array(K: SimplicialComplex, d: int) -> np.ndarray:
    """B_d as an array, with empty shapes outside 1..dim (no exception)."""
    if 1 <= d <= K.dim:
        return incidence_matrix(K, d).matrix
    return np.zeros((K.count(d - 1), K.count(d)), dtype=np.int64)


def reduced_boundary_array(K: SimplicialComplex, d: int) -> np.ndarray:
    """B_d for the augmented chain complex: at d = 0 a single row of ones.

    Its transpose spans the coboundaries of (d-1)-cochains with constants
    counted as the coboundaries of the augmentation.
    """
    if d == 0:
        return np.ones((1, K.count(0)), dtype=np.int64)
    return boundary_array(K, d)


def coboundary_array(K: SimplicialComplex, d: int) -> np.ndarray:
    """delta_d = B_{d+1}^T, mapping d-cochains to (d+1)-cochains."""
    return boundary_array(K, d + 1).T


def betti_numbers(K: SimplicialComplex, field: str = "rationals") -> tuple[int, ...]:
    """b_d = #Sigma_d - rank B_d - rank B_{d+1}, exact over Q or GF(2)."""
    if field in ("rationals", "Q", "q"):
        rank = rank_q
    elif field in ("gf2", "GF2", "z2"):
        rank = rank_gf2
    else:
        raise ValueError(f"unknown field {field!r}")
    ranks = [0] + [rank(incidence_matrix(K, d).matrix) for d in range(1, K.dim + 1)] + [0]
    return tuple(K.count(d) - ranks[d] - ranks[d + 1] for d in range(K.dim + 1))


def reduced_betti(K: SimplicialComplex, d: int, field: str = "rationals") -> int:
    b = betti_numbers(K, field)[d] if d <= K.dim else 0
    return b - 1 if d == 0 else b


def boundary_rank(K: SimplicialComplex, d: int, reduced: bool = False) -> int:
    """Exact rational rank of B_d (reduced: rank of the augmentation at d = 0)."""
    if d == 0:
        return 1 if (reduced and K.count(0)) else 0
    if d > K.dim:
        return 0
    return rank_q(incidence_matrix(K, d).matrix)

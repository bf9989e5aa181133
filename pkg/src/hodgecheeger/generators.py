"""Deterministic small complexes used by the test suite and the CLI."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .complex import SimplicialComplex, betti_numbers, build_complex
from .errors import MalformedInputError


@dataclass(frozen=True)
class NamedComplex:
    name: str
    complex: SimplicialComplex
    expected: dict = field(default_factory=dict)

    def __post_init__(self):
        check_expected(self.complex, self.expected, self.name)


def dual_graph(K: SimplicialComplex, top: int | None = None) -> dict[int, list[int]]:
    """Adjacency of top simplices that share a codimension-1 face."""
    top = K.dim if top is None else top
    owners: dict[tuple, list[int]] = {}
    for i, s in enumerate(K.simplices(top)):
        for j in range(len(s)):
            owners.setdefault(s[:j] + s[j + 1:], []).append(i)
    adj = {i: set() for i in range(K.count(top))}
    for group in owners.values():
        for a, b in combinations(group, 2):
            adj[a].add(b)
            adj[b].add(a)
    return {i: sorted(v) for i, v in adj.items()}


def graph_diameter(adj: dict[int, list[int]]) -> int | None:
    """Diameter by BFS from every vertex; None if disconnected."""
    best = 0
    for src in adj:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        if len(dist) != len(adj):
            return None
        best = max(best, max(dist.values()))
    return best


def is_closed_pseudomanifold(K: SimplicialComplex) -> bool:
    d = K.dim
    return d >= 1 and K.is_pure() and all(int(k) == 2 for k in K.degrees(d - 1))


def check_expected(K: SimplicialComplex, expected: dict, name: str = "") -> None:
    """Raise if any recorded invariant disagrees with the complex."""
    checks = {
        "f_vector": lambda: K.f_vector(),
        "betti_q": lambda: betti_numbers(K, "rationals"),
        "betti_gf2": lambda: betti_numbers(K, "gf2"),
        "closed": lambda: is_closed_pseudomanifold(K),
        "dual_diameter": lambda: graph_diameter(dual_graph(K)),
        "euler": lambda: K.euler_characteristic(),
    }
    for key, want in expected.items():
        if key not in checks:
            raise MalformedInputError(f"{name}: unknown expected key {key!r}")
        got = checks[key]()
        if isinstance(want, tuple):
            got = tuple(got)
        if got != want:
            raise AssertionError(f"{name}: expected {key}={want}, got {got}")


def boundary_of_simplex(n: int) -> NamedComplex:
    """All proper faces of the n-simplex on {0..n}; a triangulated (n-1)-sphere."""
    if n < 2:
        raise MalformedInputError("boundary_of_simplex needs n >= 2")
    K = build_complex(combinations(range(n + 1), n))
    betti = tuple([1] + [0] * (n - 2) + [1])
    return NamedComplex(f"boundary_simplex:{n}", K, {"betti_q": betti, "closed": True, "dual_diameter": 1})


def full_simplex(n: int) -> NamedComplex:
    K = build_complex([tuple(range(n + 1))])
    return NamedComplex(f"simplex:{n}", K, {"betti_q": tuple([1] + [0] * n)})


def octahedron() -> NamedComplex:
    # antipodal pairs (0,1), (2,3), (4,5); one triangle per choice of signs
    facets = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return NamedComplex(
        "octahedron",
        build_complex(facets),
        {"f_vector": (6, 12, 8), "betti_q": (1, 0, 1), "closed": True, "dual_diameter": 3},
    )


def icosahedron() -> NamedComplex:
    # apex 0, upper ring 1..5, lower ring 6..10 (offset by half a turn), apex 11
    up = [1, 2, 3, 4, 5]
    lo = [6, 7, 8, 9, 10]
    facets = []
    for i in range(5):
        j = (i + 1) % 5
        facets += [(0, up[i], up[j]), (11, lo[i], lo[j]), (up[i], up[j], lo[i]), (lo[i], lo[j], up[j])]
    return NamedComplex(
        "icosahedron",
        build_complex(facets),
        {"f_vector": (12, 30, 20), "betti_q": (1, 0, 1), "euler": 2, "closed": True, "dual_diameter": 5},
    )


def torus_7() -> NamedComplex:
    """Moebius-Kantor 7-vertex torus (Csaszar triangulation)."""
    facets = []
    for i in range(7):
        facets.append((i, (i + 1) % 7, (i + 3) % 7))
        facets.append((i, (i + 2) % 7, (i + 3) % 7))
    return NamedComplex(
        "torus7",
        build_complex(facets),
        {"f_vector": (7, 21, 14), "betti_q": (1, 2, 1), "betti_gf2": (1, 2, 1), "closed": True},
    )


def rp2_6() -> NamedComplex:
    """Six-vertex real projective plane (hemi-icosahedron), vertices relabelled 0..5."""
    raw = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
           (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    facets = [tuple(v - 1 for v in f) for f in raw]
    return NamedComplex(
        "rp2",
        build_complex(facets),
        {"f_vector": (6, 15, 10), "betti_q": (1, 0, 0), "betti_gf2": (1, 1, 1), "closed": True},
    )


def k_skeleton(K: SimplicialComplex, k: int, name: str = "K") -> NamedComplex:
    if k < 0 or k > K.dim:
        raise MalformedInputError(f"skeleton dimension {k} outside 0..{K.dim}")
    sk = SimplicialComplex(K.simplices_by_dim[: k + 1])
    return NamedComplex(f"skeleton:{k}:{name}", sk)


def cone(K: SimplicialComplex, name: str = "K") -> NamedComplex:
    apex = max(K.vertices) + 1
    C = build_complex([f + (apex,) for f in K.facets()])
    return NamedComplex(f"cone:{name}", C, {"betti_q": tuple([1] + [0] * C.dim)})


def disjoint_union(K1: SimplicialComplex, K2: SimplicialComplex, name1: str = "K1", name2: str = "K2") -> NamedComplex:
    shift = max(K1.vertices) + 1
    U = build_complex(list(K1.facets()) + [tuple(v + shift for v in f) for f in K2.facets()])
    b1, b2 = betti_numbers(K1), betti_numbers(K2)
    n = max(len(b1), len(b2))
    b1, b2 = b1 + (0,) * (n - len(b1)), b2 + (0,) * (n - len(b2))
    return NamedComplex(f"union:{name1}+{name2}", U, {"betti_q": tuple(a + b for a, b in zip(b1, b2))})


_SIMPLE = {
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "torus7": torus_7,
    "torus_7": torus_7,
    "rp2": rp2_6,
    "rp2_6": rp2_6,
}


def _split_union(spec: str) -> tuple[str, str]:
    # split at the first '+', so nested unions associate to the right
    left, plus, right = spec.partition("+")
    if not plus:
        raise MalformedInputError(f"union spec needs '+': {spec!r}")
    return left, right


def generate(spec: str) -> NamedComplex:
    """Build a complex from a generator spec such as ``cone:torus7``.

    Grammar: ``boundary_simplex:N``, ``simplex:N``, ``octahedron``,
    ``icosahedron``, ``torus7``, ``rp2``, ``cone:SPEC``, ``skeleton:K:SPEC``
    and ``union:SPEC+SPEC``.
    """
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    try:
        if head in _SIMPLE and not rest:
            return _SIMPLE[head]()
        if head == "boundary_simplex":
            return boundary_of_simplex(int(rest))
        if head == "simplex":
            return full_simplex(int(rest))
        if head == "cone":
            inner = generate(rest)
            return cone(inner.complex, inner.name)
        if head == "skeleton":
            k, _, inner_spec = rest.partition(":")
            inner = generate(inner_spec)
            return k_skeleton(inner.complex, int(k), inner.name)
        if head == "union":
            a, b = _split_union(rest)
            A, B = generate(a), generate(b)
            return disjoint_union(A.complex, B.complex, A.name, B.name)
    except ValueError as exc:
        raise MalformedInputError(f"bad generator spec {spec!r}: {exc}") from exc
    raise MalformedInputError(f"unknown generator {spec!r}")


SUITE = (
    "simplex:2",
    "boundary_simplex:2",
    "boundary_simplex:3",
    "boundary_simplex:4",
    "octahedron",
    "icosahedron",
    "torus7",
    "rp2",
    "cone:boundary_simplex:3",
    "cone:octahedron",
    "skeleton:1:boundary_simplex:3",
    "skeleton:2:boundary_simplex:4",
    "union:boundary_simplex:3+simplex:2",
)


def suite() -> list[NamedComplex]:
    return [generate(s) for s in SUITE]

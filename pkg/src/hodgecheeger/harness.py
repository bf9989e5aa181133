"""Assertion families run by ``verify`` and by the acceptance tests.

Each section takes a complex and returns a VerificationReport.  Checks that
cannot run within the capacity limits are recorded as report-only entries
with the reason, never silently dropped.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import cheeger as ch
from . import p_laplacian as pl
from .complex import SimplicialComplex
from .errors import CapacityError, Limits, PreconditionError, default_limits
from .laplacians import LaplacianSpec, spectrum, verify_eckmann, verify_hodge_union, verify_up_down_duality
from .reporting import REPORT, Assertion, VerificationReport, check

SECTIONS = ("eckmann", "duality", "gap-d2", "rough-cheeger", "d1d4-equivalence", "manifold-diameter", "p-family", "z2")

EQUIVALENCE_MAX_N = 10
SIGNED_MAX_N = 12


def valid_dims(K: SimplicialComplex) -> list[int]:
    """Dimensions d < dim K where every d-simplex has a coface."""
    return [d for d in range(K.dim) if K.count(d) and not np.any(K.degrees(d) == 0)]


def _skip(report: VerificationReport, name: str, reason: str) -> None:
    report.add(Assertion(name, REPORT, None, None, reason))


def section_eckmann(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    return verify_eckmann(K)


def section_duality(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    report = VerificationReport("duality")
    for d in range(K.dim):
        report.extend(verify_up_down_duality(K, d))
    for d in range(K.dim + 1):
        report.extend(verify_hodge_union(K, d))
    for d in valid_dims(K):
        mu = spectrum(K, LaplacianSpec(d, "up", normalized=True))
        report.add(check(f"normalized up spectrum in [0, d+2] [d={d}]",
                         bool(mu.min() >= -1e-9 and mu.max() <= d + 2 + 1e-9), float(mu.min()), float(mu.max())))
        report.extend(ch.verify_affine_spectral_map(K, d))
        report.extend(ch.verify_reflection_identity(K, d))
    return report


def section_gap_d2(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    report = VerificationReport("gap-d2")
    for d in valid_dims(K):
        if K.count(d) > min(SIGNED_MAX_N, limits.signed_k1):
            _skip(report, f"gap-d2 d={d}", f"#Sigma_d = {K.count(d)} above the enumeration limit")
            continue
        sub = ch.verify_gap_dplus2(K, d, kmax=3, limits=limits, threads=threads)
        report.extend(sub)
        report.data[f"d={d}"] = sub.data
    return report


def section_rough_cheeger(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    report = VerificationReport("rough-cheeger")
    for d in valid_dims(K):
        try:
            sub = ch.verify_rough_cheeger(K, d, limits=limits)
        except CapacityError as exc:
            _skip(report, f"rough cheeger d={d}", str(exc))
            continue
        report.extend(sub)
        report.data[f"d={d}"] = sub.data
    return report


def section_equivalence(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    """D1 = D2 = D4 exactly and the D3 certificate, where the grid stabilizes."""
    report = VerificationReport("d1d4-equivalence")
    for d in valid_dims(K):
        n = K.count(d)
        if n > EQUIVALENCE_MAX_N:
            _skip(report, f"equivalence d={d}", f"#Sigma_d = {n} > {EQUIVALENCE_MAX_N}")
            continue
        try:
            r1 = ch.h_sigma_d_bruteforce(K, d, limits=limits, threads=threads)
            r2 = ch.h_sigma_d_zexpander(K, d, limits=limits, threads=threads)
            r4 = ch.h_sigma_d_filling(K, d, "grid", limits=limits, threads=threads)
        except CapacityError as exc:
            _skip(report, f"equivalence d={d}", str(exc))
            continue
        stable = all(r.stabilized for r in (r1, r2, r4))
        name = f"D1 = D2 = D4 [d={d}]"
        if not stable:
            report.add(Assertion(name, REPORT, r1.value, r2.value, "grid did not stabilize within max_grid"))
            continue
        report.add(check(name, r1.value == r2.value == r4.value, r1.value, (r2.value, r4.value)))
        try:
            rc = ch.h_sigma_d_filling(K, d, "circuits", limits=limits)
            report.add(check(f"grid = exact circuits [d={d}]", rc.value == r2.value, r2.value, rc.value))
        except CapacityError as exc:
            _skip(report, f"grid = exact circuits [d={d}]", str(exc))
        if r2.value > 0:
            report.add(check(f"D3 certificate [d={d}]", ch.certify_d3(K, d, r2), r2.value, r2.witness))
        report.data[f"d={d}"] = {"h": r2.value, "stabilized_at_M": r2.stabilized_at_M, "witness": r2.witness}
    return report


def section_manifold(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    """h(Sigma_{n-1}) = 1/diam of the dual graph, the l1/l_inf duality instance and the down constant."""
    report = VerificationReport("manifold-diameter")
    try:
        target = ch.diameter_formula(K)
    except PreconditionError as exc:
        _skip(report, "diameter formula", f"not applicable: {exc}")
        return report
    d = K.dim - 1
    report.data["one_over_diam"] = target
    n = K.count(d)
    try:
        grid = ch.h_sigma_d_zexpander(K, d, limits=limits, threads=threads)
        report.add(check(f"brute force h = 1/diam [d={d}]", grid.value == target, grid.value, target,
                         f"M checked up to {grid.checked_M}, stabilized={grid.stabilized}"))
        lhs = grid.value
    except CapacityError:
        bracket = ch.gap0_bracket(K, d)
        ok = bracket["lower"] <= float(target) + 1e-12 and target <= bracket["upper"]
        report.add(check(f"bracket contains 1/diam [d={d}]", ok, (bracket["lower"], bracket["upper"]), target))
        report.data["bracket"] = bracket
        lhs = None
    try:
        exact = ch.h_sigma_d_filling(K, d, "circuits", limits=limits)
        report.add(check(f"exact circuits h = 1/diam [d={d}]", exact.value == target, exact.value, target))
        lhs = exact.value if lhs is None else lhs
    except CapacityError as exc:
        _skip(report, f"exact circuits [d={d}]", str(exc))
    m = K.count(K.dim)
    if lhs is not None and m <= 10:
        rhs, _ = ch.infinity_dual_ratio(K, 3, limits)
        report.add(check("l1/l_inf duality: h = min |B y|_inf / spread(z y)", lhs == rhs, lhs, rhs))
    report.add(check("distance witness attains 1/diam", ch.distance_witness_ratio(K) == target,
                     ch.distance_witness_ratio(K), target))
    down = ch.h_down(K, K.dim, limits)
    report.data["h_down_top"] = down.value
    if m <= 8:
        grid_down = ch.h_down(K, K.dim, limits, method="orientation", threads=threads)
        report.add(check("down constant: dual-graph cuts = grid", down.value == grid_down.value,
                         down.value, grid_down.value))
    return report


def section_p_family(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    report = VerificationReport("p-family")
    for d in valid_dims(K):
        n = K.count(d)
        if n > min(SIGNED_MAX_N, limits.signed_k1):
            _skip(report, f"gap-p p=2 d={d}", f"#Sigma_d = {n} above the enumeration limit")
        else:
            sub = pl.verify_gap_p(K, d, 2.0, limits=limits, threads=threads)
            report.extend(sub)
        if n <= 6 and K.count(d + 1) <= 6:
            report.extend(pl.verify_p_duality(K, d, 3.0, threads=threads))
        try:
            report.extend(pl.verify_rough_cheeger_p(K, d, 2.0, limits))
        except CapacityError as exc:
            _skip(report, f"rough cheeger p=2 d={d}", str(exc))
    return report


def section_z2(K: SimplicialComplex, limits: Limits, threads: int) -> VerificationReport:
    """Report the Z2 constant next to the real one; Z2 = 0 < h flags torsion."""
    report = VerificationReport("z2")
    for d in valid_dims(K):
        try:
            z = ch.z2_cheeger(K, d, limits)
            h = ch.h_sigma_d(K, d, limits)
        except CapacityError as exc:
            _skip(report, f"z2 d={d}", str(exc))
            continue
        detail = "Z2/R mismatch" if z.value == 0 and h.value > 0 else ""
        report.add(Assertion(f"z2 vs real constant [d={d}]", REPORT, z.value, h.value, detail))
    return report


_RUNNERS = {
    "eckmann": section_eckmann,
    "duality": section_duality,
    "gap-d2": section_gap_d2,
    "rough-cheeger": section_rough_cheeger,
    "d1d4-equivalence": section_equivalence,
    "manifold-diameter": section_manifold,
    "p-family": section_p_family,
    "z2": section_z2,
}


def parse_sections(text: str) -> tuple[str, ...]:
    if text == "all":
        return SECTIONS
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    unknown = [s for s in names if s not in _RUNNERS]
    if unknown:
        raise ValueError(f"unknown sections {unknown}; choose from {SECTIONS}")
    return names


def run_sections(K: SimplicialComplex, sections, limits: Limits | None = None, threads: int = 1) -> dict[str, VerificationReport]:
    limits = limits or default_limits()
    return {name: _RUNNERS[name](K, limits, threads) for name in sections}


__all__ = ["SECTIONS", "valid_dims", "parse_sections", "run_sections"]

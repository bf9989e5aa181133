"""Exception types and capacity limits shared by every module."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass


class HodgeCheegerError(Exception):
    """Base class for all library errors."""


class MalformedInputError(HodgeCheegerError, ValueError):
    pass


class DimensionError(HodgeCheegerError, ValueError):
    pass


class NumericInputError(HodgeCheegerError, ValueError):
    pass


class DegenerateDegreeError(HodgeCheegerError, ValueError):
    """A normalization needs a positive degree and found zero."""

    def __init__(self, message: str, simplex=None):
        super().__init__(message)
        self.simplex = simplex


class AmbiguousAdjacencyError(HodgeCheegerError, ValueError):
    pass


class InfeasibleError(HodgeCheegerError):
    pass


class UnboundedError(HodgeCheegerError):
    pass


class CapacityError(HodgeCheegerError):
    """An enumeration would exceed a configured limit."""

    def __init__(self, message: str, limit_name: str, limit, requested):
        super().__init__(message)
        self.limit_name = limit_name
        self.limit = limit
        self.requested = requested


class PreconditionError(HodgeCheegerError, ValueError):
    pass


ENV_VAR = "HODGECHEEGER_LIMITS"


@dataclass(frozen=True)
class Limits:
    """Guardrails for exhaustive enumerations.

    Override from the environment with e.g.
    ``HODGECHEEGER_LIMITS="max_grid=1e6,signed_k1=10"``.
    """

    max_grid: int = 10**7          # (2M+1)**n grid points for multiset searches
    signed_k1: int = 12            # vertices for 1-way signed Cheeger
    signed_k2: int = 9
    signed_k3: int = 8
    z2_max_cochains: int = 2**22
    max_circuit_subsets: int = 200_000
    max_dual_cuts: int = 2**22

    def signed_limit(self, k: int) -> int:
        if k == 1:
            return self.signed_k1
        if k == 2:
            return self.signed_k2
        if k == 3:
            return self.signed_k3
        return max(1, self.signed_k3 - 2 * (k - 3))

    def replace(self, **changes) -> "Limits":
        return dataclasses.replace(self, **changes)


def _parse_limits(text: str) -> dict:
    names = {f.name for f in dataclasses.fields(Limits)}
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in names:
            raise MalformedInputError(f"unknown limit {key!r} in {ENV_VAR}")
        out[key] = int(float(value))
    return out


def default_limits() -> Limits:
    text = os.environ.get(ENV_VAR, "")
    return Limits(**_parse_limits(text)) if text else Limits()


def check_capacity(name: str, requested, limit) -> None:
    if requested > limit:
        raise CapacityError(
            f"{name}: {requested} exceeds limit {limit}", name, limit, requested
        )

"""Closed-form Green functions and model functions on the bidisk.

Poles are recorded as sets of points; values are natural logarithms and
``-inf`` marks a pole.  Nothing here raises at a pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .numcore import mobius_log

LOG3_HALF = 0.5 * math.log(3.0)
LOG6_HALF = 0.5 * math.log(6.0)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _pair(z):
    z = tuple(complex(c) for c in z)
    if len(z) != 2:
        raise ValueError("expected a pair of complex coordinates")
    return z


def _check_open(z):
    if max(abs(z[0]), abs(z[1])) >= 1:
        raise DomainError(f"{z} is not in the open bidisk")


def _check_closed_punctured(z):
    if z[0] == 0 and z[1] == 0:
        raise DomainError("the model is not defined at the origin")
    if max(abs(z[0]), abs(z[1])) > 1:
        raise DomainError(f"{z} is not in the closed bidisk")


class RegionTag(str, Enum):
    D0 = "D0"
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D0p = "D0p"
    D1p = "D1p"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GreenBound:
    """Lower and upper bounds for G_eps at ``z``, the model value and the region."""

    z: tuple
    lower: float
    upper: float
    model: float
    region: RegionTag

    @property
    def width(self) -> float:
        if math.isinf(self.lower) or math.isinf(self.upper):
            return math.nan
        return self.upper - self.lower

    def violates(self, tol: float = 1e-9) -> bool:
        if math.isinf(self.lower) or math.isinf(self.upper):
            return False
        return self.lower > self.upper + tol


# ---------------------------------------------------------------------------
# exact Green functions


def disk_multipole_green(poles, zeta: complex, closed: bool = False) -> float:
    """Green function of the unit disk with simple poles: sum of Mobius logs."""
    return float(sum(mobius_log(zeta, a, closed=closed) for a in poles))


def product_green(S1, S2, z) -> float:
    """Green function of a product pole set ``S1 x S2`` in the bidisk.

    Points of the closed bidisk are accepted; on the distinguished boundary
    the value is 0.
    """
    z = _pair(z)
    return max(disk_multipole_green(S1, z[0], closed=True),
               disk_multipole_green(S2, z[1], closed=True))


def lower_bound_L(eps: float, rho: float, z) -> float:
    """The lower envelope for three poles (0,0), (rho,0), (0,eps).

    ``max(1/2 log|z1 z2 psi|, log|z1| + m(z1, rho), log|z2| + m(z2, eps)) - 1/2 log 3``
    with ``psi = z1 + (rho/eps) z2 - rho`` and ``m`` the Mobius log.
    """
    eps, rho = float(eps), float(rho)
    if not (0 < rho <= eps < 1):
        raise DomainError("need 0 < rho <= eps < 1")
    z1, z2 = _pair(z)
    _check_open((z1, z2))
    psi = z1 + (rho / eps) * z2 - rho
    t1 = 0.5 * _log(abs(z1 * z2 * psi))
    t2 = _log(abs(z1)) + mobius_log(z1, rho)
    t3 = _log(abs(z2)) + mobius_log(z2, eps)
    return max(t1, t2, t3) - LOG3_HALF


def limit_L(z, case: str = "generic") -> float:
    """Pointwise limit of ``lower_bound_L`` as eps -> 0 (rho = eps or rho = o(eps))."""
    z1, z2 = _pair(z)
    if max(abs(z1), abs(z2)) > 1:
        raise DomainError(f"{(z1, z2)} is not in the closed bidisk")
    if case == "generic":
        t1 = 0.5 * _log(abs(z1 * z2 * (z1 + z2)))
    elif case == "degenerate":
        t1 = 0.5 * _log(abs(z1 * z1 * z2))
    else:
        raise ValueError("case must be 'generic' or 'degenerate'")
    return max(t1, 2 * _log(abs(z1)), 2 * _log(abs(z2))) - LOG3_HALF


# ---------------------------------------------------------------------------
# regions and piecewise models


def classify_region(z, partition: str = "generic") -> RegionTag:
    """Region label; ties go to D0, then D3, then D1 (primed: D0p, then D1p)."""
    z1, z2 = _pair(z)
    _check_closed_punctured((z1, z2))
    a1, a2 = abs(z1), abs(z2)
    if partition == "generic":
        if a2 <= a1 * a1 or a1 <= a2 * a2 or abs(z1 + z2) <= a1 * a1:
            return RegionTag.D0
        w = z2 / z1
        if abs(w + 1) <= 0.5:
            return RegionTag.D3
        if abs(w) <= 1:
            return RegionTag.D1
        return RegionTag.D2
    if partition == "degenerate":
        if a2 <= a1 ** 1.5 or a1 <= a2 * a2:
            return RegionTag.D0p
        return RegionTag.D1p
    raise ValueError("partition must be 'generic' or 'degenerate'")


def model_H(z) -> float:
    z1, z2 = _pair(z)
    tag = classify_region((z1, z2), "generic")
    l1, l2 = _log(abs(z1)), _log(abs(z2))
    if tag is RegionTag.D0:
        return 2 * max(l1, l2)
    if tag is RegionTag.D1:
        return l1 + 0.5 * l2
    if tag is RegionTag.D2:
        return 0.5 * l1 + l2
    return l1 + 0.5 * _log(abs(z1 + z2))


def model_F(z) -> float:
    z1, z2 = _pair(z)
    tag = classify_region((z1, z2), "degenerate")
    l1, l2 = _log(abs(z1)), _log(abs(z2))
    if tag is RegionTag.D0p:
        return 2 * max(l1, l2)
    return 0.5 * l1 + l2


def model_F_check(z) -> float:
    """``F`` with the coordinates exchanged."""
    z1, z2 = _pair(z)
    return model_F((z2, z1))


def region_F_check(z) -> RegionTag:
    """Primed region of the swapped point, the partition that governs ``F_check``."""
    z1, z2 = _pair(z)
    return classify_region((z2, z1), "degenerate")


# ---------------------------------------------------------------------------
# two poles


def two_point_model(R: float, rho: complex, xi) -> float:
    """Green function of the bidisk of radius R with poles 0 and (rho, 0)."""
    R = float(R)
    x1, x2 = _pair(xi)
    if not 0 < abs(rho) < R:
        raise DomainError("need 0 < |rho| < R")
    if max(abs(x1), abs(x2)) >= R:
        raise DomainError("xi must lie in the bidisk of radius R")
    t1 = _log(abs(x1 * (rho - x1) / (R * R - x1 * np.conj(rho))))
    return max(t1, _log(abs(x2) / R))


def two_point_limit(xi) -> float:
    x1, x2 = _pair(xi)
    return max(2 * _log(abs(x1)), _log(abs(x2)))


def rough_bounds(N: int, delta: float, G0: float, Geps: float) -> bool:
    """Whether ``(N + delta) G0 <= Geps <= (1 - delta) G0``."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return bool((N + delta) * G0 <= Geps <= (1 - delta) * G0)


__all__ = [
    "RegionTag", "GreenBound", "disk_multipole_green", "product_green", "lower_bound_L",
    "limit_L", "classify_region", "model_H", "model_F", "model_F_check", "region_F_check",
    "two_point_model", "two_point_limit", "rough_bounds", "LOG3_HALF", "LOG6_HALF",
]

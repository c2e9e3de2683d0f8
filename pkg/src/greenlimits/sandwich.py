"""Certified two-sided bounds for the three-pole Green function on sample points.

The lower bound is the explicit envelope ``L_eps``; the upper bound is the
smallest value given by the analytic disks that apply at the point, or by the
Green function of a single pole.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import disks
from .errors import (
    CertificationError,
    ConvergenceError,
    DegenerateConfigurationError,
    DomainError,
    RegionError,
)
from .green import (
    GreenBound,
    classify_region,
    limit_L,
    lower_bound_L,
    model_F_check,
    model_H,
    region_F_check,
)
from .numcore import mobius_log

_SKIP = (RegionError, ConvergenceError, CertificationError, DegenerateConfigurationError, DomainError)


def poles(eps: float, rho: float) -> list[tuple]:
    return [(0j, 0j), (complex(rho), 0j), (0j, complex(eps))]


def single_pole_bound(z, eps: float, rho: float) -> float:
    """Fewer poles give a larger Green function: min over the poles of the one-pole value."""
    z1, z2 = z
    return min(max(mobius_log(z1, a), mobius_log(z2, b)) for a, b in poles(eps, rho))


def candidate_disks(z, eps: float, rho: float):
    """Raw (unfitted) disks worth trying at z, as (label, builder) pairs."""
    z1, z2 = z
    a1, a2 = abs(z1), abs(z2)
    out = []
    if a2 <= a1 * a1:
        out.append(("axes-z1", lambda: disks.disk_axes(z, eps, rho, "z1")))
    if a1 <= a2 * a2:
        out.append(("axes-z2", lambda: disks.disk_axes(z, eps, rho, "z2")))
    if a2 * a2 <= a1 <= a2:
        out.append(("three-pole-1", lambda: disks.three_pole_disk(z, rho, eps, case=1)))
    if a1 * a1 <= a2 <= a1:
        out.append(("three-pole-2", lambda: disks.three_pole_disk(z, rho, eps, case=2)))
    if rho == eps:
        if abs(z1 + z2) <= a1 * a1:
            out.append(("axes-anti", lambda: disks.disk_axes(z, eps, rho, "anti")))
        if z2 != 0 and abs(z1 / z2 + 1) < 0.5:
            out.extend(_reflected_candidates(z, eps))
    elif a2 * a2 < a1 <= a2 ** 1.5:
        out.append(("neil", lambda: disks.disk_neil(z, eps, rho / eps)))
    return out


def _reflected_candidates(z, eps):
    w = disks.reflection(eps)(z)
    w1, w2 = w
    b1, b2 = abs(w1), abs(w2)
    raw = []
    if b2 <= b1 * b1:
        raw.append(("z1", lambda: disks.disk_axes(w, eps, eps, "z1", fit=False)))
    if b1 <= b2 * b2:
        raw.append(("z2", lambda: disks.disk_axes(w, eps, eps, "z2", fit=False)))
    if b2 * b2 <= b1 <= b2:
        raw.append(("three-pole-1", lambda: disks.three_pole_disk(w, eps, eps, case=1, fit=False)))
    if b1 * b1 <= b2 <= b1:
        raw.append(("three-pole-2", lambda: disks.three_pole_disk(w, eps, eps, case=2, fit=False)))
    return [("reflected-" + lab, (lambda f=f: disks.reflected_disk(f(), eps))) for lab, f in raw]


def upper_bound(z, eps: float, rho: float | None = None) -> tuple[float, str]:
    """Smallest certified upper bound for G_eps(z) and the construction that gave it."""
    rho = eps if rho is None else rho
    z = (complex(z[0]), complex(z[1]))
    best, label = single_pole_bound(z, eps, rho), "single-pole"
    for lab, build in candidate_disks(z, eps, rho):
        try:
            d = build()
            val = disks.upper_bound_from_disk(d)
        except _SKIP:
            continue
        if val < best:
            best, label = val, lab
    return best, label


def green_bound(z, eps: float, rho: float | None = None, case: str = "generic") -> GreenBound:
    rho = eps if rho is None else rho
    z = (complex(z[0]), complex(z[1]))
    lower = lower_bound_L(eps, rho, z)
    upper, _ = upper_bound(z, eps, rho)
    if case == "generic":
        model, region = model_H(z), classify_region(z, "generic")
    elif case == "degenerate":
        model, region = model_F_check(z), region_F_check(z)
    else:
        raise ValueError("case must be 'generic' or 'degenerate'")
    return GreenBound(z, lower, upper, model, region)


# ---------------------------------------------------------------------------
# sampling


def collar_distance(z, case: str = "generic") -> float:
    """Distance, in the defining inequalities, to the boundary of the exceptional region."""
    z1, z2 = z
    a1, a2 = abs(z1), abs(z2)
    if case == "generic":
        gaps = (a2 - a1 * a1, a1 - a2 * a2, abs(z1 + z2) - a1 * a1)
    else:
        gaps = (a1 - a2 ** 1.5, a2 - a1 * a1)
    return min(abs(g) for g in gaps)


def sample_torus(r: float, n: int, seed: int, collar: float = 0.0, case: str = "generic") -> np.ndarray:
    """``n`` points with ``max(|z1|, |z2|) = r``, as an (n, 2) complex array.

    One coordinate (chosen at random) has modulus r, the other a modulus
    uniform in (0, r]; both arguments are uniform.  Points within ``collar``
    of the exceptional-region boundary are redrawn.
    """
    if not 0 < r < 1:
        raise ValueError("torus radius must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        which = rng.integers(2)
        m = r * (1 - rng.random())
        th = rng.random(2) * 2 * np.pi
        mods = (r, m) if which == 0 else (m, r)
        z = (mods[0] * np.exp(1j * th[0]), mods[1] * np.exp(1j * th[1]))
        if collar > 0 and collar_distance(z, case) < collar:
            continue
        out.append(z)
    return np.array(out, dtype=complex).reshape(n, 2)


# ---------------------------------------------------------------------------
# runner


@dataclass(frozen=True)
class SandwichSummary:
    n: int
    violations: int
    max_width: float
    max_model_gap: float
    violating_points: tuple


def _bound_chunk(args):
    pts, eps, rho, case = args
    return [green_bound(tuple(p), eps, rho, case) for p in pts]


def run_sandwich(points, eps: float, rho: float | None = None, case: str = "generic",
                 jobs: int = 1) -> list[GreenBound]:
    """GreenBound records in input order; ``jobs > 1`` spreads chunks over processes."""
    pts = np.asarray(points, dtype=complex).reshape(-1, 2)
    rho = eps if rho is None else rho
    if jobs <= 1 or len(pts) < 2:
        return _bound_chunk((pts, eps, rho, case))
    chunks = [c for c in np.array_split(pts, min(jobs * 4, len(pts))) if len(c)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_bound_chunk, [(c, eps, rho, case) for c in chunks]))
    return [b for part in parts for b in part]


def summarize(bounds, case: str = "generic", tol: float = 1e-9) -> SandwichSummary:
    viol = [b for b in bounds if b.violates(tol)]
    widths = [b.width for b in bounds if not math.isnan(b.width)]
    gaps = [abs(b.model - limit_L(b.z, case)) for b in bounds
            if not (math.isinf(b.model) or math.isinf(limit_L(b.z, case)))]
    return SandwichSummary(len(bounds), len(viol), max(widths, default=math.nan),
                           max(gaps, default=math.nan), tuple(b.z for b in viol))

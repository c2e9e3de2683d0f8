"""Analytic disks through the poles, and the upper bounds they give.

If ``phi`` maps the unit disk into the bidisk and hits the poles at the
parameters ``zeta_i``, then ``G o phi`` is a negative subharmonic function
with logarithmic poles there, so ``G(phi(zeta)) <= sum_i log d(zeta, zeta_i)``
with ``d`` the pseudo-hyperbolic distance.

Each construction first produces a polynomial map ``phi~`` together with its
marked parameters, then ``fit_disk`` picks the largest radius ``r`` such that
``phi~(D(0, r))`` is certified to lie in the bidisk and reparametrizes
``phi(zeta) = phi~(r zeta)``.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationError, ConvergenceError, DegenerateConfigurationError, DomainError, RegionError
from .numcore import MultiPoly, mobius_log

CERT_SLACK = 1e-6
DEFAULT_MARGIN = 0.01


@dataclass(frozen=True)
class MarkedPoint:
    """A parameter value, the point it must hit, and its pole multiplicity (0 for ``z``)."""

    zeta: complex
    target: tuple
    multiplicity: int


@dataclass(frozen=True, eq=False)
class AnalyticDisk:
    maps: tuple
    marked: tuple
    gamma: float = 0.0
    certified: bool = False
    margin: float = math.nan
    kind: str = ""
    info: dict = field(default_factory=dict)

    def __call__(self, zeta):
        return tuple(np.asarray(p(zeta)) if np.ndim(zeta) else complex(p(zeta)) for p in self.maps)

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.maps)

    @property
    def poles(self) -> list[MarkedPoint]:
        return [m for m in self.marked if m.multiplicity > 0]

    @property
    def point(self) -> MarkedPoint | None:
        pts = [m for m in self.marked if m.multiplicity == 0]
        return pts[0] if pts else None

    def mark_error(self) -> float:
        """Largest distance between ``phi(zeta_i)`` and the marked targets."""
        err = 0.0
        for m in self.marked:
            val = self(m.zeta)
            err = max(err, max(abs(a - b) for a, b in zip(val, m.target)))
        return err

    def rescaled(self, r: float) -> "AnalyticDisk":
        """``zeta -> phi(r zeta)``, with the marked parameters divided by ``r``."""
        maps = tuple(_scale_arg(p, r) for p in self.maps)
        marked = tuple(MarkedPoint(m.zeta / r, m.target, m.multiplicity) for m in self.marked)
        return AnalyticDisk(maps, marked, 1.0 / r - 1.0, False, math.nan, self.kind, dict(self.info))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "maps": [p.to_json() for p in self.maps],
            "marked": [{"zeta": [m.zeta.real, m.zeta.imag],
                        "target": [v for c in m.target for v in (c.real, c.imag)],
                        "multiplicity": m.multiplicity} for m in self.marked],
            "gamma": self.gamma,
            "certified": self.certified,
            "margin": self.margin,
        }


def _scale_arg(p: MultiPoly, r: float) -> MultiPoly:
    return MultiPoly(1, {e: c * r ** e[0] for e, c in p.items()})


def _upoly(coeffs) -> MultiPoly:
    """One-variable polynomial from ascending coefficients."""
    return MultiPoly(1, {(k,): complex(c) for k, c in enumerate(coeffs) if c != 0})


def _pmul(*polys):
    out = MultiPoly.constant(1.0, 1)
    for p in polys:
        out = out * p
    return out


def _lin(a, b):
    """a * zeta + b"""
    return _upoly([b, a])


# ---------------------------------------------------------------------------
# certification


def boundary_bound(maps, r: float = 1.0, samples: int = 256) -> tuple[float, float]:
    """Sampled and rigorous sup of ``max_j |phi_j|`` over the circle ``|zeta| = r``.

    For a polynomial of degree n, Bernstein's inequality bounds the loss
    between N equispaced samples: ``sup <= max_samples / (1 - n pi / N)``.
    """
    return _boundary_bound([p.ascending_coeffs() for p in maps], r, _circle(samples))


@functools.lru_cache(maxsize=16)
def _circle(samples):
    return np.exp(1j * np.arange(samples) * (2 * np.pi / samples))


def _boundary_bound(coeffs, r, circle):
    raw = 0.0
    n = 0
    for c in coeffs:
        if len(c) == 0:
            continue
        k = np.arange(len(c))
        raw = max(raw, float(np.max(np.abs(np.polyval((c * r ** k)[::-1], circle)))))
        n = max(n, len(c) - 1)
    loss = 1 - n * math.pi / len(circle)
    return raw, (raw / loss if loss > 0 else math.inf)


def certify_disk(d: AnalyticDisk, samples: int = 256, max_samples: int = 1 << 16) -> bool:
    """Whether ``d`` maps the closed unit disk into the bidisk, with slack 1e-6.

    By the maximum principle the boundary circle suffices.  The sample count
    doubles while the verdict is undecided.
    """
    if samples < 64:
        raise ValueError("samples must be >= 64")
    limit = 1 - CERT_SLACK
    n = samples
    while True:
        raw, bound = boundary_bound(d.maps, 1.0, n)
        if bound <= limit:
            return True
        if raw > limit or n >= max_samples:
            return False
        n *= 2


def certification_margin(d: AnalyticDisk, samples: int = 256) -> float:
    _, bound = boundary_bound(d.maps, 1.0, samples)
    return 1 - bound


def fit_disk(d: AnalyticDisk, margin: float = DEFAULT_MARGIN, samples: int = 4096) -> AnalyticDisk:
    """Rescale ``d`` to the largest radius whose image is certified inside the bidisk.

    The certified sup is kept at most ``1 - margin``.  Marked parameters must
    end up strictly inside the unit disk.
    """
    target = 1 - CERT_SLACK - margin
    zmax = max((abs(m.zeta) for m in d.marked), default=0.0)
    n = max(samples, 8 * d.degree)
    coeffs = [p.ascending_coeffs() for p in d.maps]
    circle = _circle(n)

    def ok(r):
        return _boundary_bound(coeffs, r, circle)[1] <= target

    lo = zmax * (1 + 1e-9) if zmax > 0 else 1e-6
    if not ok(lo):
        raise CertificationError(f"{d.kind}: no radius keeps the marked points inside the bidisk")
    hi = max(2 * lo, 1.0)
    while ok(hi):
        lo, hi = hi, 2 * hi
        if hi > 1e6:
            break
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-7 * hi:
            break
    out = d.rescaled(lo)
    if not certify_disk(out, samples=n):
        raise CertificationError(f"{d.kind}: rescaled disk failed certification")
    return AnalyticDisk(out.maps, out.marked, out.gamma, True, certification_margin(out, n),
                        out.kind, out.info)


def upper_bound_from_disk(d: AnalyticDisk, zeta_z: complex | None = None) -> float:
    """``sum_i m_i log d(zeta_z, zeta_i)`` over the marked poles of a certified disk."""
    if not d.certified:
        raise CertificationError("disk is not certified")
    if zeta_z is None:
        if d.point is None:
            raise ValueError("disk has no marked point and no zeta_z was given")
        zeta_z = d.point.zeta
    if abs(zeta_z) >= 1:
        raise DomainError("zeta_z must lie in the open unit disk")
    return float(sum(m.multiplicity * mobius_log(zeta_z, m.zeta) for m in d.poles))


def _finish(d: AnalyticDisk, fit: bool, mark_tol: float = 1e-9) -> AnalyticDisk:
    scale = max(1.0, max(abs(c) for m in d.marked for c in m.target))
    err = d.mark_error()
    if err > mark_tol * scale:
        raise DegenerateConfigurationError(f"{d.kind}: marked points missed by {err:.3g}")
    return fit_disk(d) if fit else d


# ---------------------------------------------------------------------------
# disks near the axes


def disk_axes(z, eps: float, rho: float | None = None, branch: str | None = None,
              fit: bool = True) -> AnalyticDisk:
    """Two-pole disks for points close to an axis or to the anti-diagonal.

    Poles are (0,0), (rho,0), (0,eps) with rho defaulting to eps.  Branch
    ``"z1"`` (for ``|z2| <= |z1|^2``) runs along the first coordinate through
    (0,0) and (rho,0); branch ``"z2"`` (for ``|z1| <= |z2|^2``) runs along the
    second through (0,0) and (0,eps); branch ``"anti"`` (for
    ``|z1 + z2| <= |z1|^2``, rho = eps only) passes (0,eps) and (eps,0).
    """
    z1, z2 = (complex(c) for c in z)
    rho = eps if rho is None else rho
    a1, a2 = abs(z1), abs(z2)
    if branch is None:
        if a2 <= a1 * a1:
            branch = "z1"
        elif a1 <= a2 * a2:
            branch = "z2"
        elif rho == eps and abs(z1 + z2) <= a1 * a1:
            branch = "anti"
        else:
            raise RegionError(f"{(z1, z2)} is not in the axes region")
    zeta = _lin(1, 0)
    if branch == "z1":
        if z1 == 0 or z1 == rho:
            raise DegenerateConfigurationError("z1 must differ from 0 and rho")
        k = z2 / (z1 * (z1 - rho))
        maps = (zeta, _pmul(zeta, _lin(1, -rho)) * k)
        marked = (MarkedPoint(0j, (0j, 0j), 1), MarkedPoint(complex(rho), (complex(rho), 0j), 1),
                  MarkedPoint(z1, (z1, z2), 0))
    elif branch == "z2":
        if z2 == 0 or z2 == eps:
            raise DegenerateConfigurationError("z2 must differ from 0 and eps")
        k = z1 / (z2 * (z2 - eps))
        maps = (_pmul(zeta, _lin(1, -eps)) * k, zeta)
        marked = (MarkedPoint(0j, (0j, 0j), 1), MarkedPoint(complex(eps), (0j, complex(eps)), 1),
                  MarkedPoint(z2, (z1, z2), 0))
    elif branch == "anti":
        if rho != eps:
            raise RegionError("the anti-diagonal disk needs rho = eps")
        if z1 == 0 or z1 == eps:
            raise DegenerateConfigurationError("z1 must differ from 0 and eps")
        a = (z1 + z2 - eps) / (z1 * (z1 - eps))
        maps = (zeta, _pmul(_lin(1, -eps), _lin(a, -1)))
        marked = (MarkedPoint(0j, (0j, complex(eps)), 1), MarkedPoint(complex(eps), (complex(eps), 0j), 1),
                  MarkedPoint(z1, (z1, z2), 0))
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return _finish(AnalyticDisk(maps, marked, kind=f"axes-{branch}"), fit)


# ---------------------------------------------------------------------------
# three-pole disks


@dataclass(frozen=True)
class FixedPointTrace:
    xi: tuple
    iterations: int
    steps: tuple

    @property
    def ratios(self) -> tuple:
        s = [x for x in self.steps if x > 0]
        return tuple(b / a for a, b in zip(s, s[1:]))


def _near_root(sq: complex, prev: complex | None) -> complex:
    root = cmath.sqrt(sq)
    if prev is not None and abs(-root - prev) < abs(root - prev):
        return -root
    return root


def _three_pole_core(w1, w2, p1, p2, tol, max_iter):
    """Disk through (0,0), (p1,0), (0,p2) and (w1,w2), assuming |w2|^2 <= |w1| <= |w2|.

    ``phi~ = ((w1/w2)(1+xi1) zeta (zeta - t2), (1+xi2) zeta (zeta - t1))`` with
    ``t1, t2`` fixed by the pole conditions and ``xi`` by ``phi~(sqrt(w2)) = w``.
    """
    if w1 == 0 or w2 == 0:
        raise DegenerateConfigurationError("both coordinates must be nonzero")
    t3 = cmath.sqrt(w2)
    r = w2 / w1
    xi1 = xi2 = 0j
    mu = None
    steps = []
    for it in range(1, max_iter + 1):
        mu = _near_root(p1 * r / (1 + xi1) + p2 / (1 + xi2), mu)
        if mu == 0:
            raise DegenerateConfigurationError("the two off-origin poles collapse in parameter space")
        t1 = p1 * r / ((1 + xi1) * mu)
        t2 = -p2 / ((1 + xi2) * mu)
        n1, n2 = (1 + xi1) * t2 / t3, (1 + xi2) * t1 / t3
        step = max(abs(n1 - xi1), abs(n2 - xi2))
        steps.append(step)
        xi1, xi2 = n1, n2
        if max(abs(xi1), abs(xi2)) > 0.5 or not np.isfinite(step):
            raise ConvergenceError("fixed-point iteration left the contraction region; reduce alpha")
        if step <= tol:
            break
    else:
        raise ConvergenceError(f"fixed-point iteration did not converge in {max_iter} steps")
    mu = _near_root(p1 * r / (1 + xi1) + p2 / (1 + xi2), mu)
    t1 = p1 * r / ((1 + xi1) * mu)
    t2 = -p2 / ((1 + xi2) * mu)
    zeta = _lin(1, 0)
    maps = (_pmul(zeta, _lin(1, -t2)) * ((w1 / w2) * (1 + xi1)),
            _pmul(zeta, _lin(1, -t1)) * (1 + xi2))
    marked = (MarkedPoint(0j, (0j, 0j), 1), MarkedPoint(t1, (complex(p1), 0j), 1),
              MarkedPoint(t2, (0j, complex(p2)), 1), MarkedPoint(t3, (w1, w2), 0))
    return maps, marked, FixedPointTrace((xi1, xi2), it, tuple(steps))


def three_pole_disk(z, p1: complex, p2: complex, tol: float = 1e-14, max_iter: int = 100,
                    case: int | None = None, fit: bool = True) -> AnalyticDisk:
    """Disk through (0,0), (p1,0), (0,p2) and z.

    Case 1 needs ``|z2|^2 <= |z1| <= |z2|``; case 2 is the same with the
    coordinates exchanged.
    """
    z1, z2 = (complex(c) for c in z)
    a1, a2 = abs(z1), abs(z2)
    if case is None:
        if a2 * a2 <= a1 <= a2:
            case = 1
        elif a1 * a1 <= a2 <= a1:
            case = 2
        else:
            raise RegionError(f"{(z1, z2)} is in neither three-pole case")
    if case == 1:
        maps, marked, tr = _three_pole_core(z1, z2, p1, p2, tol, max_iter)
    elif case == 2:
        maps, marked, tr = _three_pole_core(z2, z1, p2, p1, tol, max_iter)
        maps = (maps[1], maps[0])
        marked = tuple(MarkedPoint(m.zeta, (m.target[1], m.target[0]), m.multiplicity) for m in marked)
    else:
        raise ValueError("case must be 1 or 2")
    d = AnalyticDisk(maps, marked, kind=f"three-pole-{case}", info={"trace": tr})
    return _finish(d, fit)


def _check_generic_region(z1, z2):
    a1, a2 = abs(z1), abs(z2)
    if a2 <= a1 * a1 or a1 <= a2 * a2 or abs(z1 + z2) <= a1 * a1:
        raise RegionError(f"{(z1, z2)} lies in the axes region")


def disk_generic(z, alpha: complex, tol: float = 1e-14, max_iter: int = 100,
                 fit: bool = True) -> AnalyticDisk:
    """Disk through (0,0), (alpha^2,0), (0,alpha^2) and z, away from the axes.

    Requires ``|z1/z2 + 1| >= 1/2``; the complement is handled by
    ``reflected_disk``.
    """
    z1, z2 = (complex(c) for c in z)
    if z1 == 0 or z2 == 0:
        raise RegionError("z must be off the axes")
    _check_generic_region(z1, z2)
    if abs(z1 / z2 + 1) < 0.5:
        raise RegionError("|z1/z2 + 1| < 1/2: use the reflected construction")
    a2 = complex(alpha) ** 2
    return three_pole_disk((z1, z2), a2, a2, tol, max_iter, fit=fit)


def disk_degenerate(z, alpha: complex, s: float, tol: float = 1e-14, max_iter: int = 100,
                    fit: bool = True) -> AnalyticDisk:
    """Disk through (0,0), (alpha^2 s, 0), (0, alpha^2) and z.

    With ``alpha^2 = eps`` and ``s = rho/eps`` the poles are (0,0), (rho,0), (0,eps).
    """
    z1, z2 = (complex(c) for c in z)
    if z1 == 0 or z2 == 0:
        raise RegionError("z must be off the axes")
    a1, a2 = abs(z1), abs(z2)
    if not (a2 * a2 <= a1 <= a2 or a1 * a1 <= a2 <= a1):
        raise RegionError(f"{(z1, z2)} is in neither three-pole case")
    a = complex(alpha) ** 2
    return three_pole_disk((z1, z2), a * s, a, tol, max_iter, fit=fit)


def reflection(eps: float):
    """The involution ``L(z) = (z1, eps - z1 - z2)``, which permutes the generic poles."""
    def L(z):
        return (z[0], eps - z[0] - z[1])
    return L


def reflected_disk(d: AnalyticDisk, eps: float, fit: bool = True) -> AnalyticDisk:
    """``L o phi`` for a raw disk ``phi`` built at ``L(z)``; poles are permuted by L."""
    if d.certified:
        raise ValueError("reflect the raw disk, before fitting")
    L = reflection(eps)
    p1, p2 = d.maps
    maps = (p1, MultiPoly.constant(eps, 1) - p1 - p2)
    marked = tuple(MarkedPoint(m.zeta, L(m.target), m.multiplicity) for m in d.marked)
    return _finish(AnalyticDisk(maps, marked, kind="reflected-" + d.kind, info=dict(d.info)), fit)


# ---------------------------------------------------------------------------
# perturbed Neil parabola


def disk_neil(z, eps: float, s: float, fit: bool = True) -> AnalyticDisk:
    """Disk through (0,0), (eps s, 0) and, twice, (0, eps), near ``zeta -> (zeta^3, zeta^2)``.

    ``Psi(zeta) = ((lam zeta - s/2)(zeta^2 - mu^2), zeta^2 - c^2)`` with
    ``c = s / (2 lam)``, ``mu^2 = eps + c^2`` and
    ``lam^2 = z1 / (z2 (z2 - eps)) * (z1 / (z2 - eps) + s)``; z is hit at
    ``zeta_z = (z1 / (z2 - eps) + s/2) / lam``.
    """
    z1, z2 = (complex(c) for c in z)
    a1, a2 = abs(z1), abs(z2)
    if not (a2 * a2 < a1 <= a2 ** 1.5):
        raise RegionError(f"{(z1, z2)} is not in |z2|^2 < |z1| <= |z2|^(3/2)")
    if z2 == eps:
        raise DegenerateConfigurationError("z2 coincides with the pole eps")
    a = z1 / (z2 - eps)
    lam2 = z1 / (z2 * (z2 - eps)) * (a + s)
    if abs(lam2) < 1e-300:
        raise DegenerateConfigurationError("lambda vanishes")
    lam = cmath.sqrt(lam2)
    c = s / (2 * lam)
    mu = cmath.sqrt(eps + c * c)
    zz = (a + s / 2) / lam
    maps = (_pmul(_lin(lam, -s / 2), _upoly([-mu * mu, 0, 1])), _upoly([-c * c, 0, 1]))
    poles = _merge_marks([(mu, (0j, complex(eps))), (-mu, (0j, complex(eps))),
                          (c, (0j, 0j)), (-c, (complex(eps * s), 0j))])
    marked = tuple(poles) + (MarkedPoint(zz, (z1, z2), 0),)
    d = AnalyticDisk(maps, marked, kind="neil", info={"lambda": lam, "mu": mu, "c": c})
    return _finish(d, fit)


def _merge_marks(items, tol=1e-14):
    out: list[MarkedPoint] = []
    for zeta, target in items:
        for i, m in enumerate(out):
            if abs(m.zeta - zeta) <= tol * max(1.0, abs(zeta)) and m.target == target:
                out[i] = MarkedPoint(m.zeta, m.target, m.multiplicity + 1)
                break
        else:
            out.append(MarkedPoint(complex(zeta), target, 1))
    return out


__all__ = [
    "MarkedPoint", "AnalyticDisk", "FixedPointTrace", "boundary_bound", "certify_disk",
    "certification_margin", "fit_disk", "upper_bound_from_disk", "disk_axes", "three_pole_disk",
    "disk_generic", "disk_degenerate", "reflection", "reflected_disk", "disk_neil",
]

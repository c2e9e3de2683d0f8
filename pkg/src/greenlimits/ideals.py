"""Zero-dimensional ideals through their jet spaces.

An ideal is given by polynomial generators or by a finite point set.  Its
local quotient at the base point is measured by the codimension of the
truncated jet space ``(I + m^{D+1}) / m^{D+1}``, which grows with ``D`` until
``m^{D+1}`` lies in ``I``.  Agreement at two consecutive degrees therefore
pins down the length exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotCertifiedError
from .numcore import (
    DEFAULT_RANK_TOL,
    JetSubspace,
    MultiPoly,
    jet_of,
    monomial_index,
    monomials,
    n_monomials,
    orthonormalize,
)


@dataclass(frozen=True, eq=False)
class IdealSpec:
    """An ideal given by generators or by a finite set of points.

    Exactly one of ``generators`` / ``points`` is set.  ``rank_tol`` is the
    relative tolerance used for every rank decision on this ideal's jets.
    """

    generators: tuple | None = None
    points: tuple | None = None
    base_point: tuple | None = None
    nvars: int = 2
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if (self.generators is None) == (self.points is None):
            raise ValueError("give either generators or points")
        if self.generators is not None:
            gens = tuple(self.generators)
            if not gens:
                raise ValueError("generator list is empty")
            if any(g.nvars != self.nvars for g in gens):
                raise ValueError("generators must all have nvars variables")
            object.__setattr__(self, "generators", gens)
        else:
            pts = tuple(tuple(complex(c) for c in p) for p in self.points)
            if any(len(p) != self.nvars for p in pts):
                raise ValueError("points must have nvars coordinates")
            for i, j in itertools.combinations(range(len(pts)), 2):
                if pts[i] == pts[j]:
                    raise ValueError("points must be pairwise distinct")
            object.__setattr__(self, "points", pts)
        bp = self.base_point if self.base_point is not None else (0j,) * self.nvars
        object.__setattr__(self, "base_point", tuple(complex(c) for c in bp))

    @classmethod
    def from_generators(cls, generators, base_point=None, rank_tol=DEFAULT_RANK_TOL):
        generators = list(generators)
        return cls(generators=tuple(generators), base_point=base_point,
                   nvars=generators[0].nvars, rank_tol=rank_tol)

    @classmethod
    def from_points(cls, points, base_point=None):
        points = [tuple(p) for p in points]
        return cls(points=tuple(points), base_point=base_point, nvars=len(points[0]))

    @property
    def is_point_form(self) -> bool:
        return self.points is not None

    def local_generators(self) -> list[MultiPoly]:
        """Generators re-centered so the base point becomes the origin."""
        if self.is_point_form:
            raise ValueError("point-form ideal has no explicit generators")
        return [g.shift(self.base_point) for g in self.generators]

    def is_monomial(self) -> bool:
        return (not self.is_point_form
                and all(c == 0 for c in self.base_point)
                and all(len(g.terms) == 1 for g in self.generators))

    def to_json(self) -> dict:
        if self.is_point_form:
            out = {"points": [[v for c in p for v in (c.real, c.imag)] for p in self.points]}
        else:
            out = {"generators": [g.to_json() for g in self.generators]}
        if any(c != 0 for c in self.base_point):
            out["base_point"] = [v for c in self.base_point for v in (c.real, c.imag)]
        return out

    @classmethod
    def from_json(cls, data) -> "IdealSpec":
        if not isinstance(data, dict):
            raise ValueError("ideal JSON must be an object")
        if "generators" in data:
            gens = [MultiPoly.from_json(g) for g in data["generators"]]
            if not gens:
                raise ValueError("generator list is empty")
            return cls.from_generators(gens, base_point=_parse_point(data.get("base_point")))
        if "points" in data:
            pts = [_parse_point(p) for p in data["points"]]
            if not pts:
                raise ValueError("point list is empty")
            return cls.from_points(pts, base_point=_parse_point(data.get("base_point")))
        raise ValueError("ideal JSON needs 'generators' or 'points'")


def _parse_point(flat):
    if flat is None:
        return None
    flat = [float(v) for v in flat]
    if len(flat) % 2:
        raise ValueError("points are flat [re, im, re, im, ...] lists")
    return tuple(complex(flat[i], flat[i + 1]) for i in range(0, len(flat), 2))


@dataclass(frozen=True)
class LengthResult:
    value: int
    stabilized_at: int
    certified: bool
    codims: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MultiplicityResult:
    value: int
    k_used: int
    difference_table: tuple


@dataclass(frozen=True)
class CIResult:
    ci: bool
    length: int
    multiplicity: int

    def __bool__(self):
        return self.ci


# ---------------------------------------------------------------------------
# jet spaces


def _multiples_matrix(gens, nvars, D):
    index = monomial_index(nvars, D)
    rows = []
    for g in gens:
        o = g.order
        if o < 0 or o > D:
            continue
        terms = list(g.items())
        for m in monomials(nvars, D - o):
            v = np.zeros(len(index), dtype=complex)
            for e, c in terms:
                j = index.get(tuple(a + b for a, b in zip(e, m)))
                if j is not None:
                    v[j] += c
            rows.append(v)
    if not rows:
        return np.zeros((0, len(index)), dtype=complex)
    return np.vstack(rows)


def evaluation_matrix(points, D: int, nvars: int = 2) -> np.ndarray:
    """Rows: values of the graded-lex monomials of degree <= D at each point."""
    basis = monomials(nvars, D)
    E = np.empty((len(points), len(basis)), dtype=complex)
    for i, p in enumerate(points):
        for j, e in enumerate(basis):
            val = 1 + 0j
            for zi, k in zip(p, e):
                val *= zi ** k
            E[i, j] = val
    return E


def ideal_jet_space(I: IdealSpec, D: int) -> JetSubspace:
    """Degree-<=D jets of the ideal at its base point.

    Generator form: span of the truncated jets of ``m * g`` over generators ``g``
    and monomials ``m`` (those with ``ord(m g) <= D``).  Point form: kernel of
    the evaluation map on polynomials of degree <= D.
    """
    if D < 0:
        raise ValueError("D must be >= 0")
    n = I.nvars
    if I.is_point_form:
        pts = [tuple(c - b for c, b in zip(p, I.base_point)) for p in I.points]
        rows = orthonormalize(evaluation_matrix(pts, D, n).conj(), I.rank_tol)
        return JetSubspace(n, D, rows).complement()
    gens = _dedupe(I.local_generators())
    M = _multiples_matrix(gens, n, D)
    return JetSubspace(n, D, orthonormalize(M, I.rank_tol))


def _dedupe(polys):
    seen, out = set(), []
    for p in polys:
        if p.is_zero():
            continue
        key = hash(p)
        if key in seen and any(q == p for q in out):
            continue
        seen.add(key)
        out.append(p)
    return out


def _codim(I, D):
    return ideal_jet_space(I, D).codim


def local_length(I: IdealSpec, D_max: int = 12, method: str = "jet") -> LengthResult:
    """Length of the local quotient ``O / I`` at the base point.

    The codimension of the degree-D jet space is computed for increasing D;
    the first agreement between D and D+1 certifies the value.  With
    ``method="monomial"`` (or ``"auto"`` on a monomial ideal) the staircase
    count is used instead.
    """
    if D_max < 2:
        raise ValueError("D_max must be >= 2")
    if method not in ("jet", "monomial", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if method == "monomial" or (method == "auto" and I.is_monomial()):
        exps = [next(iter(g.terms)) for g in I.generators]
        try:
            return LengthResult(monomial_length(exps), -1, True)
        except ValueError:
            if method == "monomial":
                raise
        # infinite staircase: the jet route below reports it as not certified

    if I.is_point_form:
        D = 0
    else:
        D = max(1, max(g.degree for g in I.generators))
    codims: dict = {}
    while D + 1 <= D_max:
        for d in (D, D + 1):
            if d not in codims:
                codims[d] = _codim(I, d)
        if codims[D] == codims[D + 1]:
            value = codims[D]
            certified = True
            if I.is_point_form and value != len(I.points):
                certified = False
            return LengthResult(value, D, certified, dict(codims))
        D += 1
    last = max(codims) if codims else D_max
    return LengthResult(codims.get(last, 0), last, False, dict(codims))


def jet_membership(h: MultiPoly, I: IdealSpec, D: int | None = None, tol: float = 1e-8) -> bool:
    """Whether ``h`` lies in the local ideal, decided on jets of degree ``D``.

    ``D`` defaults to a degree at which ``m^{D+1}`` is known to lie in ``I``.
    """
    if D is None:
        res = local_length(I, D_max=max(12, h.degree + 2))
        if not res.certified:
            raise NotCertifiedError("length not certified; cannot pick a jet degree")
        D = res.stabilized_at + 1
    hs = h.shift(I.base_point) if not I.is_point_form else h
    v = jet_of(hs, D)
    if v.norm == 0:
        return True
    return ideal_jet_space(I, D).contains(v, tol)


# ---------------------------------------------------------------------------
# powers and multiplicity


def ideal_power(I: IdealSpec, k: int) -> IdealSpec:
    """Ideal generated by all k-fold products of the generators."""
    if I.is_point_form:
        raise ValueError("ideal_power needs a generator-form ideal")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return I
    gens = _dedupe(I.generators)
    prods = []
    for combo in itertools.combinations_with_replacement(range(len(gens)), k):
        p = MultiPoly.constant(1.0, I.nvars)
        for i in combo:
            p = p * gens[i]
        prods.append(p)
    return IdealSpec(generators=tuple(_dedupe(prods)), base_point=I.base_point,
                     nvars=I.nvars, rank_tol=I.rank_tol)


def _nth_differences(values, n):
    d = list(values)
    for _ in range(n):
        d = [b - a for a, b in zip(d, d[1:])]
    return d


def hilbert_samuel_multiplicity(I: IdealSpec, k_max: int = 8, method: str = "auto") -> MultiplicityResult:
    """Hilbert-Samuel multiplicity from exact finite differences of ``l(I^k)``.

    The table starts at ``l(I^0) = 0``.  Once ``k -> l(I^k)`` is polynomial its
    n-th difference is constant and equals ``e(I)``; the value is accepted when
    the last two n-th differences agree.
    """
    n = I.nvars
    if k_max < n + 1:
        raise ValueError(f"k_max must be >= {n + 1}")
    base = local_length(I, method=method)
    if not base.certified:
        raise NotCertifiedError("length of I is not certified (V(I) may not be {0} near the base point)",
                                table=[0])
    if base.value == 0:
        raise ValueError("the ideal is the unit ideal at the base point")
    # m^{s+1} in I implies m^{k(s+1)} in I^k, which bounds the jet degree needed
    s = base.stabilized_at if base.stabilized_at >= 0 else None
    table = [0, base.value]
    for k in range(2, k_max + 1):
        Ik = ideal_power(I, k)
        dmax = k * (s + 1) + 1 if s is not None else 12
        res = local_length(Ik, D_max=max(dmax, 12), method=method)
        if not res.certified:
            raise NotCertifiedError(f"length of I^{k} not certified", table=table)
        table.append(res.value)
        diffs = _nth_differences(table, n)
        if len(diffs) >= 2 and diffs[-1] == diffs[-2]:
            if diffs[-1] <= 0:
                raise NotCertifiedError("non-positive multiplicity estimate", table=table)
            return MultiplicityResult(int(diffs[-1]), k, tuple(table))
    raise NotCertifiedError(f"differences not stable up to k = {k_max}", table=table)


def is_complete_intersection(I: IdealSpec, k_max: int = 8) -> CIResult:
    """``e(I) == l(I)``, i.e. the ideal is a complete intersection."""
    length = local_length(I, method="auto")
    if not length.certified:
        raise NotCertifiedError("length not certified", table=[length.value])
    mult = hilbert_samuel_multiplicity(I, k_max)
    return CIResult(mult.value == length.value, length.value, mult.value)


def monomial_length(exponents) -> int:
    """Number of monomials outside a monomial ideal (lattice points under the staircase)."""
    exps = [tuple(int(k) for k in e) for e in exponents]
    if not exps:
        raise ValueError("empty staircase")
    n = len(exps[0])
    bounds = []
    for i in range(n):
        pure = [e[i] for e in exps if all(e[j] == 0 for j in range(n) if j != i) and e[i] > 0]
        if not pure:
            if any(sum(e) == 0 for e in exps):
                return 0
            raise ValueError("monomial ideal is not zero-dimensional (infinite staircase)")
        bounds.append(min(pure))
    count = 0
    for pt in itertools.product(*(range(b) for b in bounds)):
        if not any(all(p >= g for p, g in zip(pt, e)) for e in exps):
            count += 1
    return count


def maximal_ideal_power(p: int, nvars: int = 2) -> IdealSpec:
    """``m_0^p`` generated by all monomials of degree ``p``."""
    gens = [MultiPoly.monomial(e) for e in monomials(nvars, p) if sum(e) == p]
    return IdealSpec.from_generators(gens)


def binomial_length(p: int, nvars: int = 2) -> int:
    return math.comb(nvars + p - 1, nvars)


__all__ = [
    "IdealSpec", "LengthResult", "MultiplicityResult", "CIResult",
    "ideal_jet_space", "local_length", "ideal_power", "hilbert_samuel_multiplicity",
    "is_complete_intersection", "monomial_length", "jet_membership", "evaluation_matrix",
    "maximal_ideal_power", "binomial_length", "n_monomials",
]

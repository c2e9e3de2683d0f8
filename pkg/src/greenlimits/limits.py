"""Limits of vanishing ideals of point families, taken at jet level.

A family ``S_eps`` of N points tending to the origin is evaluated along a
decreasing schedule of ``eps``.  For each ``eps`` the degree-<=D polynomials
vanishing on ``S_eps`` form a subspace of codimension N; the family converges
when these subspaces are Cauchy in the projector gap.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateConfigurationError, DomainError
from .ideals import IdealSpec, evaluation_matrix, ideal_jet_space, is_complete_intersection
from .numcore import (
    DEFAULT_RANK_TOL,
    JetSubspace,
    MultiPoly,
    monomial_index,
    monomials,
    orthonormalize,
    subspace_gap,
)

DEFAULT_SCHEDULE = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4)


@dataclass(frozen=True, eq=False)
class PointFamily:
    """N points whose coordinates are polynomials in ``eps``.

    ``coords[i][j]`` is a one-variable MultiPoly giving coordinate j of point i.
    ``limit_ideal`` is the known limit, when there is one.
    """

    name: str
    coords: tuple
    schedule: tuple = DEFAULT_SCHEDULE
    limit_ideal: IdealSpec | None = None

    def __post_init__(self):
        coords = tuple(tuple(_as_eps_poly(c) for c in pt) for pt in self.coords)
        if not coords:
            raise ValueError("a family needs at least one point")
        if len({len(pt) for pt in coords}) != 1:
            raise ValueError("all points need the same number of coordinates")
        sched = tuple(float(e) for e in self.schedule)
        if any(e <= 0 for e in sched):
            raise ValueError("schedule entries must be positive")
        if any(b >= a for a, b in zip(sched, sched[1:])):
            raise ValueError("schedule must be strictly decreasing")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "schedule", sched)

    @property
    def npoints(self) -> int:
        return len(self.coords)

    @property
    def nvars(self) -> int:
        return len(self.coords[0])

    def with_schedule(self, schedule) -> "PointFamily":
        return PointFamily(self.name, self.coords, tuple(schedule), self.limit_ideal)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "coords": [[c.to_json() for c in pt] for pt in self.coords],
            "schedule": list(self.schedule),
        }

    @classmethod
    def from_json(cls, data) -> "PointFamily":
        if not isinstance(data, dict) or "coords" not in data:
            raise ValueError("family JSON needs 'coords'")
        coords = []
        for pt in data["coords"]:
            polys = [MultiPoly.from_json(c) for c in pt]
            if any(p.nvars != 1 for p in polys):
                raise ValueError("family coordinates must be polynomials in eps alone")
            coords.append(tuple(polys))
        sched = data.get("schedule", DEFAULT_SCHEDULE)
        return cls(str(data.get("name", "family")), tuple(coords), tuple(sched))


def _as_eps_poly(c):
    if isinstance(c, MultiPoly):
        if c.nvars != 1:
            raise ValueError("family coordinates must be polynomials in eps alone")
        return c
    return MultiPoly.constant(complex(c), 1)


def family_points(F: PointFamily, eps: float) -> list[tuple]:
    """Points of the family at ``eps``; raises on coincident points."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = [tuple(complex(c(eps)) for c in pt) for pt in F.coords]
    for i, j in itertools.combinations(range(len(pts)), 2):
        if max(abs(a - b) for a, b in zip(pts[i], pts[j])) == 0:
            raise DegenerateConfigurationError(f"points {i} and {j} coincide at eps = {eps:g}")
    for p in pts:
        if max(abs(c) for c in p) >= 1:
            raise DomainError(f"point {p} at eps = {eps:g} leaves the open bidisk")
    return pts


def vanishing_subspace(points, D: int, rank_tol: float = DEFAULT_RANK_TOL) -> JetSubspace:
    """Degree-<=D polynomials vanishing at every point, as a jet subspace.

    The evaluation map must be onto ``C^N``; otherwise degree D is too small to
    separate the points and an error is raised.
    """
    points = [tuple(complex(c) for c in p) for p in points]
    if not points:
        raise ValueError("no points")
    n = len(points[0])
    # work with the cluster blown up to unit size: E_p = E_q diag(s^deg)
    s = max(abs(c) for p in points for c in p) or 1.0
    q = [tuple(c / s for c in p) for p in points]
    rows = orthonormalize(evaluation_matrix(q, D, n).conj(), rank_tol)
    if rows.shape[0] < len(points):
        raise DegenerateConfigurationError(
            f"evaluation map at degree {D} has rank {rows.shape[0]} < {len(points)}; increase D")
    K = JetSubspace(n, D, rows).complement().basis
    if s == 1.0 or K.shape[0] == 0:
        return JetSubspace(n, D, K)
    degs = np.array([sum(e) for e in monomials(n, D)], dtype=float)
    A = (K * s ** (-degs)).T
    # Householder QR is accurate on row-graded matrices once rows are sorted by size
    order = np.argsort(-np.linalg.norm(A, axis=1), kind="stable")
    Qs, _ = np.linalg.qr(A[order])
    Q = np.empty_like(Qs)
    Q[order] = Qs
    return JetSubspace(n, D, np.ascontiguousarray(Q.T))


@dataclass(frozen=True)
class LimitReport:
    limit_subspace: JetSubspace
    gaps: tuple
    converged: bool
    gap_to_target: float | None = None
    schedule: tuple = ()
    step_gaps: tuple = ()
    codims: tuple = ()
    limsup_rank: int = 0
    liminf_rank: int = 0
    tolerance: float = 0.0
    degree: int = 0
    extra: dict = field(default_factory=dict)


def _span(subspaces, tol):
    rows = np.vstack([S.basis for S in subspaces])
    S0 = subspaces[0]
    return JetSubspace(S0.nvars, S0.degree_cap, orthonormalize(rows, tol))


def _intersection(subspaces, tol):
    comps = [S.complement() for S in subspaces]
    return _span(comps, tol).complement()


def family_limit(F: PointFamily, D: int, tol: float | None = None, target: IdealSpec | None = None,
                 rank_tol: float = DEFAULT_RANK_TOL) -> LimitReport:
    """Jet-level limit of the vanishing ideals along the family's schedule.

    ``converged`` requires the gaps between consecutive schedule subspaces to
    decrease over the last three entries, the estimated distance of the final
    subspace to the limit to be at most ``tol`` (default ``10 * eps_final``),
    and the span and the intersection of the last two subspaces (at the
    tolerance ``10 * eps`` of the second to last entry) to have the limit's rank.

    The distance estimate assumes the O(eps) rate: with ``q`` the ratio of the
    last two schedule entries it is ``step_last * q / (1 - q)``.
    """
    sched = F.schedule
    if len(sched) < 4:
        raise ValueError("schedule needs at least 4 entries")
    subs = [vanishing_subspace(family_points(F, e), D, rank_tol) for e in sched]
    final = subs[-1]
    tol = 10 * sched[-1] if tol is None else float(tol)
    gaps = tuple(subspace_gap(S, final) for S in subs)
    steps = tuple(subspace_gap(a, b) for a, b in zip(subs, subs[1:]))
    tail = steps[-3:]
    decreasing = all(b < a for a, b in zip(tail, tail[1:]))
    mix_tol = 10 * sched[-2]
    sup_rank = _span(subs[-2:], mix_tol).rank
    inf_rank = _intersection(subs[-2:], mix_tol).rank
    q = sched[-1] / sched[-2]
    est = steps[-1] * q / (1 - q)
    converged = bool(decreasing and est <= tol and sup_rank == inf_rank == final.rank)
    gt = None
    if target is not None:
        gt = gap_to_ideal_subspace(final, target, D)
    return LimitReport(final, gaps, converged, gt, sched, steps, tuple(S.codim for S in subs),
                       sup_rank, inf_rank, tol, D, {"subspaces": tuple(subs), "final_estimate": est})


def gap_to_ideal_subspace(S: JetSubspace, target: IdealSpec, D: int) -> float:
    T = ideal_jet_space(target, D)
    if T.rank != S.rank:
        warnings.warn(f"rank mismatch: limit has rank {S.rank}, target has rank {T.rank}",
                      stacklevel=3)
    return subspace_gap(S, T)


def gap_to_ideal(R: LimitReport, target: IdealSpec, D: int | None = None) -> float:
    """Projector gap between the limit subspace and the target's jets.

    A rank mismatch is reported with a warning; the gap is then 1.
    """
    D = R.degree if D is None else D
    if D != R.limit_subspace.degree_cap:
        raise ValueError("D must equal the degree the limit was computed at")
    return gap_to_ideal_subspace(R.limit_subspace, target, D)


def extrapolated_limit(R: LimitReport, rank: int | None = None) -> JetSubspace:
    """Limit subspace with the O(eps) error removed by a two-point extrapolation.

    Uses the projectors at the last two schedule entries and keeps the top
    ``rank`` eigenvectors of the extrapolated (Hermitian) projector.
    """
    if "subspaces" not in R.extra:
        raise ValueError("report does not carry the schedule subspaces")
    e1, e2 = R.schedule[-2], R.schedule[-1]
    S1, S2 = R.extra["subspaces"][-2], R.extra["subspaces"][-1]
    P = (e1 * S2.projector() - e2 * S1.projector()) / (e1 - e2)
    P = (P + P.conj().T) / 2
    w, v = np.linalg.eigh(P)
    r = S2.rank if rank is None else rank
    basis = v[:, np.argsort(w)[::-1][:r]].T
    # eigenvectors are columns of v; rows of the jet basis carry coefficients
    return JetSubspace(S2.nvars, S2.degree_cap, np.ascontiguousarray(basis))


def limit_ideal_from_report(R: LimitReport, clean_tol: float = 1e-5, sv_tol: float = 1e-3) -> IdealSpec:
    """Ideal generated by minimal generators of the limit subspace.

    Only the part of the limit ``L`` orthogonal to ``z_1 L + z_2 L`` is kept;
    by Nakayama these polynomials still generate the ideal, provided the jet
    degree is at least the number of points.  The inputs here derive from
    orthonormal bases, so ranks are decided on absolute singular values
    (``sv_tol``), and coefficients below ``clean_tol`` are treated as the
    residual O(eps) noise and dropped.
    """
    S = R.limit_subspace
    if "subspaces" in R.extra:
        S = extrapolated_limit(R)
    B = np.where(np.abs(S.basis) > clean_tol, S.basis, 0)
    shifted = np.vstack([_shift_rows(B, S.nvars, S.degree_cap, i) for i in range(S.nvars)])
    M = _row_space(shifted, sv_tol)
    if M.shape[0]:
        B = B - (B @ M.conj().T) @ M
    G = _row_space(B, sv_tol)
    G = np.where(np.abs(G) > clean_tol, G, 0)
    gens = []
    for row in _reduced_basis(G, sv_tol):
        scale = np.max(np.abs(row))
        row = np.where(np.abs(row) > clean_tol * scale, row, 0)
        terms = {e: c for e, c in zip(monomials(S.nvars, S.degree_cap), row) if c != 0}
        gens.append(MultiPoly(S.nvars, terms))
    return IdealSpec.from_generators(gens)


def _row_space(A, sv_tol):
    if A.shape[0] == 0:
        return A
    _, sv, vh = np.linalg.svd(A, full_matrices=False)
    return vh[: int(np.sum(sv > sv_tol))]


def _shift_rows(B, nvars, D, i):
    """Coefficient rows of ``z_i * b`` truncated at degree D."""
    index = monomial_index(nvars, D)
    src, dst = [], []
    for e, j in index.items():
        f = list(e)
        f[i] += 1
        k = index.get(tuple(f))
        if k is not None:
            src.append(j)
            dst.append(k)
    out = np.zeros_like(B)
    out[:, dst] = B[:, src]
    return out


def _reduced_basis(B, pivot_tol=1e-12):
    """Row echelon form of the basis, pivoting from the highest monomial down.

    Echelon rows are sparse, which lets small-coefficient cleanup recover exact
    generators such as monomials and binomials.
    """
    B = np.array(B, dtype=complex)
    r, n = B.shape
    row = 0
    for col in range(n - 1, -1, -1):
        if row == r:
            break
        piv = row + int(np.argmax(np.abs(B[row:, col])))
        if abs(B[piv, col]) < pivot_tol:
            continue
        B[[row, piv]] = B[[piv, row]]
        B[row] /= B[row, col]
        for i in range(r):
            if i != row:
                B[i] -= B[i, col] * B[row]
        row += 1
    return B[:row]


@dataclass(frozen=True)
class Prediction:
    converges: bool
    length: int
    multiplicity: int


def predict_green_convergence(limit: IdealSpec, k_max: int = 8) -> Prediction:
    """Green functions of the family converge to the limit ideal's iff it is CI."""
    r = is_complete_intersection(limit, k_max)
    return Prediction(r.ci, r.length, r.multiplicity)


# ---------------------------------------------------------------------------
# built-in families


def _eps():
    return MultiPoly.var(0, 1)


def _const(c):
    return MultiPoly.constant(c, 1)


def _gens(*polys):
    return IdealSpec.from_generators(list(polys))


def gen3_generic(schedule=DEFAULT_SCHEDULE) -> PointFamily:
    e, o = _eps(), _const(0)
    from .ideals import maximal_ideal_power
    return PointFamily("gen3-generic", ((o, o), (e, o), (o, e)), tuple(schedule),
                       maximal_ideal_power(2))


def gen3_collinear(alpha: complex = 1.0, schedule=DEFAULT_SCHEDULE) -> PointFamily:
    e, o = _eps(), _const(0)
    a = complex(alpha)
    z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    limit = _gens(z1 ** 3, z2 - a * z1 ** 2)
    return PointFamily(f"gen3-collinear({alpha})", ((o, o), (e, a * e * e), (-e, a * e * e)),
                       tuple(schedule), limit)


def two_point(v=(1.0, 0.0), schedule=DEFAULT_SCHEDULE) -> PointFamily:
    e, o = _eps(), _const(0)
    v1, v2 = complex(v[0]), complex(v[1])
    if v1 == 0 and v2 == 0:
        raise ValueError("direction must be nonzero")
    z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    # limit <l, m^2> where l is the linear form vanishing along v
    lin = v2 * z1 - v1 * z2
    limit = _gens(lin, z1 ** 2, z1 * z2, z2 ** 2)
    return PointFamily("two-point", ((o, o), (v1 * e, v2 * e)), tuple(schedule), limit)


def product_family(N1: int = 2, N2: int = 2, schedule=DEFAULT_SCHEDULE) -> PointFamily:
    e = _eps()
    pts = tuple((j * e, k * e) for j in range(N1) for k in range(N2))
    z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    return PointFamily(f"product-{N1}x{N2}", pts, tuple(schedule), _gens(z1 ** N1, z2 ** N2))


def degenerate_3pt(schedule=DEFAULT_SCHEDULE) -> PointFamily:
    """(0,0), (eps^2, 0), (0, eps): the configuration with rho = eps^2."""
    e, o = _eps(), _const(0)
    from .ideals import maximal_ideal_power
    return PointFamily("degenerate-3pt", ((o, o), (e * e, o), (o, e)), tuple(schedule),
                       maximal_ideal_power(2))


BUILTIN_FAMILIES = {
    "gen3-generic": gen3_generic,
    "gen3-collinear": gen3_collinear,
    "two-point": two_point,
    "product": product_family,
    "degenerate-3pt": degenerate_3pt,
}


def builtin_family(name: str, **params) -> PointFamily:
    """Look up a built-in family; ``product-AxB`` is accepted as a shorthand."""
    if name.startswith("product-") and "x" in name[8:]:
        a, b = name[8:].split("x", 1)
        return product_family(int(a), int(b), **params)
    try:
        return BUILTIN_FAMILIES[name](**params)
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {sorted(BUILTIN_FAMILIES)}") from None

"""Local residues of polynomial maps of two variables.

Zeros are found by eliminating ``z2`` with a Sylvester resultant (sampled on a
circle and interpolated with the FFT), then back-solved and Newton-polished.
Residues at multiple zeros come from splitting the zero with a small random
linear perturbation and extrapolating the simple-zero sums back to ``t = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DegenerateConfigurationError, MultipleZeroError
from .numcore import MultiPoly, monomials, poly_eval

DEFAULT_T_SCHEDULE = (1e-3, 1e-4, 1e-5)
MEMBERSHIP_THRESHOLD = 1e-6
_SPLIT_T = 1e-6


@dataclass(frozen=True, eq=False)
class PolyMap2:
    """``Psi = (P, Q)``; zeros are sought in ``max|z_i| <= domain_radius``."""

    components: tuple
    domain_radius: float = 1.0
    jacobian: MultiPoly = field(init=False, repr=False)
    partials: tuple = field(init=False, repr=False)

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != 2 or any(not isinstance(c, MultiPoly) or c.nvars != 2 for c in comps):
            raise ValueError("need two polynomials in two variables")
        if all(c.is_zero() for c in comps):
            raise ValueError("both components are zero")
        if not self.domain_radius > 0:
            raise ValueError("domain_radius must be positive")
        P, Q = comps
        parts = ((P.diff(0), P.diff(1)), (Q.diff(0), Q.diff(1)))
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "partials", parts)
        object.__setattr__(self, "jacobian", parts[0][0] * parts[1][1] - parts[0][1] * parts[1][0])

    @classmethod
    def of(cls, P, Q, domain_radius: float = 1.0) -> "PolyMap2":
        return cls((P, Q), domain_radius)

    def __call__(self, z):
        return np.array([poly_eval(c, z) for c in self.components])

    def key(self) -> tuple:
        """Hashable identity of the map (exact coefficients and radius)."""
        return (tuple(tuple(sorted(c.items(), key=lambda t: t[0])) for c in self.components),
                self.domain_radius)

    @property
    def degrees(self) -> tuple:
        return tuple(c.degree for c in self.components)

    def perturbed(self, t: float, A) -> "PolyMap2":
        """``Psi + t A z``."""
        z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
        P, Q = self.components
        return PolyMap2((P + (t * A[0, 0]) * z1 + (t * A[0, 1]) * z2,
                         Q + (t * A[1, 0]) * z1 + (t * A[1, 1]) * z2), self.domain_radius)

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components],
                "domain_radius": self.domain_radius}

    @classmethod
    def from_json(cls, data) -> "PolyMap2":
        try:
            comps = tuple(MultiPoly.from_json(c) for c in data["components"])
            return cls(comps, float(data.get("domain_radius", 1.0)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed map JSON: {exc}") from exc


@dataclass(frozen=True)
class ResidueResult:
    value: complex
    method: str
    estimated_error: float
    table: tuple = ()

    def __post_init__(self):
        if not self.estimated_error >= 0:
            raise ValueError("estimated_error must be non-negative")

    def to_json(self) -> dict:
        out = {"value": [self.value.real, self.value.imag], "method": self.method,
               "estimated_error": self.estimated_error}
        if self.table:
            out["table"] = [{"t": t, "sum": [s.real, s.imag]} for t, s in self.table]
        return out


def random_linear_map(seed: int) -> np.ndarray:
    """Seeded complex 2x2 matrix of spectral norm 1."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return A / np.linalg.norm(A, 2)


def _scale(p: MultiPoly, z) -> float:
    """Size of the terms of ``p`` at ``z``; residuals are measured against it."""
    m = max(1.0, abs(z[0]), abs(z[1]))
    return sum(abs(c) * m ** sum(e) for e, c in p.items()) or 1.0


# ---------------------------------------------------------------------------
# elimination


def _coeffs_in_z2(p: MultiPoly, x) -> np.ndarray:
    """Ascending coefficients in ``z2`` of ``p(x, .)`` for each sample ``x``."""
    x = np.asarray(x, dtype=complex)
    out = np.zeros((len(x), max(p.degree_in(1), 0) + 1), dtype=complex)
    for (i, j), c in p.items():
        out[:, j] += c * x ** i
    return out


def _sylvester_det(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched Sylvester determinants; ``a``, ``b`` hold ascending coefficients."""
    m, n = a.shape[1] - 1, b.shape[1] - 1
    N = m + n
    S = np.zeros((a.shape[0], N, N), dtype=complex)
    for k in range(n):
        S[:, k, k:k + m + 1] = a[:, ::-1]
    for k in range(m):
        S[:, n + k, k:k + n + 1] = b[:, ::-1]
    return np.linalg.det(S)


def resultant_z1(P: MultiPoly, Q: MultiPoly) -> np.ndarray:
    """Ascending coefficients of ``Res_{z2}(P, Q)`` as a polynomial in ``z1``."""
    bound = max(P.degree, 0) * max(Q.degree, 0)
    M = 1 << int(np.ceil(np.log2(bound + 1))) if bound else 1
    x = np.exp(2j * np.pi * np.arange(M) / M)
    vals = _sylvester_det(_coeffs_in_z2(P, x), _coeffs_in_z2(Q, x))
    return np.fft.fft(vals)[: bound + 1] / M


def _newton(Psi: PolyMap2, z, iters: int = 60):
    """Plain Newton; returns the point and the size of the last step."""
    z = np.array(z, dtype=complex)
    last = np.inf
    for _ in range(iters):
        f = Psi(z)
        if not f.any():
            return z, 0.0
        J = np.array([[poly_eval(d, z) for d in row] for row in Psi.partials])
        step = np.linalg.lstsq(J, -f, rcond=None)[0]
        last = float(np.linalg.norm(step))
        if not np.isfinite(last) or last > 1e6:
            break
        z = z + step
        if last <= 1e-16 * max(1.0, np.abs(z).max()):
            break
    return z, last


def _relative_residual(Psi: PolyMap2, z) -> float:
    """Largest ``|Psi_i(z)|`` measured against the sum of the term sizes of ``Psi_i``."""
    out = 0.0
    for c in Psi.components:
        size = sum(abs(a) * abs(z[0]) ** e[0] * abs(z[1]) ** e[1] for e, a in c.items())
        v = abs(poly_eval(c, z))
        if v:
            out = max(out, v / size)
    return out


def _is_zero(Psi: PolyMap2, z, last_step: float) -> bool:
    return (_relative_residual(Psi, z) <= 1e-9
            or last_step <= 1e-12 * max(1.0, np.abs(z).max()))


def _back_solve(Psi: PolyMap2, x: complex, limit: float):
    P, Q = Psi.components
    cp = _coeffs_in_z2(P, [x])[0]
    cq = _coeffs_in_z2(Q, [x])[0]
    polys = []
    for c, src in ((cp, P), (cq, Q)):
        size = _scale(src, (x, 0))
        if np.abs(c).max(initial=0) <= 1e-10 * size:
            continue
        keep = np.nonzero(np.abs(c) > 1e-12 * np.abs(c).max())[0]
        polys.append(c[: keep[-1] + 1])
    if not polys:
        raise DegenerateConfigurationError(f"zeros are not isolated above z1 = {x}")
    ys = [y for c in polys if len(c) > 1 for y in np.roots(c[::-1])]
    return [y for y in ys if abs(y) <= limit]


def _solve(Psi: PolyMap2, radius: float):
    """Polished zeros of ``Psi`` in the bidisk of the given radius (with repeats)."""
    P, Q = Psi.components
    if P.is_zero() or Q.is_zero():
        raise DegenerateConfigurationError("a zero component has non-isolated zeros")
    R = resultant_z1(P, Q)
    size = (sum(abs(c) for _, c in P.items()) ** max(Q.degree_in(1), 0)
            * sum(abs(c) for _, c in Q.items()) ** max(P.degree_in(1), 0))
    if P.degree_in(1) + Q.degree_in(1) == 0 or np.abs(R).max(initial=0) <= 1e-12 * size:
        raise _NonGeneric
    top = np.nonzero(np.abs(R) > 1e-13 * np.abs(R).max())[0][-1]
    R = R[: top + 1]
    xs = np.roots(R[::-1]) if len(R) > 1 else np.array([])
    slack = 0.05 * radius + 1e-6
    out = []
    for x in xs:
        if abs(x) > radius + slack:
            continue
        for y in _back_solve(Psi, x, 2 * radius + 1):
            z, step = _newton(Psi, (x, y))
            if _is_zero(Psi, z, step) and max(abs(z[0]), abs(z[1])) <= radius * (1 + 1e-9) + 1e-12:
                out.append(z)
    return out


class _NonGeneric(Exception):
    pass


def _unitary(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed + 7919)
    U, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    return U


def _solve_generic(Psi: PolyMap2, radius: float, seed: int = 0):
    """``_solve`` with one rotation retry when the elimination is degenerate."""
    try:
        return _solve(Psi, radius)
    except _NonGeneric:
        pass
    U = _unitary(seed)
    w = [MultiPoly(2, {(1, 0): U[i, 0], (0, 1): U[i, 1]}) for i in range(2)]
    rotated = PolyMap2(tuple(c.substitute(w) for c in Psi.components), Psi.domain_radius)
    try:
        pts = _solve(rotated, radius * np.sqrt(2))
    except _NonGeneric:
        raise DegenerateConfigurationError(
            "elimination stays degenerate after a rotation; zeros are probably not isolated"
        ) from None
    out = []
    for p in pts:
        z = U @ p
        z, _ = _newton(Psi, z)
        if max(abs(z[0]), abs(z[1])) <= radius * (1 + 1e-9) + 1e-12:
            out.append(z)
    return out


def _jac_values(Psi: PolyMap2, pts) -> np.ndarray:
    if not len(pts):
        return np.zeros(0, dtype=complex)
    arr = np.asarray(pts)
    return np.asarray(poly_eval(Psi.jacobian, (arr[:, 0], arr[:, 1])), dtype=complex)


def _cluster(Psi: PolyMap2, pts, tol: float):
    """Group repeated and nearly singular approximations of the same zero."""
    n = len(pts)
    J = _jac_values(Psi, pts)
    small = [abs(J[i]) <= 1e-6 * _scale(Psi.jacobian, pts[i]) for i in range(n)]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(n), 2):
        d = np.abs(pts[i] - pts[j]).max()
        if d <= 1e-10 * max(1.0, np.abs(pts[i]).max()) or (d <= tol and small[i] and small[j]):
            parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(pts[i])
    return [np.mean(g, axis=0) for g in groups.values()]


def map_zeros(Psi: PolyMap2, tol: float = 1e-4, seed: int = 0) -> list[tuple]:
    """Zeros of ``Psi`` in its domain as ``((z1, z2), multiplicity)`` pairs.

    Multiplicities count the simple zeros of ``Psi + t A z`` (``t = 1e-6``
    times the coefficient size, ``A`` seeded) that are closest to each zero.
    """
    r = Psi.domain_radius
    centers = _cluster(Psi, _solve_generic(Psi, r, seed), tol)
    if not centers:
        return []
    size = max(c.max_abs_coeff() for c in Psi.components)
    split = Psi.perturbed(_SPLIT_T * size, random_linear_map(seed))
    moved = _cluster(split, _solve_generic(split, r + 0.1, seed), 1e-12)
    C = np.array(centers)
    counts = np.zeros(len(C), dtype=int)
    for p in moved:
        d = np.abs(C - p).max(axis=1)
        k = int(np.argmin(d))
        if d[k] <= 0.1:
            counts[k] += 1
    out = [((complex(c[0]), complex(c[1])), int(max(m, 1))) for c, m in zip(centers, counts)]
    out.sort(key=lambda e: (abs(e[0][0]) + abs(e[0][1]), e[0][0].real, e[0][1].real))
    return out


# ---------------------------------------------------------------------------
# residues


def _sum_terms(Psi: PolyMap2, h: MultiPoly, pts) -> tuple[complex, float]:
    """``sum h/Jac`` and an error estimate from one more Newton step per zero."""
    if not len(pts):
        return 0j, 0.0
    arr = np.asarray(pts)
    f = poly_eval(h, (arr[:, 0], arr[:, 1])) / _jac_values(Psi, pts)
    nudged = np.array([_newton(Psi, p, iters=1)[0] for p in pts])
    g = poly_eval(h, (nudged[:, 0], nudged[:, 1])) / _jac_values(Psi, nudged)
    err = float(np.abs(g - f).sum() + 2.2e-16 * np.abs(f).sum() * len(f))
    return complex(f.sum()), err


def simple_residue_sum(Psi: PolyMap2, h: MultiPoly, seed: int = 0) -> ResidueResult:
    """``sum h(p) / Jac(p)`` over the zeros of ``Psi`` in its domain, all simple."""
    zeros = map_zeros(Psi, seed=seed)
    for p, m in zeros:
        if m > 1:
            raise MultipleZeroError(f"zero {p} has multiplicity {m}; use local_residue")
    pts = [np.array(p) for p, _ in zeros]
    value, err = _sum_terms(Psi, h, pts)
    return ResidueResult(value, "simple-sum", err)


def _neville_at_zero(ts, vals):
    """Polynomial extrapolation to 0; returns the final value and the last increment."""
    ts = list(ts)
    T = list(vals)
    prev = T[-1]
    n = len(T)
    for k in range(1, n):
        new = [(ts[i + k] * T[i] - ts[i] * T[i + 1]) / (ts[i + k] - ts[i]) for i in range(n - k)]
        prev = T[-1]
        T = new
    return T[0], abs(T[0] - prev) if n > 1 else 0.0


def _lagrange_weights_at_zero(ts) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    w = np.ones(len(ts))
    for i in range(len(ts)):
        for j in range(len(ts)):
            if j != i:
                w[i] *= ts[j] / (ts[j] - ts[i])
    return w


class _Splitting:
    """Split zeros of ``Psi + t A z`` for each ``t``; reused across many ``h``.

    Besides the given schedule, up to two larger decades are solved as well.
    Crowded zeros make the small-``t`` sums lose digits to cancellation, so
    ``residue`` extrapolates from whichever window of ``len(schedule)``
    consecutive ``t`` values has the smallest estimated error.
    """

    EXTRA_DECADES = 2

    def __init__(self, Psi: PolyMap2, t_schedule=DEFAULT_T_SCHEDULE, seed: int = 0, retries: int = 3):
        ts = [float(t) for t in t_schedule]
        if not ts or any(t <= 0 for t in ts) or any(a <= b for a, b in zip(ts, ts[1:])):
            raise ValueError("t_schedule must be positive and strictly decreasing")
        self.Psi = Psi
        self.window = len(ts)
        self.zeros = map_zeros(Psi, seed=seed)
        total = sum(m for _, m in self.zeros)
        A = random_linear_map(seed)
        self._A, self._seed = A, seed
        self._size = max(c.max_abs_coeff() for c in Psi.components)
        for _ in range(retries + 1):
            data = []
            for t in ts:
                entry = self._solve_at(t, total)
                if entry is None:
                    break
                data.append(entry)
            if len(data) == len(ts):
                break
            ts = [t / 10 for t in ts]
        else:
            raise ConvergenceError("perturbed zeros keep leaving the domain")
        t = ts[0]
        for _ in range(self.EXTRA_DECADES):
            t *= 10
            entry = self._solve_at(t, total)
            if entry is None:
                break
            data.insert(0, entry)
        self.data = data

    def _solve_at(self, t, total):
        Pt = self.Psi.perturbed(t * self._size, self._A)
        pts = _cluster(Pt, _solve_generic(Pt, self.Psi.domain_radius, self._seed), 1e-12)
        return (t, Pt, pts) if len(pts) == total else None

    def residue(self, h: MultiPoly) -> ResidueResult:
        table, errs = [], []
        for t, Pt, pts in self.data:
            s, e = _sum_terms(Pt, h, pts)
            table.append((t, s))
            errs.append(e)
        k = min(self.window, len(table))
        best = None
        for i in range(len(table) - k + 1):
            ts = [t for t, _ in table[i:i + k]]
            vals = [s for _, s in table[i:i + k]]
            value, inc = _neville_at_zero(ts, vals)
            noise = float(np.abs(_lagrange_weights_at_zero(ts)) @ np.asarray(errs[i:i + k]))
            est = inc + noise
            if best is None or est < best[1]:
                best = (value, est)
        return ResidueResult(complex(best[0]), "perturbation-extrapolated", float(best[1]), tuple(table))


_SPLIT_CACHE: dict = {}


def _splitting(Psi: PolyMap2, t_schedule, seed: int) -> _Splitting:
    key = (Psi.key(), tuple(float(t) for t in t_schedule), int(seed))
    if key not in _SPLIT_CACHE:
        if len(_SPLIT_CACHE) > 64:
            _SPLIT_CACHE.clear()
        _SPLIT_CACHE[key] = _Splitting(Psi, t_schedule, seed)
    return _SPLIT_CACHE[key]


def local_residue(Psi: PolyMap2, h: MultiPoly, t_schedule=DEFAULT_T_SCHEDULE,
                  seed: int = 0) -> ResidueResult:
    """Residue of ``h`` summed over the zeros of ``Psi`` in its domain.

    With the origin the only zero this is the local residue at 0.  Each sum is
    taken over the simple zeros of ``Psi + t A z`` and the sums are
    extrapolated polynomially to ``t = 0``.
    """
    return _splitting(Psi, t_schedule, seed).residue(h)


def monomial_residue(a: int, b: int, i: int, j: int) -> int:
    """Residue of ``z1^i z2^j`` for ``(z1^a, z2^b)`` at the origin."""
    if a < 1 or b < 1 or i < 0 or j < 0:
        raise ValueError("need a, b >= 1 and i, j >= 0")
    return int(i == a - 1 and j == b - 1)


def default_test_degree(h: MultiPoly, Psi: PolyMap2) -> int:
    d1, d2 = Psi.degrees
    return max(0, d1 + d2 - 2 - max(h.order, 0))


def membership_residues(h: MultiPoly, Psi: PolyMap2, D_test: int | None = None,
                        seed: int = 0, t_schedule=DEFAULT_T_SCHEDULE) -> dict:
    """Residues of ``h g`` for every monomial ``g`` of degree at most ``D_test + 1``."""
    if D_test is None:
        D_test = default_test_degree(h, Psi)
    if D_test < 0:
        raise ValueError("D_test must be non-negative")
    split = _splitting(Psi, t_schedule, seed)
    stray = [p for p, _ in split.zeros if max(abs(p[0]), abs(p[1])) > 1e-3]
    if stray:
        raise DegenerateConfigurationError(f"zeros away from the origin: {stray}")
    out = {}
    for e in monomials(2, D_test + 1):
        out[e] = split.residue(h * MultiPoly.monomial(e))
    return out


def membership_test(h: MultiPoly, Psi: PolyMap2, D_test: int | None = None, seed: int = 0,
                    threshold: float = MEMBERSHIP_THRESHOLD) -> bool:
    """Whether the germ of ``h`` at 0 lies in the ideal generated by ``Psi``."""
    if h.is_zero():
        return True
    table = membership_residues(h, Psi, D_test, seed)
    return all(abs(r.value) <= threshold for r in table.values())


__all__ = [
    "PolyMap2", "ResidueResult", "map_zeros", "resultant_z1", "simple_residue_sum",
    "local_residue", "monomial_residue", "membership_test", "membership_residues",
    "default_test_degree", "random_linear_map", "DEFAULT_T_SCHEDULE", "MEMBERSHIP_THRESHOLD",
]

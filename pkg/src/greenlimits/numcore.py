"""Dense complex polynomials, jets, jet subspaces, roots and Möbius logarithms.

Everything here is an immutable value; the other modules only build on these
primitives.  Jets are laid out over the graded-lexicographic monomial basis
with ``z1`` before ``z2``: ``1, z1, z2, z1^2, z1 z2, z2^2, z1^3, ...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError

DEFAULT_RANK_TOL = 1e-9


# ---------------------------------------------------------------------------
# monomial bookkeeping


@lru_cache(maxsize=None)
def monomials(nvars: int, degree_cap: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of total degree <= ``degree_cap``, graded lex."""
    out: list[tuple[int, ...]] = []
    for d in range(degree_cap + 1):
        out.extend(_exponents_of_degree(nvars, d))
    return tuple(out)


def _exponents_of_degree(nvars, d):
    if nvars == 1:
        return [(d,)]
    out = []
    for k in range(d, -1, -1):
        for rest in _exponents_of_degree(nvars - 1, d - k):
            out.append((k,) + rest)
    return out


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree_cap: int) -> dict:
    return {e: i for i, e in enumerate(monomials(nvars, degree_cap))}


def n_monomials(nvars: int, degree_cap: int) -> int:
    if degree_cap < 0:
        return 0
    return math.comb(degree_cap + nvars, nvars)


# ---------------------------------------------------------------------------
# polynomials


class MultiPoly:
    """Polynomial in ``nvars`` complex variables, stored as ``{exponent: coeff}``.

    Instances are treated as immutable.  Exact zero coefficients are dropped on
    construction, so the zero polynomial has an empty term map and degree -1.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], complex] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        self.nvars = int(nvars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(k) for k in exp)
            if len(exp) != self.nvars or min(exp) < 0:
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = complex(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c
        self._terms = {e: c for e, c in clean.items() if c != 0}

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, c, nvars):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i, nvars):
        """The coordinate function ``z_{i+1}`` (0-based ``i``)."""
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1.0})

    @classmethod
    def monomial(cls, exp, coeff=1.0):
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def from_coeffs(cls, coeffs, nvars=1):
        """Univariate polynomial from ascending coefficients ``c0 + c1 z + ...``."""
        if nvars != 1:
            raise ValueError("from_coeffs builds univariate polynomials")
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    # basic properties --------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    @property
    def order(self) -> int:
        """Lowest total degree among the stored terms (-1 for zero)."""
        return min((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def coeff(self, exp) -> complex:
        return self._terms.get(tuple(exp), 0j)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, MultiPoly):
            raise TypeError("polynomial division is not supported")
        return MultiPoly(self.nvars, {e: c / scalar for e, c in self._terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(1.0, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"MultiPoly({self.nvars}, 0)"
        parts = []
        for e in sorted(self._terms, key=lambda e: (sum(e), [-k for k in e])):
            mono = "*".join(f"z{i + 1}^{k}" if k > 1 else f"z{i + 1}"
                            for i, k in enumerate(e) if k) or "1"
            parts.append(f"({self._terms[e]:.6g})*{mono}")
        return f"MultiPoly({self.nvars}, " + " + ".join(parts) + ")"

    def close_to(self, other, tol=1e-12) -> bool:
        diff = self - other
        return diff.max_abs_coeff() <= tol

    # evaluation --------------------------------------------------------
    def __call__(self, *z):
        if len(z) == 1 and self.nvars > 1:
            z = tuple(z[0])
        return poly_eval(self, z)

    # transformations ---------------------------------------------------
    def truncate(self, degree_cap: int) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: c for e, c in self._terms.items()
                                      if sum(e) <= degree_cap})

    def substitute(self, polys: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace ``z_i`` by ``polys[i]`` (all in a common ring)."""
        if len(polys) != self.nvars:
            raise ValueError("need one polynomial per variable")
        target_nvars = polys[0].nvars
        out = MultiPoly.zero(target_nvars)
        cache: dict = {}
        for e, c in self._terms.items():
            term = MultiPoly.constant(c, target_nvars)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = polys[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def shift(self, point) -> "MultiPoly":
        """The polynomial ``z -> p(z + point)``."""
        point = [complex(a) for a in point]
        if all(a == 0 for a in point):
            return self
        shifted = [MultiPoly.var(i, self.nvars) + point[i] for i in range(self.nvars)]
        return self.substitute(shifted)

    def diff(self, i: int) -> "MultiPoly":
        """Partial derivative in ``z_{i+1}``."""
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                terms[tuple(f)] = c * e[i]
        return MultiPoly(self.nvars, terms)

    def swap(self) -> "MultiPoly":
        """Exchange ``z1`` and ``z2`` (two variables only)."""
        if self.nvars != 2:
            raise ValueError("swap needs two variables")
        return MultiPoly(2, {(e[1], e[0]): c for e, c in self._terms.items()})

    def ascending_coeffs(self) -> np.ndarray:
        """Univariate coefficients ``[c0, c1, ...]``."""
        if self.nvars != 1:
            raise ValueError("univariate polynomials only")
        deg = self.degree
        out = np.zeros(max(deg + 1, 0), dtype=complex)
        for (k,), c in self._terms.items():
            out[k] = c
        return out

    # serialization -----------------------------------------------------
    def to_json(self) -> dict:
        order = sorted(self._terms, key=lambda e: (sum(e), [-k for k in e]))
        return {
            "nvars": self.nvars,
            "terms": [{"exp": list(e), "re": self._terms[e].real, "im": self._terms[e].imag}
                      for e in order],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        try:
            nvars = int(data["nvars"])
            terms: dict = {}
            for t in data["terms"]:
                e = tuple(int(k) for k in t["exp"])
                terms[e] = terms.get(e, 0) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        return cls(nvars, terms)


def variables(nvars: int = 2) -> tuple[MultiPoly, ...]:
    """Coordinate polynomials ``(z1, ..., zn)``."""
    return tuple(MultiPoly.var(i, nvars) for i in range(nvars))


def poly_eval(p: MultiPoly, z) -> complex | np.ndarray:
    """Evaluate ``p`` at ``z``; each coordinate may be a scalar or an array.

    Coordinates are raised to powers by repeated multiplication, so integer
    exponents of exact inputs give exact results.
    """
    if len(z) != p.nvars:
        raise ValueError(f"point has {len(z)} coordinates, polynomial has {p.nvars} variables")
    z = [np.asarray(zi, dtype=complex) for zi in z]
    shape = np.broadcast(*z).shape if z else ()
    if p.is_zero():
        return np.zeros(shape, dtype=complex) if shape else 0j
    powers = []
    for i, zi in enumerate(z):
        dmax = p.degree_in(i)
        pw = [np.ones_like(zi)]
        for _ in range(dmax):
            pw.append(pw[-1] * zi)
        powers.append(pw)
    total = np.zeros(shape, dtype=complex)
    for e, c in p.items():
        term = c
        for i, k in enumerate(e):
            if k:
                term = term * powers[i][k]
        total = total + term
    return complex(total) if total.ndim == 0 else total


# ---------------------------------------------------------------------------
# jets


@dataclass(frozen=True, eq=False)
class Jet:
    """Taylor coefficients of total degree <= ``degree_cap`` at the origin."""

    nvars: int
    degree_cap: int
    coeffs: np.ndarray

    def __post_init__(self):
        if len(self.coeffs) != n_monomials(self.nvars, self.degree_cap):
            raise ValueError("coefficient vector does not match the monomial basis")

    def to_poly(self) -> MultiPoly:
        basis = monomials(self.nvars, self.degree_cap)
        return MultiPoly(self.nvars, {e: c for e, c in zip(basis, self.coeffs)})

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def jet_of(p: MultiPoly, D: int) -> Jet:
    """Truncate ``p`` to its coefficients on monomials of degree <= ``D``."""
    if D < 0:
        raise ValueError("degree cap must be >= 0")
    index = monomial_index(p.nvars, D)
    v = np.zeros(len(index), dtype=complex)
    for e, c in p.items():
        j = index.get(e)
        if j is not None:
            v[j] = c
    return Jet(p.nvars, D, v)


def jet_product(a: Jet, b: Jet) -> Jet:
    """Truncated convolution of two jets (product in the ring of jets)."""
    if (a.nvars, a.degree_cap) != (b.nvars, b.degree_cap):
        raise ValueError("jets live in different spaces")
    prod = (a.to_poly() * b.to_poly()).truncate(a.degree_cap)
    return jet_of(prod, a.degree_cap)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True, eq=False)
class JetSubspace:
    """Linear subspace of the degree-<=D jet space, with orthonormal rows."""

    nvars: int
    degree_cap: int
    basis: np.ndarray  # shape (rank, ambient_dim), orthonormal rows

    @property
    def ambient_dim(self) -> int:
        return n_monomials(self.nvars, self.degree_cap)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.rank

    @property
    def jets(self) -> list[Jet]:
        return [Jet(self.nvars, self.degree_cap, row.copy()) for row in self.basis]

    def polys(self) -> list[MultiPoly]:
        return [j.to_poly() for j in self.jets]

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis.conj()

    def residual(self, v) -> float:
        """Norm of the component of ``v`` orthogonal to the subspace."""
        v = np.asarray(v.coeffs if isinstance(v, Jet) else v, dtype=complex)
        r = v - self.basis.T @ (self.basis.conj() @ v)
        return float(np.linalg.norm(r))

    def contains(self, v, tol: float = 1e-8) -> bool:
        v = np.asarray(v.coeffs if isinstance(v, Jet) else v, dtype=complex)
        scale = max(float(np.linalg.norm(v)), 1e-300)
        return self.residual(v) <= tol * scale

    def complement(self) -> "JetSubspace":
        """Orthogonal complement for the Hermitian inner product."""
        n = self.ambient_dim
        if self.rank == 0:
            return JetSubspace(self.nvars, self.degree_cap, np.eye(n, dtype=complex))
        _, _, vh = np.linalg.svd(self.basis.conj(), full_matrices=True)
        comp = vh[self.rank:].conj()
        return JetSubspace(self.nvars, self.degree_cap, comp)

    def check_orthonormal(self, tol: float = 1e-12) -> bool:
        g = self.basis.conj() @ self.basis.T
        return bool(np.max(np.abs(g - np.eye(self.rank)), initial=0.0) <= tol)


def _as_matrix(vectors, ambient=None):
    rows = [np.asarray(v.coeffs if isinstance(v, Jet) else v, dtype=complex) for v in vectors]
    if not rows:
        return np.zeros((0, ambient or 0), dtype=complex)
    return np.vstack(rows)


def orthonormalize(rows: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL,
                   block: int = 128) -> np.ndarray:
    """Orthonormal basis of the row span, deciding rank vector by vector.

    A row is kept iff its residual after projection onto the rows kept so far
    exceeds ``rank_tol`` times its own norm.  Projections against the basis
    accumulated in earlier blocks are done with two passes of classical
    Gram-Schmidt in matrix form; rows inside a block are handled one at a time.
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    rows = np.asarray(rows, dtype=complex)
    m, n = rows.shape if rows.ndim == 2 else (0, 0)
    if m == 0:
        return np.zeros((0, n), dtype=complex)
    norms = np.linalg.norm(rows, axis=1)
    Q = np.zeros((0, n), dtype=complex)
    for start in range(0, m, block):
        if Q.shape[0] >= n:
            break
        R = rows[start:start + block].copy()
        nr = norms[start:start + block]
        for _ in range(2):
            if Q.shape[0]:
                R -= (R @ Q.conj().T) @ Q
        new = []
        for i in range(R.shape[0]):
            if nr[i] == 0:
                continue
            r = R[i]
            for _ in range(2):
                for q in new:
                    r = r - (q.conj() @ r) * q
            res = np.linalg.norm(r)
            if res > rank_tol * nr[i]:
                new.append(r / res)
                if Q.shape[0] + len(new) >= n:
                    break
        if new:
            Q = np.vstack([Q, np.array(new)])
    return Q


def subspace_from_vectors(vectors, rank_tol: float = DEFAULT_RANK_TOL, *,
                          nvars: int | None = None, degree_cap: int | None = None) -> JetSubspace:
    """Orthonormal basis of the span of ``vectors`` (Jets or raw coefficient rows)."""
    vectors = list(vectors)
    if vectors and isinstance(vectors[0], Jet):
        nvars, degree_cap = vectors[0].nvars, vectors[0].degree_cap
        if any((v.nvars, v.degree_cap) != (nvars, degree_cap) for v in vectors):
            raise ValueError("all jets must share the same space")
    if nvars is None or degree_cap is None:
        raise ValueError("nvars and degree_cap are required for raw vectors")
    ambient = n_monomials(nvars, degree_cap)
    M = _as_matrix(vectors, ambient)
    if M.shape[1] != ambient:
        raise ValueError("vector length does not match the jet space")
    return JetSubspace(nvars, degree_cap, orthonormalize(M, rank_tol))


def subspace_gap(A: JetSubspace, B: JetSubspace) -> float:
    """Operator norm of the difference of the orthogonal projectors."""
    if (A.nvars, A.degree_cap) != (B.nvars, B.degree_cap):
        raise ValueError("subspaces live in different jet spaces")
    if A.rank == 0 and B.rank == 0:
        return 0.0
    d = A.projector() - B.projector()
    return float(min(np.linalg.norm(d, 2), 1.0))


# ---------------------------------------------------------------------------
# univariate roots


@dataclass(frozen=True)
class RootCluster:
    center: complex
    multiplicity: int
    radius: float


def univariate_roots(p: MultiPoly, cluster_radius: float = 1e-6) -> list[RootCluster]:
    """Roots of a univariate polynomial, merged into clusters.

    Roots closer than ``cluster_radius`` (single linkage) form one cluster whose
    multiplicity is the number of merged roots and whose center is their mean.
    """
    if p.nvars != 1:
        raise ValueError("univariate polynomial expected")
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    if cluster_radius <= 0:
        raise ValueError("cluster_radius must be positive")
    c = p.ascending_coeffs()
    if len(c) <= 1:
        return []
    roots = np.roots(c[::-1])
    return cluster_points(roots, cluster_radius)


def cluster_points(points, radius: float) -> list[RootCluster]:
    pts = np.asarray(points, dtype=complex).ravel()
    n = len(pts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(pts[i])
    out = []
    for members in groups.values():
        m = np.array(members)
        center = complex(m.mean())
        out.append(RootCluster(center, len(members), float(np.max(np.abs(m - center)))))
    out.sort(key=lambda r: (-abs(r.center), r.center.real, r.center.imag))
    return out


# ---------------------------------------------------------------------------
# Möbius / pseudo-hyperbolic logarithm


def mobius_log(z: complex, a: complex, closed: bool = False) -> float:
    """``log |(z - a) / (1 - conj(a) z)|``, the one-pole Green function of the disk.

    Returns ``-inf`` at ``z == a``.  With ``closed=True`` the point ``z`` may lie
    on the unit circle, where the value is 0.
    """
    z, a = complex(z), complex(a)
    if abs(a) >= 1:
        raise DomainError(f"pole {a} is not in the open unit disk")
    if abs(z) > 1 or (abs(z) == 1 and not closed):
        raise DomainError(f"point {z} is not in the {'closed' if closed else 'open'} unit disk")
    num = abs(z - a)
    if num == 0:
        return -math.inf
    val = math.log(num) - math.log(abs(1 - a.conjugate() * z))
    return min(val, 0.0)


def pseudo_hyperbolic(z: complex, a: complex) -> float:
    return abs((complex(z) - a) / (1 - complex(a).conjugate() * complex(z)))


def as_points(points: Iterable) -> list[tuple[complex, ...]]:
    return [tuple(complex(c) for c in p) for p in points]

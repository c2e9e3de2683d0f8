"""Thin estimator wrappers around the functional API.

Parameters go to ``__init__`` and are exposed through ``get_params``; fitted
state ends with an underscore.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .ideals import evaluation_matrix
from .limits import (PointFamily, family_limit, limit_ideal_from_report, predict_green_convergence,
                     vanishing_subspace)
from .numcore import DEFAULT_RANK_TOL, subspace_gap
from .sandwich import run_sandwich
from .validation import as_points, check_eps


class VanishingIdeal(TransformerMixin, BaseEstimator):
    """Jets of degree <= ``degree`` of the polynomials vanishing on a finite set.

    ``transform`` evaluates an orthonormal basis of that space, so fitted
    points map to (numerically) zero rows.
    """

    def __init__(self, degree: int = 3, rank_tol: float = DEFAULT_RANK_TOL):
        self.degree = degree
        self.rank_tol = rank_tol

    def fit(self, X, y=None):
        pts = as_points(X, closed=True)
        self.subspace_ = vanishing_subspace([tuple(p) for p in pts], self.degree, self.rank_tol)
        self.n_points_ = len(pts)
        self.length_ = self.subspace_.codim
        return self

    def transform(self, X):
        check_is_fitted(self, "subspace_")
        pts = as_points(X, closed=True)
        E = evaluation_matrix([tuple(p) for p in pts], self.degree, 2)
        return E @ self.subspace_.basis.T

    def gap(self, other) -> float:
        check_is_fitted(self, "subspace_")
        return subspace_gap(self.subspace_, getattr(other, "subspace_", other))


class FamilyLimit(BaseEstimator):
    """Limit of vanishing ideals along a point family, and the convergence verdict."""

    def __init__(self, degree: int = 3, tol: float | None = None, k_max: int = 8):
        self.degree = degree
        self.tol = tol
        self.k_max = k_max

    def fit(self, family: PointFamily, y=None):
        if not isinstance(family, PointFamily):
            raise TypeError("fit expects a PointFamily")
        self.report_ = family_limit(family, self.degree, self.tol, family.limit_ideal)
        self.limit_ideal_ = limit_ideal_from_report(self.report_)
        self.prediction_ = predict_green_convergence(self.limit_ideal_, self.k_max)
        return self

    @property
    def converged_(self) -> bool:
        check_is_fitted(self, "report_")
        return self.report_.converged


class GreenSandwich(TransformerMixin, BaseEstimator):
    """Certified bounds for the three-pole Green function.

    ``transform`` returns the columns ``lower, upper, model, width``.
    """

    def __init__(self, eps: float = 1e-3, rho: float | None = None, case: str = "generic",
                 jobs: int = 1):
        self.eps = eps
        self.rho = rho
        self.case = case
        self.jobs = jobs

    def fit(self, X=None, y=None):
        rho = self.rho
        if rho is None:
            rho = self.eps if self.case == "generic" else self.eps ** 2
        self.eps_, self.rho_ = check_eps(self.eps, rho)
        if self.case not in ("generic", "degenerate"):
            raise ValueError("case must be 'generic' or 'degenerate'")
        return self

    def bounds(self, X):
        check_is_fitted(self, "eps_")
        pts = as_points(X)
        return run_sandwich(pts, self.eps_, self.rho_, self.case, self.jobs)

    def transform(self, X):
        out = self.bounds(X)
        return np.array([[b.lower, b.upper, b.model, b.width] for b in out], dtype=float).reshape(-1, 4)


__all__ = ["VanishingIdeal", "FamilyLimit", "GreenSandwich"]

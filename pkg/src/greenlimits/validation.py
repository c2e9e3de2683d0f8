"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .errors import DomainError


def as_points(X, closed: bool = False) -> np.ndarray:
    """Points of the bidisk as an (n, 2) complex array.

    Accepts complex arrays of shape (n, 2) or real arrays of shape (n, 4) laid
    out as ``re1, im1, re2, im2``.
    """
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        arr = np.atleast_2d(arr)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"complex input must have shape (n, 2), got {arr.shape}")
        pts = arr.astype(complex)
        if not np.isfinite(pts).all():
            raise ValueError("input contains NaN or infinity")
    else:
        arr = check_array(X, dtype=np.float64, ensure_2d=True)
        if arr.shape[1] != 4:
            raise ValueError(f"real input must have 4 columns (re1, im1, re2, im2), got {arr.shape[1]}")
        pts = arr[:, 0::2] + 1j * arr[:, 1::2]
    m = np.abs(pts).max(axis=1)
    bad = m > 1 if closed else m >= 1
    if bad.any():
        raise DomainError(f"{int(bad.sum())} points lie outside the {'closed' if closed else 'open'} bidisk")
    return pts


def as_real_columns(pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=complex).reshape(-1, 2)
    out = np.empty((len(pts), 4))
    out[:, 0::2] = pts.real
    out[:, 1::2] = pts.imag
    return out


def check_eps(eps: float, rho: float | None = None) -> tuple[float, float]:
    eps = float(eps)
    rho = eps if rho is None else float(rho)
    if not (0 < rho <= eps < 1):
        raise DomainError("need 0 < rho <= eps < 1")
    return eps, rho


def check_schedule(schedule) -> tuple:
    sched = tuple(float(e) for e in schedule)
    if not sched or any(e <= 0 for e in sched):
        raise ValueError("schedule entries must be positive")
    if any(b >= a for a, b in zip(sched, sched[1:])):
        raise ValueError("schedule must be strictly decreasing")
    return sched


def check_samples(n: int) -> int:
    n = int(n)
    if n < 16:
        raise ValueError("need at least 16 samples")
    return n

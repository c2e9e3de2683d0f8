import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from greenlimits import FamilyLimit, GreenSandwich, VanishingIdeal
from greenlimits.errors import DomainError
from greenlimits.limits import gen3_collinear, gen3_generic


def test_vanishing_ideal_params_and_clone():
    est = VanishingIdeal(degree=4, rank_tol=1e-10)
    assert est.get_params() == {"degree": 4, "rank_tol": 1e-10}
    c = clone(est).set_params(degree=2)
    assert c.degree == 2 and est.degree == 4


def test_vanishing_ideal_fit_transform():
    X = np.array([[0, 0], [0.1, 0], [0, 0.1]], dtype=complex)
    est = VanishingIdeal(degree=3).fit(X)
    assert est.length_ == 3 and est.n_points_ == 3
    assert np.abs(est.transform(X)).max() < 1e-10
    assert np.abs(est.transform([[0.3, 0.2j]])).max() > 1e-3
    # real input as (re1, im1, re2, im2) columns
    R = np.column_stack([X.real[:, 0], X.imag[:, 0], X.real[:, 1], X.imag[:, 1]])
    assert VanishingIdeal(degree=3).fit(R).gap(est) < 1e-12


def test_vanishing_ideal_not_fitted():
    with pytest.raises(NotFittedError):
        VanishingIdeal().transform([[0, 0]])


def test_vanishing_ideal_rejects_points_outside():
    with pytest.raises(DomainError):
        VanishingIdeal().fit(np.array([[2.0, 0]], dtype=complex))
    with pytest.raises(ValueError):
        VanishingIdeal().fit([[0.1, 0.2]])


def test_family_limit():
    est = FamilyLimit(degree=3).fit(gen3_generic())
    assert est.converged_
    assert est.prediction_.converges is False
    est = FamilyLimit(degree=3).fit(gen3_collinear(1))
    assert est.prediction_.converges is True and est.prediction_.length == 3
    with pytest.raises(TypeError):
        FamilyLimit().fit(np.zeros((3, 2)))


def test_green_sandwich():
    est = GreenSandwich(eps=1e-2).fit()
    assert est.rho_ == 1e-2
    assert GreenSandwich(eps=1e-2, case="degenerate").fit().rho_ == pytest.approx(1e-4)
    X = np.array([[0.5, 0.4], [0.5, 0.1], [0.3, 0.5j]], dtype=complex)
    T = est.transform(X)
    assert T.shape == (3, 4)
    assert np.all(T[:, 0] <= T[:, 1] + 1e-9)
    assert np.allclose(T[:, 3], T[:, 1] - T[:, 0])
    with pytest.raises(ValueError):
        GreenSandwich(eps=1e-2, case="other").fit()
    with pytest.raises(DomainError):
        GreenSandwich(eps=1.5).fit()

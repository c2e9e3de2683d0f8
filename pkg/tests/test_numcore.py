import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenlimits.errors import DomainError
from greenlimits.numcore import (
    MultiPoly,
    jet_of,
    jet_product,
    mobius_log,
    monomials,
    poly_eval,
    subspace_from_vectors,
    subspace_gap,
    univariate_roots,
)

z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
x = MultiPoly.var(0, 1)

coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


@st.composite
def small_polys(draw, deg=3):
    exps = monomials(2, deg)
    picks = draw(st.lists(st.sampled_from(exps), min_size=1, max_size=5, unique=True))
    return MultiPoly(2, {e: draw(coef) for e in picks})


def _point(rng):
    return tuple(0.9 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2)))


def test_degree_of_zero_is_minus_one():
    assert MultiPoly.zero(2).degree == -1
    assert MultiPoly.constant(3, 2).degree == 0


def test_json_roundtrip():
    p = (1 + 2j) * z1 ** 2 * z2 - 0.5 * z2 + 3
    q = MultiPoly.from_json(p.to_json())
    assert q.close_to(p, 0)


def test_diff():
    p = z1 ** 3 * z2 + 2 * z2 ** 2
    assert p.diff(0).close_to(3 * z1 ** 2 * z2, 0)
    assert p.diff(1).close_to(z1 ** 3 + 4 * z2, 0)


def test_jet_examples():
    j = jet_of(z1 + z2 ** 3, 2)
    want = np.zeros(6, complex)
    want[1] = 1
    assert np.array_equal(j.coeffs, want)
    assert np.array_equal(jet_of(MultiPoly.constant(1, 2), 0).coeffs, [1])
    j = jet_of((z1 - 0.1) * (z1 + 0.1), 2)
    assert j.coeffs[0] == pytest.approx(-0.01)
    assert j.coeffs[3] == pytest.approx(1)
    assert np.abs(np.delete(j.coeffs, [0, 3])).max() == 0


def test_graded_lex_layout():
    assert monomials(2, 2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


def test_subspace_rank_examples():
    kw = dict(nvars=1, degree_cap=1)
    assert subspace_from_vectors([[1, 0], [2, 0]], **kw).rank == 1
    assert subspace_from_vectors([[1, 0], [0, 1]], **kw).rank == 2
    assert subspace_from_vectors([[1, 0], [1, 1e-13]], 1e-9, **kw).rank == 1
    assert subspace_from_vectors([], **kw).rank == 0


def test_subspace_gap_examples():
    kw = dict(nvars=1, degree_cap=1)
    a = subspace_from_vectors([[1, 0]], **kw)
    assert subspace_gap(a, a) == 0
    assert subspace_gap(a, subspace_from_vectors([[0, 1]], **kw)) == pytest.approx(1)
    e = 0.1
    b = subspace_from_vectors([[1, e]], **kw)
    assert subspace_gap(a, b) == pytest.approx(e / math.sqrt(1 + e * e), abs=1e-14)


def test_subspace_gap_ambient_mismatch():
    a = subspace_from_vectors([[1, 0]], nvars=1, degree_cap=1)
    b = subspace_from_vectors([[1, 0, 0]], nvars=1, degree_cap=2)
    with pytest.raises(ValueError):
        subspace_gap(a, b)


def test_subspace_gap_is_a_metric():
    rng = np.random.default_rng(0)
    for _ in range(30):
        S = [subspace_from_vectors(rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6)),
                                   nvars=2, degree_cap=2) for _ in range(3)]
        ab, ba = subspace_gap(S[0], S[1]), subspace_gap(S[1], S[0])
        assert ab == ba
        assert ab <= subspace_gap(S[0], S[2]) + subspace_gap(S[2], S[1]) + 1e-10


def test_univariate_root_examples():
    r = univariate_roots(x ** 2 - 1e-4)
    assert sorted(c.center.real for c in r) == pytest.approx([-0.01, 0.01])
    assert all(c.multiplicity == 1 for c in r)
    r = univariate_roots(x ** 3, 1e-6)
    assert len(r) == 1 and r[0].multiplicity == 3 and abs(r[0].center) < 1e-12
    r = univariate_roots((x - 0.5) ** 2 * (x + 0.3), 1e-6)
    got = {round(c.center.real, 6): c.multiplicity for c in r}
    assert got == {0.5: 2, -0.3: 1}
    for c in r:
        assert abs(c.center - (0.5 if c.multiplicity == 2 else -0.3)) < 1e-8
    assert univariate_roots(MultiPoly.constant(2, 1)) == []


def test_root_multiplicities_sum_to_degree():
    rng = np.random.default_rng(1)
    for deg in range(1, 8):
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        p = MultiPoly.from_coeffs(c)
        r = univariate_roots(p, 1e-9)
        assert sum(k.multiplicity for k in r) == deg
        for k in r:
            assert abs(p(k.center)) <= 1e-6 * np.abs(c).max()


def test_mobius_log_examples():
    assert mobius_log(0.5, 0) == pytest.approx(math.log(0.5))
    assert mobius_log(0.3, 0.3) == -math.inf
    assert mobius_log(0.5, 0.2) == pytest.approx(math.log(0.3 / 0.9))
    with pytest.raises(DomainError):
        mobius_log(1.0, 0)
    with pytest.raises(DomainError):
        mobius_log(0.5, 1.2)
    assert mobius_log(1.0, 0.3, closed=True) == pytest.approx(0, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(small_polys(), small_polys(), small_polys(), st.integers(0, 2 ** 31))
def test_distributive_law(p, q, r, seed):
    z = _point(np.random.default_rng(seed))
    lhs = poly_eval((p + q) * r, z)
    rhs = poly_eval(p * r, z) + poly_eval(q * r, z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@settings(max_examples=40, deadline=None)
@given(small_polys(), small_polys(), st.integers(0, 4))
def test_jet_of_product_is_truncated_convolution(p, q, D):
    a = jet_of(p * q, D).coeffs
    b = jet_product(jet_of(p, D), jet_of(q, D)).coeffs
    assert np.abs(a - b).max() <= 1e-12 * max(1.0, np.abs(a).max())

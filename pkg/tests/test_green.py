import math

import numpy as np
import pytest

from greenlimits.errors import DomainError
from greenlimits.green import (
    LOG3_HALF,
    LOG6_HALF,
    RegionTag,
    classify_region,
    disk_multipole_green,
    limit_L,
    lower_bound_L,
    model_F,
    model_F_check,
    model_H,
    product_green,
    rough_bounds,
    two_point_limit,
    two_point_model,
)
from greenlimits.numcore import mobius_log
from greenlimits.sandwich import sample_torus

log = math.log


def test_disk_multipole_examples():
    assert disk_multipole_green([0], 0.5) == pytest.approx(log(0.5))
    assert disk_multipole_green([0, 0.2], 0.5) == pytest.approx(log(0.5) + log(0.3 / 0.9))
    assert disk_multipole_green([0, 0.2], 0.5) == pytest.approx(-1.792, abs=1e-3)
    assert disk_multipole_green([0.3], 0.3) == -math.inf


def test_product_green_examples():
    assert product_green([0], [0], (0.5, 0.4)) == pytest.approx(log(0.5))
    assert product_green([0, 0.1], [0, 0.2], (np.exp(0.3j), np.exp(2j))) == pytest.approx(0, abs=1e-15)


def test_product_green_reproduces_lower_comparison():
    eps, rho = 1e-2, 1e-2
    rng = np.random.default_rng(3)
    for z in sample_torus(0.5, 50, 3):
        want = max(mobius_log(z[0], 0) + mobius_log(z[0], rho), mobius_log(z[1], 0) + mobius_log(z[1], eps))
        assert product_green([0, rho], [0, eps], tuple(z)) == pytest.approx(want)
    del rng


def test_product_green_on_axis_slices():
    for t in (0.1, 0.4, 0.8):
        assert product_green([0, 0.3], [0], (t, 0)) == disk_multipole_green([0, 0.3], t)


def test_lower_bound_examples():
    eps = 0.01
    z = (0.5, 0.4)
    psi = z[0] + z[1] - eps
    want = max(0.5 * log(abs(z[0] * z[1] * psi)),
               log(0.5) + mobius_log(0.5, eps), log(0.4) + mobius_log(0.4, eps)) - LOG3_HALF
    assert lower_bound_L(eps, eps, z) == pytest.approx(want, abs=1e-15)
    assert lower_bound_L(eps, eps, (0, 0)) == -math.inf
    assert lower_bound_L(eps, eps, (0.01, 0)) == -math.inf
    assert lower_bound_L(eps, eps, (0, 0.01)) == -math.inf
    with pytest.raises(DomainError):
        lower_bound_L(0.01, 0.02, z)
    with pytest.raises(DomainError):
        lower_bound_L(0.01, 0.01, (1.0, 0))


def test_lower_bound_is_non_positive():
    for z in sample_torus(0.9, 200, 4):
        assert lower_bound_L(1e-2, 1e-3, tuple(z)) <= 0


def test_limit_L_examples():
    assert limit_L((0.5, 0.4)) == pytest.approx(0.5 * log(0.18) - LOG3_HALF)
    assert limit_L((0.5, 0.4)) == pytest.approx(-1.4067, abs=1e-4)
    t = 0.1
    assert limit_L((t, -t)) == pytest.approx(2 * log(t) - LOG3_HALF)
    want = max(0.5 * log(0.16 * 0.5), 2 * log(0.4), 2 * log(0.5)) - LOG3_HALF
    assert limit_L((0.4, 0.5), "degenerate") == pytest.approx(want)


@pytest.mark.parametrize("eps,bound", [(1e-3, 0.05), (1e-4, 0.005)])
def test_lower_bound_converges_to_limit(eps, bound):
    pts = sample_torus(0.5, 400, 7)
    sup = max(abs(lower_bound_L(eps, eps, tuple(z)) - limit_L(tuple(z))) for z in pts)
    assert sup <= bound


def test_region_examples():
    assert classify_region((0.5, 0.1)) is RegionTag.D0
    assert classify_region((0.5, 0.4)) is RegionTag.D1
    # ratio -0.9 is in the D3 disk, but |z1 + z2| = 0.05 <= |z1|^2 puts the point in D0 first
    assert classify_region((0.5, -0.45)) is RegionTag.D0
    assert classify_region((0.4, 0.4 * (-1 + 0.45j))) is RegionTag.D3
    assert classify_region((0.3, 0.5)) is RegionTag.D2
    assert classify_region((0.5, 0.3), "degenerate") is RegionTag.D0p
    assert classify_region((0.4, 0.5), "degenerate") is RegionTag.D1p
    with pytest.raises(DomainError):
        classify_region((0, 0))


def test_region_depends_on_moduli_and_sum():
    rng = np.random.default_rng(8)
    for z in sample_torus(0.7, 300, 9):
        tag = classify_region(tuple(z))
        # a common rotation fixes |z1|, |z2|, |z1 + z2| and z2/z1
        u = np.exp(2j * np.pi * rng.random())
        assert classify_region(tuple(u * z)) is tag


def test_model_examples():
    assert model_H((0.5, 0.4)) == pytest.approx(log(0.5) + 0.5 * log(0.4))
    assert model_H((0.5, 0.4)) == pytest.approx(-1.1513, abs=1e-4)
    assert model_F((0.4, 0.5)) == pytest.approx(0.5 * log(0.4) + log(0.5))
    assert model_H((0.5, 0.1)) == pytest.approx(2 * log(0.5))
    assert model_F_check((0.5, 0.4)) == model_F((0.4, 0.5))
    with pytest.raises(DomainError):
        model_H((0, 0))


@pytest.mark.parametrize("tag", [RegionTag.D1, RegionTag.D3])
def test_limit_minus_H_on_D1_and_D3(tag):
    worst = 0.0
    for r in (0.3, 0.5, 0.7):
        for z in sample_torus(r, 400, 10):
            z = tuple(z)
            if classify_region(z) is tag:
                worst = max(worst, abs(limit_L(z) - model_H(z)))
    assert worst <= LOG6_HALF + 0.01


def test_limit_minus_H_on_D2_stays_within_log3():
    # on D2 only |z1/z2 + 1| >= 1/3 is available, which gives log 3 rather than log 6 / 2
    worst = 0.0
    for r in (0.3, 0.5, 0.7):
        for z in sample_torus(r, 400, 11):
            z = tuple(z)
            if classify_region(z) is RegionTag.D2:
                worst = max(worst, abs(limit_L(z) - model_H(z)))
    assert worst <= log(3) + 0.01


def test_admissibility():
    rng = np.random.default_rng(12)
    bound = 3 * log(2) + 0.01
    n = 0
    while n < 500:
        m = 0.5 * np.sqrt(rng.random(2))
        if m.min() == 0:
            continue
        z = tuple(m * np.exp(2j * np.pi * rng.random(2)))
        z2 = tuple(2 * c for c in z)
        assert abs(model_H(z) - model_H(z2)) <= bound
        assert abs(model_F(z) - model_F(z2)) <= bound
        n += 1


def test_two_point_examples():
    assert two_point_limit((0.5, 0.1)) == pytest.approx(2 * log(0.5))
    assert two_point_limit((0, 0.5)) == pytest.approx(log(0.5))
    assert two_point_model(1.0, 0.1, (0.1, 0)) == -math.inf
    for t in (0.1, 0.2, 0.4):
        assert two_point_limit((t, 0)) - 2 * log(t) == pytest.approx(0, abs=1e-12)
        assert two_point_limit((0, t)) - log(t) == pytest.approx(0, abs=1e-12)
    with pytest.raises(DomainError):
        two_point_model(1.0, 0.1, (1.0, 0))


def test_rough_bounds_examples():
    G0 = log(0.5)
    assert rough_bounds(3, 0.3, G0, -1.2)
    assert not rough_bounds(3, 0.3, G0, -0.1)
    assert not rough_bounds(3, 0.3, G0, -3.0)
    with pytest.raises(ValueError):
        rough_bounds(3, 1.5, G0, -1.0)

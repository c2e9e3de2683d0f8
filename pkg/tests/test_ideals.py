import itertools

import numpy as np
import pytest

from greenlimits.errors import NotCertifiedError
from greenlimits.ideals import (
    IdealSpec,
    binomial_length,
    hilbert_samuel_multiplicity,
    ideal_jet_space,
    ideal_power,
    is_complete_intersection,
    jet_membership,
    local_length,
    maximal_ideal_power,
    monomial_length,
)
from greenlimits.numcore import MultiPoly

z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)


def gens(*polys, base_point=None):
    return IdealSpec.from_generators(list(polys), base_point=base_point)


def newton_multiplicity(exps):
    """2 * area under the Newton polygon of a monomial ideal (independent oracle)."""
    pts = sorted(set(exps))
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (ax, ay), (bx, by) = hull[-2], hull[-1]
            if (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    # keep the part of the lower hull with non-positive slope, from the z2 axis to the z1 axis
    i0 = min(range(len(hull)), key=lambda i: (hull[i][0], hull[i][1]))
    i1 = min(range(len(hull)), key=lambda i: (hull[i][1], hull[i][0]))
    chain = hull[i0:i1 + 1]
    area2 = sum((bx - ax) * (ay + by) for (ax, ay), (bx, by) in zip(chain, chain[1:]))
    return area2


# name, ideal, length, multiplicity
CORPUS = [
    ("m", gens(z1, z2), 1, 1),
    ("m^2", maximal_ideal_power(2), 3, 4),
    ("m^3", maximal_ideal_power(3), 6, 9),
    ("z1^2,z2^2", gens(z1 ** 2, z2 ** 2), 4, 4),
    ("z1^2,z2^3", gens(z1 ** 2, z2 ** 3), 6, 6),
    ("z1^2,z1z2,z2^3", gens(z1 ** 2, z1 * z2, z2 ** 3), 4, 5),
    ("z1^3,z1z2,z2^2", gens(z1 ** 3, z1 * z2, z2 ** 2), 4, 5),
    ("z1^3,z2-z1^2", gens(z1 ** 3, z2 - z1 ** 2), 3, 3),
    ("z1^3,z2-(2+i)z1^2", gens(z1 ** 3, z2 - (2 + 1j) * z1 ** 2), 3, 3),
    ("z1z2,z1^2+z2^2", gens(z1 * z2, z1 ** 2 + z2 ** 2), 4, 4),
    ("z2-z1^2,z1^4", gens(z2 - z1 ** 2, z1 ** 4), 4, 4),
    ("shifted", gens((z1 - 0.2) ** 2, z2 - 0.1, base_point=(0.2, 0.1)), 2, 2),
    ("points", IdealSpec.from_points([(0, 0), (0.1, 0), (0, 0.1)]), 3, None),
]
MONOMIAL = [c for c in CORPUS if c[1].is_monomial()]


def test_corpus_size():
    assert len(CORPUS) >= 10


@pytest.mark.parametrize("name,I,ell,e", CORPUS, ids=[c[0] for c in CORPUS])
def test_corpus_length(name, I, ell, e):
    r = local_length(I)
    assert r.certified and r.value == ell
    if not I.is_point_form:
        assert local_length(I, method="jet").value == ell


@pytest.mark.parametrize("name,I,ell,e", [c for c in CORPUS if c[3] is not None],
                         ids=[c[0] for c in CORPUS if c[3] is not None])
def test_corpus_multiplicity(name, I, ell, e):
    m = hilbert_samuel_multiplicity(I, k_max=8)
    assert m.value == e
    assert m.value >= ell
    table = m.difference_table
    assert all(b >= a for a, b in zip(table, table[1:]))
    d2 = [table[i + 2] - 2 * table[i + 1] + table[i] for i in range(len(table) - 2)]
    assert d2[-1] == d2[-2] == e


@pytest.mark.parametrize("name,I,ell,e", MONOMIAL, ids=[c[0] for c in MONOMIAL])
def test_monomial_oracles_agree(name, I, ell, e):
    exps = [next(iter(g.terms)) for g in I.generators]
    assert monomial_length(exps) == local_length(I, method="jet").value == ell
    assert newton_multiplicity(exps) == e


def test_jet_multiplicity_matches_staircase_route():
    I = gens(z1 ** 2, z1 * z2, z2 ** 3)
    a = hilbert_samuel_multiplicity(I, method="jet")
    b = hilbert_samuel_multiplicity(I, method="monomial")
    assert a.value == b.value == 5


def test_ideal_jet_space_examples():
    assert ideal_jet_space(gens(z1, z2), 2).rank == 5
    assert ideal_jet_space(IdealSpec.from_points([(0, 0)]), 1).rank == 2
    assert ideal_jet_space(gens(z1 ** 3, z2 - z1 ** 2), 3).codim == 3


def test_length_examples():
    assert local_length(gens(z1, z2)).value == 1
    assert local_length(maximal_ideal_power(2)).value == 3
    r = local_length(gens(z1 ** 3, z2 - z1 ** 2), method="jet")
    assert r.value == 3 and r.certified


def test_length_of_maximal_powers_is_binomial():
    for p in range(1, 6):
        assert local_length(maximal_ideal_power(p), method="jet").value == binomial_length(p)


def test_non_zero_dimensional_is_not_certified():
    r = local_length(gens(z1 + z2 ** 2), D_max=8)
    assert not r.certified
    with pytest.raises(NotCertifiedError):
        hilbert_samuel_multiplicity(gens(z1))


def test_ideal_power_examples():
    P = ideal_power(gens(z1, z2), 2)
    assert {next(iter(g.terms)) for g in P.generators} == {(2, 0), (1, 1), (0, 2)}
    I = gens(z1 ** 3, z2 - z1 ** 2)
    assert [g.terms for g in ideal_power(I, 1).generators] == [g.terms for g in I.generators]
    P = ideal_power(gens(z1 ** 2, z2 ** 2), 2)
    assert {next(iter(g.terms)) for g in P.generators} == {(4, 0), (2, 2), (0, 4)}
    with pytest.raises(ValueError):
        ideal_power(IdealSpec.from_points([(0, 0)]), 2)


def test_complete_intersection_examples():
    r = is_complete_intersection(gens(z1 ** 2, z2 ** 2))
    assert r.ci and r.length == r.multiplicity == 4
    r = is_complete_intersection(maximal_ideal_power(2))
    assert not r.ci and (r.length, r.multiplicity) == (3, 4)
    for a in (0, 1, 2 + 1j):
        r = is_complete_intersection(gens(z1 ** 3, z2 - a * z1 ** 2))
        assert r.ci and r.length == 3


def test_monomial_length_examples():
    assert monomial_length([(2, 0), (0, 3)]) == 6
    assert monomial_length([(3, 0), (2, 1), (1, 2), (0, 3)]) == 6
    with pytest.raises(ValueError):
        monomial_length([(1, 0)])


def test_point_form_length_counts_points():
    rng = np.random.default_rng(5)
    for n in range(1, 7):
        while True:
            pts = 0.8 * (rng.random((n, 2)) - 0.5) + 0.8j * (rng.random((n, 2)) - 0.5)
            if all(np.abs(pts[i] - pts[j]).max() >= 0.05 for i, j in itertools.combinations(range(n), 2)):
                break
        r = local_length(IdealSpec.from_points([tuple(p) for p in pts]), D_max=6)
        assert r.certified and r.value == n


def test_point_form_rejects_repeats():
    with pytest.raises(ValueError):
        IdealSpec.from_points([(0, 0), (0, 0)])


def test_jet_membership():
    I = gens(z1 ** 3, z2 - z1 ** 2)
    assert jet_membership(z1 * (z2 - z1 ** 2) + z1 ** 4, I)
    assert not jet_membership(z2, I)


def test_json_roundtrip():
    for _, I, *_ in CORPUS:
        J = IdealSpec.from_json(I.to_json())
        assert local_length(J).value == local_length(I).value

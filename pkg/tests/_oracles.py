"""Shared sample generators for the residue duality checks."""

import numpy as np

from greenlimits.numcore import MultiPoly, monomials

z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)

# complete intersections at the origin, with their generators
CI_CORPUS = {
    "z1^2,z2^2": (z1 ** 2, z2 ** 2),
    "z1^3,z2-z1^2": (z1 ** 3, z2 - z1 ** 2),
    "z1^2,z2^3": (z1 ** 2, z2 ** 3),
    "z1z2,z1^2+z2^2": (z1 * z2, z1 ** 2 + z2 ** 2),
}


def random_poly(rng, deg, order=0):
    terms = {e: complex(*rng.standard_normal(2)) for e in monomials(2, deg) if sum(e) >= order}
    return MultiPoly(2, terms)


def duality_samples(gens, n, seed, deg=4):
    """``n`` random polynomials of degree <= deg; every other one is built inside the ideal."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        if k % 2 == 0:
            h = MultiPoly.zero(2)
            for g in gens:
                if deg - g.degree >= 0:
                    h = h + random_poly(rng, deg - g.degree) * g
        else:
            # generic polynomials with a random low order, so some fall outside for subtle reasons
            h = random_poly(rng, deg, order=int(rng.integers(0, 3)))
        out.append(h)
    return out

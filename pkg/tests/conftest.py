"""Shared helpers for the test suite.

Randomness only drives sampling; every generated object is exact and every
generator below produces *valid* instances by construction (coboundaries of
valid cocycles, unit conjugations, etc.).
"""

import random

import pytest

from super2vec.clifford import clifford
from super2vec.crossedmodule import (
    CMCocycle,
    UnitCochain,
    apply_coboundary,
    aut_crossed_module,
)
from super2vec.nerve import AbelianCochain, cohomology, rp2_nerve
from super2vec.superalgebra import (
    AlgebraHom,
    UnitElement,
    conjugation_hom,
    parity_hom,
)


def rand_unit(A, rng, span=3):
    """A random even unit of A supported on the even part."""
    even = [i for i in range(A.dim) if A.parity(i) == 0]
    while True:
        vec = [A.field.zero()] * A.dim
        for i in even:
            vec[i] = A.field.from_int(rng.randint(-span, span))
        u = UnitElement.from_vector(A, vec)
        if u is not None and u.parity == 0:
            return u


def rand_homogeneous_unit(A, rng, span=3):
    """A random homogeneous unit (either parity) of A."""
    par = rng.randint(0, 1)
    idx = [i for i in range(A.dim) if A.parity(i) == par]
    for _ in range(50):
        vec = [A.field.zero()] * A.dim
        for i in idx:
            vec[i] = A.field.from_int(rng.randint(-span, span))
        u = UnitElement.from_vector(A, vec)
        if u is not None:
            return u
    return rand_unit(A, rng, span)


def rand_auto(A, rng):
    """A random automorphism: inner by a random even unit, optionally
    composed with the parity automorphism."""
    phi = conjugation_hom(A, rand_unit(A, rng))
    if rng.random() < 0.5:
        phi = parity_hom(A).compose(phi)
    return phi


def w1_data(nerve):
    """(H1, H2, w1 vector, w1 cochain) for the mod-2 cohomology of a nerve
    with a single order-2 class in degree 1."""
    H1 = cohomology(nerve, 1, 2)
    H2 = cohomology(nerve, 2, 2)
    vec = H1.representatives[0]
    coch = AbelianCochain(
        nerve, 1, 2,
        {e: int(vec[i]) for i, e in enumerate(nerve.edges())},
    )
    return H1, H2, vec, coch


def tautological_cocycle(nerve, A, cm=None):
    """The AUT(A)-cocycle twisting by the parity automorphism along a
    representative of the generator of H^1(nerve; Z2)."""
    cm = cm or aut_crossed_module(A)
    _H1, _H2, vec, _ = w1_data(nerve)
    eta = parity_hom(A)
    g = {
        e: (eta if vec[i] % 2 else cm.G_id)
        for i, e in enumerate(nerve.edges())
    }
    a = {t: cm.H_one for t in nerve.triangles()}
    return CMCocycle(nerve, cm, g, a)


def random_cocycle(nerve, A, cm, rng):
    """A random valid AUT(A)-cocycle: a random coboundary applied to the
    trivial or the tautological cocycle."""
    base = (
        tautological_cocycle(nerve, A, cm)
        if rng.random() < 0.5
        else CMCocycle(nerve, cm,
                       {e: cm.G_id for e in nerve.edges()},
                       {t: cm.H_one for t in nerve.triangles()})
    )
    h = {v: rand_auto(A, rng) for v in nerve.vertices}
    e = {s: rand_unit(A, rng) for s in nerve.edges()}
    return apply_coboundary(base, h, e), base, h, e


def random_sign_cocycle(nerve, field, rng):
    """A random unit-valued 2-cocycle: a +-1 cocycle times the coboundary
    of a random unit 1-cochain."""
    H2 = cohomology(nerve, 2, 2)
    choice = [0] * len(H2.factors)
    if H2.factors:
        choice[rng.randrange(len(H2.factors))] = rng.randint(0, 1)
    vec = [0] * len(nerve.triangles())
    for c, rep in zip(choice, H2.representatives):
        if c:
            vec = [(a + b) % 2 for a, b in zip(vec, rep)]
    signs = UnitCochain.from_additive(
        AbelianCochain(
            nerve, 2, 2,
            {t: vec[i] for i, t in enumerate(nerve.triangles())},
        ),
        field,
    )
    ratios = {}
    for e in nerve.edges():
        num = rng.randint(1, 5)
        den = rng.randint(1, 5)
        val = field.from_int(num) / field.from_int(den)
        if rng.random() < 0.5:
            val = -val
        ratios[e] = val
    cob = UnitCochain(nerve, 1, field, ratios).coboundary()
    return signs.mul(cob)


@pytest.fixture(scope="session")
def rp2():
    return rp2_nerve()


@pytest.fixture(scope="session")
def cl01():
    return clifford(0, 1)

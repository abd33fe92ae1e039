"""Crossed-module cocycles, coboundaries, invariants, butterfly transport."""

import random

import pytest

from super2vec.clifford import clifford, complex_clifford
from super2vec.crossedmodule import (
    CMCocycle,
    TransportError,
    UnitCochain,
    aut_crossed_module,
    butterfly_transport,
    csa_butterfly,
    csa_invariants,
    homogeneous_witness,
    scalar_crossed_module,
    tensor_cocycles,
    trivial_cocycle,
    validate_cocycle,
    verify_coboundary,
)
from super2vec.nerve import AbelianCochain, cohomology, rp2_nerve, torus_nerve
from super2vec.scalars import QI, QQ
from super2vec.superalgebra import UnitElement, parity_hom

from conftest import (
    rand_auto,
    rand_unit,
    random_cocycle,
    tautological_cocycle,
    w1_data,
)


class TestCocycleValidation:
    def test_trivial_cocycle_validates(self):
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        for nerve in (rp2_nerve(), torus_nerve()):
            assert validate_cocycle(trivial_cocycle(nerve, cm)).ok

    def test_tautological_cocycle_validates(self):
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        assert validate_cocycle(tautological_cocycle(nerve, A, cm)).ok

    def test_broken_cocycle_reported(self):
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        c = tautological_cocycle(nerve, A, cm)
        # flip one edge label: the triangle identity must now fail on every
        # triangle containing that edge
        edge = next(e for e in nerve.edges()
                    if not cm.G_eq(c.g[e], cm.G_id))
        bad = dict(c.g)
        bad[edge] = cm.G_id
        report = validate_cocycle(CMCocycle(nerve, cm, bad, c.a))
        assert not report.ok
        broken = {f[0] for f in report.failures}
        assert all(edge[0] in t and edge[1] in t for t in broken)
        assert broken

    def test_coboundary_preserves_validity(self):
        rng = random.Random(1)
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        for _ in range(5):
            c, base, h, e = random_cocycle(nerve, A, cm, rng)
            assert validate_cocycle(c).ok
            assert verify_coboundary(base, c, h, e)

    def test_verify_coboundary_rejects_wrong_witness(self):
        rng = random.Random(2)
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        c, base, h, e = random_cocycle(nerve, A, cm, rng)
        e2 = dict(e)
        edge = nerve.edges()[0]
        # scale one unit witness by 2: central, so the edge identity still
        # holds, but the triangle identity picks up a factor of 2
        two = UnitElement.from_vector(A, [x + x for x in A.unit])
        e2[edge] = e2[edge].mul(two)
        assert not verify_coboundary(base, c, h, e2)


class TestCSAInvariants:
    def test_tautological_invariants_on_rp2(self):
        rng = random.Random(3)
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        c = tautological_cocycle(nerve, A, cm)
        inv = csa_invariants(c, rng)
        H1, H2, w1vec, w1c = w1_data(nerve)
        # [PAPER] epsilon = w1, x = w1^2 for the tautological cocycle
        assert H1.same_class(inv.epsilon.vector(), w1vec)
        from super2vec.nerve import cup_product
        xadd = inv.x.to_additive(2)
        assert xadd is not None
        assert H2.same_class(xadd.vector(), cup_product(w1c, w1c).vector())

    def test_invariants_are_coboundary_invariant(self):
        rng = random.Random(4)
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        H1 = cohomology(nerve, 1, 2)
        for _ in range(5):
            c, base, _h, _e = random_cocycle(nerve, A, cm, rng)
            i1 = csa_invariants(base, rng)
            i2 = csa_invariants(c, rng)
            assert H1.same_class(i1.epsilon.vector(), i2.epsilon.vector())
            assert i1.x.same_class(i2.x)

    def test_homogeneous_witness(self):
        rng = random.Random(5)
        A = clifford(0, 2)
        for _ in range(10):
            phi = rand_auto(A, rng)
            u, par = homogeneous_witness(A, phi, rng)
            assert u is not None
            assert par in (0, 1)


class TestTensorCocycles:
    def test_tensor_adds_invariants(self):
        rng = random.Random(6)
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        H1 = cohomology(nerve, 1, 2)
        c1, _, _, _ = random_cocycle(nerve, A, cm, rng)
        c2, _, _, _ = random_cocycle(nerve, A, cm, rng)
        ct = tensor_cocycles(c1, c2)
        assert validate_cocycle(ct).ok
        i1 = csa_invariants(c1, rng)
        i2 = csa_invariants(c2, rng)
        it = csa_invariants(ct, rng)
        sum_eps = [
            (a + b) % 2
            for a, b in zip(i1.epsilon.vector(), i2.epsilon.vector())
        ]
        assert H1.same_class(it.epsilon.vector(), sum_eps)


class TestButterfly:
    def test_csa_butterfly_transport_matches_invariants(self):
        rng = random.Random(7)
        nerve = rp2_nerve()
        A = clifford(0, 1)
        cm = aut_crossed_module(A)
        bf = csa_butterfly(A, random.Random(0))
        for _ in range(5):
            c, _, _, _ = random_cocycle(nerve, A, cm, rng)
            inv = csa_invariants(c, rng)
            out, lifts = butterfly_transport(bf, c)
            assert validate_cocycle(out).ok
            # transported scalar part differs from x by the coboundary of
            # the ratio between the two unit lifts
            ratio = {
                s: bf.preimage_i2(lifts[s].mul(inv.units[s].invert()))
                for s in nerve.edges()
            }
            xt = UnitCochain(
                nerve, 2, A.field,
                {t: out.a[t] for t in nerve.triangles()},
            )
            corrected = inv.x.mul(
                UnitCochain(nerve, 1, A.field, ratio).coboundary())
            assert xt == corrected


class TestUnitCochain:
    def test_coboundary_witness_round_trip(self):
        rng = random.Random(8)
        nerve = torus_nerve()
        for _ in range(5):
            f = UnitCochain(
                nerve, 1, QQ,
                {e: QQ.coerce(rng.choice([1, 2, 3, -1, -2]))
                 for e in nerve.edges()},
            )
            c = f.coboundary()
            w = c.coboundary_witness()
            assert w is not None
            assert w.coboundary() == c

    def test_sign_cocycle_torsion(self):
        nerve = rp2_nerve()
        _, _, _, w1c = w1_data(nerve)
        from super2vec.nerve import cup_product
        x = UnitCochain.from_additive(cup_product(w1c, w1c), QQ)
        assert x.is_cocycle()
        assert x.is_torsion_class()
        assert x.torsion_modulus() == 2
        assert x.coboundary_witness() is None  # nontrivial class

    def test_additive_round_trip(self):
        nerve = torus_nerve()
        H2 = cohomology(nerve, 2, 4)
        rep = AbelianCochain(
            nerve, 2, 4,
            {t: int(H2.representatives[0][i])
             for i, t in enumerate(nerve.triangles())},
        )
        u = UnitCochain.from_additive(rep, QI)
        back = u.to_additive(4)
        assert back is not None
        assert back.vector() == rep.vector()
        assert u.torsion_modulus() == 4

"""Nerves, simplicial cohomology, cup products, Bockstein."""

import random

import pytest

from super2vec.nerve import (
    AbelianCochain,
    Nerve,
    NerveError,
    bockstein,
    circle_nerve,
    cohomology,
    cup_product,
    rp2_nerve,
    sphere_nerve,
    torus_nerve,
)


class TestNerveStructure:
    def test_rp2_counts(self):
        n = rp2_nerve()
        # 6 vertices, 15 edges, 10 faces: chi = 1
        assert len(n.vertices) == 6
        assert len(n.edges()) == 15
        assert len(n.triangles()) == 10

    def test_torus_counts(self):
        n = torus_nerve()
        # 7-vertex triangulation: 21 edges, 14 faces, chi = 0
        assert len(n.vertices) == 7
        assert len(n.edges()) == 21
        assert len(n.triangles()) == 14

    def test_circle_and_sphere(self):
        c = circle_nerve(5)
        assert len(c.vertices) == 5 and len(c.edges()) == 5
        assert not c.triangles()
        s = sphere_nerve(2)
        assert len(s.triangles()) == 4  # boundary of the 3-simplex

    def test_rejects_unsorted_simplex(self):
        with pytest.raises((NerveError, AssertionError, ValueError)):
            Nerve(((2, 1),))

    def test_coboundary_squares_to_zero(self):
        for n in (rp2_nerve(), torus_nerve(), sphere_nerve(3)):
            for k in (0, 1):
                d1 = n.coboundary_matrix(k)
                d2 = n.coboundary_matrix(k + 1)
                if not d1 or not d2:
                    continue
                prod = [
                    [
                        sum(d2[i][r] * d1[r][j] for r in range(len(d1)))
                        for j in range(len(d1[0]))
                    ]
                    for i in range(len(d2))
                ]
                assert all(all(x == 0 for x in row) for row in prod)


class TestCohomology:
    def test_rp2_mod2(self):
        n = rp2_nerve()
        # [PAPER] H^*(RP^2; Z2) = Z2 in degrees 0, 1, 2
        assert cohomology(n, 1, 2).factors == [2]
        assert cohomology(n, 2, 2).factors == [2]

    def test_rp2_integral(self):
        n = rp2_nerve()
        # [PAPER] H^1(RP^2; Z) = 0, H^2(RP^2; Z) = Z2
        assert cohomology(n, 1, 0).factors == []
        assert cohomology(n, 2, 0).factors == [2]

    def test_torus_classes(self):
        n = torus_nerve()
        # [PAPER] H^1(T^2; Z) = Z^2, H^2(T^2; Z) = Z
        assert sorted(cohomology(n, 1, 0).factors) == [0, 0]
        assert cohomology(n, 2, 0).factors == [0]
        assert cohomology(n, 1, 2).factors == [2, 2]
        assert cohomology(n, 2, 4).factors == [4]

    def test_sphere(self):
        s = sphere_nerve(2)
        assert cohomology(s, 1, 0).factors == []
        assert cohomology(s, 2, 0).factors == [0]

    def test_representatives_are_cocycles(self):
        for n, deg, mod in [(rp2_nerve(), 1, 2), (torus_nerve(), 1, 2),
                            (torus_nerve(), 2, 4), (rp2_nerve(), 2, 2)]:
            H = cohomology(n, deg, mod)
            for rep in H.representatives:
                assert H.is_cocycle(rep)
                assert H.coboundary_witness(list(rep)) is None  # nontrivial

    def test_coboundary_witness_round_trip(self):
        n = rp2_nerve()
        H1 = cohomology(n, 1, 2)
        rng = random.Random(2)
        for _ in range(10):
            f = {(v,): rng.randint(0, 1) for v in n.vertices}
            c = AbelianCochain(n, 0, 2, f).coboundary()
            w = H1.coboundary_witness(c.vector())
            assert w is not None
            back = AbelianCochain(n, 0, 2,
                                  {(v,): w[i]
                                   for i, v in enumerate(n.vertices)})
            assert back.coboundary().vector() == c.vector()


class TestCupAndBockstein:
    def test_w1_squared_nonzero_on_rp2(self):
        n = rp2_nerve()
        H1 = cohomology(n, 1, 2)
        H2 = cohomology(n, 2, 2)
        w1 = AbelianCochain(
            n, 1, 2,
            {e: int(H1.representatives[0][i])
             for i, e in enumerate(n.edges())},
        )
        sq = cup_product(w1, w1)
        assert H2.is_cocycle(sq.vector())
        # [DERIVED] w1^2 generates H^2(RP^2; Z2)
        assert H2.coboundary_witness(sq.vector()) is None

    def test_cup_symmetry_up_to_coboundary(self):
        n = torus_nerve()
        H1 = cohomology(n, 1, 2)
        H2 = cohomology(n, 2, 2)
        a = AbelianCochain(n, 1, 2, {e: int(H1.representatives[0][i])
                                     for i, e in enumerate(n.edges())})
        b = AbelianCochain(n, 1, 2, {e: int(H1.representatives[1][i])
                                     for i, e in enumerate(n.edges())})
        ab = cup_product(a, b).vector()
        ba = cup_product(b, a).vector()
        assert H2.same_class(ab, ba)
        # [DERIVED] the generators pair nontrivially on the torus
        assert H2.coboundary_witness(list(ab)) is None

    def test_cup_leibniz(self):
        # d(a cup b) = da cup b + a cup db for random mod-2 1-cochains
        n = torus_nerve()
        rng = random.Random(5)
        for _ in range(10):
            a = AbelianCochain(n, 1, 2,
                               {e: rng.randint(0, 1) for e in n.edges()})
            b = AbelianCochain(n, 1, 2,
                               {e: rng.randint(0, 1) for e in n.edges()})
            lhs = cup_product(a, b).coboundary()
            rhs = cup_product(a.coboundary(), b).add(
                cup_product(a, b.coboundary()))
            assert lhs.vector() == rhs.vector()

    def test_bockstein_rp2(self):
        n = rp2_nerve()
        H1 = cohomology(n, 1, 2)
        w1 = AbelianCochain(
            n, 1, 2,
            {e: int(H1.representatives[0][i])
             for i, e in enumerate(n.edges())},
        )
        beta = bockstein(w1)
        H2z = cohomology(n, 2, 0)
        # [DERIVED] beta(w1) generates H^2(RP^2; Z) = Z2
        assert H2z.is_cocycle(beta.vector())
        assert H2z.coboundary_witness(beta.vector()) is None

    def test_bockstein_of_coboundary_is_trivial(self):
        n = torus_nerve()
        rng = random.Random(9)
        H2z = cohomology(n, 2, 0)
        for _ in range(5):
            f = AbelianCochain(n, 1, 4,
                               {e: rng.randint(0, 3) for e in n.edges()})
            c = f.coboundary()
            beta = bockstein(c)
            assert H2z.coboundary_witness(beta.vector()) is not None

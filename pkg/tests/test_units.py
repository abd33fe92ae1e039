"""Canonical unit factorization over Q and Q(i)."""

import random
from fractions import Fraction

from super2vec.scalars import QI, QQ, GaussianRational, Rat
from super2vec.units import (
    UnitFactorization,
    factor_gaussian_integer,
    factor_unit,
    g_canonical,
    g_gcd,
    g_mul,
    g_norm,
    normalize_unit_vector,
    unit_from_factorization,
)


def _rand_rat(rng):
    num = rng.choice([x for x in range(-20, 21) if x])
    den = rng.randint(1, 20)
    return QQ.coerce(Fraction(num, den))


def _rand_gauss(rng):
    while True:
        v = GaussianRational(
            Rat(rng.randint(-8, 8), rng.randint(1, 6)),
            Rat(rng.randint(-8, 8), rng.randint(1, 6)),
        )
        if v:
            return QI.coerce(v)


class TestGaussianIntegers:
    def test_canonical_associate(self):
        for x in [(1, 0), (0, 1), (-1, 0), (0, -1), (3, 2), (-3, 2), (-2, -5)]:
            k, a = g_canonical(x)
            assert a[0] > 0 and a[1] >= 0
            # i^k * a == x
            acc = a
            for _ in range(k % 4):
                acc = (-acc[1], acc[0])
            assert acc == x

    def test_gcd_divides(self):
        rng = random.Random(1)
        for _ in range(30):
            x = (rng.randint(-9, 9), rng.randint(-9, 9))
            y = (rng.randint(-9, 9), rng.randint(-9, 9))
            if x == (0, 0) or y == (0, 0):
                continue
            g = g_gcd(x, y)
            assert g_norm(x) % g_norm(g) == 0
            assert g_norm(y) % g_norm(g) == 0

    def test_factor_reconstructs(self):
        rng = random.Random(2)
        for _ in range(30):
            x = (rng.randint(-12, 12), rng.randint(-12, 12))
            if x == (0, 0):
                continue
            k, exps = factor_gaussian_integer(x)
            acc = (1, 0)
            for _ in range(k % 4):
                acc = (-acc[1], acc[0])
            for p, e in exps.items():
                for _ in range(e):
                    acc = g_mul(acc, p)
            assert acc == x

    def test_canonical_primes_positive_exponents(self):
        # [TRIVIAL] 2 = -i (1+i)^2
        k, exps = factor_gaussian_integer((2, 0))
        assert exps == {(1, 1): 2} and k == 3


class TestFactorUnit:
    def test_round_trip_rational(self):
        rng = random.Random(3)
        for _ in range(40):
            v = _rand_rat(rng)
            fac = factor_unit(QQ, v)
            assert unit_from_factorization(QQ, fac) == v

    def test_round_trip_gaussian(self):
        rng = random.Random(4)
        for _ in range(40):
            v = _rand_gauss(rng)
            fac = factor_unit(QI, v)
            assert unit_from_factorization(QI, fac) == v

    def test_multiplicativity(self):
        rng = random.Random(5)
        for field, gen in ((QQ, _rand_rat), (QI, _rand_gauss)):
            for _ in range(20):
                a, b = gen(rng), gen(rng)
                fab = factor_unit(field, a).mul(factor_unit(field, b))
                assert unit_from_factorization(field, fab) == a * b
                assert factor_unit(field, a).mul(
                    factor_unit(field, a).inv()).is_one()

    def test_roots_of_unity(self):
        assert factor_unit(QQ, QQ.from_int(-1)).root_exponent == 1
        assert not factor_unit(QQ, QQ.from_int(-1)).exponents
        fi = factor_unit(QI, QI.i())
        assert fi.root_order == 4 and fi.root_exponent == 1
        assert not fi.exponents
        assert factor_unit(QI, QI.from_int(-1)).root_exponent == 2


class TestNormalize:
    def test_rational_normalization(self):
        rng = random.Random(6)
        for _ in range(20):
            n = rng.randint(1, 5)
            vec = [QQ.coerce(Fraction(rng.randint(-6, 6), rng.randint(1, 5)))
                   for _ in range(n)]
            if all(not x for x in vec):
                vec[0] = QQ.one()
            new, factor = normalize_unit_vector(QQ, vec)
            assert new == [x * factor for x in vec]
            ints = [int(x) for x in new]  # integral entries
            first = next(v for v in ints if v)
            assert first > 0
            from math import gcd
            g = 0
            for v in ints:
                g = gcd(g, abs(v))
            assert g == 1

    def test_scale_invariance(self):
        rng = random.Random(7)
        for field, gen in ((QQ, _rand_rat), (QI, _rand_gauss)):
            for _ in range(15):
                vec = [gen(rng) for _ in range(3)]
                s = gen(rng)
                n1, _ = normalize_unit_vector(field, vec)
                n2, _ = normalize_unit_vector(field, [x * s for x in vec])
                assert n1 == n2

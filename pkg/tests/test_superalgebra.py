"""Super algebras: Clifford tables, tensor signs, Hochschild, units."""

import random

import pytest

from super2vec.clifford import (
    bw_class,
    clifford,
    complex_clifford,
    morita_trivial,
    standard_clifford,
)
from super2vec.scalars import QI, QQ
from super2vec.superalgebra import (
    AlgebraHom,
    UnitElement,
    conjugation_hom,
    dual_numbers,
    end_algebra,
    graded_opposite,
    graded_tensor,
    ground_field,
    hh1,
    is_central_simple,
    parity_hom,
    tensor_index,
)
from super2vec.supervect import SuperVectorSpace

from conftest import rand_auto, rand_homogeneous_unit, rand_unit


class TestClifford:
    def test_generator_squares(self):
        # Cl(p, q): first p generators square to +1, last q to -1
        for p, q in [(1, 0), (0, 1), (2, 1), (1, 2)]:
            A = clifford(p, q)
            one = A.unit
            for k in range(p + q):
                pos = A.carrier.labels.index((f"e{k + 1}", 1))
                g = A.basis_vector(pos)
                sq = A.mul(g, g)
                want = one if k < p else [-x for x in one]
                assert sq == want

    def test_generators_anticommute(self):
        A = clifford(2, 1)
        gens = [A.basis_vector(A.carrier.labels.index((f"e{k + 1}", 1)))
                for k in range(3)]
        for i in range(3):
            for j in range(i + 1, 3):
                gi, gj = gens[i], gens[j]
                assert A.mul(gi, gj) == [-x for x in A.mul(gj, gi)]

    def test_dimensions_and_parity(self):
        for p, q in [(0, 0), (0, 3), (2, 2)]:
            A = clifford(p, q)
            assert A.dim == 2 ** (p + q)
            assert A.carrier.even_dim == A.carrier.odd_dim or A.dim == 1

    def test_complex_clifford_field(self):
        A = complex_clifford(2)
        assert A.field is QI and A.dim == 4


class TestBrauerWall:
    def test_morita_trivial_endomorphism_algebras(self):
        rng = random.Random(1)
        E, _ = end_algebra(SuperVectorSpace.make(QQ, ["x"], ["y"]))
        assert morita_trivial(E, rng).trivial
        assert morita_trivial(ground_field(QQ), rng).trivial
        res = morita_trivial(clifford(0, 1), rng)
        assert not res.trivial and res.definitive

    def test_bw_oracle_small(self):
        rng = random.Random(2)
        # [PAPER] Cl(0,1) generates BW(R) = Z8; Cl(1,0) is its inverse
        assert bw_class(clifford(0, 1), rng).residue == 1
        assert bw_class(clifford(1, 0), rng).residue == 7
        assert bw_class(clifford(1, 1), rng).residue == 0
        b = bw_class(complex_clifford(1), rng)
        assert (b.residue, b.modulus) == (1, 2)

    def test_bw_group_ops(self):
        rng = random.Random(3)
        b1 = bw_class(clifford(0, 1), rng)
        b2 = bw_class(clifford(0, 2), rng)
        assert (b1 + b2).residue == 3
        assert (-b1).residue == 7


class TestGradedTensor:
    def test_koszul_sign_identity(self):
        # (a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd on homogeneous basis
        rng = random.Random(4)
        for _ in range(20):
            A = clifford(rng.randint(0, 1), rng.randint(0, 1))
            B = clifford(rng.randint(0, 1), rng.randint(1, 2))
            AB = graded_tensor(A, B)
            idx = tensor_index(A, B)
            for _ in range(5):
                i, j = rng.randrange(A.dim), rng.randrange(B.dim)
                k, l = rng.randrange(A.dim), rng.randrange(B.dim)
                x = AB.basis_vector(idx[(i, j)])
                y = AB.basis_vector(idx[(k, l)])
                got = AB.mul(x, y)
                ac = A.mul(A.basis_vector(i), A.basis_vector(k))
                bd = B.mul(B.basis_vector(j), B.basis_vector(l))
                sign = -1 if (B.parity(j) and A.parity(k)) else 1
                want = [AB.field.zero()] * AB.dim
                for r, cr in enumerate(ac):
                    for s, cs in enumerate(bd):
                        want[idx[(r, s)]] = (
                            AB.field.from_int(sign) * cr * cs
                        )
                assert got == want

    def test_cl11_is_matrix_algebra(self):
        rng = random.Random(5)
        assert morita_trivial(clifford(1, 1), rng)


class TestGradedOpposite:
    def test_involution(self):
        rng = random.Random(6)
        algebras = [clifford(0, 1), clifford(1, 0), clifford(1, 1),
                    dual_numbers(QQ), complex_clifford(1)]
        for A in algebras:
            Aopop = graded_opposite(graded_opposite(A))
            assert Aopop.table == A.table
            assert Aopop.unit == A.unit
        del rng

    def test_opposite_reverses_product(self):
        A = clifford(2, 0)
        Aop = graded_opposite(A)
        rng = random.Random(7)
        for _ in range(10):
            i, j = rng.randrange(A.dim), rng.randrange(A.dim)
            sign = -1 if (A.parity(i) and A.parity(j)) else 1
            lhs = Aop.mul(Aop.basis_vector(i), Aop.basis_vector(j))
            rhs = [A.field.from_int(sign) * x
                   for x in A.mul(A.basis_vector(j), A.basis_vector(i))]
            assert lhs == rhs


class TestHochschild:
    def test_clifford_rigid(self):
        # [PAPER] hh1 = 0 for central simple algebras
        for p, q in [(0, 0), (0, 1), (1, 1), (0, 2)]:
            count, _ = hh1(clifford(p, q))
            assert count == 0

    def test_dual_numbers(self):
        # [PAPER] k[eps] has a 1-dimensional outer derivation space,
        # generated by the Euler derivation D(eps) = eps
        A = dual_numbers(QQ)
        count, reps = hh1(A)
        assert count == 1
        D = reps[0]
        eps = A.basis_vector(1)
        img = D(eps)
        # D(eps) proportional to eps with nonzero factor, D(1) = 0
        assert img[0] == QQ.zero() and img[1] != QQ.zero()
        assert D(A.unit) == [QQ.zero(), QQ.zero()]


class TestUnitsAndHoms:
    def test_unit_inverse(self):
        rng = random.Random(8)
        for A in (clifford(0, 2), clifford(1, 1), complex_clifford(1)):
            for _ in range(10):
                u = rand_homogeneous_unit(A, rng)
                w = u.invert()
                assert A.mul(u.vector, w.vector) == A.unit
                assert A.mul(w.vector, u.vector) == A.unit

    def test_non_unit_rejected(self):
        A = dual_numbers(QQ)
        eps = A.basis_vector(1)
        assert UnitElement.from_vector(A, eps) is None

    def test_conjugation_and_parity_homs(self):
        rng = random.Random(9)
        A = clifford(0, 2)
        for _ in range(10):
            phi = rand_auto(A, rng)
            assert phi.validate() is None
            psi = phi.inverse()
            ident = AlgebraHom.identity(A)
            assert phi.compose(psi) == ident
        eta = parity_hom(A)
        assert eta.compose(eta) == AlgebraHom.identity(A)

    def test_inner_conjugation_formula(self):
        rng = random.Random(10)
        A = clifford(1, 1)
        for _ in range(10):
            u = rand_unit(A, rng)
            phi = conjugation_hom(A, u)
            x = [A.field.from_int(rng.randint(-3, 3)) for _ in range(A.dim)]
            lhs = phi.map(x)
            rhs = A.mul(A.mul(u.vector, x), u.invert().vector)
            assert lhs == rhs


class TestCentralSimple:
    def test_csa_verdicts(self):
        assert is_central_simple(clifford(0, 1))[0]
        assert is_central_simple(clifford(2, 2))[0]
        assert is_central_simple(complex_clifford(1))[0]
        ok, witness = is_central_simple(dual_numbers(QQ))
        assert not ok and witness is not None

    def test_complex_scalars_not_central_over_q(self):
        # Q(i) viewed as a Q-algebra has center Q(i), hence not central
        from super2vec.superalgebra import make_algebra
        carrier = SuperVectorSpace.make(QQ, ["1", "i"], [])
        table = [[{0: 1}, {1: 1}], [{1: 1}, {0: -1}]]
        A = make_algebra(carrier, table, [QQ.one(), QQ.zero()])
        ok, _ = is_central_simple(A)
        assert not ok

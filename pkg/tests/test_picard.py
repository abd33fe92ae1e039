"""Picard witnesses, projective decompositions, Picard surjectification."""

import random

import pytest

from super2vec.bimodule import hom_twist, parity_flip, regular_bimodule
from super2vec.clifford import clifford, complex_clifford
from super2vec.picard import (
    decompose_projectives,
    picard_surjectify,
    picard_witness,
    radical,
)
from super2vec.scalars import QI, QQ
from super2vec.superalgebra import (
    conjugation_hom,
    dual_numbers,
    ground_field,
    parity_hom,
)

from conftest import rand_auto, rand_unit


class TestPicardWitness:
    def test_hom_twists_are_recognized(self):
        rng = random.Random(1)
        for A in (clifford(0, 1), clifford(1, 1)):
            for _ in range(5):
                phi = rand_auto(A, rng)
                w, _status = picard_witness(A, hom_twist(A, phi), rng)
                assert w is not None
                assert w.intertwiner.is_invertible()

    def test_parity_flip_over_purely_even_is_not_a_twist(self):
        # Pi(k) over k has the wrong parity signature
        rng = random.Random(2)
        k = ground_field(QQ)
        w, status = picard_witness(k, parity_flip(regular_bimodule(k)), rng)
        assert w is None and status == "dimension mismatch"

    def test_parity_flip_over_cl1_is_a_twist(self):
        # [PAPER] over Cl(0,1) the odd unit e1 makes Pi(A) = A_eta
        rng = random.Random(3)
        A = clifford(0, 1)
        w, _ = picard_witness(A, parity_flip(regular_bimodule(A)), rng)
        assert w is not None
        B = complex_clifford(1)
        w2, _ = picard_witness(B, parity_flip(regular_bimodule(B)), rng)
        assert w2 is not None

    def test_non_bimodule_rejected(self):
        from super2vec.superalgebra import AlgebraError
        rng = random.Random(4)
        A, B = clifford(0, 1), clifford(1, 0)
        with pytest.raises(AlgebraError):
            picard_witness(A, regular_bimodule(B), rng)


class TestProjectives:
    def test_semisimple_radical_vanishes(self):
        for A in (clifford(0, 2), ground_field(QQ)):
            assert radical(A) == []

    def test_dual_numbers_radical(self):
        A = dual_numbers(QQ)
        rad = radical(A)
        assert len(rad) == 1

    def test_decompose_ground_field(self):
        rng = random.Random(5)
        dec = decompose_projectives(ground_field(QQ), rng)
        assert len(dec.classes) == 1
        assert dec.classes[0].multiplicity == 1
        assert dec.modules[0].dim == 1

    def test_decompose_matrix_algebra(self):
        # Cl(1,1) = End(k^{1|1}): the two column modules are k^{1|1} and
        # its parity flip, which are distinct up to *even* isomorphism
        # (the intertwiner space e1 A e2 is purely odd)
        rng = random.Random(6)
        dec = decompose_projectives(clifford(1, 1), rng)
        assert sum(m.dim for m in dec.modules) == 4
        assert len(dec.classes) == 2
        assert all(c.multiplicity == 1 for c in dec.classes)
        assert all(
            (c.module.carrier.even_dim, c.module.carrier.odd_dim) == (1, 1)
            for c in dec.classes
        )
        assert dec.witnesses  # non-isomorphism reasons recorded

    def test_decompose_dual_numbers(self):
        rng = random.Random(7)
        dec = decompose_projectives(dual_numbers(QQ), rng)
        assert len(dec.classes) == 1
        assert dec.classes[0].module.dim == 2


class TestSurjectify:
    def test_ground_field_needs_enlargement(self):
        rng = random.Random(8)
        for field in (QQ, QI):
            res = picard_surjectify(ground_field(field), rng)
            # the replacement has both parities, so parity twists become inner
            assert res.algebra.carrier.odd_dim > 0
            assert res.certificate is not None and res.certificate.verify()
            w, _ = picard_witness(
                res.algebra,
                parity_flip(regular_bimodule(res.algebra)),
                rng,
            )
            assert w is not None

    def test_self_witnessing_algebra_kept(self):
        rng = random.Random(9)
        A = clifford(0, 1)
        res = picard_surjectify(A, rng)
        assert res.algebra.table == A.table

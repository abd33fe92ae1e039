"""Bimodules, relative tensor products, and invertibility certificates."""

import random

import pytest

from super2vec.bimodule import (
    BimoduleError,
    Intertwiner,
    certify_invertible,
    dual_module,
    external_tensor,
    hom_twist,
    parity_flip,
    regular_bimodule,
    rel_tensor,
)
from super2vec.clifford import clifford
from super2vec.scalars import QQ
from super2vec.superalgebra import (
    AlgebraHom,
    conjugation_hom,
    dual_numbers,
    graded_tensor,
    parity_hom,
    tensor_index,
)

from conftest import rand_auto, rand_unit
from helpers_tensor import (
    associator,
    coherence_square_holds,
    compositor,
    sign_identity_flip_left,
    sign_identity_flip_right,
)


class TestRelTensor:
    def test_regular_unit_law(self):
        # A (x)_A A = A: the multiplication descends to an isomorphism
        A = clifford(1, 1)
        M = regular_bimodule(A)
        rel = rel_tensor(M, M)
        assert rel.bimodule.dim == A.dim
        cols = [None] * rel.plain_space.dim
        for (i, j), p in rel.pair_index.items():
            cols[p] = A.mul(A.basis_vector(i), A.basis_vector(j))
        from super2vec.linalg import Matrix
        W = Matrix.from_columns(A.field, cols, A.dim)
        T = W * rel.section
        assert T * rel.projection == W
        out = Intertwiner(rel.bimodule, M, T, check=True)
        assert out.is_invertible()

    def test_hom_twist_composition(self):
        rng = random.Random(1)
        for _ in range(10):
            A = clifford(rng.randint(0, 1), rng.randint(0, 1) + 1)
            phi, psi = rand_auto(A, rng), rand_auto(A, rng)
            compositor(A, phi, psi)  # raises on failure

    def test_middle_mismatch_rejected(self):
        A, B = clifford(0, 1), clifford(1, 0)
        with pytest.raises(BimoduleError):
            rel_tensor(regular_bimodule(A), regular_bimodule(B))

    def test_associator(self):
        rng = random.Random(2)
        A = clifford(0, 1)
        for _ in range(5):
            mods = []
            for _ in range(3):
                M = hom_twist(A, rand_auto(A, rng))
                if rng.random() < 0.5:
                    M = parity_flip(M)
                mods.append(M)
            associator(*mods)  # raises on failure


class TestSignIdentities:
    def test_flip_right_and_left(self):
        rng = random.Random(3)
        for _ in range(10):
            A = clifford(rng.randint(0, 1), rng.randint(0, 1) + 1)
            M = hom_twist(A, rand_auto(A, rng))
            N = hom_twist(A, rand_auto(A, rng))
            if rng.random() < 0.5:
                M = parity_flip(M)
            sign_identity_flip_right(M, N)
            sign_identity_flip_left(M, N)

    def test_naive_unsigned_left_flip_fails(self):
        # dropping the (-1)^{|y|} sign breaks the right-action square
        A = clifford(0, 1)
        M = regular_bimodule(A)
        src = rel_tensor(parity_flip(M), M, check=False)
        base = rel_tensor(M, M, check=False)
        target = parity_flip(base.bimodule)
        permM = M.carrier.flip_permutation()
        permQ = base.bimodule.carrier.flip_permutation()
        zero = A.field.zero()
        from super2vec.linalg import Matrix
        cols = [None] * src.plain_space.dim
        for (ip, j), p in src.pair_index.items():
            i = next(a for a, b in permM.items() if b == ip)
            v = base.projection.column(base.pair_index[(i, j)])
            w = [zero] * target.dim
            for r, c in enumerate(v):
                w[permQ[r]] = c
            cols[p] = w
        W = Matrix.from_columns(A.field, cols, target.dim)
        T = W * src.section
        if T * src.projection == W:
            with pytest.raises(BimoduleError):
                Intertwiner(src.bimodule, target, T, check=True)
        # else: the unsigned map does not even descend -- also a failure
        # of the naive identification, which is the point


class TestCoherence:
    def test_compositor_square(self):
        rng = random.Random(4)
        for _ in range(10):
            A = clifford(rng.randint(0, 1), rng.randint(0, 1) + 1)
            phi, psi, tau = (rand_auto(A, rng) for _ in range(3))
            assert coherence_square_holds(A, phi, psi, tau)


class TestInvertibility:
    def test_regular_bimodule_certificate(self):
        rng = random.Random(5)
        for A in (clifford(0, 1), clifford(1, 1), dual_numbers(QQ)):
            cert = certify_invertible(regular_bimodule(A), rng)
            assert cert is not None
            assert cert.verify()

    def test_twisted_certificates(self):
        rng = random.Random(6)
        A = clifford(0, 2)
        for _ in range(5):
            M = hom_twist(A, rand_auto(A, rng))
            if rng.random() < 0.5:
                M = parity_flip(M)
            cert = certify_invertible(M, rng)
            assert cert is not None and cert.verify()

    def test_non_invertible_rejected(self):
        # k[eps] twisted by nothing is fine, but a rank-deficient module
        # over the ground field is not invertible
        from super2vec.bimodule import left_module
        from super2vec.superalgebra import ground_field
        from super2vec.supervect import SuperVectorSpace
        from super2vec.linalg import Matrix
        rng = random.Random(7)
        k = ground_field(QQ)
        V = SuperVectorSpace.make(QQ, ["a", "b"], [])
        M = left_module(k, V, [Matrix.identity(QQ, 2)])
        assert certify_invertible(M, rng) is None

    def test_dual_module_pairing(self):
        rng = random.Random(8)
        A = clifford(0, 1)
        M = hom_twist(A, rand_auto(A, rng))
        L, mats = dual_module(M)
        assert L.dim == M.dim
        del mats


class TestExternalTensor:
    def test_koszul_action_sign(self):
        # (1 (x) b) acts on (m (x) m') with sign (-1)^{|b||m'|}... exercised
        # through the full bimodule axioms of external_tensor(check=True)
        rng = random.Random(9)
        A = clifford(0, 1)
        B = clifford(1, 0)
        M = hom_twist(A, rand_auto(A, rng))
        N = hom_twist(B, parity_hom(B))
        MN, idx, AA, BB = external_tensor(M, N, check=True)
        assert MN.dim == M.dim * N.dim
        assert AA.dim == A.dim * B.dim and BB.dim == A.dim * B.dim
        del idx

"""Exact scalar fields, dense linear algebra, and integer linear algebra."""

import random

import pytest

from super2vec.linalg import Matrix, solve, vec_is_zero
from super2vec.scalars import (
    QI,
    QQ,
    format_scalar,
    parse_fraction,
    parse_scalar,
)
from super2vec.smith import (
    mat_vec_int,
    smith_normal_form,
    solve_integer,
    solve_mod,
)


class TestScalars:
    def test_rational_field_ops(self):
        half = QQ.coerce(1) / QQ.from_int(2)
        third = QQ.from_int(1) / QQ.from_int(3)
        assert half + third == QQ.from_int(5) / QQ.from_int(6)
        assert half * QQ.from_int(2) == QQ.one()
        assert QQ.zero() == QQ.from_int(0)
        assert not QQ.is_complex and QI.is_complex

    def test_gaussian_field_ops(self):
        i = QI.i()
        assert i * i == QI.from_int(-1)
        assert (QI.one() + i) * (QI.one() - i) == QI.from_int(2)
        # division through conjugation
        assert (QI.one() / (QI.one() + i)) * (QI.one() + i) == QI.one()

    @pytest.mark.parametrize("text", ["0", "1", "-3", "7/2", "-22/7"])
    def test_fraction_round_trip(self, text):
        assert format_scalar(parse_fraction(text)) == text

    def test_gaussian_round_trip(self):
        v = parse_scalar(["1/2", "-3"], QI)
        assert format_scalar(v) == ["1/2", "-3"]
        assert parse_scalar("5/3", QQ) == QQ.from_int(5) / QQ.from_int(3)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_fraction("1/0")
        with pytest.raises(ValueError):
            parse_scalar("x", QQ)


class TestMatrix:
    def test_inverse_identity_property(self):
        rng = random.Random(11)
        for _ in range(25):
            n = rng.randint(1, 5)
            while True:
                M = Matrix(QQ, [[QQ.from_int(rng.randint(-4, 4))
                                 for _ in range(n)] for _ in range(n)])
                if M.rank() == n:
                    break
            inv = M.inverse()
            assert M * inv == Matrix.identity(QQ, n)
            assert inv * M == Matrix.identity(QQ, n)

    def test_solve_and_kernel(self):
        # [DERIVED] oracle: x + y = 3, x - y = 1  =>  (2, 1)
        A = Matrix(QQ, [[1, 1], [1, -1]])
        sol = solve(A, [QQ.from_int(3), QQ.from_int(1)])
        assert sol is not None
        assert sol.particular == [QQ.from_int(2), QQ.from_int(1)]
        # singular system with kernel
        B = Matrix(QQ, [[1, 1], [2, 2]])
        sol = solve(B, [QQ.from_int(1), QQ.from_int(2)])
        assert sol is not None and len(sol.kernel) == 1
        assert solve(B, [QQ.from_int(1), QQ.from_int(3)]) is None

    def test_from_columns_transpose(self):
        cols = [[QQ.from_int(1), QQ.from_int(2)],
                [QQ.from_int(3), QQ.from_int(4)]]
        M = Matrix.from_columns(QQ, cols, 2)
        assert M.column(0) == cols[0]
        assert M.transpose().rows[0] == cols[0]

    def test_vec_is_zero(self):
        assert vec_is_zero([QQ.zero(), QQ.zero()])
        assert not vec_is_zero([QQ.zero(), QQ.one()])


class TestIntegerLinearAlgebra:
    def test_smith_diagonal_divisibility(self):
        rng = random.Random(7)
        for _ in range(20):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            A = [[rng.randint(-6, 6) for _ in range(m)] for _ in range(n)]
            diag, _U, _V = smith_normal_form(A)
            nz = [d for d in diag if d]
            for a, b in zip(nz, nz[1:]):
                assert b % a == 0

    def test_solve_integer_oracle(self):
        # [DERIVED] 2x = 4 has integer solution; 2x = 3 does not
        assert solve_integer([[2]], [4]) is not None
        assert solve_integer([[2]], [3]) is None
        res = solve_integer([[1, 2], [0, 2]], [3, 2])
        assert res is not None
        x, _kernel = res
        assert mat_vec_int([[1, 2], [0, 2]], x) == [3, 2]

    def test_solve_mod_oracle(self):
        # [DERIVED] 2x = 1 is unsolvable mod 4 but solvable mod 3 (x = 2)
        assert solve_mod([[2]], [1], 4) is None
        x = solve_mod([[2]], [1], 3)
        assert x is not None and (2 * x[0]) % 3 == 1

    def test_solve_mod_random_consistency(self):
        rng = random.Random(3)
        for _ in range(30):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            A = [[rng.randint(-5, 5) for _ in range(m)] for _ in range(n)]
            x0 = [rng.randint(0, 7) for _ in range(m)]
            mod = rng.choice([2, 3, 4, 8])
            b = [v % mod for v in mat_vec_int(A, x0)]
            x = solve_mod(A, b, mod)
            assert x is not None
            assert [v % mod for v in mat_vec_int(A, x)] == b

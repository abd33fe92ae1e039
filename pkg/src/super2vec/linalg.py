"""Dense exact linear algebra over Q and Q(i).

Matrices are lists of row lists of scalars.  All reductions go through the
kernel backend (compiled when available).  The solver refuses systems with
more than SOLVER_COLUMN_CAP columns: everything the library plans to compute
fits under the cap, and anything past it would silently take hours.
"""

from __future__ import annotations

from .backend import mat_mul, rref, rref_with_transform
from .scalars import QQ, Field

SOLVER_COLUMN_CAP = 4096


class SolverCapError(ValueError):
    pass


def _check_cap(ncols):
    if ncols > SOLVER_COLUMN_CAP:
        raise SolverCapError(
            f"system has {ncols} columns, over the {SOLVER_COLUMN_CAP}-column solver cap"
        )


class Matrix:
    """A dense matrix over an exact field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows, ncols=None):
        self.field = field
        self.rows = [[field.coerce(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            for row in self.rows:
                assert len(row) == self.ncols, "ragged matrix"
        else:
            assert ncols is not None, "empty matrix needs an explicit column count"
            self.ncols = ncols

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field, nrows, ncols):
        zero = field.zero()
        return cls(field, [[zero] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, field, cols, nrows=None):
        if not cols:
            assert nrows is not None
            return cls(field, [[] for _ in range(nrows)], ncols=0)
        n = len(cols[0])
        return cls(field, [[col[r] for col in cols] for r in range(n)])

    def copy_rows(self):
        return [row[:] for row in self.rows]

    def column(self, c):
        return [row[c] for row in self.rows]

    def columns(self):
        return [self.column(c) for c in range(self.ncols)]

    def transpose(self):
        return Matrix(self.field, [self.column(c) for c in range(self.ncols)], ncols=self.nrows)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            assert self.ncols == other.nrows, "shape mismatch in matrix product"
            return Matrix(
                self.field,
                mat_mul(self.rows, other.rows, other.ncols, self.field.zero()),
                ncols=other.ncols,
            )
        return NotImplemented

    def __add__(self, other):
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(
            self.field,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def __sub__(self, other):
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(
            self.field,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def __neg__(self):
        return Matrix(self.field, [[-a for a in row] for row in self.rows], ncols=self.ncols)

    def scale(self, c):
        c = self.field.coerce(c)
        return Matrix(self.field, [[c * a for a in row] for row in self.rows], ncols=self.ncols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ncols, tuple(tuple(r) for r in self.rows)))

    def apply(self, vec):
        """Matrix times column vector (vec given as a flat list)."""
        assert len(vec) == self.ncols
        zero = self.field.zero()
        out = []
        for row in self.rows:
            s = zero
            for a, x in zip(row, vec):
                if a and x:
                    s = s + a * x
            out.append(s)
        return out

    def is_zero(self):
        return all(not x for row in self.rows for x in row)

    def rref(self):
        """(echelon_rows, pivot_cols) of a working copy; self is untouched."""
        return rref(self.copy_rows(), self.ncols)

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel, as flat vectors of length ncols."""
        _check_cap(self.ncols)
        ech, pivots = self.rref()
        pivset = set(pivots)
        zero, one = self.field.zero(), self.field.one()
        basis = []
        for free in range(self.ncols):
            if free in pivset:
                continue
            v = [zero] * self.ncols
            v[free] = one
            for r, pc in enumerate(pivots):
                v[pc] = -ech[r][free]
            basis.append(v)
        return basis

    def row_space(self):
        """Echelon basis of the row space."""
        return self.rref()[0]

    def inverse(self):
        assert self.nrows == self.ncols, "inverse of a non-square matrix"
        n = self.nrows
        rows = self.copy_rows()
        trans = Matrix.identity(self.field, n).rows
        _, pivots = rref_with_transform(rows, n, trans)
        if len(pivots) != n:
            return None
        return Matrix(self.field, trans, ncols=n)

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def __repr__(self):
        return f"Matrix({self.field.tag}, {self.nrows}x{self.ncols})"


class AffineSolution:
    """Solution set of a linear system: particular + span(kernel basis)."""

    __slots__ = ("particular", "kernel")

    def __init__(self, particular, kernel):
        self.particular = particular
        self.kernel = kernel

    @property
    def is_unique(self):
        return not self.kernel


def solve(A: Matrix, b):
    """Solve A x = b.  Returns an AffineSolution, or None if inconsistent."""
    _check_cap(A.ncols)
    assert len(b) == A.nrows
    field = A.field
    aug = [row + [field.coerce(x)] for row, x in zip(A.rows, b)]
    ech, pivots = rref(aug, A.ncols + 1)
    if pivots and pivots[-1] == A.ncols:
        return None
    zero = field.zero()
    x = [zero] * A.ncols
    for r, pc in enumerate(pivots):
        x[pc] = ech[r][A.ncols]
    kernel = Matrix(field, [row[: A.ncols] for row in ech], ncols=A.ncols).kernel_basis()
    return AffineSolution(x, kernel)


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]

def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]

def vec_scale(c, v):
    return [c * a for a in v]

def vec_is_zero(v):
    return all(not a for a in v)


class RowSpace:
    """Incrementally built echelon basis of a span; supports membership and
    coordinates against the original spanning vectors."""

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rows = []      # echelon rows, pivot normalized to 1
        self.pivots = []    # pivot column per row, strictly increasing overall order kept

    def reduce(self, vec):
        """Reduce vec against the current echelon rows (returns the residual)."""
        v = vec[:]
        for row, pc in zip(self.rows, self.pivots):
            f = v[pc]
            if f:
                for c in range(self.ncols):
                    if row[c]:
                        v[c] = v[c] - f * row[c]
        return v

    def insert(self, vec):
        """Insert vec into the span.  Returns True if it was independent."""
        v = self.reduce(vec)
        for c in range(self.ncols):
            if v[c]:
                inv = 1 / v[c]
                v = [x * inv if x else x for x in v]
                # keep full reduction: clear this column from existing rows
                for i, row in enumerate(self.rows):
                    f = row[c]
                    if f:
                        self.rows[i] = [a - f * b for a, b in zip(row, v)]
                self.rows.append(v)
                self.pivots.append(c)
                return True
        return False

    def contains(self, vec):
        return vec_is_zero(self.reduce(vec))

    @property
    def dim(self):
        return len(self.rows)

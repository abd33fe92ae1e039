"""Finite-dimensional super algebras over Q / Q(i).

An algebra is a super vector space plus a structure-constant table
table[i][j] = {k: c} meaning e_i * e_j = sum c * e_k.  The table is stored
sparsely; most algebras in the corpus (Clifford algebras and their tensor
products) are monomial, i.e. every basis product is a scalar multiple of a
single basis element, and several decision procedures exploit that.
"""

from __future__ import annotations

import itertools

from .linalg import Matrix, RowSpace, solve
from .supervect import GradedMap, SuperVectorSpace, tensor_space


class AlgebraError(ValueError):
    pass


class SuperAlgebra:
    __slots__ = ("carrier", "table", "unit", "_monomial")

    def __init__(self, carrier: SuperVectorSpace, table, unit, check=True, coerced=False):
        self.carrier = carrier
        n = carrier.dim
        field = carrier.field
        if coerced:
            # internal fast path: table already list-of-list-of-dict with
            # coerced nonzero scalars
            self.table = table
            self.unit = unit
            self._monomial = None
            if check:
                err = self.validate()
                if err:
                    raise AlgebraError(err)
            return
        # normalize the table to list-of-list-of-dict with coerced scalars
        norm = []
        for i in range(n):
            row = []
            for j in range(n):
                cell = table[i][j]
                d = {}
                if isinstance(cell, dict):
                    items = cell.items()
                else:  # dense vector
                    items = enumerate(cell)
                for k, c in items:
                    c = field.coerce(c)
                    if c:
                        d[k] = c
                row.append(d)
            norm.append(row)
        self.table = norm
        self.unit = [field.coerce(x) for x in unit]
        self._monomial = None
        if check:
            err = self.validate()
            if err:
                raise AlgebraError(err)

    # -- basic structure ---------------------------------------------------

    @property
    def field(self):
        return self.carrier.field

    @property
    def dim(self):
        return self.carrier.dim

    def parity(self, i):
        return self.carrier.parity(i)

    def zero(self):
        return self.carrier.zero_vector()

    def basis_vector(self, i):
        return self.carrier.basis_vector(i)

    def is_monomial(self):
        if self._monomial is None:
            self._monomial = all(
                len(cell) <= 1 for row in self.table for cell in row
            )
        return self._monomial

    def mul(self, x, y):
        """Product of two coefficient vectors."""
        z = self.carrier.zero_vector()
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                f = xi * yj
                for k, c in row[j].items():
                    z[k] = z[k] + f * c
        return z

    def mul_sparse(self, xd, yd):
        """Product of two sparse {index: coeff} vectors."""
        z = {}
        for i, xi in xd.items():
            row = self.table[i]
            for j, yj in yd.items():
                f = xi * yj
                for k, c in row[j].items():
                    v = z.get(k)
                    v = f * c if v is None else v + f * c
                    if v:
                        z[k] = v
                    elif k in z:
                        del z[k]
        return z

    def left_mult_matrix(self, x):
        """Matrix of y -> x*y."""
        n = self.dim
        zero = self.field.zero()
        cols = []
        for j in range(n):
            col = [zero] * n
            for i, xi in enumerate(x):
                if xi:
                    for k, c in self.table[i][j].items():
                        col[k] = col[k] + xi * c
            cols.append(col)
        return Matrix.from_columns(self.field, cols, nrows=n)

    def right_mult_matrix(self, x):
        """Matrix of y -> y*x."""
        n = self.dim
        zero = self.field.zero()
        cols = []
        for j in range(n):
            col = [zero] * n
            for i, xi in enumerate(x):
                if xi:
                    for k, c in self.table[j][i].items():
                        col[k] = col[k] + xi * c
            cols.append(col)
        return Matrix.from_columns(self.field, cols, nrows=n)

    def find_inverse(self, x):
        """Two-sided inverse of the element x, or None."""
        L = self.left_mult_matrix(x)
        sol = solve(L, self.unit)
        if sol is None:
            return None
        inv = sol.particular
        # left-invertible implies two-sided in a f.d. algebra, but check anyway
        if self.mul(inv, x) != self.unit:
            return None
        return inv

    def element_parity(self, v):
        return self.carrier.vector_parity(v)

    def validate(self):
        """Check parity additivity, unit, associativity.  Returns an error
        string naming the failing basis tuple, or None if all pass."""
        n = self.dim
        par = self.carrier.parities()
        for i in range(n):
            for j in range(n):
                for k, c in self.table[i][j].items():
                    if c and par[k] != (par[i] + par[j]) % 2:
                        return (
                            f"parity violation: e{i}*e{j} has component e{k} "
                            f"of parity {par[k]}, expected {(par[i]+par[j])%2}"
                        )
        for j in range(n):
            ej = self.basis_vector(j)
            if self.mul(self.unit, ej) != ej:
                return f"unit fails on the left at basis element {j}"
            if self.mul(ej, self.unit) != ej:
                return f"unit fails on the right at basis element {j}"
        basis = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                eij = self.mul(basis[i], basis[j])
                for k in range(n):
                    lhs = self.mul(eij, basis[k])
                    rhs = self.mul(basis[i], self.mul(basis[j], basis[k]))
                    if lhs != rhs:
                        return f"associativity fails on basis triple ({i},{j},{k})"
        return None

    def __repr__(self):
        return (
            f"SuperAlgebra(dim {self.carrier.even_dim}|{self.carrier.odd_dim} "
            f"over {self.field.tag})"
        )


def make_algebra(carrier, constants, unit):
    """Validated constructor; raises AlgebraError naming the failing triple."""
    return SuperAlgebra(carrier, constants, unit, check=True)


def ground_field(field):
    carrier = SuperVectorSpace.make(field, ["1"], [])
    return SuperAlgebra(carrier, [[{0: 1}]], [field.one()], check=False)


def dual_numbers(field, odd=True):
    """k[eps] with eps^2 = 0; eps odd by default."""
    if odd:
        carrier = SuperVectorSpace.make(field, ["1"], ["eps"])
    else:
        carrier = SuperVectorSpace.make(field, ["1", "eps"], [])
    table = [[{0: 1}, {1: 1}], [{1: 1}, {}]]
    return SuperAlgebra(carrier, table, [field.one(), field.zero()], check=False)


def end_algebra(space: SuperVectorSpace):
    """End(V) as a super algebra; basis E[r,c]: v_c -> v_r, composition product."""
    n = space.dim
    pairs = [(r, c) for r in range(n) for c in range(n)]
    pairs.sort(key=lambda rc: ((space.parity(rc[0]) + space.parity(rc[1])) % 2, rc))
    idx = {rc: t for t, rc in enumerate(pairs)}
    labels = [
        (f"E[{r},{c}]", (space.parity(r) + space.parity(c)) % 2) for r, c in pairs
    ]
    carrier = SuperVectorSpace(space.field, labels)
    one = space.field.one()
    table = [[{} for _ in pairs] for _ in pairs]
    for t1, (r1, c1) in enumerate(pairs):
        for t2, (r2, c2) in enumerate(pairs):
            if c1 == r2:  # E[r1,c1] o E[r2,c2] = E[r1,c2]
                table[t1][t2] = {idx[(r1, c2)]: one}
    unit = carrier.zero_vector()
    for r in range(n):
        unit[idx[(r, r)]] = one
    alg = SuperAlgebra(carrier, table, unit, check=False)
    return alg, idx


def direct_sum(A: SuperAlgebra, B: SuperAlgebra):
    """A + B with componentwise product; returns (algebra, incl_A, incl_B)
    where the inclusions are index maps old->new."""
    assert A.field == B.field
    entries = [("A", i) for i in range(A.dim)] + [("B", i) for i in range(B.dim)]
    entries.sort(key=lambda e: ((A if e[0] == "A" else B).parity(e[1]), e[0]))
    idx = {e: t for t, e in enumerate(entries)}
    labels = []
    for tag, i in entries:
        alg = A if tag == "A" else B
        labels.append((f"{tag}.{alg.carrier.labels[i][0]}", alg.parity(i)))
    carrier = SuperVectorSpace(A.field, labels)
    n = carrier.dim
    table = [[{} for _ in range(n)] for _ in range(n)]
    for tag, alg in (("A", A), ("B", B)):
        for i in range(alg.dim):
            for j in range(alg.dim):
                cell = {idx[(tag, k)]: c for k, c in alg.table[i][j].items()}
                table[idx[(tag, i)]][idx[(tag, j)]] = cell
    unit = carrier.zero_vector()
    for i, x in enumerate(A.unit):
        unit[idx[("A", i)]] = unit[idx[("A", i)]] + x
    for i, x in enumerate(B.unit):
        unit[idx[("B", i)]] = unit[idx[("B", i)]] + x
    incl_A = {i: idx[("A", i)] for i in range(A.dim)}
    incl_B = {i: idx[("B", i)] for i in range(B.dim)}
    return SuperAlgebra(carrier, table, unit, check=False), incl_A, incl_B


class _LazyTensorRow:
    __slots__ = ("table", "i")

    def __init__(self, table, i):
        self.table = table
        self.i = i

    def __getitem__(self, j):
        return self.table.cell(self.i, j)


class _LazyTensorTable:
    """Structure constants of a graded tensor product, computed on demand.

    Avoids materializing the n^2 cell dictionaries for large products; only
    indexed access (table[i][j]) is supported, which is all the sparse
    decision procedures use."""

    __slots__ = ("A", "B", "idx", "rev")

    def __init__(self, A, B, idx, rev):
        self.A = A
        self.B = B
        self.idx = idx
        self.rev = rev

    def cell(self, t1, t2):
        i1, j1 = self.rev[t1]
        i2, j2 = self.rev[t2]
        sign = -1 if (self.B.parity(j1) and self.A.parity(i2)) else 1
        idx = self.idx
        cell = {}
        for k, c1 in self.A.table[i1][i2].items():
            for l, c2 in self.B.table[j1][j2].items():
                v = sign * c1 * c2
                if v:
                    cell[idx[(k, l)]] = v
        return cell

    def __getitem__(self, i):
        return _LazyTensorRow(self, i)


LAZY_TENSOR_THRESHOLD = 2048


def graded_tensor(A: SuperAlgebra, B: SuperAlgebra):
    """Graded tensor product: (a@b)(a'@b') = (-1)^{|b||a'|} aa' @ bb'."""
    if A.field != B.field:
        raise AlgebraError("graded_tensor: scalar fields differ")
    carrier, idx = tensor_space(A.carrier, B.carrier, sep="@")
    n = carrier.dim
    if n > LAZY_TENSOR_THRESHOLD:
        rev = {t: ij for ij, t in idx.items()}
        unit = carrier.zero_vector()
        for i, xa in enumerate(A.unit):
            if not xa:
                continue
            for j, xb in enumerate(B.unit):
                if xb:
                    unit[idx[(i, j)]] = xa * xb
        return SuperAlgebra(
            carrier, _LazyTensorTable(A, B, idx, rev), unit, check=False, coerced=True
        )
    rev = {t: ij for ij, t in idx.items()}
    table = [[{} for _ in range(n)] for _ in range(n)]
    for t1 in range(n):
        i1, j1 = rev[t1]
        for t2 in range(n):
            i2, j2 = rev[t2]
            sign = -1 if (B.parity(j1) and A.parity(i2)) else 1
            cell = {}
            for k, c1 in A.table[i1][i2].items():
                for l, c2 in B.table[j1][j2].items():
                    v = sign * c1 * c2
                    if v:
                        cell[idx[(k, l)]] = v
            table[t1][t2] = cell
    unit = carrier.zero_vector()
    for i, xa in enumerate(A.unit):
        if not xa:
            continue
        for j, xb in enumerate(B.unit):
            if xb:
                unit[idx[(i, j)]] = xa * xb
    return SuperAlgebra(carrier, table, unit, check=False, coerced=True)


def tensor_index(A, B):
    """The basis-pair index map used by graded_tensor / tensor_space."""
    _, idx = tensor_space(A.carrier, B.carrier, sep="@")
    return idx


def graded_opposite(A: SuperAlgebra):
    """a *op* b = (-1)^{|a||b|} b*a; same carrier."""
    n = A.dim
    table = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sign = -1 if (A.parity(i) and A.parity(j)) else 1
            table[i][j] = {k: sign * c for k, c in A.table[j][i].items()}
    return SuperAlgebra(A.carrier, table, A.unit, check=False)


def even_center(A: SuperAlgebra):
    """Basis of {z in A_0 : z a = a z for all a}."""
    ne = A.carrier.even_dim
    n = A.dim
    field = A.field
    zero = field.zero()
    rows = []
    for j in range(n):
        # equation rows: for unknown z = sum_t z_t e_t (t even):
        # (z e_j - e_j z)_k = sum_t z_t (c_{tj}^k - c_{jt}^k)
        block = [[zero] * ne for _ in range(n)]
        for t in range(ne):
            for k, c in A.table[t][j].items():
                block[k][t] = block[k][t] + c
            for k, c in A.table[j][t].items():
                block[k][t] = block[k][t] - c
        rows.extend(block)
    M = Matrix(field, rows, ncols=ne)
    basis = []
    for kv in M.kernel_basis():
        v = A.zero()
        for t in range(ne):
            v[t] = kv[t]
        basis.append(v)
    return basis


def _enveloping_columns(A: SuperAlgebra):
    """Columns of the map A (x) A^op -> End(A), a(x)b: x -> (-1)^{|b||x|} a x b.

    Yields ((i, j), sparse_column) where the column is indexed by flattened
    (r, s): coefficient of e_s in the image of e_r."""
    n = A.dim
    for i in range(n):
        for j in range(n):
            col = {}
            for r in range(n):
                sign = -1 if (A.parity(j) and A.parity(r)) else 1
                # e_i * e_r * e_j
                for k, c1 in A.table[i][r].items():
                    for s, c2 in A.table[k][j].items():
                        key = r * n + s
                        v = col.get(key)
                        add = sign * c1 * c2
                        v = add if v is None else v + add
                        if v:
                            col[key] = v
                        elif key in col:
                            del col[key]
            yield (i, j), col


class SparseEchelon:
    """Incremental echelon form on sparse {col: coeff} rows, with optional
    augmentation tails used to pull back kernel combinations."""

    def __init__(self):
        self.rows = {}  # pivot col -> (row dict, tail dict)

    def insert(self, row, tail=None):
        """Reduce row (mutated) against the echelon; if nonzero, install it
        and return None; if zero, return the reduced tail (kernel combo)."""
        if tail is None:
            tail = {}
        while row:
            p = min(row)
            if p not in self.rows:
                inv = 1 / row[p]
                row = {c: v * inv for c, v in row.items()}
                tail = {c: v * inv for c, v in tail.items()}
                self.rows[p] = (row, tail)
                return None
            erow, etail = self.rows[p]
            f = row[p]
            for c, v in erow.items():
                w = row.get(c)
                w = -f * v if w is None else w - f * v
                if w:
                    row[c] = w
                elif c in row:
                    del row[c]
            for c, v in etail.items():
                w = tail.get(c)
                w = -f * v if w is None else w - f * v
                if w:
                    tail[c] = w
                elif c in tail:
                    del tail[c]
        return tail

    @property
    def rank(self):
        return len(self.rows)


def is_central_simple(A: SuperAlgebra):
    """Decide central simplicity via bijectivity of the enveloping map.

    Returns (True, None) or (False, witness) where witness is a nonzero
    kernel vector of the enveloping map, as a dim x dim coefficient matrix
    over basis pairs (i, j) of A (x) A^op.
    """
    n = A.dim
    if n * n > 4096:
        raise AlgebraError(
            f"is_central_simple: dim {n} puts the enveloping map over the solver cap"
        )
    ech = SparseEchelon()
    for (i, j), col in _enveloping_columns(A):
        combo = ech.insert(col, {(i, j): A.field.one()})
        if combo is not None:
            witness = [[A.field.zero()] * n for _ in range(n)]
            for (ii, jj), c in combo.items():
                witness[ii][jj] = c
            return False, witness
    return True, None


def derivation_space(A: SuperAlgebra):
    """Even derivations D(ab) = D(a)b + aD(b), as a list of matrices, plus
    the list of unknown coordinate positions (r, c)."""
    n = A.dim
    par = A.carrier.parities()
    unknowns = [(r, c) for r in range(n) for c in range(n) if par[r] == par[c]]
    pos = {rc: t for t, rc in enumerate(unknowns)}
    zero = A.field.zero()
    rows = []
    basis = [A.basis_vector(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            prod = A.mul(basis[i], basis[j])
            block = [[zero] * len(unknowns) for _ in range(n)]
            # D(e_i e_j)_s = sum_k prod_k D[s][k]
            for k, c in enumerate(prod):
                if c:
                    for s in range(n):
                        if (s, k) in pos:
                            block[s][pos[(s, k)]] = block[s][pos[(s, k)]] + c
            # -(D(e_i) e_j)_s = -sum_r D[r][i] (e_r e_j)_s
            for r in range(n):
                if (r, i) in pos:
                    for s, c in A.table[r][j].items():
                        block[s][pos[(r, i)]] = block[s][pos[(r, i)]] - c
            # -(e_i D(e_j))_s with no Koszul sign: D is even
            for r in range(n):
                if (r, j) in pos:
                    for s, c in A.table[i][r].items():
                        block[s][pos[(r, j)]] = block[s][pos[(r, j)]] - c
            rows.extend(block)
    M = Matrix(A.field, rows, ncols=len(unknowns))
    return M.kernel_basis(), unknowns


def hh1(A: SuperAlgebra):
    """dim Der(A)/InnDer(A) plus outer-derivation representatives (as even
    GradedMaps A -> A)."""
    ders, unknowns = derivation_space(A)
    n = A.dim
    ne = A.carrier.even_dim
    inner = RowSpace(A.field, len(unknowns))
    basis = [A.basis_vector(i) for i in range(n)]
    pos = {rc: t for t, rc in enumerate(unknowns)}
    for t in range(ne):
        vec = [A.field.zero()] * len(unknowns)
        for c in range(n):
            col = [x - y for x, y in zip(A.mul(basis[t], basis[c]), A.mul(basis[c], basis[t]))]
            for r, v in enumerate(col):
                if v:
                    vec[pos[(r, c)]] = v
        inner.insert(vec)
    reps = []
    outer = RowSpace(A.field, len(unknowns))
    for d in ders:
        resid = inner.reduce(d)
        if outer.insert(resid):
            mat = [[A.field.zero()] * n for _ in range(n)]
            for t, (r, c) in enumerate(unknowns):
                mat[r][c] = d[t]
            reps.append(GradedMap(A.carrier, A.carrier, mat, 0, check=False))
    return len(reps), reps


class UnitElement:
    """A homogeneous invertible element with a stored inverse."""

    __slots__ = ("algebra", "vector", "parity", "inverse")

    def __init__(self, algebra, vector, parity, inverse):
        self.algebra = algebra
        self.vector = vector
        self.parity = parity
        self.inverse = inverse

    @classmethod
    def from_vector(cls, algebra, vector):
        """Build a UnitElement, or return None if not homogeneous/invertible."""
        vector = [algebra.field.coerce(x) for x in vector]
        p = algebra.element_parity(vector)
        if p is None:
            return None
        inv = algebra.find_inverse(vector)
        if inv is None:
            return None
        return cls(algebra, vector, p, inv)

    def mul(self, other):
        assert self.algebra is other.algebra
        return UnitElement(
            self.algebra,
            self.algebra.mul(self.vector, other.vector),
            (self.parity + other.parity) % 2,
            self.algebra.mul(other.inverse, self.inverse),
        )

    def invert(self):
        return UnitElement(self.algebra, self.inverse, self.parity, self.vector)

    def __eq__(self, other):
        return isinstance(other, UnitElement) and self.vector == other.vector

    def __hash__(self):
        return hash(tuple(self.vector))

    def __repr__(self):
        return f"UnitElement({self.vector}, parity {self.parity})"


class AlgebraHom:
    """A unital homomorphism of super algebras, stored as an even map."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source, target, gmap, check=True):
        if isinstance(gmap, (list, Matrix)):
            gmap = GradedMap(source.carrier, target.carrier, gmap, 0, check=check)
        assert gmap.parity == 0, "algebra homomorphisms are even"
        self.source = source
        self.target = target
        self.map = gmap
        if check:
            err = self.validate()
            if err:
                raise AlgebraError(err)

    def validate(self):
        if self.map(self.source.unit) != self.target.unit:
            return "homomorphism does not preserve the unit"
        n = self.source.dim
        imgs = [self.map(self.source.basis_vector(i)) for i in range(n)]
        for i in range(n):
            for j in range(n):
                lhs = self.map(self.source.mul(self.source.basis_vector(i), self.source.basis_vector(j)))
                rhs = self.target.mul(imgs[i], imgs[j])
                if lhs != rhs:
                    return f"multiplicativity fails on basis pair ({i},{j})"
        return None

    def __call__(self, vec):
        return self.map(vec)

    @classmethod
    def identity(cls, A):
        return cls(A, A, GradedMap.identity(A.carrier), check=False)

    def compose(self, other):
        """self after other."""
        return AlgebraHom(other.source, self.target, self.map.compose(other.map), check=False)

    def inverse(self):
        inv = self.map.inverse()
        if inv is None:
            return None
        return AlgebraHom(self.target, self.source, inv, check=False)

    def is_automorphism(self):
        return self.source is self.target and self.map.is_invertible()

    def __eq__(self, other):
        return isinstance(other, AlgebraHom) and self.map.matrix == other.map.matrix

    def __hash__(self):
        return hash(self.map.matrix)

    def __repr__(self):
        return f"AlgebraHom({self.source!r} -> {self.target!r})"


def conjugation_hom(A, u: UnitElement):
    """i(u): x -> u x u^{-1} (even for homogeneous u)."""
    mat = A.left_mult_matrix(u.vector) * A.right_mult_matrix(u.inverse)
    return AlgebraHom(A, A, mat, check=False)


def parity_hom(A):
    """The parity automorphism eta: +1 on A_0, -1 on A_1."""
    n = A.dim
    one, zero = A.field.one(), A.field.zero()
    mat = [
        [(-one if A.parity(i) else one) if i == j else zero for j in range(n)]
        for i in range(n)
    ]
    return AlgebraHom(A, A, mat, check=False)


def tensor_hom(AB, A, B, phi: AlgebraHom, psi: AlgebraHom):
    """phi (x) psi on the graded tensor algebra AB = A (x) B (both even)."""
    idx = tensor_index(A, B)
    n = AB.dim
    zero = AB.field.zero()
    cols = [None] * n
    for (i, j), t in idx.items():
        a = phi(A.basis_vector(i))
        b = psi(B.basis_vector(j))
        col = [zero] * n
        for k, xa in enumerate(a):
            if not xa:
                continue
            for l, xb in enumerate(b):
                if xb:
                    col[idx[(k, l)]] = xa * xb
        cols[t] = col
    return AlgebraHom(AB, AB, Matrix.from_columns(AB.field, cols, nrows=n), check=False)


# -- invertible-element search --------------------------------------------

GRID_LIMIT = 5          # full {-1,0,1} grid up to 3^5 combinations
RANDOM_SAMPLES = 64


def search_in_span(field, span, predicate, rng):
    """Search the span of a list of vectors for one passing predicate.

    Deterministic +-1/0 grid over the first GRID_LIMIT basis vectors, then
    RANDOM_SAMPLES random small-rational combinations.  Returns
    (result, status) with status in {"found", "zero-space", "exhausted"}.
    """
    if not span:
        return None, "zero-space"
    n = len(span[0])
    zero = field.zero()

    def combo(coeffs, vecs):
        v = [zero] * n
        for c, b in zip(coeffs, vecs):
            if c:
                cc = field.from_int(c) if isinstance(c, int) else c
                for t in range(n):
                    if b[t]:
                        v[t] = v[t] + cc * b[t]
        return v

    head = span[:GRID_LIMIT]
    for coeffs in itertools.product((1, -1, 0), repeat=len(head)):
        if not any(coeffs):
            continue
        res = predicate(combo(coeffs, head))
        if res is not None:
            return res, "found"
    for _ in range(RANDOM_SAMPLES):
        coeffs = [field.from_int(rng.randint(-9, 9)) for _ in span]
        res = predicate(combo(coeffs, span))
        if res is not None:
            return res, "found"
    return None, "exhausted"


def inner_witness(A, phi: AlgebraHom, rng):
    """Even unit b with phi(x) b = b x for all x, if one exists.

    Returns (UnitElement or None, status); status "zero-space" is the
    deterministic negative, "exhausted" the probabilistic one.
    """
    if not phi.is_automorphism():
        raise AlgebraError("inner_witness: map is not an automorphism")
    n = A.dim
    ne = A.carrier.even_dim
    zero = A.field.zero()
    # unknowns: even coordinates of b; equations: phi(e_j) b - b e_j = 0
    rows = []
    for j in range(n):
        img = phi(A.basis_vector(j))
        block = [[zero] * ne for _ in range(n)]
        for t in range(ne):
            for i, c in enumerate(img):
                if c:
                    for k, d in A.table[i][t].items():
                        block[k][t] = block[k][t] + c * d
            for k, d in A.table[t][j].items():
                block[k][t] = block[k][t] - d
        rows.extend(block)
    M = Matrix(A.field, rows, ncols=ne)
    sol_basis = M.kernel_basis()
    padded = []
    for kv in sol_basis:
        v = A.zero()
        for t in range(ne):
            v[t] = kv[t]
        padded.append(v)

    def predicate(v):
        return UnitElement.from_vector(A, v)

    return search_in_span(A.field, padded, predicate, rng)

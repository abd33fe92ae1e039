"""Super bimodules, twists, tensor products, intertwiners, invertibility.

A bimodule M over (A, B) is stored by its carrier space plus one dense
matrix per basis element of A (left action) and of B (right action).
Left and right actions commute literally (no Koszul sign); all signs in
this business live in parity_flip, external_tensor and the Lemma-2.2-style
canonical maps, exactly where the formulas put them.
"""

from __future__ import annotations

from .linalg import Matrix, RowSpace
from .supervect import GradedMap, SuperVectorSpace, tensor_space
from .superalgebra import AlgebraHom, SuperAlgebra, ground_field, search_in_span


class BimoduleError(ValueError):
    pass


class SuperBimodule:
    __slots__ = ("left_alg", "right_alg", "carrier", "left_action", "right_action")

    def __init__(self, left_alg, right_alg, carrier, left_action, right_action, check=True):
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.carrier = carrier
        self.left_action = [
            m if isinstance(m, Matrix) else Matrix(carrier.field, m, ncols=carrier.dim)
            for m in left_action
        ]
        self.right_action = [
            m if isinstance(m, Matrix) else Matrix(carrier.field, m, ncols=carrier.dim)
            for m in right_action
        ]
        assert len(self.left_action) == left_alg.dim
        assert len(self.right_action) == right_alg.dim
        if check:
            err = self.validate()
            if err:
                raise BimoduleError(err)

    @property
    def field(self):
        return self.carrier.field

    @property
    def dim(self):
        return self.carrier.dim

    def left_matrix(self, avec):
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(avec):
            if c:
                out = out + self.left_action[i].scale(c)
        return out

    def right_matrix(self, bvec):
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(bvec):
            if c:
                out = out + self.right_action[i].scale(c)
        return out

    def act_left(self, avec, m):
        zero = self.field.zero()
        out = [zero] * self.dim
        for i, c in enumerate(avec):
            if c:
                col = self.left_action[i].apply(m)
                out = [x + c * y for x, y in zip(out, col)]
        return out

    def act_right(self, m, bvec):
        zero = self.field.zero()
        out = [zero] * self.dim
        for i, c in enumerate(bvec):
            if c:
                col = self.right_action[i].apply(m)
                out = [x + c * y for x, y in zip(out, col)]
        return out

    def validate(self):
        A, B = self.left_alg, self.right_alg
        # parity additivity of the actions
        for i, mat in enumerate(self.left_action):
            try:
                GradedMap(self.carrier, self.carrier, mat, A.parity(i))
            except ValueError:
                return f"left action of basis element {i} violates parity"
        for i, mat in enumerate(self.right_action):
            try:
                GradedMap(self.carrier, self.carrier, mat, B.parity(i))
            except ValueError:
                return f"right action of basis element {i} violates parity"
        ident = Matrix.identity(self.field, self.dim)
        if self.left_matrix(A.unit) != ident:
            return "left unit does not act as identity"
        if self.right_matrix(B.unit) != ident:
            return "right unit does not act as identity"
        for i in range(A.dim):
            for j in range(A.dim):
                prod = A.mul(A.basis_vector(i), A.basis_vector(j))
                if self.left_action[i] * self.left_action[j] != self.left_matrix(prod):
                    return f"left action not associative on pair ({i},{j})"
        for i in range(B.dim):
            for j in range(B.dim):
                prod = B.mul(B.basis_vector(i), B.basis_vector(j))
                if self.right_action[j] * self.right_action[i] != self.right_matrix(prod):
                    return f"right action not associative on pair ({i},{j})"
        for i in range(A.dim):
            for j in range(B.dim):
                if self.left_action[i] * self.right_action[j] != self.right_action[j] * self.left_action[i]:
                    return f"left/right actions fail to commute on ({i},{j})"
        return None

    def __repr__(self):
        return (
            f"SuperBimodule({self.carrier.even_dim}|{self.carrier.odd_dim}, "
            f"left dim {self.left_alg.dim}, right dim {self.right_alg.dim})"
        )


def regular_bimodule(A: SuperAlgebra):
    """A as an A-A-bimodule."""
    left = [A.left_mult_matrix(A.basis_vector(i)) for i in range(A.dim)]
    right = [A.right_mult_matrix(A.basis_vector(i)) for i in range(A.dim)]
    return SuperBimodule(A, A, A.carrier, left, right, check=False)


def left_module(A: SuperAlgebra, carrier, action_matrices, check=True):
    """A left A-module presented as an A-k-bimodule (k = ground field)."""
    k = ground_field(A.field)
    right = [Matrix.identity(A.field, carrier.dim)]
    return SuperBimodule(A, k, carrier, action_matrices, right, check=check)


def twist(M: SuperBimodule, phi: AlgebraHom, psi: AlgebraHom, check=False):
    """Precompose the actions: result is an A'-B'-bimodule for phi: A'->A,
    psi: B'->B."""
    if phi.target is not M.left_alg and phi.target.table != M.left_alg.table:
        raise BimoduleError("twist: phi does not land in the left algebra")
    if psi.target is not M.right_alg and psi.target.table != M.right_alg.table:
        raise BimoduleError("twist: psi does not land in the right algebra")
    left = [M.left_matrix(phi(phi.source.basis_vector(i))) for i in range(phi.source.dim)]
    right = [M.right_matrix(psi(psi.source.basis_vector(i))) for i in range(psi.source.dim)]
    return SuperBimodule(phi.source, psi.source, M.carrier, left, right, check=check)


def hom_twist(A: SuperAlgebra, phi: AlgebraHom):
    """A_phi: the algebra A as an A-A'-bimodule with right action through
    phi: A' -> A."""
    return twist(regular_bimodule(A), AlgebraHom.identity(A), phi)


def parity_flip(M: SuperBimodule):
    """Pi M: gradings swapped, right action sign-twisted by (-1)^{|b|}."""
    newc = M.carrier.flip()
    perm = M.carrier.flip_permutation()
    field = M.field
    zero = field.zero()
    n = M.dim
    P = [[zero] * n for _ in range(n)]
    for old, new in perm.items():
        P[new][old] = field.one()
    P = Matrix(field, P)
    Pinv = P.transpose()  # permutation matrix
    left = [P * mat * Pinv for mat in M.left_action]
    right = []
    for i, mat in enumerate(M.right_action):
        mat = P * mat * Pinv
        if M.right_alg.parity(i):
            mat = mat.scale(-1)
        right.append(mat)
    return SuperBimodule(M.left_alg, M.right_alg, newc, left, right, check=False)


class Intertwiner:
    """An even map of bimodules commuting with both actions."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source, target, gmap, check=True):
        if not isinstance(gmap, GradedMap):
            gmap = GradedMap(source.carrier, target.carrier, gmap, 0, check=check)
        self.source = source
        self.target = target
        self.map = gmap
        if check:
            err = self.validate()
            if err:
                raise BimoduleError(err)

    def validate(self):
        if self.map.parity != 0:
            return "intertwiners must be even"
        A = self.source.left_alg
        B = self.source.right_alg
        T = self.map.matrix
        for i in range(A.dim):
            if T * self.source.left_action[i] != self.target.left_action[i] * T:
                return f"does not commute with left action of basis element {i}"
        for i in range(B.dim):
            if T * self.source.right_action[i] != self.target.right_action[i] * T:
                return f"does not commute with right action of basis element {i}"
        return None

    def __call__(self, vec):
        return self.map(vec)

    def compose(self, other):
        return Intertwiner(other.source, self.target, self.map.compose(other.map), check=False)

    def inverse(self):
        inv = self.map.inverse()
        if inv is None:
            return None
        return Intertwiner(self.target, self.source, inv, check=False)

    def is_invertible(self):
        return self.map.is_invertible()

    def __eq__(self, other):
        return isinstance(other, Intertwiner) and self.map == other.map

    def __repr__(self):
        return f"Intertwiner({self.source!r} -> {self.target!r})"


class RelTensor:
    """The relative tensor product M (x)_B N with its quotient data.

    bimodule: the A-C-bimodule on the quotient carrier.
    pair_index: (i, j) -> position in the plain tensor ordering.
    projection: quotient-dim x plain-dim matrix.
    section: plain-dim x quotient-dim matrix, projection * section = id.
    """

    __slots__ = ("bimodule", "pair_index", "projection", "section", "plain_space")

    def __init__(self, bimodule, pair_index, projection, section, plain_space):
        self.bimodule = bimodule
        self.pair_index = pair_index
        self.projection = projection
        self.section = section
        self.plain_space = plain_space


def rel_tensor(M: SuperBimodule, N: SuperBimodule, check=True) -> RelTensor:
    """M (x)_B N for M: A-B and N: B-C, as an exact quotient of M (x) N by
    the span of (m<b) (x) n - m (x) (b>n)."""
    B = M.right_alg
    if N.left_alg is not B and N.left_alg.table != B.table:
        raise BimoduleError("rel_tensor: middle algebras differ")
    field = M.field
    plain, idx = tensor_space(M.carrier, N.carrier, sep="&")
    dimP = plain.dim

    def plain_vec(mvec, nvec):
        v = [field.zero()] * dimP
        for i, x in enumerate(mvec):
            if x:
                for j, y in enumerate(nvec):
                    if y:
                        v[idx[(i, j)]] = v[idx[(i, j)]] + x * y
        return v

    # relation subspace
    rel = RowSpace(field, dimP)
    for b in range(B.dim):
        bvec = B.basis_vector(b)
        for i in range(M.dim):
            mb = M.act_right(M.carrier.basis_vector(i), bvec)
            for j in range(N.dim):
                bn = N.act_left(bvec, N.carrier.basis_vector(j))
                v = plain_vec(mb, N.carrier.basis_vector(j))
                w = plain_vec(M.carrier.basis_vector(i), bn)
                rel.insert([x - y for x, y in zip(v, w)])

    pivset = set(rel.pivots)
    free = [c for c in range(dimP) if c not in pivset]
    # quotient basis: images of the free plain-basis vectors (each homogeneous)
    labels = [plain.labels[c] for c in free]
    order = sorted(range(len(free)), key=lambda t: labels[t][1])
    free = [free[t] for t in order]
    labels = [labels[t] for t in order]
    qspace = SuperVectorSpace(field, labels)
    dimQ = qspace.dim

    zero, one = field.zero(), field.one()
    # projection: reduce a plain vector by the relations, read free coords
    # build as a matrix: column c = projection of plain basis vector c
    proj_cols = []
    for c in range(dimP):
        v = [zero] * dimP
        v[c] = one
        v = rel.reduce(v)
        proj_cols.append([v[f] for f in free])
    projection = Matrix.from_columns(field, proj_cols, nrows=dimQ)
    sec_cols = []
    for f in free:
        v = [zero] * dimP
        v[f] = one
        sec_cols.append(v)
    section = Matrix.from_columns(field, sec_cols, nrows=dimP)

    # induced actions: act on the section representative, project back
    A, C = M.left_alg, N.right_alg
    left = []
    for a in range(A.dim):
        # plain-level left action of e_a: acts on the M factor, no sign
        mat = _plain_level(field, idx, M.dim, N.dim, dimP,
                           lambda i, j, a=a: [(k, j, c) for k, c in _mat_entries(M.left_action[a], i)])
        left.append(projection * mat * section)
    right = []
    for b in range(C.dim):
        mat = _plain_level(field, idx, M.dim, N.dim, dimP,
                           lambda i, j, b=b: [(i, l, c) for l, c in _mat_entries(N.right_action[b], j)])
        right.append(projection * mat * section)
    Q = SuperBimodule(A, C, qspace, left, right, check=check)
    return RelTensor(Q, idx, projection, section, plain)


def _mat_entries(mat, col):
    """Nonzero (row, value) entries of a matrix column."""
    out = []
    for r in range(mat.nrows):
        v = mat.rows[r][col]
        if v:
            out.append((r, v))
    return out


def _plain_level(field, idx, dimM, dimN, dimP, entry_fn):
    """Assemble a plain-tensor matrix from a per-pair entry function mapping
    (i, j) to a list of (i', j', coeff) images."""
    zero = field.zero()
    rows = [[zero] * dimP for _ in range(dimP)]
    for (i, j), c0 in idx.items():
        for i2, j2, c in entry_fn(i, j):
            rows[idx[(i2, j2)]][c0] = rows[idx[(i2, j2)]][c0] + c
    return Matrix(field, rows, ncols=dimP)


def external_tensor(M: SuperBimodule, Mp: SuperBimodule, check=False):
    """M (x) M' as an (A (x) A')-(B (x) B')-bimodule with the Koszul sign
    (a(x)a') > (m(x)m') < (b(x)b') =
        (-1)^{|a'||m| + |b||m'| + |b||a'|} (a>m<b) (x) (a'>m'<b')."""
    from .superalgebra import graded_tensor, tensor_index

    if M.field != Mp.field:
        raise BimoduleError("external_tensor: field mismatch")
    A, B = M.left_alg, M.right_alg
    Ap, Bp = Mp.left_alg, Mp.right_alg
    AA = graded_tensor(A, Ap)
    BB = graded_tensor(B, Bp)
    aidx = tensor_index(A, Ap)
    bidx = tensor_index(B, Bp)
    carrier, midx = tensor_space(M.carrier, Mp.carrier, sep="&")
    field = M.field
    dimP = carrier.dim

    left = [None] * AA.dim
    for (a, ap), t in aidx.items():
        def entry(i, j, a=a, ap=ap):
            out = []
            sign0 = -1 if (Ap.parity(ap) and M.carrier.parity(i)) else 1
            for i2, c1 in _mat_entries(M.left_action[a], i):
                for j2, c2 in _mat_entries(Mp.left_action[ap], j):
                    out.append((i2, j2, sign0 * c1 * c2))
            return out
        left[t] = _plain_level(field, midx, M.dim, Mp.dim, dimP, entry)
    right = [None] * BB.dim
    for (b, bp), t in bidx.items():
        def entry(i, j, b=b, bp=bp):
            out = []
            sign0 = -1 if (B.parity(b) and Mp.carrier.parity(j)) else 1
            for i2, c1 in _mat_entries(M.right_action[b], i):
                for j2, c2 in _mat_entries(Mp.right_action[bp], j):
                    out.append((i2, j2, sign0 * c1 * c2))
            return out
        right[t] = _plain_level(field, midx, M.dim, Mp.dim, dimP, entry)
    return SuperBimodule(AA, BB, carrier, left, right, check=check), midx, AA, BB


def intertwiner_space(M: SuperBimodule, N: SuperBimodule):
    """Basis of even intertwiners M -> N, as a list of Intertwiners."""
    if M.left_alg.table != N.left_alg.table or M.right_alg.table != N.right_alg.table:
        raise BimoduleError("intertwiner_space: algebra pair mismatch")
    field = M.field
    dm, dn = M.dim, N.dim
    # unknowns: entries T[r][c] with parity(r) = parity(c) (even map)
    unknowns = [
        (r, c)
        for r in range(dn)
        for c in range(dm)
        if N.carrier.parity(r) == M.carrier.parity(c)
    ]
    pos = {rc: t for t, rc in enumerate(unknowns)}
    zero = field.zero()
    rows = []

    def add_equations(msrc, mtgt):
        # T * msrc - mtgt * T = 0
        for r in range(dn):
            for c in range(dm):
                row = [zero] * len(unknowns)
                for k in range(dm):
                    v = msrc.rows[k][c]
                    if v and (r, k) in pos:
                        row[pos[(r, k)]] = row[pos[(r, k)]] + v
                for k in range(dn):
                    v = mtgt.rows[r][k]
                    if v and (k, c) in pos:
                        row[pos[(k, c)]] = row[pos[(k, c)]] - v
                if any(row):
                    rows.append(row)

    for i in range(M.left_alg.dim):
        add_equations(M.left_action[i], N.left_action[i])
    for i in range(M.right_alg.dim):
        add_equations(M.right_action[i], N.right_action[i])
    if rows:
        kern = Matrix(field, rows, ncols=len(unknowns)).kernel_basis()
    else:
        kern = Matrix.identity(field, len(unknowns)).rows
    out = []
    for kv in kern:
        mat = [[zero] * dm for _ in range(dn)]
        for t, (r, c) in enumerate(unknowns):
            mat[r][c] = kv[t]
        out.append(Intertwiner(M, N, GradedMap(M.carrier, N.carrier, mat, 0, check=False), check=False))
    return out


def find_invertible_intertwiner(M, N, rng):
    """Search the even intertwiner space for an invertible element."""
    if M.dim != N.dim:
        return None, "dimension mismatch"
    basis = intertwiner_space(M, N)
    flat = [[x for row in t.map.matrix.rows for x in row] for t in basis]

    def predicate(v):
        mat = [v[r * M.dim:(r + 1) * M.dim] for r in range(N.dim)]
        mm = Matrix(M.field, mat, ncols=M.dim)
        if mm.is_invertible():
            return Intertwiner(M, N, GradedMap(M.carrier, N.carrier, mm, 0, check=False), check=False)
        return None

    return search_in_span(M.field, flat, predicate, rng)


class InvertibilityCertificate:
    """Witnesses that M: A-B is invertible: an inverse bimodule N with
    bijective evaluation N (x)_A M -> B and coevaluation A -> M (x)_B N."""

    __slots__ = ("module", "inverse", "ev", "coev", "ev_tensor", "coev_tensor")

    def __init__(self, module, inverse, ev, coev, ev_tensor, coev_tensor):
        self.module = module
        self.inverse = inverse
        self.ev = ev            # Intertwiner (N (x)_A M) -> B
        self.coev = coev        # Intertwiner A -> (M (x)_B N)
        self.ev_tensor = ev_tensor
        self.coev_tensor = coev_tensor

    def verify(self):
        return (
            self.ev.validate() is None
            and self.coev.validate() is None
            and self.ev.is_invertible()
            and self.coev.is_invertible()
        )


def dual_module(M: SuperBimodule):
    """L = Hom_{k-B}(M, B): right-B-linear maps M -> B as a B-A-bimodule,
    with (b > xi < a)(x) = b * xi(a > x).  Returns (L, list of matrices
    realizing the basis maps)."""
    A, B = M.left_alg, M.right_alg
    field = M.field
    dm, db = M.dim, B.dim
    # unknowns: all entries of X (db x dm); equations X R^M_b = R^B_b X
    unknowns = [(r, c) for r in range(db) for c in range(dm)]
    pos = {rc: t for t, rc in enumerate(unknowns)}
    zero = field.zero()
    rows = []
    for i in range(B.dim):
        RB = B.right_mult_matrix(B.basis_vector(i))
        RM = M.right_action[i]
        for r in range(db):
            for c in range(dm):
                row = [zero] * len(unknowns)
                for k in range(dm):
                    v = RM.rows[k][c]
                    if v:
                        row[pos[(r, k)]] = row[pos[(r, k)]] + v
                for k in range(db):
                    v = RB.rows[r][k]
                    if v:
                        row[pos[(k, c)]] = row[pos[(k, c)]] - v
                if any(row):
                    rows.append(row)
    if rows:
        kern = Matrix(field, rows, ncols=len(unknowns)).kernel_basis()
    else:
        kern = Matrix.identity(field, len(unknowns)).rows

    # split into homogeneous maps: a map xi has parity p if X[r][c] != 0
    # implies parity(r) = parity(c) + p
    homog = RowSpace(field, len(unknowns))
    basis_mats = []
    parities = []
    for kv in kern:
        for p in (0, 1):
            comp = [zero] * len(unknowns)
            nz = False
            for t, (r, c) in enumerate(unknowns):
                if kv[t] and (B.carrier.parity(r) + M.carrier.parity(c)) % 2 == p:
                    comp[t] = kv[t]
                    nz = True
            if nz and homog.insert(comp):
                mat = [[zero] * dm for _ in range(db)]
                for t, (r, c) in enumerate(unknowns):
                    mat[r][c] = comp[t]
                basis_mats.append(Matrix(field, mat, ncols=dm))
                parities.append(p)
    # order even first
    order = sorted(range(len(basis_mats)), key=lambda t: parities[t])
    basis_mats = [basis_mats[t] for t in order]
    parities = [parities[t] for t in order]
    carrier = SuperVectorSpace(field, [(f"xi{t}", parities[t]) for t in range(len(basis_mats))])

    from .linalg import solve as _solve

    mats_flat = [[x for row in B_.rows for x in row] for B_ in basis_mats]
    Mcols = Matrix.from_columns(field, mats_flat, nrows=db * dm)

    def coords(X):
        sol = _solve(Mcols, [x for row in X.rows for x in row])
        assert sol is not None, "map not in the Hom space"
        return sol.particular

    nL = len(basis_mats)
    left = []
    for i in range(B.dim):
        LB = B.left_mult_matrix(B.basis_vector(i))
        cols = [coords(LB * X) for X in basis_mats]
        left.append(Matrix.from_columns(field, cols, nrows=nL))
    right = []
    for i in range(A.dim):
        LM = M.left_action[i]
        cols = [coords(X * LM) for X in basis_mats]
        right.append(Matrix.from_columns(field, cols, nrows=nL))
    L = SuperBimodule(B, A, carrier, left, right, check=False)
    return L, basis_mats


def certify_invertible(M: SuperBimodule, rng):
    """Invertibility certificate via the explicit adjoint L = Hom_{k-B}(M, B).

    Returns an InvertibilityCertificate or None."""
    A, B = M.left_alg, M.right_alg
    field = M.field
    L, mats = dual_module(M)
    # evaluation on the plain tensor L (x) M: xi (x) x -> xi(x)
    evt = rel_tensor(L, M, check=False)
    zero = field.zero()
    ev_cols = [None] * evt.plain_space.dim
    for (u, j), t in evt.pair_index.items():
        ev_cols[t] = mats[u].column(j)
    ev_plain = Matrix.from_columns(field, ev_cols, nrows=B.dim)
    ev_mat = ev_plain * evt.section
    try:
        ev = Intertwiner(evt.bimodule, regular_bimodule(B),
                         GradedMap(evt.bimodule.carrier, B.carrier, ev_mat, 0), check=True)
    except (ValueError, BimoduleError):
        return None
    if not ev.is_invertible():
        return None
    # coevaluation: invertible intertwiner A -> M (x)_B L
    coevt = rel_tensor(M, L, check=False)
    coev, status = find_invertible_intertwiner(regular_bimodule(A), coevt.bimodule, rng)
    if coev is None:
        return None
    return InvertibilityCertificate(M, L, ev, coev, evt, coevt)


def induced_on_quotient(F: Matrix, src: RelTensor, dst: RelTensor):
    """Induce a plain-tensor-level map on the relative tensor quotients,
    verifying well-definedness."""
    mat = dst.projection * F * src.section
    # well-defined: F must send ker(src.projection) into ker(dst.projection)
    check = dst.projection * F - mat * src.projection
    assert check.is_zero(), "map does not descend to the relative tensor quotient"
    return mat

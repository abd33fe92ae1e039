"""Crossed-module valued Cech cocycles over nerves, and butterflies.

The main realization is AUT(A) = (even units of A -> automorphisms of A)
acting by evaluation, with boundary given by conjugation.  Cocycles carry
automorphisms on edges and even units on triangles; equivalences
(coboundaries) carry automorphisms on vertices and units on edges.

Butterflies are spans with a computable lift along one leg and a
computable kernel-preimage along the other; transporting a cocycle through
a butterfly follows the zig-zag through chosen lifts.  Two concrete
butterflies are provided: the scalar butterfly AUT(A) -> (k^x -> Z2) for a
Picard-surjective central simple A (homogeneous-unit lifts), and the
Morita butterfly AUT(A) -> AUT(B) along an invertible A-B-bimodule.
"""

from __future__ import annotations

import random

from .linalg import Matrix, solve, vec_is_zero
from .nerve import AbelianCochain, Nerve, NerveError
from .scalars import QQ
from .smith import solve_integer, solve_mod
from .units import (
    UnitFactorization,
    factor_unit,
    normalize_unit_vector,
    unit_from_factorization,
)
from .superalgebra import (
    AlgebraError,
    AlgebraHom,
    SuperAlgebra,
    UnitElement,
    conjugation_hom,
    parity_hom,
    search_in_span,
    tensor_hom,
)


# ---------------------------------------------------------------------------
# homogeneous unit witnesses for automorphisms


def homogeneous_witness(A: SuperAlgebra, phi: AlgebraHom, rng=None):
    """A homogeneous unit u with phi = eta^{|u|} o (conjugation by u).

    Returns (UnitElement, parity) or (None, status).  For a central simple
    A every automorphism in the image of the units is of exactly one of
    the two parities; finding witnesses of both parities is reported as an
    error (it would contradict the central-simplicity dichotomy)."""
    rng = rng or random.Random(0)
    eta = parity_hom(A)
    found = []
    for par in (0, 1):
        psi = phi if par == 0 else eta.compose(phi)
        idx = [i for i in range(A.dim) if A.parity(i) == par]
        cols = {}
        rows = []
        # unknowns t_i (i in idx), equations psi(e_j) u - u e_j = 0
        for j in range(A.dim):
            img = psi(A.basis_vector(j))
            L = A.left_mult_matrix(img)
            R = A.right_mult_matrix(A.basis_vector(j))
            for t, i in enumerate(idx):
                col = [
                    L.rows[r][i] - R.rows[r][i] for r in range(A.dim)
                ]
                cols.setdefault(t, []).extend(col)
        if idx:
            mat = Matrix.from_columns(
                A.field, [cols[t] for t in range(len(idx))],
                nrows=len(cols[0]),
            )
            kern = mat.kernel_basis()
        else:
            kern = []

        def predicate(v, par=par, idx=idx):
            vec = [A.field.zero()] * A.dim
            for t, i in enumerate(idx):
                vec[i] = v[t]
            if all(not x for x in vec):
                return None
            # canonical scalar normalization keeps witness-derived scalar
            # cocycles as small as the cocycle data allows
            vec, _ = normalize_unit_vector(A.field, vec)
            u = UnitElement.from_vector(A, vec)
            if u is None or u.parity != par:
                return None
            return u

        u, status = search_in_span(A.field, kern, predicate, rng)
        if u is not None:
            found.append((u, par))
    if len(found) == 2:
        raise AlgebraError(
            "automorphism admits homogeneous witnesses of both parities"
        )
    if found:
        return found[0]
    return None, "no homogeneous witness found"


# ---------------------------------------------------------------------------
# crossed-module realizations


class CrossedModuleRealization:
    """A crossed module (H -> G) with computable operations.

    All layer elements are opaque values manipulated through the stored
    functions; equality on both layers must be exact."""

    __slots__ = ("name", "G_id", "G_mul", "G_inv", "G_eq",
                 "H_one", "H_mul", "H_inv", "H_eq", "boundary", "act",
                 "algebra", "field")

    def __init__(self, name, G_id, G_mul, G_inv, G_eq,
                 H_one, H_mul, H_inv, H_eq, boundary, act):
        self.name = name
        self.algebra = None
        self.field = None
        self.G_id = G_id
        self.G_mul = G_mul
        self.G_inv = G_inv
        self.G_eq = G_eq
        self.H_one = H_one
        self.H_mul = H_mul
        self.H_inv = H_inv
        self.H_eq = H_eq
        self.boundary = boundary
        self.act = act

    def validate_samples(self, gs, hs):
        """Check the two crossed-module axioms on the given samples."""
        failures = []
        for g in gs:
            for h in hs:
                lhs = self.boundary(self.act(g, h))
                rhs = self.G_mul(g, self.G_mul(self.boundary(h), self.G_inv(g)))
                if not self.G_eq(lhs, rhs):
                    failures.append(("equivariance", g, h))
        for h in hs:
            for h2 in hs:
                lhs = self.act(self.boundary(h), h2)
                rhs = self.H_mul(h, self.H_mul(h2, self.H_inv(h)))
                if not self.H_eq(lhs, rhs):
                    failures.append(("Peiffer", h, h2))
        return failures


def aut_crossed_module(A: SuperAlgebra):
    """AUT(A): even units of A over the automorphism group of A."""

    def act(g: AlgebraHom, h: UnitElement):
        return UnitElement(A, g(h.vector), h.parity, g(h.inverse))

    def g_inv(g):
        inv = g.inverse()
        assert inv is not None, "non-invertible element in the G layer"
        return inv

    cm = CrossedModuleRealization(
        name=f"AUT(dim-{A.dim} algebra)",
        G_id=AlgebraHom.identity(A),
        G_mul=lambda g1, g2: g1.compose(g2),
        G_inv=g_inv,
        G_eq=lambda g1, g2: g1.map.matrix == g2.map.matrix,
        H_one=UnitElement(A, list(A.unit), 0, list(A.unit)),
        H_mul=lambda h1, h2: h1.mul(h2),
        H_inv=lambda h: h.invert(),
        H_eq=lambda h1, h2: h1.vector == h2.vector,
        boundary=lambda h: conjugation_hom(A, h),
        act=act,
    )
    cm.algebra = A
    return cm




def scalar_crossed_module(field):
    """(k^x -> Z2): exact scalar units under multiplication over the sign
    group, trivial boundary and trivial action."""
    one = field.one()
    cm = CrossedModuleRealization(
        name=f"(units of {field.tag} -> Z2)",
        G_id=0,
        G_mul=lambda a, b: (a + b) % 2,
        G_inv=lambda a: a % 2,
        G_eq=lambda a, b: a == b,
        H_one=one,
        H_mul=lambda a, b: a * b,
        H_inv=lambda a: 1 / a,
        H_eq=lambda a, b: a == b,
        boundary=lambda h: 0,
        act=lambda g, h: h,
    )
    cm.field = field
    return cm


# ---------------------------------------------------------------------------
# cocycles


class CMCocycle:
    """g on ordered edges, a on ordered triangles, over a realization."""

    __slots__ = ("nerve", "cm", "g", "a")

    def __init__(self, nerve: Nerve, cm: CrossedModuleRealization, g, a):
        self.nerve = nerve
        self.cm = cm
        self.g = {tuple(s): v for s, v in g.items()}
        self.a = {tuple(s): v for s, v in a.items()}
        for s in nerve.edges():
            if s not in self.g:
                raise NerveError(f"missing g value on edge {s}")
        for s in nerve.triangles():
            if s not in self.a:
                raise NerveError(f"missing a value on triangle {s}")

    def g_of(self, a, b):
        return self.g[(a, b)]

    def a_of(self, a, b, c):
        return self.a[(a, b, c)]


def trivial_cocycle(nerve, cm):
    return CMCocycle(
        nerve,
        cm,
        {s: cm.G_id for s in nerve.edges()},
        {s: cm.H_one for s in nerve.triangles()},
    )


class ValidationReport:
    __slots__ = ("failures",)

    def __init__(self, failures):
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        lines = [f"  {s}: {msg}" for s, msg, *_ in self.failures]
        return "ValidationReport(\n" + "\n".join(lines) + "\n)"


def validate_cocycle(c: CMCocycle) -> ValidationReport:
    cm = c.cm
    failures = []
    for (al, be, ga) in c.nerve.triangles():
        lhs = cm.G_mul(
            cm.boundary(c.a_of(al, be, ga)),
            cm.G_mul(c.g_of(be, ga), c.g_of(al, be)),
        )
        rhs = c.g_of(al, ga)
        if not cm.G_eq(lhs, rhs):
            failures.append(
                ((al, be, ga), "triangle identity fails", lhs, rhs)
            )
    for (al, be, ga, de) in c.nerve.tetrahedra():
        lhs = cm.H_mul(
            c.a_of(al, ga, de),
            cm.act(c.g_of(ga, de), c.a_of(al, be, ga)),
        )
        rhs = cm.H_mul(c.a_of(al, be, de), c.a_of(be, ga, de))
        if not cm.H_eq(lhs, rhs):
            failures.append(
                ((al, be, ga, de), "tetrahedron identity fails", lhs, rhs)
            )
    return ValidationReport(failures)


# ---------------------------------------------------------------------------
# coboundaries


def apply_coboundary(c: CMCocycle, h, e):
    """The cocycle (g', a') obtained from c by the equivalence (h, e):
    g'_{ab} = i(e_{ab}) h_b g_{ab} h_a^{-1};
    a'_{abc} = e_{ac} * h_c(a_{abc}) * ((h_c g_{bc} h_b^{-1})(e_{ab}))^{-1}
               * e_{bc}^{-1}."""
    cm = c.cm
    h = {k: v for k, v in h.items()}
    e = {tuple(k): v for k, v in e.items()}
    g2 = {}
    for (al, be) in c.nerve.edges():
        g2[(al, be)] = cm.G_mul(
            cm.boundary(e[(al, be)]),
            cm.G_mul(h[be], cm.G_mul(c.g_of(al, be), cm.G_inv(h[al]))),
        )
    a2 = {}
    for (al, be, ga) in c.nerve.triangles():
        conj = cm.G_mul(h[ga], cm.G_mul(c.g_of(be, ga), cm.G_inv(h[be])))
        x = cm.act(conj, e[(al, be)])
        a2[(al, be, ga)] = cm.H_mul(
            e[(al, ga)],
            cm.H_mul(
                cm.act(h[ga], c.a_of(al, be, ga)),
                cm.H_mul(cm.H_inv(x), cm.H_inv(e[(be, ga)])),
            ),
        )
    return CMCocycle(c.nerve, cm, g2, a2)


def verify_coboundary(c: CMCocycle, c2: CMCocycle, h, e):
    """True iff (h, e) realizes an equivalence from c to c2 (both displayed
    identities hold on every edge and triangle)."""
    if c.nerve != c2.nerve:
        return False
    if c.cm is not c2.cm:
        # accept distinct realizations of the same crossed module
        same = (
            c.cm.name == c2.cm.name
            and (c.cm.algebra is None) == (c2.cm.algebra is None)
            and (c.cm.algebra is None
                 or c.cm.algebra.table == c2.cm.algebra.table)
        )
        if not same:
            return False
    applied = apply_coboundary(c, h, e)
    cm = c.cm
    for s in c.nerve.edges():
        if not cm.G_eq(applied.g[s], c2.g[s]):
            return False
    for s in c.nerve.triangles():
        if not cm.H_eq(applied.a[s], c2.a[s]):
            return False
    return True


def tensor_cocycles(c: CMCocycle, c2: CMCocycle, AB=None):
    """Tensor of an AUT(A)- and an AUT(B)-cocycle on the same nerve, as an
    AUT(A (x) B)-cocycle: edgewise phi (x) psi, trianglewise u (x) u'."""
    from .superalgebra import graded_tensor, tensor_index

    if c.nerve != c2.nerve:
        raise NerveError("tensor_cocycles: nerve mismatch")
    A = c.cm.algebra
    B = c2.cm.algebra
    if AB is None:
        AB = graded_tensor(A, B)
    idx = tensor_index(A, B)
    cmT = aut_crossed_module(AB)

    def unit_tensor(u: UnitElement, v: UnitElement):
        zero = AB.field.zero()

        def expand(x, y):
            out = [zero] * AB.dim
            for i, xa in enumerate(x):
                if xa:
                    for j, xb in enumerate(y):
                        if xb:
                            out[idx[(i, j)]] = xa * xb
            return out

        # both factors are even, so no Koszul signs arise
        return UnitElement(
            AB, expand(u.vector, v.vector), 0, expand(u.inverse, v.inverse)
        )

    g = {
        s: tensor_hom(AB, A, B, c.g[s], c2.g[s]) for s in c.nerve.edges()
    }
    a = {
        s: unit_tensor(c.a[s], c2.a[s]) for s in c.nerve.triangles()
    }
    return CMCocycle(c.nerve, cmT, g, a)


# ---------------------------------------------------------------------------
# butterflies


class ButterflyRealization:
    """A butterfly between two crossed modules: middle group K with maps
    i1: H1 -> K, i2: H2 -> K, p1: K -> G1, p2: K -> G2, a lift procedure
    along p1, and a preimage procedure along i2 for kernel elements of p1."""

    __slots__ = ("source", "target", "K_mul", "K_inv", "K_eq", "K_id",
                 "i1", "i2", "p1", "p2", "lift", "preimage_i2")

    def __init__(self, source, target, K_mul, K_inv, K_eq, K_id,
                 i1, i2, p1, p2, lift, preimage_i2):
        self.source = source
        self.target = target
        self.K_mul = K_mul
        self.K_inv = K_inv
        self.K_eq = K_eq
        self.K_id = K_id
        self.i1 = i1
        self.i2 = i2
        self.p1 = p1
        self.p2 = p2
        self.lift = lift
        self.preimage_i2 = preimage_i2

    def validate_samples(self, ks, h1s, h2s):
        failures = []
        for h in h1s:
            if not self.source.G_eq(self.p1(self.i1(h)), self.source.boundary(h)):
                failures.append(("p1 o i1 != boundary1", h))
            if not self.target.G_eq(self.p2(self.i1(h)), self.target.G_id):
                failures.append(("p2 o i1 != 1", h))
        for h in h2s:
            if not self.target.G_eq(self.p2(self.i2(h)), self.target.boundary(h)):
                failures.append(("p2 o i2 != boundary2", h))
            if not self.source.G_eq(self.p1(self.i2(h)), self.source.G_id):
                failures.append(("p1 o i2 != 1", h))
        for k in ks:
            g = self.p1(k)
            k2 = self.lift(g)
            if k2 is None or not self.source.G_eq(self.p1(k2), g):
                failures.append(("lift does not section p1", k))
        return failures


class TransportError(ValueError):
    pass


def butterfly_transport(bf: ButterflyRealization, c: CMCocycle, lifts=None):
    """Push a cocycle through a butterfly: choose lifts k_{ab} of g_{ab},
    set f = p2(k), and solve i2(b_{abc}) =
    k_{ac} k_{ab}^{-1} k_{bc}^{-1} i1(a_{abc})^{-1}.

    `lifts` optionally pins the lift per edge (for reproducibility and for
    coboundary comparisons).  Returns (cocycle over the target, lifts)."""
    if c.cm is not bf.source and not (
        c.cm.algebra is not None and c.cm.algebra is bf.source.algebra
    ):
        raise TransportError("cocycle does not live over the butterfly source")
    if lifts is None:
        lifts = {}
        for s in c.nerve.edges():
            k = bf.lift(c.g[s])
            if k is None:
                raise TransportError(f"lift failure on edge {s}")
            lifts[s] = k
    f = {s: bf.p2(lifts[s]) for s in c.nerve.edges()}
    b = {}
    for (al, be, ga) in c.nerve.triangles():
        k = bf.K_mul(
            lifts[(al, ga)],
            bf.K_mul(
                bf.K_inv(lifts[(al, be)]),
                bf.K_mul(
                    bf.K_inv(lifts[(be, ga)]),
                    bf.K_inv(bf.i1(c.a_of(al, be, ga))),
                ),
            ),
        )
        h2 = bf.preimage_i2(k)
        if h2 is None:
            raise TransportError(
                f"triangle {(al, be, ga)}: middle element is not in the "
                "image of i2 (butterfly exactness violated)"
            )
        b[(al, be, ga)] = h2
    return CMCocycle(c.nerve, bf.target, f, b), lifts


# -- the scalar (CSA) butterfly --------------------------------------------


def csa_butterfly(A: SuperAlgebra, rng=None):
    """The butterfly AUT(A) -> (k^x -> Z2) for a Picard-surjective central
    simple A: middle group = homogeneous units of A, p1(u) = eta^{|u|} o
    conjugation by u, p2(u) = |u|, kernel of p1 = scalar units."""
    rng = rng or random.Random(0)
    src = aut_crossed_module(A)
    tgt = scalar_crossed_module(A.field)
    eta = parity_hom(A)

    def p1(u: UnitElement):
        conj = conjugation_hom(A, u)
        return conj if u.parity == 0 else eta.compose(conj)

    def i2(lam):
        vec = [lam * x for x in A.unit]
        inv = [(1 / lam) * x for x in A.unit]
        return UnitElement(A, vec, 0, inv)

    def preimage_i2(u: UnitElement):
        # u must be a scalar multiple of the unit
        if u.parity != 0:
            return None
        lam = None
        for i, x in enumerate(A.unit):
            if x:
                lam = u.vector[i] / x
                break
        if lam is None or [lam * x for x in A.unit] != list(u.vector):
            return None
        return lam

    def lift(phi: AlgebraHom):
        u, _info = homogeneous_witness(A, phi, rng)
        return u

    return ButterflyRealization(
        source=src,
        target=tgt,
        K_mul=lambda u, v: u.mul(v),
        K_inv=lambda u: u.invert(),
        K_eq=lambda u, v: u.vector == v.vector,
        K_id=src.H_one,
        i1=lambda h: h,
        i2=i2,
        p1=p1,
        p2=lambda u: u.parity,
        lift=lift,
        preimage_i2=preimage_i2,
    )


# -- the Morita butterfly ---------------------------------------------------


class MoritaButterflyElement:
    """(phi, psi, F) with F(a m b) = phi(a) F(m) psi(b)."""

    __slots__ = ("phi", "psi", "F")

    def __init__(self, phi, psi, F):
        self.phi = phi
        self.psi = psi
        self.F = F


def morita_butterfly(M, rng=None):
    """The butterfly AUT(A) -> AUT(B) along an invertible A-B-bimodule M.

    Middle group: triples (phi, psi, F) with F an invertible even map
    M -> M satisfying F(a m b) = phi(a) F(m) psi(b)."""
    rng = rng or random.Random(0)
    A, B = M.left_alg, M.right_alg
    field = M.field
    src = aut_crossed_module(A)
    tgt = aut_crossed_module(B)
    n = M.dim

    # span of all right-action matrices, for solving R_w = X
    rflat = Matrix.from_columns(
        field,
        [[x for row in M.right_matrix(B.basis_vector(j)).rows for x in row]
         for j in range(B.dim)],
        nrows=n * n,
    )

    def right_coords(X: Matrix):
        from .linalg import solve

        sol = solve(rflat, [x for row in X.rows for x in row])
        return None if sol is None else sol.particular

    def k_mul(k1, k2):
        return MoritaButterflyElement(
            k1.phi.compose(k2.phi), k2.psi.compose(k1.psi), k1.F * k2.F
        )

    def k_inv(k):
        return MoritaButterflyElement(
            k.phi.inverse(), k.psi.inverse(), k.F.inverse()
        )

    def i1(h: UnitElement):
        return MoritaButterflyElement(
            conjugation_hom(A, h),
            AlgebraHom.identity(B),
            M.left_matrix(h.vector),
        )

    def i2(h: UnitElement):
        return MoritaButterflyElement(
            AlgebraHom.identity(A),
            conjugation_hom(B, h).inverse(),
            M.right_matrix(h.vector),
        )

    def preimage_i2(k):
        w = right_coords(k.F)
        if w is None:
            return None
        u = UnitElement.from_vector(B, w)
        if u is None or u.parity != 0:
            return None
        if not tgt.G_eq(k.psi, conjugation_hom(B, u).inverse()):
            return None
        return u

    def lift(phi: AlgebraHom):
        # F with F L_a = L_{phi(a)} F, invertible; then psi read off from
        # conjugation of the right action by F
        zero = field.zero()
        unknown = [(r, c) for r in range(n) for c in range(n)
                   if M.carrier.parity(r) == M.carrier.parity(c)]
        pos = {rc: t for t, rc in enumerate(unknown)}
        rows = []
        for i in range(A.dim):
            La = M.left_matrix(A.basis_vector(i))
            Lb = M.left_matrix(phi(A.basis_vector(i)))
            for r in range(n):
                for col in range(n):
                    row = [zero] * len(unknown)
                    for t in range(n):
                        v = La.rows[t][col]
                        if v and (r, t) in pos:
                            row[pos[(r, t)]] = row[pos[(r, t)]] + v
                        w = Lb.rows[r][t]
                        if w and (t, col) in pos:
                            row[pos[(t, col)]] = row[pos[(t, col)]] - w
                    if any(row):
                        rows.append(row)
        kern = (
            Matrix(field, rows, ncols=len(unknown)).kernel_basis()
            if rows else Matrix.identity(field, len(unknown)).rows
        )

        def predicate(v):
            mat = [[zero] * n for _ in range(n)]
            for t, (r, c) in enumerate(unknown):
                mat[r][c] = v[t]
            F = Matrix(field, mat, ncols=n)
            Finv = F.inverse()
            if Finv is None:
                return None
            # psi: R_{psi(b)} = F^{-1} R_b F  (so that F(m b) = F(m) psi(b))
            cols = []
            for j in range(B.dim):
                w = right_coords(Finv * M.right_matrix(B.basis_vector(j)) * F)
                if w is None:
                    return None
                cols.append(w)
            try:
                psi = AlgebraHom(
                    B, B,
                    Matrix.from_columns(field, cols, nrows=B.dim),
                    check=True,
                )
            except (AlgebraError, ValueError):
                return None
            if not psi.is_automorphism():
                return None
            return MoritaButterflyElement(phi, psi, F)

        res, _status = search_in_span(field, kern, predicate, rng)
        return res

    return ButterflyRealization(
        source=src,
        target=tgt,
        K_mul=k_mul,
        K_inv=k_inv,
        K_eq=lambda k1, k2: (
            src.G_eq(k1.phi, k2.phi) and tgt.G_eq(k1.psi, k2.psi)
            and k1.F == k2.F
        ),
        K_id=MoritaButterflyElement(
            AlgebraHom.identity(A), AlgebraHom.identity(B),
            Matrix.identity(field, n),
        ),
        i1=i1,
        i2=i2,
        p1=lambda k: k.phi,
        p2=lambda k: k.psi,
        lift=lift,
        preimage_i2=preimage_i2,
    )


# ---------------------------------------------------------------------------
# multiplicative unit-valued cochains


ROOT_OF_UNITY_CAP = 24


class UnitCochain:
    """A cochain with values in the exact units k^x (multiplicative)."""

    __slots__ = ("nerve", "degree", "field", "values")

    def __init__(self, nerve, degree, field, values):
        self.nerve = nerve
        self.degree = degree
        self.field = field
        vals = {tuple(s): field.coerce(v) for s, v in values.items()}
        self.values = {s: vals.get(s, field.one()) for s in nerve.simplices[degree]}
        for v in self.values.values():
            assert v != field.zero(), "unit cochain with zero value"

    @classmethod
    def constant_one(cls, nerve, degree, field):
        return cls(nerve, degree, field, {})

    def __getitem__(self, s):
        return self.values[tuple(s)]

    def mul(self, other):
        return UnitCochain(
            self.nerve, self.degree, self.field,
            {s: v * other.values[s] for s, v in self.values.items()},
        )

    def inv(self):
        return UnitCochain(
            self.nerve, self.degree, self.field,
            {s: 1 / v for s, v in self.values.items()},
        )

    def div(self, other):
        return self.mul(other.inv())

    def coboundary(self):
        """Multiplicative Cech coboundary (alternating exponents)."""
        deg = self.degree + 1
        vals = {}
        for s in self.nerve.simplices[deg]:
            acc = self.field.one()
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                v = self.values[face]
                acc = acc * (v if i % 2 == 0 else (1 / v))
            vals[s] = acc
        return UnitCochain(self.nerve, deg, self.field, vals)

    def is_cocycle(self):
        one = self.field.one()
        return all(v == one for v in self.coboundary().values.values())

    def is_one(self):
        one = self.field.one()
        return all(v == one for v in self.values.values())

    def power(self, n):
        vals = {}
        for s, v in self.values.items():
            w = v if n >= 0 else 1 / v
            acc = self.field.one()
            for _ in range(abs(n)):
                acc = acc * w
            vals[s] = acc
        return UnitCochain(self.nerve, self.degree, self.field, vals)

    def coboundary_witness(self):
        """A degree-(d-1) unit cochain e with delta(e) = self, or None.

        Handles arbitrary exact unit values: each value factors uniquely
        into a root of unity times prime powers, so membership in the
        coboundary subgroup splits into one integer linear system per
        prime plus one Z/m system for the root part."""
        d = self.degree
        assert d >= 1, "only positive-degree cochains can be coboundaries"
        D = self.nerve.coboundary_matrix(d - 1)
        tgt = self.nerve.simplices[d]
        src = self.nerve.simplices[d - 1]
        facs = [factor_unit(self.field, self.values[s]) for s in tgt]
        m = 4 if self.field.tag == "Qi" else 2
        primes = sorted({p for f in facs for p in f.exponents})
        sols = {}
        for p in primes:
            b = [f.exponents.get(p, 0) for f in facs]
            res = solve_integer(D, b)
            if res is None:
                return None
            sols[p] = res[0]
        xr = solve_mod(D, [f.root_exponent for f in facs], m)
        if xr is None:
            return None
        vals = {}
        for i, s in enumerate(src):
            fac = UnitFactorization(m, xr[i], {p: sols[p][i] for p in primes})
            vals[s] = unit_from_factorization(self.field, fac)
        e = UnitCochain(self.nerve, d - 1, self.field, vals)
        assert e.coboundary() == self
        return e

    def same_class(self, other):
        """Whether self and other differ by a unit-valued coboundary."""
        assert self.degree == other.degree and self.nerve is other.nerve
        return self.div(other).coboundary_witness() is not None

    def is_torsion_class(self):
        """Whether some positive power of this cocycle is a coboundary.

        The root-of-unity part is always torsion; each prime-exponent
        part is torsion exactly when it is a rational coboundary."""
        assert self.is_cocycle()
        d = self.degree
        D = self.nerve.coboundary_matrix(d - 1)
        tgt = self.nerve.simplices[d]
        facs = [factor_unit(self.field, self.values[s]) for s in tgt]
        primes = sorted({p for f in facs for p in f.exponents})
        if not primes:
            return True
        M = Matrix(QQ, D, ncols=len(self.nerve.simplices[d - 1]))
        for p in primes:
            b = [QQ.from_int(f.exponents.get(p, 0)) for f in facs]
            if solve(M, b) is None:
                return False
        return True

    def torsion_modulus(self, cap=ROOT_OF_UNITY_CAP):
        """Smallest m with every value an m-th root of unity, or None."""
        one = self.field.one()
        for m in range(1, cap + 1):
            ok = True
            for v in self.values.values():
                p = one
                for _ in range(m):
                    p = p * v
                if p != one:
                    ok = False
                    break
            if ok:
                return m
        return None

    def to_additive(self, m):
        """Discrete logarithm to an additive Z/m cochain, base the standard
        primitive m-th root (m = 1, 2 over Q; additionally 4 over Q(i))."""
        field = self.field
        zeta = _primitive_root(field, m)
        table = {}
        p = field.one()
        for k in range(m):
            table[_key(p)] = k
            p = p * zeta
        vals = {}
        for s, v in self.values.items():
            k = table.get(_key(v))
            if k is None:
                raise AlgebraError(
                    f"value {v!r} on {s} is not a power of the chosen "
                    f"{m}-th root of unity"
                )
            vals[s] = k
        return AbelianCochain(self.nerve, self.degree, m, vals)

    @classmethod
    def from_additive(cls, c: AbelianCochain, field):
        m = c.modulus
        assert m > 0
        zeta = _primitive_root(field, m)
        vals = {}
        for s, k in c.values.items():
            p = field.one()
            for _ in range(k % m):
                p = p * zeta
            vals[s] = p
        return cls(c.nerve, c.degree, field, vals)

    def __eq__(self, other):
        return (
            isinstance(other, UnitCochain)
            and self.degree == other.degree
            and self.values == other.values
        )

    def __repr__(self):
        return f"UnitCochain(deg {self.degree}, {self.values})"


def _key(v):
    return repr(v)


def _primitive_root(field, m):
    if m == 1:
        return field.one()
    if m == 2:
        return field.from_int(-1)
    if m == 4 and field.tag == "Qi":
        return field.i()
    raise AlgebraError(
        f"no primitive {m}-th root of unity available in {field.tag}"
    )


# ---------------------------------------------------------------------------
# CSA invariants


class CSAInvariants:
    """(epsilon, x) of an AUT(A)-cocycle for central simple Picard-
    surjective A, with the homogeneous-unit witnesses used."""

    __slots__ = ("epsilon", "x", "units")

    def __init__(self, epsilon, x, units):
        self.epsilon = epsilon
        self.x = x
        self.units = units


def csa_invariants(c: CMCocycle, rng=None) -> CSAInvariants:
    """Extract the (Z2, k^x) invariant pair of an AUT(A)-cocycle.

    Per edge choose a homogeneous unit u with g = eta^{|u|} conj(u); then
    epsilon = |u| is a Z2 1-cocycle and
    x_{abc} * 1 = a_{abc} u_{bc} u_{ab} u_{ac}^{-1} is a unit-valued
    2-cocycle.  Both cocycle conditions are verified."""
    rng = rng or random.Random(0)
    A = c.cm.algebra
    field = A.field
    units = {}
    eps = {}
    for s in c.nerve.edges():
        u, info = homogeneous_witness(A, c.g[s], rng)
        if u is None:
            raise AlgebraError(
                f"edge {s}: no homogeneous unit witness ({info}); input is "
                "outside the central-simple Picard-surjective regime"
            )
        units[s] = u
        eps[s] = u.parity
    xvals = {}
    for (al, be, ga) in c.nerve.triangles():
        w = c.a_of(al, be, ga).mul(units[(be, ga)]).mul(units[(al, be)]).mul(
            units[(al, ga)].invert()
        )
        lam = _scalar_of(A, w.vector)
        if lam is None:
            raise AlgebraError(
                f"triangle {(al, be, ga)}: defect is not scalar; input is "
                "outside the central-simple regime"
            )
        xvals[(al, be, ga)] = lam
    epsilon = AbelianCochain(c.nerve, 1, 2, eps)
    x = UnitCochain(c.nerve, 2, field, xvals)
    assert epsilon.is_cocycle(), "epsilon is not a Z2 cocycle"
    assert x.is_cocycle(), "x is not a unit-valued 2-cocycle"
    return CSAInvariants(epsilon, x, units)


def _scalar_of(A, vec):
    """lam with vec = lam * unit, or None."""
    lam = None
    for i, x in enumerate(A.unit):
        if x:
            lam = vec[i] / x
            break
    if lam is None:
        return None
    if [lam * x for x in A.unit] != list(vec):
        return None
    return lam

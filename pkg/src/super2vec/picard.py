"""Projective decomposition, Picard-surjectification, and Picard witnesses.

Pipeline: compute the (graded) Jacobson radical of a finite-dimensional
super algebra from the trace form of the regular representation, split the
unit of the semisimple quotient into orthogonal primitive idempotents (CRT
splitting along square-free reducible minimal polynomials), Newton-lift
them back, and read off the indecomposable projective left modules
P_i = A e_i.  The Picard-surjective hull is the opposite graded
endomorphism algebra of the multiplicity-one sum of the P_i together with
their parity flips, packaged with a Morita-equivalence certificate.
"""

from __future__ import annotations

import sympy

from .bimodule import (
    SuperBimodule,
    Intertwiner,
    certify_invertible,
    find_invertible_intertwiner,
    hom_twist,
    left_module,
    parity_flip,
)
from .linalg import Matrix, RowSpace, solve, vec_is_zero
from .superalgebra import (
    AlgebraError,
    AlgebraHom,
    SuperAlgebra,
    search_in_span,
)
from .supervect import GradedMap, SuperVectorSpace
from .clifford import _X, _poly_from_coeffs, factor_poly

import random

DECOMPOSE_DIM_CAP = 64
SPLIT_CANDIDATE_BUDGET = 150
NEWTON_MAX_ITER = 24


# ---------------------------------------------------------------------------
# radical and semisimple quotient


def radical(A: SuperAlgebra):
    """Homogeneous basis of the Jacobson radical (trace-form kernel).

    Over a characteristic-zero field the radical of a finite-dimensional
    associative algebra is the kernel of (a, b) -> tr(L_{ab}).  The result
    is verified to be a nilpotent two-sided ideal before it is returned.
    """
    field = A.field
    n = A.dim
    zero = field.zero()
    # tau_k = tr(L_{e_k});  Gram[i][j] = sum_k (e_i e_j)_k tau_k
    tau = []
    for k in range(n):
        t = zero
        for i in range(n):
            t = t + A.table[k][i].get(i, zero)
        tau.append(t)
    gram = []
    for i in range(n):
        row = [zero] * n
        for j in range(n):
            s = zero
            for k, c in A.table[i][j].items():
                if tau[k]:
                    s = s + c * tau[k]
            row[j] = s
        gram.append(row)
    kern = Matrix(field, gram, ncols=n).kernel_basis()
    # the radical is stable under the parity involution, so the homogeneous
    # components of any kernel vector stay in the kernel
    space = RowSpace(field, n)
    basis = []
    for v in kern:
        for par in (0, 1):
            comp = [x if A.parity(i) == par else zero for i, x in enumerate(v)]
            if not vec_is_zero(comp) and space.insert(comp):
                basis.append((par, comp))
    basis.sort(key=lambda pv: pv[0])
    basis = [v for _, v in basis]
    _verify_radical(A, basis)
    return basis


def _verify_radical(A, basis):
    field = A.field
    n = A.dim
    span = RowSpace(field, n)
    for v in basis:
        span.insert(v)
    for v in basis:
        for i in range(n):
            e = A.basis_vector(i)
            if not span.contains(A.mul(e, v)) or not span.contains(A.mul(v, e)):
                raise AlgebraError("trace-form kernel is not a two-sided ideal")
    # nilpotency: powers of the ideal must reach zero
    cur = list(basis)
    for _ in range(n + 1):
        if not cur:
            return
        nxt_span = RowSpace(field, n)
        nxt = []
        for x in cur:
            for y in basis:
                p = A.mul(x, y)
                if not vec_is_zero(p) and nxt_span.insert(p):
                    nxt.append(p)
        if len(nxt) >= len(cur) and cur and all(nxt_span.contains(x) for x in cur):
            raise AlgebraError("trace-form kernel is not nilpotent")
        cur = nxt
    if cur:
        raise AlgebraError("trace-form kernel is not nilpotent")


class QuotientAlgebra:
    """A/J for a homogeneous ideal basis J, with projection and section."""

    __slots__ = ("algebra", "quotient", "reducer", "indices")

    def __init__(self, A: SuperAlgebra, ideal_basis):
        field = A.field
        n = A.dim
        red = RowSpace(field, n)
        for v in ideal_basis:
            red.insert(v)
        pivots = set(red.pivots)
        self.algebra = A
        self.reducer = red
        self.indices = [i for i in range(n) if i not in pivots]
        labels = [A.carrier.labels[i] for i in self.indices]
        carrier = SuperVectorSpace(field, labels)
        m = len(self.indices)
        zero = field.zero()
        table = []
        for a in range(m):
            row = []
            for b in range(m):
                prod = A.mul(
                    A.basis_vector(self.indices[a]), A.basis_vector(self.indices[b])
                )
                row.append(
                    {k: c for k, c in enumerate(self.project(prod)) if c}
                )
            table.append(row)
        unit = self.project(A.unit)
        self.quotient = SuperAlgebra(carrier, table, unit, check=True)

    def project(self, vec):
        v = self.reducer.reduce(vec)
        return [v[i] for i in self.indices]

    def section(self, qvec):
        zero = self.algebra.field.zero()
        out = [zero] * self.algebra.dim
        for c, i in zip(qvec, self.indices):
            out[i] = c
        return out


# ---------------------------------------------------------------------------
# primitive idempotents in the even part of a semisimple algebra


def _corner_even_basis(A, e):
    """Basis of e A_0 e inside A (dense vectors)."""
    field = A.field
    span = RowSpace(field, A.dim)
    basis = []
    for i in range(A.carrier.even_dim):
        v = A.mul(A.mul(e, A.basis_vector(i)), e)
        if not vec_is_zero(v) and span.insert(v):
            basis.append(v)
    return basis, span


def _minpoly_with_unit(A, z, unit, cap=12):
    """Minimal polynomial of z in the corner with identity `unit`
    (ascending, monic), or None past the cap."""
    field = A.field
    zero = field.zero()
    one = field.one()
    span = RowSpace(field, A.dim)
    tails = []
    cur = unit
    for deg in range(cap + 1):
        res = span.reduce(cur)
        if vec_is_zero(res):
            # cur = sum of previous powers: recover coefficients densely
            mat = Matrix.from_columns(field, tails and [t[0] for t in tails] or [], nrows=A.dim)
            sol = solve(mat, cur)
            assert sol is not None
            coeffs = [-c for c in sol.particular] + [one]
            return coeffs
        span.insert(cur)
        tails.append((cur, deg))
        cur = A.mul(cur, z)
    return None


def _poly_eval(A, coeffs, z, unit):
    """f(z) with z^0 = unit (Horner)."""
    field = A.field
    acc = [field.zero()] * A.dim
    for c in reversed(coeffs):
        acc = A.mul(acc, z)
        if c:
            acc = [a + c * u for a, u in zip(acc, unit)]
    return acc


def _bezout(field, F, G):
    """u, v with u*F + v*G = 1 for coprime F, G (ascending coeff lists)."""
    domain = "QQ_I" if field.tag == "Qi" else "QQ"
    pF = _poly_from_coeffs(field, F)
    pG = _poly_from_coeffs(field, G)
    u, v, g = sympy.Poly(pF, _X, domain=domain).gcdex(sympy.Poly(pG, _X, domain=domain))
    assert g.degree() == 0
    inv = 1 / g.all_coeffs()[0]
    from .clifford import _coeffs_from_poly

    return (
        _coeffs_from_poly(field, u * inv),
        _coeffs_from_poly(field, v * inv),
    )


def _split_idempotent(A, e, rng):
    """Try to write the even idempotent e as a sum of two orthogonal nonzero
    idempotents of A.  Returns (e1, e2) or None (with a primitivity
    certificate when None)."""
    field = A.field
    basis, span = _corner_even_basis(A, e)
    m = len(basis)
    if m == 1:
        return None, "dimension"
    commutative = all(
        A.mul(x, y) == A.mul(y, x) for i, x in enumerate(basis) for y in basis[i + 1:]
    )

    def candidates():
        for v in basis:
            yield v
        for i in range(m):
            for j in range(i + 1, m):
                yield [a + b for a, b in zip(basis[i], basis[j])]
                yield [a - b for a, b in zip(basis[i], basis[j])]
        for _ in range(SPLIT_CANDIDATE_BUDGET):
            coeffs = [field.from_int(rng.randint(-3, 3)) for _ in range(m)]
            yield [
                sum((c * x for c, x in zip(coeffs, col)), field.zero())
                for col in zip(*basis)
            ]

    field_certificate = False
    for z in candidates():
        if vec_is_zero(z):
            continue
        mp = _minpoly_with_unit(A, z, e, cap=m)
        if mp is None:
            continue
        factors = factor_poly(field, mp)
        if len(factors) == 1:
            fac, mult = factors[0]
            if mult == 1 and len(fac) - 1 == m:
                field_certificate = True  # corner = k[z] is a field
            continue
        # CRT split: F = first prime power, G = the rest
        fac0, e0 = factors[0]
        F = _power(field, fac0, e0)
        G = [field.one()]
        for fac, mult in factors[1:]:
            G = _poly_mul(field, G, _power(field, fac, mult))
        u, v = _bezout(field, F, G)
        e1 = _poly_eval(A, _poly_mul(field, v, G), z, e)
        e2 = [a - b for a, b in zip(e, e1)]
        assert A.mul(e1, e1) == e1 and A.mul(e2, e2) == e2
        assert vec_is_zero(A.mul(e1, e2)) and vec_is_zero(A.mul(e2, e1))
        assert not vec_is_zero(e1) and not vec_is_zero(e2)
        return (e1, e2), None
    if commutative and field_certificate:
        return None, "field"
    raise AlgebraError(
        "cannot certify corner primitivity (corner dimension %d); "
        "outside the supported corpus" % m
    )


def _power(field, coeffs, e):
    out = [field.one()]
    for _ in range(e):
        out = _poly_mul(field, out, coeffs)
    return out


def _poly_mul(field, a, b):
    zero = field.zero()
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def primitive_idempotents(A: SuperAlgebra, rng):
    """Complete list of orthogonal primitive even idempotents of a
    semisimple super algebra (primitivity in the even part), summing to 1."""
    done = []
    stack = [list(A.unit)]
    while stack:
        e = stack.pop()
        split, _cert = _split_idempotent(A, e, rng)
        if split is None:
            done.append(e)
        else:
            stack.extend(split)
    done.sort(key=lambda v: [str(x) for x in v])
    return done


# ---------------------------------------------------------------------------
# Newton lifting


def _newton_lift(A, x):
    """Lift an idempotent-mod-nilpotents to an exact idempotent via
    x <- 3x^2 - 2x^3 (quadratic convergence along powers of the radical)."""
    for _ in range(NEWTON_MAX_ITER):
        sq = A.mul(x, x)
        if sq == x:
            return x
        cube = A.mul(sq, x)
        x = [3 * a - 2 * b for a, b in zip(sq, cube)]
    raise AlgebraError("idempotent lifting failure: Newton iteration diverged")


def lift_idempotents(A: SuperAlgebra, quot: QuotientAlgebra, qidems):
    """Lift a complete orthogonal family from A/J to A, preserving
    completeness and orthogonality (sequential conjugation by 1 - s)."""
    field = A.field
    lifted = []
    s = [field.zero()] * A.dim
    one_minus = lambda t: [u - a for u, a in zip(A.unit, t)]  # noqa: E731
    for q in qidems[:-1]:
        x = quot.section(q)
        # keep the even component only (the section is parity-preserving,
        # but guard anyway)
        x = [c if A.parity(i) == 0 else field.zero() for i, c in enumerate(x)]
        x = _newton_lift(A, x)
        f = A.mul(A.mul(one_minus(s), x), one_minus(s))
        f = _newton_lift(A, f)
        assert vec_is_zero(A.mul(f, s)) and vec_is_zero(A.mul(s, f))
        lifted.append(f)
        s = [a + b for a, b in zip(s, f)]
    lifted.append(one_minus(s))
    # exact verification of the complete orthogonal family
    for i, a in enumerate(lifted):
        assert A.mul(a, a) == a, "lifted element is not idempotent"
        for b in lifted[i + 1:]:
            assert vec_is_zero(A.mul(a, b)) and vec_is_zero(A.mul(b, a))
    total = [field.zero()] * A.dim
    for a in lifted:
        total = [x + y for x, y in zip(total, a)]
    assert total == list(A.unit), "idempotent family does not sum to 1"
    return lifted


# ---------------------------------------------------------------------------
# projective modules


def principal_module(A: SuperAlgebra, e):
    """The left module A e presented on a homogeneous basis."""
    field = A.field
    span = RowSpace(field, A.dim)
    basis = []
    for par in (0, 1):
        for i in range(A.dim):
            if A.parity(i) != par:
                continue
            v = A.mul(A.basis_vector(i), e)
            if not vec_is_zero(v) and span.insert(v):
                basis.append((par, v))
    labels = [(f"p{t}", par) for t, (par, _) in enumerate(basis)]
    carrier = SuperVectorSpace(field, labels)
    cols = Matrix.from_columns(field, [v for _, v in basis], nrows=A.dim)

    def coords(v):
        sol = solve(cols, v)
        assert sol is not None, "vector escapes the left ideal"
        return sol.particular

    mats = []
    for i in range(A.dim):
        L = A.left_mult_matrix(A.basis_vector(i))
        mats.append(
            Matrix.from_columns(
                field, [coords(L.apply(v)) for _, v in basis], nrows=len(basis)
            )
        )
    return left_module(A, carrier, mats, check=False)


class ProjectiveClass:
    __slots__ = ("module", "multiplicity", "members")

    def __init__(self, module, multiplicity, members):
        self.module = module
        self.multiplicity = multiplicity
        self.members = members

    def __repr__(self):
        c = self.module.carrier
        return (
            f"ProjectiveClass({c.even_dim}|{c.odd_dim}, "
            f"multiplicity {self.multiplicity})"
        )


class ProjectiveDecomposition:
    """Indecomposable projective left modules of A with multiplicities.

    `modules` lists A e_i for the full orthogonal idempotent family (their
    internal direct sum is the regular module); `classes` groups them up to
    even isomorphism; `witnesses[(i, j)]` records why members of distinct
    classes are non-isomorphic."""

    __slots__ = ("algebra", "radical_basis", "idempotents", "modules",
                 "classes", "witnesses")

    def __init__(self, algebra, radical_basis, idempotents, modules, classes,
                 witnesses):
        self.algebra = algebra
        self.radical_basis = radical_basis
        self.idempotents = idempotents
        self.modules = modules
        self.classes = classes
        self.witnesses = witnesses


def _merge_by_even_iso(modules, rng):
    """Group a list of modules into even-isomorphism classes.

    Returns (groups, witnesses): groups is a list of lists of indices;
    witnesses[(i, j)] is the non-isomorphism reason for representatives of
    distinct groups."""
    groups = []
    witnesses = {}
    for i, M in enumerate(modules):
        placed = False
        for g in groups:
            rep = modules[g[0]]
            shape = (rep.carrier.even_dim, rep.carrier.odd_dim)
            if shape != (M.carrier.even_dim, M.carrier.odd_dim):
                witnesses[(g[0], i)] = "dimension mismatch"
                continue
            iso, status = find_invertible_intertwiner(rep, M, rng)
            if iso is not None:
                g.append(i)
                placed = True
                break
            witnesses[(g[0], i)] = (
                "zero even-intertwiner space" if status == "zero-space"
                else "no invertible even intertwiner found (probabilistic)"
            )
        if not placed:
            groups.append([i])
    return groups, witnesses


def decompose_projectives(A: SuperAlgebra, rng=None):
    if A.dim > DECOMPOSE_DIM_CAP:
        raise AlgebraError(
            f"decompose_projectives: dimension {A.dim} exceeds cap "
            f"{DECOMPOSE_DIM_CAP}"
        )
    rng = rng or random.Random(0)
    rad = radical(A)
    quot = QuotientAlgebra(A, rad)
    qidems = primitive_idempotents(quot.quotient, rng)
    idems = lift_idempotents(A, quot, qidems)
    modules = [principal_module(A, e) for e in idems]
    assert sum(m.dim for m in modules) == A.dim
    groups, witnesses = _merge_by_even_iso(modules, rng)
    classes = [ProjectiveClass(modules[g[0]], len(g), list(g)) for g in groups]
    return ProjectiveDecomposition(A, rad, idems, modules, classes, witnesses)


# ---------------------------------------------------------------------------
# direct sums of left modules


def module_direct_sum(modules):
    """Direct sum of left modules over a common algebra, basis reordered
    even-first.  Returns (module, inclusion index maps)."""
    A = modules[0].left_alg
    field = A.field
    entries = []  # (parity, source module index, source position)
    for s, M in enumerate(modules):
        assert M.left_alg is A or M.left_alg.table == A.table
        for t in range(M.dim):
            entries.append((M.carrier.parity(t), s, t))
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    labels = [(f"s{s}:{modules[s].carrier.labels[t][0]}", p) for p, s, t in entries]
    carrier = SuperVectorSpace(field, labels)
    pos = {(s, t): new for new, (_, s, t) in enumerate(entries)}
    n = carrier.dim
    zero = field.zero()
    mats = []
    for i in range(A.dim):
        rows = [[zero] * n for _ in range(n)]
        for s, M in enumerate(modules):
            blk = M.left_action[i]
            for r in range(M.dim):
                for c in range(M.dim):
                    v = blk.rows[r][c]
                    if v:
                        rows[pos[(s, r)]][pos[(s, c)]] = v
        mats.append(Matrix(field, rows, ncols=n))
    inclusions = [
        {t: pos[(s, t)] for t in range(M.dim)} for s, M in enumerate(modules)
    ]
    return left_module(A, carrier, mats, check=False), inclusions


# ---------------------------------------------------------------------------
# graded endomorphism algebras


def graded_commutant_basis(M: SuperBimodule):
    """Homogeneous basis (even first) of the graded commutant of the left
    action: maps T with T(a m) = (-1)^{|T||a|} a T(m)."""
    A = M.left_alg
    field = M.field
    n = M.dim
    par = M.carrier.parities()
    out = []
    zero = field.zero()
    for tpar in (0, 1):
        unknowns = [
            (r, c) for r in range(n) for c in range(n)
            if (par[r] + par[c]) % 2 == tpar
        ]
        pos = {rc: t for t, rc in enumerate(unknowns)}
        rows = []
        for i in range(A.dim):
            La = M.left_action[i]
            sign = -1 if (tpar and A.parity(i)) else 1
            # T La - sign * La T = 0
            for r in range(n):
                for c in range(n):
                    row = [zero] * len(unknowns)
                    hit = False
                    for k in range(n):
                        v = La.rows[k][c]
                        if v and (r, k) in pos:
                            row[pos[(r, k)]] = row[pos[(r, k)]] + v
                            hit = True
                        w = La.rows[r][k]
                        if w and (k, c) in pos:
                            row[pos[(k, c)]] = row[pos[(k, c)]] - (
                                w if sign == 1 else -w
                            )
                            hit = True
                    if hit and any(row):
                        rows.append(row)
        kern = (
            Matrix(field, rows, ncols=len(unknowns)).kernel_basis()
            if rows
            else Matrix.identity(field, len(unknowns)).rows
        )
        for kv in kern:
            mat = [[zero] * n for _ in range(n)]
            for t, (r, c) in enumerate(unknowns):
                mat[r][c] = kv[t]
            out.append((tpar, Matrix(field, mat, ncols=n)))
    return out


def endomorphism_algebra(M: SuperBimodule):
    """The graded commutant of the left action as a super algebra under
    composition.  Returns (algebra, basis matrices)."""
    field = M.field
    basis = graded_commutant_basis(M)
    labels = [(f"T{t}", p) for t, (p, _) in enumerate(basis)]
    carrier = SuperVectorSpace(field, labels)
    mats = [m for _, m in basis]
    flat = Matrix.from_columns(
        field, [[x for row in m.rows for x in row] for m in mats],
        nrows=M.dim * M.dim,
    )

    def coords(mat):
        sol = solve(flat, [x for row in mat.rows for x in row])
        assert sol is not None, "commutant is not closed under composition"
        return sol.particular

    table = []
    for i in range(len(mats)):
        row = []
        for j in range(len(mats)):
            cs = coords(mats[i] * mats[j])
            row.append({k: c for k, c in enumerate(cs) if c})
        table.append(row)
    unit = coords(Matrix.identity(field, M.dim))
    comp = SuperAlgebra(carrier, table, unit, check=True)
    return comp, mats


def hull_bimodule(A: SuperAlgebra, P: SuperBimodule):
    """Turn the left module P into an A-E-bimodule for
    E = (graded commutant under composition)^op, acting by
    m < T = (-1)^{|T||m|} T(m).  Returns (E, bimodule, basis matrices)."""
    from .superalgebra import graded_opposite

    comp, mats = endomorphism_algebra(P)
    E = graded_opposite(comp)
    field = A.field
    n = P.dim
    par = P.carrier.parities()
    right = []
    for t, mat in enumerate(mats):
        tpar = comp.parity(t)
        if tpar:
            cols = [
                [(-x if par[c] else x) for x in mat.column(c)] for c in range(n)
            ]
            mat = Matrix.from_columns(field, cols, nrows=n)
        right.append(mat)
    bim = SuperBimodule(A, E, P.carrier, P.left_action, right, check=True)
    return E, bim, mats


# ---------------------------------------------------------------------------
# Picard surjectification


class PicardSurjectification:
    """Result of the hull construction: `algebra` is the Picard-surjective
    hull E, `bimodule` the invertible E-A-bimodule with its certificate."""

    __slots__ = ("algebra", "bimodule", "certificate", "decomposition",
                 "projective")

    def __init__(self, algebra, bimodule, certificate, decomposition,
                 projective):
        self.algebra = algebra
        self.bimodule = bimodule
        self.certificate = certificate
        self.decomposition = decomposition
        self.projective = projective


def picard_surjectify(A: SuperAlgebra, rng=None):
    """The Picard-surjective hull of A.

    Returns a PicardSurjectification holding E = End(⊕ P_i ⊕ Π P_i)^op
    (one indecomposable projective per even-isomorphism class, plus the
    parity flips, deduplicated) and a certified invertible E-A-bimodule."""
    rng = rng or random.Random(0)
    dec = decompose_projectives(A, rng)
    reps = [cls.module for cls in dec.classes]
    extended = reps + [parity_flip(m) for m in reps]
    groups, _ = _merge_by_even_iso(extended, rng)
    finals = [extended[g[0]] for g in groups]
    P, _incl = module_direct_sum(finals)
    E, bim, _mats = hull_bimodule(A, P)
    cert_ae = certify_invertible(bim, rng)
    if cert_ae is None:
        raise AlgebraError("picard_surjectify: invertibility certification failed")
    # re-certify the inverse so the returned bimodule is E-A as primary
    cert_ea = certify_invertible(cert_ae.inverse, rng)
    if cert_ea is None:
        raise AlgebraError("picard_surjectify: reverse certification failed")
    return PicardSurjectification(E, cert_ea.module, cert_ea, dec, bim)


# ---------------------------------------------------------------------------
# Picard witnesses


class PicardWitness:
    """Exhibits M ≅ A_phi: `automorphism` is phi, `intertwiner` the
    invertible even map A_phi -> M (a -> a . generator)."""

    __slots__ = ("automorphism", "intertwiner", "generator")

    def __init__(self, automorphism, intertwiner, generator):
        self.automorphism = automorphism
        self.intertwiner = intertwiner
        self.generator = generator


def picard_witness(A: SuperAlgebra, M: SuperBimodule, rng=None):
    """Test whether the invertible A-A-bimodule M is a homomorphism twist
    of the identity bimodule.

    Returns (PicardWitness or None, status); status "dimension mismatch"
    and "zero-space" are deterministic negatives, "exhausted" the
    probabilistic one."""
    rng = rng or random.Random(0)
    if M.left_alg.table != A.table or M.right_alg.table != A.table:
        raise AlgebraError("picard_witness: M is not an A-A-bimodule")
    if (M.carrier.even_dim, M.carrier.odd_dim) != (
        A.carrier.even_dim, A.carrier.odd_dim
    ):
        return None, "dimension mismatch"
    field = A.field
    span = [M.carrier.basis_vector(t) for t in range(M.carrier.even_dim)]

    def predicate(m0):
        cols = [M.act_left(A.basis_vector(i), m0) for i in range(A.dim)]
        alpha = Matrix.from_columns(field, cols, nrows=M.dim)
        ainv = alpha.inverse()
        if ainv is None:
            return None
        pcols = [
            ainv.apply(M.act_right(m0, A.basis_vector(j))) for j in range(A.dim)
        ]
        pmat = Matrix.from_columns(field, pcols, nrows=A.dim)
        try:
            phi = AlgebraHom(A, A, pmat, check=True)
        except (AlgebraError, ValueError):
            return None
        if not phi.is_automorphism():
            return None
        tw = hom_twist(A, phi)
        try:
            it = Intertwiner(
                tw, M, GradedMap(tw.carrier, M.carrier, alpha, 0), check=True
            )
        except (ValueError, AlgebraError):
            return None
        return PicardWitness(phi, it, m0)

    return search_in_span(field, span, predicate, rng)

"""Clifford algebras, Morita triviality and the Brauer-Wall class.

Clifford algebras are built on the subset basis (monomials in anticommuting
odd generators).  Morita triviality of a super algebra A is decided by
splitting the regular module into ever-smaller graded left ideals with
factored minimal polynomials of even elements, then certifying A = End(S)
for a candidate ideal S of dimension sqrt(dim A).  Certification is exact;
a shortage of splitting elements is reported as a distinct, non-definitive
"exhausted" outcome.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt

import sympy

from .linalg import Matrix, RowSpace
from .scalars import QI, QQ, Field, GaussianRational, Rat
from .supervect import SuperVectorSpace
from .superalgebra import (
    AlgebraError,
    AlgebraHom,
    SparseEchelon,
    SuperAlgebra,
    end_algebra,
    graded_tensor,
    is_central_simple,
)
from .bimodule import left_module

MINPOLY_DEGREE_CAP = 12
SPLIT_BUDGET = 220
HARD_FAILURE_CAP = 30


# ---------------------------------------------------------------------------
# Clifford algebras


@dataclass(frozen=True)
class CliffordSignature:
    """p generators squaring to +1, then q generators squaring to -1."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q > 8:
            raise AlgebraError("Clifford signature must have 0 <= p + q <= 8")


def _mask_label(mask):
    if not mask:
        return "1"
    return "".join(f"e{a + 1}" for a in range(mask.bit_length()) if mask >> a & 1)


def _mul_masks(S, T, p):
    """e_S * e_T = sign * e_{S xor T} with the first p generators squaring +1."""
    sign = 1
    a = 0
    t = T
    while t:
        if t & 1:
            if (S >> (a + 1)).bit_count() & 1:
                sign = -sign
        t >>= 1
        a += 1
    common = S & T
    a = p
    while common >> a:
        if common >> a & 1:
            sign = -sign
        a += 1
    return sign, S ^ T


def clifford(sig, q=None, field=QQ):
    """The Clifford super algebra of the given signature.

    Accepts clifford(CliffordSignature(p, q)) or clifford(p, q).  All
    generators are odd and anticommute; e_i^2 = +1 for i <= p, -1 after.
    """
    if q is not None:
        sig = CliffordSignature(sig, q)
    elif not isinstance(sig, CliffordSignature):
        raise AlgebraError("clifford expects a CliffordSignature or (p, q)")
    n = sig.p + sig.q
    masks = sorted(range(1 << n), key=lambda m: (m.bit_count() & 1, m))
    idx = {m: t for t, m in enumerate(masks)}
    labels = [(_mask_label(m), m.bit_count() & 1) for m in masks]
    carrier = SuperVectorSpace(field, labels)
    one = field.one()
    dim = 1 << n
    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for t1, m1 in enumerate(masks):
        for t2, m2 in enumerate(masks):
            sign, m3 = _mul_masks(m1, m2, sig.p)
            table[t1][t2] = {idx[m3]: field.coerce(sign)}
    unit = carrier.zero_vector()
    unit[idx[0]] = one
    return SuperAlgebra(carrier, table, unit, check=False, coerced=True)


def standard_clifford(n, field=QQ):
    """Cl_n := Cl_{0,n} (generators squaring to -1)."""
    return clifford(CliffordSignature(0, n), field=field)


def complex_clifford(n):
    """The complex Clifford algebra over Q(i)."""
    return clifford(CliffordSignature(0, n), field=QI)


# ---------------------------------------------------------------------------
# polynomial helpers (sympy does the factoring)

_X = sympy.Symbol("x")


def _scalar_to_sympy(field, c):
    if field.tag == "Qi":
        c = field.coerce(c)
        return (
            sympy.Rational(c.re.numerator, c.re.denominator)
            + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        )
    c = field.coerce(c)
    return sympy.Rational(c.numerator, c.denominator)


def _scalar_from_sympy(field, expr):
    re, im = sympy.sympify(expr).as_real_imag()
    re, im = sympy.Rational(re), sympy.Rational(im)
    if field.tag == "Qi":
        return GaussianRational(
            Rat(int(re.p), int(re.q)), Rat(int(im.p), int(im.q))
        )
    assert im == 0, "real field got a complex coefficient"
    return Rat(int(re.p), int(re.q))


def _poly_from_coeffs(field, coeffs):
    """ascending coefficient list -> sympy Poly over QQ or QQ_I."""
    expr = sum(_scalar_to_sympy(field, c) * _X**k for k, c in enumerate(coeffs))
    domain = "QQ_I" if field.tag == "Qi" else "QQ"
    return sympy.Poly(expr, _X, domain=domain)


def _coeffs_from_poly(field, poly):
    cs = sympy.Poly(poly, _X).all_coeffs()  # descending
    return [_scalar_from_sympy(field, c) for c in reversed(cs)]


def factor_poly(field, coeffs):
    """Irreducible factorization over the scalar field.

    coeffs ascending; returns a list of (factor_coeffs_ascending, multiplicity).
    """
    return _factor_poly_cached(field, tuple(coeffs))


from functools import lru_cache  # noqa: E402


@lru_cache(maxsize=4096)
def _factor_poly_cached(field, coeffs):
    poly = _poly_from_coeffs(field, list(coeffs))
    _, factors = poly.factor_list()
    return tuple(
        (tuple(_coeffs_from_poly(field, f)), int(e)) for f, e in factors
    )


def poly_power_coeffs(field, coeffs, e):
    return _coeffs_from_poly(field, _poly_from_coeffs(field, coeffs) ** e)


# ---------------------------------------------------------------------------
# sparse element arithmetic


def _unit_sparse(A):
    return {i: c for i, c in enumerate(A.unit) if c}


def sparse_poly_eval(A, coeffs, z):
    """f(z) for a sparse element z and ascending coefficient list."""
    acc = {}
    unit = _unit_sparse(A)
    for c in reversed(coeffs):
        acc = A.mul_sparse(acc, z)
        if c:
            for k, u in unit.items():
                v = acc.get(k, A.field.zero()) + c * u
                if v:
                    acc[k] = v
                elif k in acc:
                    del acc[k]
    return acc


def sparse_minpoly(A, z, degree_cap=MINPOLY_DEGREE_CAP):
    """Minimal polynomial of z in A (ascending coefficients), or None if the
    degree cap is exceeded."""
    field = A.field
    zero = field.zero()
    one = field.one()
    ech = SparseEchelon()
    cur = _unit_sparse(A)
    for deg in range(degree_cap + 1):
        combo = ech.insert(dict(cur), {deg: one})
        if combo is not None:
            # sum_t combo[t] * z^t = 0, monic in degree deg
            return [combo.get(t, zero) for t in range(deg + 1)]
        cur = A.mul_sparse(cur, z)
    return None


# ---------------------------------------------------------------------------
# graded ideal splitting


def _sparse_combo(field, combo, vectors):
    out = {}
    for t, c in combo.items():
        for k, v in vectors[t].items():
            w = out.get(k, field.zero()) + c * v
            if w:
                out[k] = w
            elif k in out:
                del out[k]
    return out


def _ideal_kernel_image(A, part, w):
    """(kernel_basis, image_basis) of right multiplication by the even
    element w on span(part); part is a list of sparse vectors of one parity.
    Both are graded left ideals of A (no w-stability of the span needed)."""
    ech = SparseEchelon()
    kern = []
    one = A.field.one()
    for t, s in enumerate(part):
        combo = ech.insert(A.mul_sparse(s, w), {t: one})
        if combo is not None:
            v = _sparse_combo(A.field, combo, part)
            assert v, "spanning vectors were dependent"
            kern.append(v)
    image = [row for row, _tail in ech.rows.values()]
    return kern, image


def _sparse_add(field, a, b, c):
    """a + c*b for sparse vectors."""
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, field.zero()) + c * v
        if w:
            out[k] = w
        elif k in out:
            del out[k]
    return out


def _split_candidates(A, s_even, rng, budget):
    """Even elements of span(s_even), which right-multiplication keeps inside
    the current left ideal: the basis vectors themselves first, then sparse
    random combinations."""
    one = A.field.one()
    for s in s_even:
        yield s
    if len(s_even) < 2:
        return
    n = len(s_even)
    for t in range(budget):
        if t % 4 == 3 and n >= 3:
            k = min(n, rng.choice([3, 4]))
            vec = {}
            for i in rng.sample(range(n), k):
                c = rng.randint(-3, 3)
                if c:
                    vec = _sparse_add(A.field, vec, s_even[i], A.field.from_int(c))
            if vec:
                yield vec
        else:
            i, j = rng.sample(range(n), 2)
            yield _sparse_add(
                A.field, s_even[i], s_even[j], A.field.from_int(rng.choice([1, -1]))
            )


def _split_prepare(A, z):
    """Cheap stage: factored minimal polynomial of z if it is reducible
    (or has a repeated factor), else None."""
    mp = sparse_minpoly(A, z)
    if mp is None or len(mp) < 3:
        return None
    factors = factor_poly(A.field, mp)
    if len(factors) == 1 and factors[0][1] < 2:
        return None  # irreducible minimal polynomial: f(z) is invertible or 0
    return mp, factors


def _scalar_ratio(field, s, r):
    """c with r = c * s, or None if r is not a scalar multiple of s."""
    if not r:
        return field.zero()
    if set(r) != set(s):
        return None
    k = next(iter(s))
    c = r[k] / s[k]
    for kk, v in s.items():
        if r[kk] != c * v:
            return None
    return c


def _acts_as_one_scalar(A, s_even, s_odd, w):
    """Sampled test: does right multiplication by w look like a single scalar
    on the whole span?  Scalar action admits no split, so such factors are
    skipped without the full kernel computation.  (A false positive only
    costs completeness, never soundness.)"""
    samples = []
    for part in (s_even, s_odd):
        if part:
            samples.append(part[0])
            samples.append(part[-1])
            samples.append(part[len(part) // 2])
    seen = None
    for s in samples:
        c = _scalar_ratio(A.field, s, A.mul_sparse(s, w))
        if c is None:
            return False
        if seen is None:
            seen = c
        elif c != seen:
            return False
    return True


def _split(A, s_even, s_odd, z, prepared):
    """Try to cut span(s_even + s_odd) into smaller graded left ideals using
    right multiplication by proper factors of the minimal polynomial of the
    even element z.  Kernel and image of right multiplication are both left
    ideals, so each strictly smaller nonzero one is a valid shrink target.

    Returns (parts_or_None, did_expensive_work)."""
    mp, factors = prepared
    dim_s = len(s_even) + len(s_odd)
    parts = []
    expensive = False
    for f, e in factors:
        polys = [poly_power_coeffs(A.field, f, e)] if e > 1 else []
        polys.append(f)
        for fe in polys:
            if len(fe) - 1 >= len(mp) - 1:
                continue
            w = sparse_poly_eval(A, fe, z)
            if not w:
                continue
            if _acts_as_one_scalar(A, s_even, s_odd, w):
                continue
            expensive = True
            ke, ie = _ideal_kernel_image(A, s_even, w)
            ko, io = _ideal_kernel_image(A, s_odd, w)
            for cand in ((ke, ko), (ie, io)):
                d = len(cand[0]) + len(cand[1])
                if 0 < d < dim_s:
                    parts.append(cand)
    return parts or None, expensive


class _SpanCoords:
    """Coordinates of sparse vectors against a fixed sparse spanning list."""

    def __init__(self, field, vectors):
        self.field = field
        self.ech = SparseEchelon()
        one = field.one()
        for t, v in enumerate(vectors):
            res = self.ech.insert(dict(v), {t: one})
            assert res is None, "spanning vectors were dependent"

    def coords(self, v):
        """{position: coeff} or None if v is outside the span."""
        v = dict(v)
        out = {}
        while v:
            p = min(v)
            if p not in self.ech.rows:
                return None
            row, tail = self.ech.rows[p]
            f = v[p]
            for c, w in row.items():
                r = v.get(c)
                r = -f * w if r is None else r - f * w
                if r:
                    v[c] = r
                elif c in v:
                    del v[c]
            for t, w in tail.items():
                r = out.get(t)
                r = f * w if r is None else r + f * w
                if r:
                    out[t] = r
                elif t in out:
                    del out[t]
        return out


@dataclass
class MoritaResult:
    """Outcome of a Morita-triviality test.

    trivial:    True with a module and an isomorphism A -> End(module).
    reason:     for non-trivial outcomes, one of "dimension",
                "not-central-simple", "small-ideal", "not-simple",
                "exhausted".
    definitive: False only for "exhausted" (the randomized splitting ran out
                of candidates; triviality was neither proved nor refuted).
    """

    trivial: bool
    module: object = None
    iso: object = None
    reason: str = None
    definitive: bool = True


def _certify(A, s_even, s_odd):
    """Check that A acts faithfully on S = span(s_even + s_odd) with
    dim A = (dim S)^2; if so return (module, iso), else None."""
    field = A.field
    n = A.dim
    m = len(s_even) + len(s_odd)
    assert m * m == n
    span_e = _SpanCoords(field, s_even) if s_even else None
    span_o = _SpanCoords(field, s_odd) if s_odd else None
    basis = list(s_even) + list(s_odd)
    one = field.one()
    ne = len(s_even)
    env = SparseEchelon()
    actions = []
    for i in range(n):
        pi = A.parity(i)
        col = {}
        mat = [[field.zero()] * m for _ in range(m)]
        for j, s in enumerate(basis):
            pj = 0 if j < ne else 1
            prod = A.mul_sparse({i: one}, s)
            if not prod:
                continue
            target = (pi + pj) % 2
            span = span_e if target == 0 else span_o
            if span is None:
                return None
            cds = span.coords(prod)
            assert cds is not None, "candidate subspace is not a left ideal"
            off = 0 if target == 0 else ne
            for t, c in cds.items():
                col[(off + t) * m + j] = c
                mat[off + t][j] = c
        actions.append(Matrix(field, mat, ncols=m))
        if env.insert(col, None) is not None:
            return None  # action not injective: A has a proper two-sided ideal
    labels = [(f"s{t}", 0) for t in range(ne)] + [
        (f"s{ne + t}", 1) for t in range(len(s_odd))
    ]
    space = SuperVectorSpace(field, labels)
    module = left_module(A, space, actions, check=False)
    E, idx = end_algebra(space)
    cols = []
    for i in range(n):
        vec = [field.zero()] * E.dim
        mat = actions[i]
        for r in range(m):
            for c in range(m):
                if mat.rows[r][c]:
                    vec[idx[(r, c)]] = mat.rows[r][c]
        cols.append(vec)
    iso = AlgebraHom(A, E, Matrix.from_columns(field, cols, nrows=E.dim), check=False)
    return module, iso


def morita_trivial(A, rng=None, budget=SPLIT_BUDGET, check_simple=True,
                   build_certificate=True):
    """Decide whether A is isomorphic to End(S) for a super vector space S.

    Exact-positive: a returned module and isomorphism are always correct.
    Negative outcomes are definitive except reason "exhausted".

    check_simple=False skips the central-simplicity pre-check, and
    build_certificate=False additionally skips constructing the module and
    isomorphism once a graded left ideal of dimension sqrt(dim A) is found:
    for an algebra the caller knows to be central simple, any such ideal is
    automatically faithful, which settles triviality by dimension count.
    Both flags are for callers that have already established central
    simplicity (e.g. bw_class after its own pre-check)."""
    if rng is None:
        rng = random.Random(0)
    n = A.dim
    m = isqrt(n)
    if m * m != n:
        return MoritaResult(False, reason="dimension")
    if check_simple and n <= 64:
        ok, _ = is_central_simple(A)
        if not ok:
            return MoritaResult(False, reason="not-central-simple")
    one = A.field.one()
    s_even = [{i: one} for i in range(A.carrier.even_dim)]
    s_odd = [{i: one} for i in range(A.carrier.even_dim, n)]
    while True:
        d = len(s_even) + len(s_odd)
        if d < m:
            # a nonzero left ideal of End(S) has dimension at least dim S
            return MoritaResult(False, reason="small-ideal")
        if d == m:
            if not build_certificate and not check_simple:
                return MoritaResult(True)
            cert = _certify(A, s_even, s_odd)
            if cert is None:
                return MoritaResult(False, reason="not-simple")
            module, iso = cert
            return MoritaResult(True, module=module, iso=iso)
        parts = None
        hard_failures = 0
        for z in _split_candidates(A, s_even, rng, budget):
            prepared = _split_prepare(A, z)
            if prepared is None:
                continue
            parts, expensive = _split(A, s_even, s_odd, z, prepared)
            if parts:
                break
            # kernel/image stage ran and found nothing: these attempts are
            # the expensive ones, so give up after a reasonable streak
            if expensive:
                hard_failures += 1
                if hard_failures >= HARD_FAILURE_CAP:
                    break
        if not parts:
            return MoritaResult(False, reason="exhausted", definitive=False)
        s_even, s_odd = min(parts, key=lambda P: len(P[0]) + len(P[1]))


# ---------------------------------------------------------------------------
# Brauer-Wall class


@dataclass(frozen=True)
class BWClass:
    """An element of Z/8 (real scalars) or Z/2 (scalars containing i)."""

    residue: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def __add__(self, other):
        assert self.modulus == other.modulus
        return BWClass(self.residue + other.residue, self.modulus)

    def __neg__(self):
        return BWClass(-self.residue, self.modulus)

    def __str__(self):
        return f"{self.residue} (mod {self.modulus})"


def bw_class(A, rng=None):
    """The Brauer-Wall class of a central simple super algebra, computed as
    the smallest n such that A (x) Cl_{n,0} (real case, n in Z/8) or
    A (x) complex Cl_1 tensor powers (complex case, n in Z/2) is Morita
    trivial."""
    if rng is None:
        rng = random.Random(0)
    if A.dim * A.dim <= 4096:
        ok, _ = is_central_simple(A)
        if not ok:
            raise AlgebraError(
                "bw_class needs a central simple super algebra"
            )
    inconclusive = []
    # tensoring a central simple algebra with a Clifford algebra keeps it
    # central simple, so the per-twist pre-check is skipped
    if A.field.tag == "Qi":
        for nn in range(2):
            T = A if nn == 0 else graded_tensor(A, complex_clifford(1))
            res = morita_trivial(T, rng, check_simple=False, build_certificate=False)
            if res.trivial:
                return BWClass(nn, 2)
            if not res.definitive:
                inconclusive.append(nn)
    else:
        for nn in range(8):
            T = A if nn == 0 else graded_tensor(A, clifford(CliffordSignature(nn, 0), field=A.field))
            res = morita_trivial(T, rng, check_simple=False, build_certificate=False)
            if res.trivial:
                return BWClass(nn, 8)
            if not res.definitive:
                inconclusive.append(nn)
    msg = "no Clifford twist of the algebra certified as Morita trivial"
    if inconclusive:
        msg += f" (splitting exhausted at twists {inconclusive}; result inconclusive)"
    raise AlgebraError(msg)

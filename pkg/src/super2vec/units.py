"""Canonical factorization of exact field units.

Every nonzero element of Q factors uniquely as (-1)^s * prod p^e over
rational primes; every nonzero element of Q(i) factors uniquely as
i^s * prod pi^e over canonical Gaussian primes (the associate with
re > 0, im >= 0).  These decompositions turn multiplicative unit-valued
cochain questions (coboundary membership, torsion of a class) into
integer linear algebra per prime plus one Z/m computation for the root
part.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .scalars import GaussianRational, Rat


# ---------------------------------------------------------------------------
# Gaussian integer arithmetic ((a, b) pairs meaning a + b*i)


def g_mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def g_norm(x):
    return x[0] * x[0] + x[1] * x[1]


def g_divmod(x, y):
    """Euclidean division: q with N(x - q*y) < N(y)."""
    n = g_norm(y)
    # x * conj(y) / n, rounded componentwise
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]

    def rnd(a):
        return (2 * a + n) // (2 * n) if a >= 0 else -((-2 * a + n) // (2 * n))

    q = (rnd(re), rnd(im))
    r = (x[0] - (q[0] * y[0] - q[1] * y[1]), x[1] - (q[0] * y[1] + q[1] * y[0]))
    return q, r


def g_gcd(x, y):
    while y != (0, 0):
        _, r = g_divmod(x, y)
        x, y = y, r
    return x


def g_canonical(x):
    """(unit exponent k, associate) with i^k * associate = x and the
    associate satisfying re > 0, im >= 0 (re > 0, im = 0 for reals)."""
    assert x != (0, 0)
    for k in range(4):
        if x[0] > 0 and x[1] >= 0:
            return (-k) % 4, x
        x = (-x[1], x[0])  # multiply by i
    raise AssertionError("unreachable")


def _gaussian_prime_over(p):
    """Canonical Gaussian prime(s) over the rational prime p."""
    if p == 2:
        return [(1, 1)]                      # 2 = -i (1+i)^2
    if p % 4 == 3:
        return [(p, 0)]                      # inert
    x = int(sympy.ntheory.sqrt_mod(-1, p))
    pi = g_gcd((p, 0), (x, 1))
    _, pi = g_canonical(pi)
    pj = g_canonical((pi[0], -pi[1]))[1]
    return sorted({pi, pj})


def factor_gaussian_integer(x):
    """(unit exponent mod 4, {canonical prime: exponent}) for a nonzero
    Gaussian integer pair."""
    assert x != (0, 0)
    k, x = g_canonical(x)
    exps = {}
    n = g_norm(x)
    for p, _e in sympy.factorint(n).items():
        for pi in _gaussian_prime_over(int(p)):
            while True:
                q, r = g_divmod(x, pi)
                if r != (0, 0):
                    break
                x = q
                exps[pi] = exps.get(pi, 0) + 1
    ku, x = g_canonical(x)
    k = (k + ku) % 4
    assert x == (1, 0), "incomplete Gaussian factorization"
    return k, exps


# ---------------------------------------------------------------------------
# unit factorization over Q and Q(i)


class UnitFactorization:
    """root_exponent mod root_order, and integer exponents per prime key.

    Prime keys are ints (rational primes) over Q, (re, im) pairs
    (canonical Gaussian primes) over Q(i)."""

    __slots__ = ("root_order", "root_exponent", "exponents")

    def __init__(self, root_order, root_exponent, exponents):
        self.root_order = root_order
        self.root_exponent = root_exponent % root_order
        self.exponents = {k: e for k, e in exponents.items() if e}

    def mul(self, other):
        assert self.root_order == other.root_order
        exps = dict(self.exponents)
        for k, e in other.exponents.items():
            exps[k] = exps.get(k, 0) + e
        return UnitFactorization(
            self.root_order, self.root_exponent + other.root_exponent, exps
        )

    def inv(self):
        return UnitFactorization(
            self.root_order,
            -self.root_exponent,
            {k: -e for k, e in self.exponents.items()},
        )

    def is_one(self):
        return self.root_exponent == 0 and not self.exponents


def factor_unit(field, v):
    """Canonical UnitFactorization of a nonzero scalar of QQ or QI."""
    if field.tag == "Qi":
        v = field.coerce(v)
        re = Fraction(int(v.re.numerator), int(v.re.denominator))
        im = Fraction(int(v.im.numerator), int(v.im.denominator))
        den = (re.denominator * im.denominator) // _gcd_int(
            re.denominator, im.denominator
        )
        num = (int(re * den), int(im * den))
        kn, en = factor_gaussian_integer(num)
        kd, ed = factor_gaussian_integer((den, 0))
        exps = dict(en)
        for k, e in ed.items():
            exps[k] = exps.get(k, 0) - e
        return UnitFactorization(4, kn - kd, exps)
    v = field.coerce(v)
    num, den = int(v.numerator), int(v.denominator)
    s = 0
    if num < 0:
        s = 1
        num = -num
    exps = {int(p): int(e) for p, e in sympy.factorint(num).items()}
    for p, e in sympy.factorint(den).items():
        exps[int(p)] = exps.get(int(p), 0) - int(e)
    return UnitFactorization(2, s, exps)


def unit_from_factorization(field, fac: UnitFactorization):
    one = field.one()
    if field.tag == "Qi":
        acc = one
        for _ in range(fac.root_exponent % 4):
            acc = acc * field.i()
        for (a, b), e in fac.exponents.items():
            p = GaussianRational(Rat(a), Rat(b))
            q = p if e > 0 else 1 / p
            for _ in range(abs(e)):
                acc = acc * q
        return acc
    acc = field.from_int(-1 if fac.root_exponent % 2 else 1)
    for p, e in fac.exponents.items():
        pe = field.from_int(p) if e > 0 else 1 / field.from_int(p)
        for _ in range(abs(e)):
            acc = acc * pe
    return acc


def _gcd_int(a, b):
    from math import gcd

    return gcd(a, b)


def normalize_unit_vector(field, vec):
    """A canonical scalar multiple of a nonzero vector: entries are
    (Gaussian) integers with trivial common factor, and the first nonzero
    entry is sign- (resp. i-power-) normalized.  Returns (newvec, factor)
    with newvec = factor * vec."""
    nz = [x for x in vec if x]
    assert nz, "cannot normalize the zero vector"
    if field.tag == "Qi":
        dens = []
        for x in vec:
            x = field.coerce(x)
            dens.append(int(x.re.denominator))
            dens.append(int(x.im.denominator))
        L = 1
        for d in dens:
            L = L * d // _gcd_int(L, d)
        ints = []
        for x in vec:
            x = field.coerce(x)
            ints.append((int(x.re * L), int(x.im * L)))
        g = (0, 0)
        for p in ints:
            if p != (0, 0):
                g = p if g == (0, 0) else g_gcd(g, p)
        # scale = L / g, then unit-normalize the first nonzero entry
        ints = [g_divmod(p, g)[0] for p in ints]
        first = next(p for p in ints if p != (0, 0))
        k, _ = g_canonical(first)
        factor = GaussianRational(Rat(g[0]), Rat(g[1]))
        scale = GaussianRational(Rat(L)) / factor
        for _ in range((-k) % 4):
            scale = scale * field.i()
        return [field.coerce(x) * scale for x in vec], scale
    dens = [int(field.coerce(x).denominator) for x in vec]
    L = 1
    for d in dens:
        L = L * d // _gcd_int(L, d)
    ints = [int(field.coerce(x) * L) for x in vec]
    g = 0
    for v in ints:
        g = _gcd_int(g, abs(v))
    first = next(v for v in ints if v)
    sgn = -1 if first < 0 else 1
    scale = Rat(L * sgn, g)
    return [field.coerce(x) * scale for x in vec], scale

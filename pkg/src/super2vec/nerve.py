"""Combinatorial nerves and their exact integer / modular cohomology.

A Nerve is a finite simplicial complex (dimension <= 3) with totally
ordered vertices, standing in for an open cover and its intersections;
every intersection is modeled connected.  Cohomology is computed from the
simplicial coboundary matrices via Smith normal form, with exact
coboundary-membership testers over Z and Z/m.
"""

from __future__ import annotations

from itertools import combinations

from .smith import (
    columns,
    mat_mul_int,
    mat_vec_int,
    smith_normal_form,
    solve_integer,
    solve_mod,
    kernel_lattice_mod,
)

MAX_DIM = 3


class NerveError(ValueError):
    pass


class Nerve:
    """A simplicial complex with strictly increasing vertex tuples, closed
    under faces, dimension capped at 3."""

    __slots__ = ("vertices", "simplices", "index")

    def __init__(self, maximal_simplices):
        simp = {k: set() for k in range(MAX_DIM + 1)}
        for s in maximal_simplices:
            s = tuple(s)
            if any(not isinstance(v, int) for v in s):
                raise NerveError(f"non-integer vertex in simplex {s}")
            if list(s) != sorted(set(s)):
                raise NerveError(f"vertices not strictly increasing in {s}")
            if len(s) - 1 > MAX_DIM:
                raise NerveError(f"simplex {s} exceeds dimension {MAX_DIM}")
            for k in range(1, len(s) + 1):
                for face in combinations(s, k):
                    simp[k - 1].add(face)
        self.simplices = {k: sorted(simp[k]) for k in range(MAX_DIM + 1)}
        self.vertices = [s[0] for s in self.simplices[0]]
        if not self.vertices:
            raise NerveError("empty nerve")
        self.index = {
            k: {s: i for i, s in enumerate(self.simplices[k])}
            for k in range(MAX_DIM + 1)
        }

    def dim_count(self, k):
        return len(self.simplices.get(k, []))

    def edges(self):
        return self.simplices[1]

    def triangles(self):
        return self.simplices[2]

    def tetrahedra(self):
        return self.simplices[3]

    def components(self):
        """Connected components as sorted lists of vertices."""
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in self.simplices[1]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(sorted(g) for g in groups.values())

    def coboundary_matrix(self, k):
        """Integer matrix of d_k : C^k -> C^{k+1},
        (d c)(s) = sum_i (-1)^i c(s with vertex i removed)."""
        rows = []
        src = self.index[k]
        for s in self.simplices[k + 1]:
            row = [0] * len(self.simplices[k])
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                row[src[face]] += (-1) ** i
            rows.append(row)
        return rows

    def __eq__(self, other):
        return isinstance(other, Nerve) and self.simplices == other.simplices

    def __repr__(self):
        counts = [self.dim_count(k) for k in range(MAX_DIM + 1)]
        return f"Nerve(f-vector {counts})"


# ---------------------------------------------------------------------------
# standard nerves


def rp2_nerve():
    """The 6-vertex triangulation of the real projective plane (antipodal
    quotient of the icosahedron)."""
    faces = [
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
    ]
    return Nerve(faces)


def torus_nerve():
    """The 7-vertex triangulation of the torus on the complete graph K7."""
    faces = []
    for i in range(7):
        faces.append(tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))))
        faces.append(tuple(sorted(((i) % 7, (i + 2) % 7, (i + 3) % 7))))
    return Nerve(faces)


def circle_nerve(n):
    """An n-vertex triangulation of the circle."""
    assert n >= 3
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return Nerve(edges)


def sphere_nerve(n):
    """The boundary of the (n+1)-simplex: an n-sphere, n <= 3."""
    assert 1 <= n <= MAX_DIM
    verts = tuple(range(n + 2))
    return Nerve(combinations(verts, n + 1))


# ---------------------------------------------------------------------------
# integer chain complexes and cohomology


class IntegerChainComplex:
    """Coboundary matrices d_k : C^k -> C^{k+1}, with d o d = 0 verified."""

    __slots__ = ("dims", "d")

    def __init__(self, dims, d):
        self.dims = list(dims)          # dims[k] = rank of C^k
        self.d = {k: m for k, m in d.items()}
        for k in sorted(self.d):
            if k + 1 in self.d and self.d[k] and self.d[k + 1]:
                comp = mat_mul_int(self.d[k + 1], self.d[k])
                assert all(all(x == 0 for x in row) for row in comp), (
                    f"d_{k+1} o d_{k} != 0"
                )

    @classmethod
    def from_nerve(cls, nerve):
        dims = [nerve.dim_count(k) for k in range(MAX_DIM + 1)]
        d = {k: nerve.coboundary_matrix(k) for k in range(MAX_DIM)}
        return cls(dims, d)

    def matrix(self, k):
        if k in self.d:
            return self.d[k]
        return [[0] * self.dims[k] for _ in range(0)] if k < len(self.dims) else []


def _unimodular_inverse(U):
    n = len(U)
    aug = [row[:] + [1 if i == j else 0 for j in range(n)]
           for i, row in enumerate(U)]
    # integer Gauss-Jordan via SNF machinery is overkill; U is unimodular so
    # fraction-free elimination with exact division works via adjugate route:
    from fractions import Fraction

    M = [[Fraction(x) for x in row] for row in aug]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c])
        M[c], M[piv] = M[piv], M[c]
        f = M[c][c]
        M[c] = [x / f for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                g = M[r][c]
                M[r] = [a - g * b for a, b in zip(M[r], M[c])]
    inv = [[int(x) for x in row[n:]] for row in M]
    return inv


class Cohomology:
    """H^degree of an integer chain complex with Z or Z/m coefficients.

    factors: invariant-factor orders of the group (0 = infinite cyclic);
    representatives: one cocycle vector per factor;
    coboundary_witness(c): a cochain x with d x = c (over the coefficient
    ring), or None; raises on non-cocycle input."""

    __slots__ = ("complex", "degree", "modulus", "factors", "representatives",
                 "_dn", "_dprev", "_ncols")

    def __init__(self, cx: IntegerChainComplex, degree, modulus=0):
        n = cx.dims[degree]
        dn = cx.d.get(degree)
        if dn is None or not dn:
            dn = [[0] * n]  # no higher simplices: everything is a cocycle
        dprev = cx.d.get(degree - 1)
        if degree == 0 or dprev is None:
            dprev = [[0] * 0 for _ in range(n)]  # zero map from rank-0 C^{-1}
        self.complex = cx
        self.degree = degree
        self.modulus = modulus
        self._dn = dn
        self._dprev = dprev
        self._ncols = n
        if modulus == 0:
            self._compute_integral()
        else:
            self._compute_modular()

    # -- construction -----------------------------------------------------

    def _kernel_columns_integral(self):
        diag, _U, V = smith_normal_form(self._dn)
        Vcols = columns(V)
        kern = [Vcols[k] for k in range(self._ncols)
                if k >= len(diag) or diag[k] == 0]
        return kern

    def _compute_integral(self):
        kern = self._kernel_columns_integral()
        r = len(kern)
        if r == 0:
            self.factors = []
            self.representatives = []
            return
        K = [[kern[j][i] for j in range(r)] for i in range(self._ncols)]
        # image generators of d_{degree-1} expressed in kernel coordinates
        gens = columns(self._dprev)
        R = []
        for g in gens:
            sol = solve_integer(K, g)
            assert sol is not None, "image is not inside the kernel"
            R.append(sol[0])
        Rmat = [[row[i] for row in R] for i in range(r)] if R else [
            [0] * 0 for _ in range(r)
        ]
        if not R:
            diag, U = [], [[1 if i == j else 0 for j in range(r)]
                           for i in range(r)]
        else:
            diag, U, _V = smith_normal_form(Rmat)
        Uinv = _unimodular_inverse(U)
        ucols = columns(Uinv)
        factors = []
        reps = []
        for k in range(r):
            d = diag[k] if k < len(diag) else 0
            if d == 1:
                continue
            factors.append(d)
            vec = mat_vec_int(K, ucols[k])
            reps.append(vec)
        self.factors = factors
        self.representatives = reps

    def _compute_modular(self):
        m = self.modulus
        n = self._ncols
        L = kernel_lattice_mod(self._dn, m)   # n generators, contains m Z^n
        K = [[L[j][i] for j in range(n)] for i in range(n)]
        gens = columns(self._dprev) + [
            [m if i == j else 0 for i in range(n)] for j in range(n)
        ]
        R = []
        for g in gens:
            sol = solve_integer(K, g)
            assert sol is not None, "subgroup generator escapes the kernel lattice"
            R.append(sol[0])
        Rmat = [[row[i] for row in R] for i in range(n)]
        diag, U, _V = smith_normal_form(Rmat)
        Uinv = _unimodular_inverse(U)
        ucols = columns(Uinv)
        factors = []
        reps = []
        for k in range(n):
            d = diag[k] if k < len(diag) else 0
            assert d != 0, "modular cohomology must be finite"
            if d == 1:
                continue
            factors.append(d)
            reps.append([x % m for x in mat_vec_int(K, ucols[k])])
        self.factors = factors
        self.representatives = reps

    # -- queries ----------------------------------------------------------

    def is_cocycle(self, c):
        v = mat_vec_int(self._dn, list(c))
        if self.modulus:
            return all(x % self.modulus == 0 for x in v)
        return all(x == 0 for x in v)

    def coboundary_witness(self, c):
        """x with d_{degree-1} x = c over the coefficient ring, or None."""
        c = list(c)
        if not self.is_cocycle(c):
            raise NerveError("input is not a cocycle")
        if self.modulus:
            return solve_mod(self._dprev, c, self.modulus)
        sol = solve_integer(self._dprev, c)
        return None if sol is None else sol[0]

    def same_class(self, c1, c2):
        diff = [a - b for a, b in zip(c1, c2)]
        return self.coboundary_witness(diff) is not None

    def order(self):
        from math import prod

        if any(f == 0 for f in self.factors):
            return 0
        return prod(self.factors) if self.factors else 1


def cohomology(cx, degree, modulus=0):
    """Cohomology of a nerve or chain complex; modulus 0 means Z."""
    if isinstance(cx, Nerve):
        cx = IntegerChainComplex.from_nerve(cx)
    return Cohomology(cx, degree, modulus)


# ---------------------------------------------------------------------------
# abelian cochains


class AbelianCochain:
    """A cochain on a nerve with Z (modulus 0) or Z/m integer values."""

    __slots__ = ("nerve", "degree", "modulus", "values")

    def __init__(self, nerve, degree, modulus, values=None):
        self.nerve = nerve
        self.degree = degree
        self.modulus = modulus
        vals = {}
        if values:
            for s, v in values.items():
                s = tuple(s)
                if s not in nerve.index[degree]:
                    raise NerveError(f"unknown {degree}-simplex {s}")
                vals[s] = v % modulus if modulus else v
        self.values = {
            s: vals.get(s, 0) for s in nerve.simplices[degree]
        }

    @classmethod
    def zero(cls, nerve, degree, modulus):
        return cls(nerve, degree, modulus)

    def __getitem__(self, s):
        return self.values[tuple(s)]

    def vector(self):
        return [self.values[s] for s in self.nerve.simplices[self.degree]]

    @classmethod
    def from_vector(cls, nerve, degree, modulus, vec):
        vals = dict(zip(nerve.simplices[degree], vec))
        return cls(nerve, degree, modulus, vals)

    def _like(self, vec):
        return AbelianCochain.from_vector(
            self.nerve, self.degree, self.modulus, vec
        )

    def add(self, other):
        assert (self.nerve, self.degree, self.modulus) == (
            other.nerve, other.degree, other.modulus
        )
        return self._like([a + b for a, b in zip(self.vector(), other.vector())])

    def neg(self):
        return self._like([-a for a in self.vector()])

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, f):
        return self._like([f * a for a in self.vector()])

    def coboundary(self):
        mat = self.nerve.coboundary_matrix(self.degree)
        vec = mat_vec_int(mat, self.vector())
        return AbelianCochain.from_vector(
            self.nerve, self.degree + 1, self.modulus, vec
        )

    def is_cocycle(self):
        m = self.modulus
        vec = self.coboundary().vector()
        return all((v % m if m else v) == 0 for v in vec)

    def is_zero(self):
        return all(v == 0 for v in self.vector())

    def __eq__(self, other):
        return (
            isinstance(other, AbelianCochain)
            and self.degree == other.degree
            and self.modulus == other.modulus
            and self.values == other.values
        )

    def __repr__(self):
        tag = "Z" if self.modulus == 0 else f"Z/{self.modulus}"
        return f"AbelianCochain(deg {self.degree}, {tag}, {self.values})"


def cup_product(a: AbelianCochain, b: AbelianCochain):
    """Alexander-Whitney cup product on ordered simplices:
    (a u b)(v_0..v_{p+q}) = a(v_0..v_p) * b(v_p..v_{p+q})."""
    assert a.nerve is b.nerve or a.nerve == b.nerve
    assert a.modulus == b.modulus
    p, q = a.degree, b.degree
    deg = p + q
    if deg > MAX_DIM:
        raise NerveError("cup product degree exceeds the nerve dimension cap")
    vals = {}
    for s in a.nerve.simplices.get(deg, []):
        front = s[: p + 1]
        back = s[p:]
        vals[s] = a.values.get(front, 0) * b.values.get(back, 0)
    return AbelianCochain(a.nerve, deg, a.modulus, vals)


def bockstein(c: AbelianCochain):
    """Connecting map for 0 -> Z -m-> Z -> Z/m -> 0: lift, take the integer
    coboundary, divide by m.  Input must be a Z/m cocycle."""
    m = c.modulus
    assert m > 0, "bockstein requires Z/m coefficients"
    if not c.is_cocycle():
        raise NerveError("bockstein input is not a cocycle")
    lift = AbelianCochain.from_vector(c.nerve, c.degree, 0, c.vector())
    delta = lift.coboundary().vector()
    assert all(v % m == 0 for v in delta)
    return AbelianCochain.from_vector(
        c.nerve, c.degree + 1, 0, [v // m for v in delta]
    )

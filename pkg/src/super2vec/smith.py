"""Smith normal form and exact integer / mod-m linear solving.

Matrices here are plain lists of int rows.  Sizes are small (coboundary
matrices of combinatorial nerves), so the textbook algorithm is fine.
"""

from __future__ import annotations

from math import gcd


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """Return (diag, U, V) with U*A*V in Smith form.

    U (nrows x nrows) and V (ncols x ncols) are unimodular; diag is the list
    of diagonal entries d_1 | d_2 | ..., nonnegative, zeros trailing.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    M = [row[:] for row in A]
    U = _identity(nrows)
    V = _identity(ncols)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        # row dst += f * row src
        M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for row in M:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    def negate_row(i):
        M[i] = [-a for a in M[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(nrows, ncols):
        # find a nonzero entry of smallest absolute value in M[t:, t:]
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        # clear row and column t; restart if a remainder shrinks the pivot
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nrows):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    add_row(t, i, -q)
                    if M[i][t]:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, ncols):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    add_col(t, j, -q)
                    if M[t][j]:
                        swap_cols(j, t)
                        dirty = True
        if M[t][t] < 0:
            negate_row(t)
        # enforce divisibility: pivot must divide every later entry
        ok = True
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if M[i][j] % M[t][t]:
                    add_row(i, t, 1)
                    ok = False
                    break
            if not ok:
                break
        if ok:
            t += 1

    diag = [M[k][k] for k in range(min(nrows, ncols))]
    return diag, U, V


def mat_vec_int(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def mat_mul_int(A, B):
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        orow = [0] * ncols
        for k, f in enumerate(row):
            if f:
                for c in range(ncols):
                    orow[c] += f * B[k][c]
        out.append(orow)
    return out


def columns(A):
    if not A:
        return []
    return [[row[c] for row in A] for c in range(len(A[0]))]


def solve_integer(A, b):
    """Solve A x = b over the integers.

    Returns (x, kernel_basis) or None if no integer solution exists.
    kernel_basis spans the integer kernel lattice of A.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    diag, U, V = smith_normal_form(A)
    c = mat_vec_int(U, b)
    y = [0] * ncols
    for k in range(min(nrows, ncols)):
        d = diag[k]
        if d:
            if c[k] % d:
                return None
            y[k] = c[k] // d
        elif c[k]:
            return None
    for k in range(min(nrows, ncols), nrows):
        if c[k]:
            return None
    x = mat_vec_int(V, y)
    Vcols = columns(V)
    kernel = [Vcols[k] for k in range(ncols) if k >= len(diag) or diag[k] == 0]
    return x, kernel


def solve_mod(A, b, m):
    """Solve A x = b (mod m) over Z/m.  Returns x (ints in [0, m)) or None."""
    assert m > 0
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    diag, U, V = smith_normal_form(A)
    c = [v % m for v in mat_vec_int(U, b)]
    y = [0] * ncols
    for k in range(nrows):
        ck = c[k]
        d = diag[k] if k < len(diag) else 0
        if d == 0:
            if ck % m:
                return None
            continue
        g = gcd(d, m)
        if ck % g:
            return None
        # solve d*y = ck mod m
        mm = m // g
        y[k] = (ck // g) * pow(d // g, -1, mm) % mm
    x = [v % m for v in mat_vec_int(V, y)]
    return x


def kernel_lattice_mod(A, m):
    """Basis of {x in Z^n : A x = 0 (mod m)} as a sublattice of Z^n.

    The lattice contains m*Z^n, so the basis is square (n vectors)."""
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    diag, U, V = smith_normal_form(A)
    Vcols = columns(V)
    basis = []
    for k in range(ncols):
        d = diag[k] if k < len(diag) else 0
        g = gcd(d, m) if d else m
        f = m // g  # smallest multiple of V_k in the lattice
        basis.append([f * v for v in Vcols[k]])
    return basis

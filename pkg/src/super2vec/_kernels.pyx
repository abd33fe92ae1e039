# cython: language_level=3, boundscheck=False
"""Compiled twin of _kernels_py: exact row reduction with C loop indices.

Entries stay Python objects (Fraction / GaussianRational) so the arithmetic
is still exact; the win is the loop and list-indexing overhead, which
dominates for the large eliminations in the Morita machinery.
"""

BACKEND = "cython"


def rref(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t piv_r = 0, n_rows = len(rows)
    cdef Py_ssize_t col, r, c, sel
    cdef list prow, row
    pivots = []
    for col in range(ncols):
        sel = -1
        for r in range(piv_r, n_rows):
            if (<list>rows[r])[col]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            rows[piv_r], rows[sel] = rows[sel], rows[piv_r]
        prow = <list>rows[piv_r]
        p = prow[col]
        if p != 1:
            inv = 1 / p
            for c in range(col, ncols):
                if prow[c]:
                    prow[c] = prow[c] * inv
        for r in range(n_rows):
            if r == piv_r:
                continue
            f = (<list>rows[r])[col]
            if f:
                row = <list>rows[r]
                for c in range(col, ncols):
                    if prow[c]:
                        row[c] = row[c] - f * prow[c]
        pivots.append(col)
        piv_r += 1
        if piv_r == n_rows:
            break
    return rows[:piv_r], pivots


def rref_with_transform(list rows, Py_ssize_t ncols, list trans):
    cdef Py_ssize_t piv_r = 0, n_rows = len(rows)
    cdef Py_ssize_t col, r, c, sel, tcols
    cdef list prow, row, trow, tr
    pivots = []
    tcols = len(<list>trans[0]) if trans else 0
    for col in range(ncols):
        sel = -1
        for r in range(piv_r, n_rows):
            if (<list>rows[r])[col]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            rows[piv_r], rows[sel] = rows[sel], rows[piv_r]
            trans[piv_r], trans[sel] = trans[sel], trans[piv_r]
        prow = <list>rows[piv_r]
        trow = <list>trans[piv_r]
        p = prow[col]
        if p != 1:
            inv = 1 / p
            for c in range(col, ncols):
                if prow[c]:
                    prow[c] = prow[c] * inv
            for c in range(tcols):
                if trow[c]:
                    trow[c] = trow[c] * inv
        for r in range(n_rows):
            if r == piv_r:
                continue
            f = (<list>rows[r])[col]
            if f:
                row = <list>rows[r]
                tr = <list>trans[r]
                for c in range(col, ncols):
                    if prow[c]:
                        row[c] = row[c] - f * prow[c]
                for c in range(tcols):
                    if trow[c]:
                        tr[c] = tr[c] - f * trow[c]
        pivots.append(col)
        piv_r += 1
        if piv_r == n_rows:
            break
    return rows, pivots


def mat_mul(list a, list b, Py_ssize_t ncols_b, zero):
    cdef Py_ssize_t k, c
    cdef list arow, brow, orow
    out = []
    for arow in a:
        orow = [zero] * ncols_b
        for k in range(len(arow)):
            f = arow[k]
            if f:
                brow = <list>b[k]
                for c in range(ncols_b):
                    if brow[c]:
                        orow[c] = orow[c] + f * brow[c]
        out.append(orow)
    return out

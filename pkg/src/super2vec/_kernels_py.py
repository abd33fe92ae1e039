"""Pure-python exact row reduction kernels.

These are the hot loops of the whole package: everything from solving linear
systems to splitting modules funnels through reduced row echelon form over an
exact field.  A compiled twin of this module (``_kernels``) is built with
Cython when available; ``backend`` picks whichever imports.

Entries are Fraction or GaussianRational objects; the kernels only use
``+ - * /``, equality with 0, and truthiness, so they are field-agnostic.
Rows are plain lists and are mutated in place.
"""

BACKEND = "python"


def rref(rows, ncols):
    """Reduce rows in place to reduced row echelon form.

    Returns (reduced_rows, pivot_cols).  Zero rows are dropped, pivots are
    normalized to 1 and cleared above as well as below.
    """
    pivots = []
    piv_r = 0
    n_rows = len(rows)
    for col in range(ncols):
        sel = -1
        for r in range(piv_r, n_rows):
            if rows[r][col]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            rows[piv_r], rows[sel] = rows[sel], rows[piv_r]
        prow = rows[piv_r]
        p = prow[col]
        if p != 1:
            inv = 1 / p
            for c in range(col, ncols):
                if prow[c]:
                    prow[c] = prow[c] * inv
        for r in range(n_rows):
            if r == piv_r:
                continue
            f = rows[r][col]
            if f:
                row = rows[r]
                for c in range(col, ncols):
                    if prow[c]:
                        row[c] = row[c] - f * prow[c]
        pivots.append(col)
        piv_r += 1
        if piv_r == n_rows:
            break
    return rows[:piv_r], pivots


def rref_with_transform(rows, ncols, trans):
    """Like rref, but carries a transform matrix through the same row ops.

    ``trans`` has one row per input row; on return trans[:rank] expresses the
    echelon rows as combinations of the originals and trans[rank:] spans the
    left kernel.  Returns (reduced_rows, pivot_cols, trans).
    """
    pivots = []
    piv_r = 0
    n_rows = len(rows)
    tcols = len(trans[0]) if trans else 0
    for col in range(ncols):
        sel = -1
        for r in range(piv_r, n_rows):
            if rows[r][col]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            rows[piv_r], rows[sel] = rows[sel], rows[piv_r]
            trans[piv_r], trans[sel] = trans[sel], trans[piv_r]
        prow = rows[piv_r]
        trow = trans[piv_r]
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
            f = rows[r][col]
            if f:
                row = rows[r]
                tr = trans[r]
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


def mat_mul(a, b, ncols_b, zero):
    """Dense matrix product of list-of-list matrices."""
    out = []
    for arow in a:
        orow = [zero] * ncols_b
        for k, f in enumerate(arow):
            if f:
                brow = b[k]
                for c in range(ncols_b):
                    if brow[c]:
                        orow[c] = orow[c] + f * brow[c]
        out.append(orow)
    return out

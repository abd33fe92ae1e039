"""Canonical-map constructions shared by the bimodule and acceptance tests.

Each helper *constructs* the map named by the structural identity, then
validates it as an (even, invertible where claimed) intertwiner — the
return value is the checked Intertwiner, so a successful call is the
verification.
"""

from super2vec.bimodule import Intertwiner, hom_twist, parity_flip, rel_tensor
from super2vec.linalg import Matrix


def _descend(rel, plain_cols, target, invertible=True):
    """Intertwiner from rel.bimodule given images of the plain basis.

    plain_cols[p] is the target-coordinates image of plain basis vector p;
    the map must kill the middle-action relations, which is verified by
    checking that it factors exactly through the projection."""
    field = rel.bimodule.field
    W = Matrix.from_columns(field, plain_cols, target.dim)
    T = W * rel.section
    if T * rel.projection != W:
        raise AssertionError("plain map does not descend through rel tensor")
    out = Intertwiner(rel.bimodule, target, T, check=True)
    if invertible and not out.is_invertible():
        raise AssertionError("descended map is not invertible")
    return out


def compositor(A, phi, psi):
    """c_{phi,psi}: A_psi (x)_A A_phi -> A_{psi o phi}, x (x) y -> x psi(y)."""
    Mpsi = hom_twist(A, psi)
    Mphi = hom_twist(A, phi)
    rel = rel_tensor(Mpsi, Mphi, check=False)
    target = hom_twist(A, psi.compose(phi))
    cols = [None] * rel.plain_space.dim
    for (i, j), p in rel.pair_index.items():
        cols[p] = A.mul(A.basis_vector(i), psi(A.basis_vector(j)))
    return _descend(rel, cols, target)


def coherence_square_holds(A, phi, psi, tau):
    """The compositor coherence square on plain triple basis vectors:
    both composites send x (x) y (x) z to x tau(y) (tau o psi)(z)."""
    for i in range(A.dim):
        for j in range(A.dim):
            for k in range(A.dim):
                x = A.basis_vector(i)
                y = A.basis_vector(j)
                z = A.basis_vector(k)
                # right-then-bottom: id (x) c_{phi,psi} then c_{psi o phi,tau}
                inner = A.mul(y, psi(z))
                path1 = A.mul(x, tau(inner))
                # left-then-bottom: c_{psi,tau} (x) id then c_{phi,tau o psi}
                path2 = A.mul(A.mul(x, tau(y)), tau.compose(psi)(z))
                if path1 != path2:
                    return False
    return True


def sign_identity_flip_right(M, N):
    """Identity map M (x)_B (Pi N) -> Pi (M (x)_B N), as an intertwiner."""
    PN = parity_flip(N)
    src = rel_tensor(M, PN, check=False)
    base = rel_tensor(M, N, check=False)
    target = parity_flip(base.bimodule)
    permN = N.carrier.flip_permutation()          # N index -> Pi N index
    permQ = base.bimodule.carrier.flip_permutation()
    field = M.field
    zero = field.zero()
    cols = [None] * src.plain_space.dim
    for (i, jp), p in src.pair_index.items():
        j = next(a for a, b in permN.items() if b == jp)
        v = base.projection.column(base.pair_index[(i, j)])
        w = [zero] * target.dim
        for r, c in enumerate(v):
            w[permQ[r]] = c
        cols[p] = w
    return _descend(src, cols, target)


def sign_identity_flip_left(M, N):
    """(Pi M) (x)_B N -> Pi (M (x)_B N), x (x) y -> (-1)^{|y|} x (x) y."""
    PM = parity_flip(M)
    src = rel_tensor(PM, N, check=False)
    base = rel_tensor(M, N, check=False)
    target = parity_flip(base.bimodule)
    permM = M.carrier.flip_permutation()
    permQ = base.bimodule.carrier.flip_permutation()
    field = M.field
    zero = field.zero()
    cols = [None] * src.plain_space.dim
    for (ip, j), p in src.pair_index.items():
        i = next(a for a, b in permM.items() if b == ip)
        sign = field.from_int(-1 if N.carrier.parity(j) else 1)
        v = base.projection.column(base.pair_index[(i, j)])
        w = [zero] * target.dim
        for r, c in enumerate(v):
            w[permQ[r]] = sign * c
        cols[p] = w
    return _descend(src, cols, target)


def associator(M, N, P):
    """(M (x) N) (x) P -> M (x) (N (x) P) descended from the plain identity."""
    relMN = rel_tensor(M, N, check=False)
    relL = rel_tensor(relMN.bimodule, P, check=False)
    relNP = rel_tensor(N, P, check=False)
    relR = rel_tensor(M, relNP.bimodule, check=False)
    field = M.field
    zero = field.zero()
    dM, dN, dP = M.dim, N.dim, P.dim
    # images of triple basis vectors in both iterated quotients
    left_cols = []
    right_cols = []
    for i in range(dM):
        for j in range(dN):
            for k in range(dP):
                vmn = relMN.projection.column(relMN.pair_index[(i, j)])
                lv = [zero] * relL.bimodule.dim
                for r, c in enumerate(vmn):
                    if c:
                        col = relL.projection.column(relL.pair_index[(r, k)])
                        lv = [a + c * b for a, b in zip(lv, col)]
                left_cols.append(lv)
                vnp = relNP.projection.column(relNP.pair_index[(j, k)])
                rv = [zero] * relR.bimodule.dim
                for s, c in enumerate(vnp):
                    if c:
                        col = relR.projection.column(relR.pair_index[(i, s)])
                        rv = [a + c * b for a, b in zip(rv, col)]
                right_cols.append(rv)
    L = Matrix.from_columns(field, left_cols, relL.bimodule.dim)
    R = Matrix.from_columns(field, right_cols, relR.bimodule.dim)
    # the left projection from the triple plain space admits a section
    # assembled from the two step sections
    sect_cols = []
    for q in range(relL.bimodule.dim):
        s2 = relL.section.column(q)            # pairs (r, k)
        triple = [zero] * (dM * dN * dP)
        for (r, k), p2 in relL.pair_index.items():
            c2 = s2[p2]
            if not c2:
                continue
            s1 = relMN.section.column(r)       # pairs (i, j)
            for (i, j), p1 in relMN.pair_index.items():
                c1 = s1[p1]
                if c1:
                    triple[(i * dN + j) * dP + k] += c2 * c1
        sect_cols.append(triple)
    S = Matrix.from_columns(field, sect_cols, dM * dN * dP)
    X = R * S
    if X * L != R:
        raise AssertionError("associator does not descend")
    out = Intertwiner(relL.bimodule, relR.bimodule, X, check=True)
    if not out.is_invertible():
        raise AssertionError("associator is not invertible")
    return out

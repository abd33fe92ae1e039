"""Super vector spaces and parity-graded linear maps."""

from __future__ import annotations

from .linalg import Matrix
from .scalars import Field


class SuperVectorSpace:
    """A finite-dimensional Z2-graded vector space with labeled basis.

    Even basis labels come first, then odd ones; this ordering is an
    invariant relied on everywhere (block structure of graded maps).
    """

    __slots__ = ("field", "even_dim", "odd_dim", "labels")

    def __init__(self, field: Field, labels):
        # labels: list of (label, parity) with all parity-0 before parity-1
        self.field = field
        self.labels = [(str(l), int(p)) for l, p in labels]
        seen_odd = False
        even = odd = 0
        for _, p in self.labels:
            assert p in (0, 1), "parity must be 0 or 1"
            if p == 1:
                seen_odd = True
                odd += 1
            else:
                assert not seen_odd, "even labels must precede odd labels"
                even += 1
        self.even_dim = even
        self.odd_dim = odd

    @classmethod
    def make(cls, field, even_labels, odd_labels):
        return cls(field, [(l, 0) for l in even_labels] + [(l, 1) for l in odd_labels])

    @property
    def dim(self):
        return self.even_dim + self.odd_dim

    def parity(self, i):
        return 0 if i < self.even_dim else 1

    def parities(self):
        return [0] * self.even_dim + [1] * self.odd_dim

    def zero_vector(self):
        return [self.field.zero()] * self.dim

    def basis_vector(self, i):
        v = self.zero_vector()
        v[i] = self.field.one()
        return v

    def flip(self):
        """The parity-reversed space Pi V (labels reordered odd-first->even)."""
        odd = [(l, 0) for l, p in self.labels if p == 1]
        even = [(l, 1) for l, p in self.labels if p == 0]
        return SuperVectorSpace(self.field, odd + even)

    def flip_permutation(self):
        """index map old->new under flip(): odd block moves to the front."""
        perm = {}
        for i in range(self.even_dim):
            perm[i] = self.odd_dim + i
        for i in range(self.odd_dim):
            perm[self.even_dim + i] = i
        return perm

    def vector_parity(self, v):
        """Parity of a homogeneous vector, or None if mixed / zero."""
        has = [False, False]
        for i, x in enumerate(v):
            if x:
                has[self.parity(i)] = True
        if has[0] and has[1]:
            return None
        if has[0]:
            return 0
        if has[1]:
            return 1
        return None

    def same_shape(self, other):
        return (
            self.field == other.field
            and self.even_dim == other.even_dim
            and self.odd_dim == other.odd_dim
        )

    def __eq__(self, other):
        return (
            isinstance(other, SuperVectorSpace)
            and self.field == other.field
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.field, tuple(self.labels)))

    def __repr__(self):
        return f"SuperVectorSpace({self.even_dim}|{self.odd_dim} over {self.field.tag})"


def tensor_space(V: SuperVectorSpace, W: SuperVectorSpace, sep="*"):
    """Tensor product space with basis pairs sorted even-first.

    Returns (space, index_of) where index_of[(i, j)] is the position of
    v_i (x) w_j in the new ordering.
    """
    assert V.field == W.field
    pairs = [(i, j) for i in range(V.dim) for j in range(W.dim)]
    pairs.sort(key=lambda ij: ((V.parity(ij[0]) + W.parity(ij[1])) % 2, ij))
    labels = []
    index_of = {}
    for pos, (i, j) in enumerate(pairs):
        p = (V.parity(i) + W.parity(j)) % 2
        labels.append((f"{V.labels[i][0]}{sep}{W.labels[j][0]}", p))
        index_of[(i, j)] = pos
    return SuperVectorSpace(V.field, labels), index_of


class GradedMap:
    """A homogeneous linear map between super vector spaces."""

    __slots__ = ("source", "target", "matrix", "parity")

    def __init__(self, source, target, matrix, parity=0, check=True):
        assert source.field == target.field
        if not isinstance(matrix, Matrix):
            matrix = Matrix(source.field, matrix, ncols=source.dim)
        assert matrix.nrows == target.dim and matrix.ncols == source.dim, (
            "matrix shape does not match source/target dimensions"
        )
        self.source = source
        self.target = target
        self.matrix = matrix
        self.parity = parity
        if check:
            self._check_blocks()

    def _check_blocks(self):
        for r in range(self.target.dim):
            for c in range(self.source.dim):
                if self.matrix.rows[r][c]:
                    if (self.target.parity(r) + self.source.parity(c)) % 2 != self.parity:
                        raise ValueError(
                            f"entry ({r},{c}) violates declared parity {self.parity}"
                        )

    @classmethod
    def identity(cls, V):
        return cls(V, V, Matrix.identity(V.field, V.dim), 0, check=False)

    def __call__(self, vec):
        return self.matrix.apply(vec)

    def compose(self, other):
        """self after other."""
        assert other.target.same_shape(self.source)
        return GradedMap(
            other.source,
            self.target,
            self.matrix * other.matrix,
            (self.parity + other.parity) % 2,
            check=False,
        )

    def inverse(self):
        inv = self.matrix.inverse()
        if inv is None:
            return None
        return GradedMap(self.target, self.source, inv, self.parity, check=False)

    def is_invertible(self):
        return self.matrix.is_invertible()

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.parity == other.parity
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.parity, self.matrix))

    def __repr__(self):
        return f"GradedMap({self.source!r} -> {self.target!r}, parity {self.parity})"

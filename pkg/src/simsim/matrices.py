"""Dense exact matrices and exact linear algebra.

All arithmetic is exact over a base field from :mod:`simsim.fields`.
Matrix indexing in Python code is 0-based; the operations that mirror the
text formats (pivot sets, minor index subsets) speak 1-based, which is the
convention of every external format in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations

from ._elim import reduce_against, rref_sparse
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    ShapeMismatch,
    SingularMatrix,
    SubsetShapeMismatch,
)


class ExactMatrix:
    """Dense matrix over an exact field.

    Entries are stored row-major as field values.  Instances are treated as
    immutable: all operations return new matrices.
    """

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, entries):
        self.field = field
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        self.entries = entries

    @classmethod
    def from_rows(cls, field, rows):
        """Build from nested sequences of ints, literal strings, or field values."""
        if not rows or not rows[0]:
            raise DegenerateInput("matrix must have at least one row and column")
        width = len(rows[0])
        ent = []
        for r in rows:
            if len(r) != width:
                raise ShapeMismatch("ragged rows")
            ent.append([_coerce(field, v) for v in r])
        return cls(field, ent)

    @classmethod
    def zeros(cls, field, rows, cols):
        if rows < 1 or cols < 1:
            raise DegenerateInput("matrix must have at least one row and column")
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        if n < 1:
            raise DegenerateInput("identity size must be positive")
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, tuple(tuple(r) for r in self.entries)))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in r) for r in self.entries)
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field!r}: [{body}])"

    def __add__(self, other):
        self._same_shape(other)
        add = self.field.add
        return ExactMatrix(
            self.field,
            [[add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __sub__(self, other):
        self._same_shape(other)
        sub = self.field.sub
        return ExactMatrix(
            self.field,
            [[sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __neg__(self):
        neg = self.field.neg
        return ExactMatrix(self.field, [[neg(a) for a in r] for r in self.entries])

    def __matmul__(self, other):
        if self.field != other.field:
            raise ShapeMismatch("matrix product across different fields")
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        bt = list(zip(*other.entries))
        out = []
        for ra in self.entries:
            out_row = []
            for cb in bt:
                acc = zero
                for a, b in zip(ra, cb):
                    acc = add(acc, mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return ExactMatrix(f, out)

    def scale(self, c):
        mul = self.field.mul
        c = _coerce(self.field, c)
        return ExactMatrix(self.field, [[mul(c, a) for a in r] for r in self.entries])

    def transpose(self):
        return ExactMatrix(self.field, [list(r) for r in zip(*self.entries)])

    def is_zero(self):
        z = self.field.is_zero
        return all(z(v) for r in self.entries for v in r)

    def is_square(self):
        return self.rows == self.cols

    def _same_shape(self, other):
        if self.field != other.field or self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch("shape or field mismatch")


def _coerce(field, v):
    if isinstance(v, int):
        return field.from_int(v)
    if isinstance(v, str):
        return field.parse(v)
    return v


@dataclass(frozen=True)
class EchelonForm:
    """A reduced row echelon form with its rank and pivot set.

    ``pivots`` are 1-based column indices, matching the external formats.
    ``sparse_rows`` holds only the nonzero rows as {0-based col: value} dicts;
    the full-shape matrix (zero rows included) is materialized on demand.
    """

    field: object
    nrows: int
    ncols: int
    rank: int
    pivots: tuple
    sparse_rows: tuple = dc_field(repr=False, default=())

    @cached_property
    def matrix(self) -> ExactMatrix:
        z = self.field.zero
        ent = []
        for row in self.sparse_rows:
            dense = [z] * self.ncols
            for k, v in row.items():
                dense[k] = v
            ent.append(dense)
        for _ in range(self.nrows - self.rank):
            ent.append([z] * self.ncols)
        return ExactMatrix(self.field, ent)

    def row_dense(self, i):
        """Dense entry list of nonzero row ``i`` (0-based, i < rank)."""
        z = self.field.zero
        dense = [z] * self.ncols
        for k, v in self.sparse_rows[i].items():
            dense[k] = v
        return dense


def _sparse_rows_of(M: ExactMatrix):
    is_zero = M.field.is_zero
    for r in M.entries:
        yield {j: v for j, v in enumerate(r) if not is_zero(v)}


def echelon_from_basis(field, basis, nrows, ncols) -> EchelonForm:
    """Package an ``rref_sparse`` basis as an :class:`EchelonForm`."""
    pivots = tuple(c + 1 for c, _ in basis)
    return EchelonForm(
        field=field,
        nrows=nrows,
        ncols=ncols,
        rank=len(basis),
        pivots=pivots,
        sparse_rows=tuple(row for _, row in basis),
    )


def rref(M: ExactMatrix) -> EchelonForm:
    """The unique reduced row echelon form of ``M`` with its pivot set."""
    basis = rref_sparse(M.field, _sparse_rows_of(M))
    return echelon_from_basis(M.field, basis, M.rows, M.cols)


def rank(M: ExactMatrix) -> int:
    return len(rref_sparse(M.field, _sparse_rows_of(M)))


def row_space_contains(E: EchelonForm, M: ExactMatrix) -> bool:
    """True iff every row of ``M`` lies in the row space described by ``E``."""
    basis = list(zip((p - 1 for p in E.pivots), E.sparse_rows))
    return all(not reduce_against(M.field, basis, row) for row in _sparse_rows_of(M))


def det(M: ExactMatrix):
    """Exact determinant by elimination with division; O(n^3)."""
    if not M.is_square():
        raise ShapeMismatch("determinant of a non-square matrix")
    f = M.field
    n = M.rows
    a = [list(r) for r in M.entries]
    sign_flip = False
    acc = f.one
    for c in range(n):
        piv = None
        for r in range(c, n):
            if not f.is_zero(a[r][c]):
                piv = r
                break
        if piv is None:
            return f.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign_flip = not sign_flip
        pv = a[c][c]
        acc = f.mul(acc, pv)
        for r in range(c + 1, n):
            if f.is_zero(a[r][c]):
                continue
            factor = f.div(a[r][c], pv)
            arow, crow = a[r], a[c]
            for k in range(c, n):
                arow[k] = f.sub(arow[k], f.mul(factor, crow[k]))
    return f.neg(acc) if sign_flip else acc


def inverse(M: ExactMatrix) -> ExactMatrix:
    """Exact inverse; raises :class:`SingularMatrix` when rank-deficient."""
    if not M.is_square():
        raise ShapeMismatch("inverse of a non-square matrix")
    f = M.field
    n = M.rows
    aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(M.entries)]
    E = rref_sparse(f, ({j: v for j, v in enumerate(row) if not f.is_zero(v)} for row in aug))
    if len(E) < n or any(c != i for i, (c, _) in enumerate(E[:n])):
        raise SingularMatrix(f"matrix of rank < {n} has no inverse")
    z = f.zero
    ent = []
    for _, row in E:
        dense = [z] * n
        for k, v in row.items():
            if k >= n:
                dense[k - n] = v
        ent.append(dense)
    return ExactMatrix(f, ent)


def minor(M: ExactMatrix, alpha, beta):
    """Determinant of the submatrix picked by 1-based index subsets.

    ``alpha`` selects rows, ``beta`` columns; both must be strictly
    increasing sequences of equal length.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if len(alpha) != len(beta):
        raise SubsetShapeMismatch("row and column subsets differ in size")
    if not alpha:
        return M.field.one
    for idx, bound in ((alpha, M.rows), (beta, M.cols)):
        if any(i < 1 or i > bound for i in idx):
            raise SubsetShapeMismatch(f"index out of range in {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise SubsetShapeMismatch(f"subset {idx} is not strictly increasing")
    sub = ExactMatrix(M.field, [[M.entries[i - 1][j - 1] for j in beta] for i in alpha])
    return det(sub)


def kron(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Kronecker product, the block matrix [a_ij * B]."""
    if A.field != B.field:
        raise ShapeMismatch("Kronecker product across different fields")
    f = A.field
    mul = f.mul
    out = []
    for ra in A.entries:
        for rb in B.entries:
            out.append([mul(a, b) for a in ra for b in rb])
    return ExactMatrix(f, out)


def vectorize(X: ExactMatrix) -> ExactMatrix:
    """Stack the columns of a square matrix into one column vector."""
    if not X.is_square():
        raise ShapeMismatch("vectorize expects a square matrix")
    col = [[X.entries[i][j]] for j in range(X.cols) for i in range(X.rows)]
    return ExactMatrix(X.field, col)


def unvectorize(v: ExactMatrix, n: int) -> ExactMatrix:
    """Inverse of :func:`vectorize` for an n*n-entry column vector."""
    if v.cols != 1 or v.rows != n * n:
        raise ShapeMismatch(f"expected an {n * n}x1 column vector")
    ent = [[v.entries[j * n + i][0] for j in range(n)] for i in range(n)]
    return ExactMatrix(v.field, ent)


def nullspace(M: ExactMatrix):
    """Canonical exact kernel basis of ``M`` (one vector per free column).

    Free variables get unit assignments in increasing column order; the
    basis size is cols - rank(M).  Vectors are returned as column matrices.
    """
    f = M.field
    E = rref(M)
    pivots0 = [p - 1 for p in E.pivots]
    pivot_pos = {c: i for i, c in enumerate(pivots0)}
    free = [j for j in range(M.cols) if j not in pivot_pos]
    basis = []
    for j in free:
        vec = [[f.zero] for _ in range(M.cols)]
        vec[j][0] = f.one
        for c, i in pivot_pos.items():
            coeff = E.sparse_rows[i].get(j)
            if coeff is not None:
                vec[c][0] = f.neg(coeff)
        basis.append(ExactMatrix(f, vec))
    return basis


def cauchy_binet_check(A: ExactMatrix, B: ExactMatrix, r: int) -> bool:
    """Verify the r-minor product expansion of A@B against direct minors.

    Pure self-test utility: returns True iff every r-minor of the product
    equals the sum over size-r column/row subsets of the paired minors of
    the factors.
    """
    if A.field != B.field or A.cols != B.rows:
        raise DimensionMismatch("factors do not compose")
    if r < 1 or r > min(A.rows, A.cols, B.cols):
        raise DimensionMismatch(f"minor order {r} out of range")
    f = A.field
    C = A @ B
    mids = list(combinations(range(1, A.cols + 1), r))
    for al in combinations(range(1, A.rows + 1), r):
        for be in combinations(range(1, B.cols + 1), r):
            lhs = minor(C, al, be)
            rhs = f.zero
            for ga in mids:
                rhs = f.add(rhs, f.mul(minor(A, al, ga), minor(B, ga, be)))
            if lhs != rhs:
                return False
    return True

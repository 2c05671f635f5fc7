"""Stacked Sylvester operators, Hom spaces, and similarity certificates.

For tuples A, C the operator maps Z to the stack of Z*A_i - C_i*Z; its
matrix under column-stacking vectorization is the block stack of
kron(A_i^T, I) - kron(I, C_i).  The kernel is the space of module
homomorphisms Z with Z*A_i = C_i*Z, which drives both the dimension
bookkeeping and the randomized certificate search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DegenerateInput, ShapeMismatch, SingularS
from .matrices import (
    ExactMatrix,
    det,
    inverse,
    kron,
    nullspace,
    rank,
    unvectorize,
)

#: Default entry bound for random rational sampling.
RANDOM_BOUND = 5

#: Default number of random linear combinations tried by the certificate search.
DEFAULT_TRIALS = 32


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """An ordered p-tuple of n x n matrices over one exact field."""

    field: object
    n: int
    p: int
    matrices: tuple

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise DegenerateInput(f"need n >= 1 and p >= 1, got n={self.n}, p={self.p}")
        if len(self.matrices) != self.p:
            raise ShapeMismatch(f"expected {self.p} matrices, got {len(self.matrices)}")
        for M in self.matrices:
            if M.field != self.field:
                raise ShapeMismatch("tuple members live in different fields")
            if M.rows != self.n or M.cols != self.n:
                raise ShapeMismatch(f"tuple member is {M.rows}x{M.cols}, expected {self.n}x{self.n}")

    @classmethod
    def from_rows(cls, field, mats):
        """Build from nested entry lists (ints, literals, or field values)."""
        ms = tuple(ExactMatrix.from_rows(field, m) for m in mats)
        if not ms:
            raise DegenerateInput("empty tuple")
        return cls(field, ms[0].rows, len(ms), ms)

    def __eq__(self, other):
        return (
            isinstance(other, MatrixTuple)
            and self.field == other.field
            and (self.n, self.p) == (other.n, other.p)
            and self.matrices == other.matrices
        )

    def same_shape(self, other: "MatrixTuple") -> bool:
        return self.field == other.field and self.n == other.n and self.p == other.p

    def conjugate(self, S: ExactMatrix) -> "MatrixTuple":
        """The tuple (S A_1 S^-1, ..., S A_p S^-1)."""
        S_inv = inverse(S)
        return MatrixTuple(self.field, self.n, self.p, tuple(S @ M @ S_inv for M in self.matrices))


@dataclass(frozen=True, eq=False)
class SylvesterMatrix:
    """Matrix of the stacked Sylvester operator, with its defining pair."""

    matrix: ExactMatrix
    source: MatrixTuple
    target: MatrixTuple


def _check_pair(A: MatrixTuple, C: MatrixTuple):
    if not A.same_shape(C):
        raise ShapeMismatch(
            f"tuples do not match: ({A.n},{A.p}) over {A.field!r} vs ({C.n},{C.p}) over {C.field!r}"
        )


def build_L(A: MatrixTuple, C: MatrixTuple) -> SylvesterMatrix:
    """The (p n^2) x n^2 matrix sending vec(Z) to the stack of vec(Z A_i - C_i Z)."""
    _check_pair(A, C)
    eye = ExactMatrix.identity(A.field, A.n)
    blocks = [kron(Ai.transpose(), eye) - kron(eye, Ci) for Ai, Ci in zip(A.matrices, C.matrices)]
    ent = []
    for b in blocks:
        ent.extend(b.entries)
    return SylvesterMatrix(ExactMatrix(A.field, ent), A, C)


def hom_dim(A: MatrixTuple, B: MatrixTuple) -> int:
    """dim Hom(M_A, M_B) = n^2 - rank of the stacked Sylvester matrix."""
    return A.n * A.n - rank(build_L(A, B).matrix)


def hom_basis(A: MatrixTuple, B: MatrixTuple):
    """Canonical basis of {Z : Z A_i = B_i Z}, as n x n matrices."""
    L = build_L(A, B).matrix
    return [unvectorize(v, A.n) for v in nullspace(L)]


def random_tuple(field, n: int, p: int, rng: random.Random, bound: int = RANDOM_BOUND) -> MatrixTuple:
    """Random tuple with entries in [-bound, bound] over Q, uniform over F_q."""
    mats = tuple(
        ExactMatrix(field, [[field.random(rng, bound) for _ in range(n)] for _ in range(n)])
        for _ in range(p)
    )
    return MatrixTuple(field, n, p, mats)


def random_invertible(field, n: int, rng: random.Random, bound: int = RANDOM_BOUND) -> ExactMatrix:
    """Random invertible n x n matrix (resampled until nonsingular)."""
    while True:
        S = ExactMatrix(field, [[field.random(rng, bound) for _ in range(n)] for _ in range(n)])
        if not field.is_zero(det(S)):
            return S


def _certificate_search(A: MatrixTuple, B: MatrixTuple, trials: int, seed):
    """Lowest-trial-index invertible hom element, or None; returns (S, trial)."""
    _check_pair(A, B)
    basis = hom_basis(A, B)
    if not basis:
        return None
    f = A.field
    rng = random.Random(seed)
    for trial in range(trials):
        coeffs = [f.random(rng, RANDOM_BOUND) for _ in basis]
        S = ExactMatrix.zeros(f, A.n, A.n)
        for c, Z in zip(coeffs, basis):
            S = S + Z.scale(c)
        if f.is_zero(det(S)):
            continue
        if _is_certificate(A, B, S):
            return S, trial
    return None


def _is_certificate(A: MatrixTuple, B: MatrixTuple, S: ExactMatrix) -> bool:
    """Exact check that S A_i = B_i S for all i (with S invertible, B = S A S^-1)."""
    return all((S @ Ai) == (Bi @ S) for Ai, Bi in zip(A.matrices, B.matrices))


def find_similarity(A: MatrixTuple, B: MatrixTuple, trials: int = DEFAULT_TRIALS, seed=0):
    """Search for an invertible S with S A_i S^-1 = B_i exactly for all i.

    Samples random linear combinations of the hom basis and tests the
    determinant exactly; every returned certificate is verified before it is
    returned.  Absence is not a proof of non-similarity: this is a one-sided
    randomized search, combine it with the exact orbit decision for verdicts.
    """
    found = _certificate_search(A, B, trials, seed)
    return None if found is None else found[0]


def conjugation_identity_check(A: MatrixTuple, S: ExactMatrix, Y: MatrixTuple) -> bool:
    """Exact check of the conjugation covariance of the Sylvester stack.

    With B = S A S^-1 and T = (S^T)^-1, the stack for (B, Y) must equal
    diag(T (x) I, ..., T (x) I) times the stack for (A, Y) times
    (T^-1 (x) I).  Self-test utility: must always return True.
    """
    _check_pair(A, Y)
    if S.rows != A.n or S.cols != A.n:
        raise ShapeMismatch(f"S is {S.rows}x{S.cols}, expected {A.n}x{A.n}")
    f = A.field
    if f.is_zero(det(S)):
        raise SingularS("conjugating matrix is singular")
    B = A.conjugate(S)
    T = inverse(S.transpose())
    eye = ExactMatrix.identity(f, A.n)
    TI = kron(T, eye)
    TI_inv = kron(inverse(T), eye)
    lhs = build_L(B, Y).matrix
    rhs_mid = build_L(A, Y).matrix @ TI_inv
    # Block-diagonal left factor applied blockwise: row block i gets TI @ block_i.
    n2 = A.n * A.n
    ent = []
    for i in range(A.p):
        block = ExactMatrix(f, rhs_mid.entries[i * n2 : (i + 1) * n2])
        ent.extend((TI @ block).entries)
    return lhs == ExactMatrix(f, ent)

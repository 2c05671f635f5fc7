"""The complete invariant: echelon forms of symbolic minor-coefficient matrices.

For a tuple A, replace the second argument of the stacked Sylvester operator
by a tuple Y of symbolic matrices.  Every entry of the resulting
(p n^2) x n^2 matrix is affine-linear in the p n^2 variables.  For each
minor order r, the coefficient vectors of all r-minors (in the normative
graded monomial basis) form a matrix whose reduced row echelon form is
constant exactly on similarity orbits; the list over r = 1..n^2, with
ranks, pivot sets and a canonical digest, is the complete invariant.

Minors are expanded bottom-up by single-row Laplace steps over the sparse
polynomial ring: level r consumes the full level r-1 table, so all orders
share the work.  Rows are streamed into the sparse echelon engine in the
normative lexicographic (row-subset, column-subset) order; the result
equals the reduced echelon form of the fully materialized stack.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from ._elim import rref_sparse
from .errors import (
    DegenerateInput,
    InfeasibleSize,
    PartialBundle,
    ShapeMismatch,
)
from .matrices import EchelonForm, ExactMatrix, echelon_from_basis, rank
from .polynomials import BasisIndexer, MultiPoly, basis_size, minor_row_count
from .sylvester import MatrixTuple, build_L, random_tuple

#: Cells of the largest per-level minor table a full bundle may allocate
#: before the desk-scale refusal kicks in (n=2 up to p=4 stays well inside;
#: every n >= 3 full bundle is outside).
DESK_CELL_LIMIT = 20_000_000


@dataclass(frozen=True, eq=False)
class SymbolicSylvester:
    """The Sylvester stack of (A, Y) with Y left symbolic.

    ``entries`` is a (p n^2) x n^2 grid of affine-linear polynomials whose
    specialization at any concrete Y reproduces the concrete stack.
    """

    n: int
    p: int
    field: object
    entries: tuple  # rows of MultiPoly

    def specialize(self, Y: MatrixTuple) -> ExactMatrix:
        """Substitute a concrete tuple for the symbolic matrices."""
        if Y.n != self.n or Y.p != self.p or Y.field != self.field:
            raise ShapeMismatch("specialization tuple has the wrong shape or field")
        n = self.n
        values = {}
        for l, M in enumerate(Y.matrices):
            for s in range(n):
                for t in range(n):
                    values[l * n * n + s * n + t] = M.entries[s][t]
        ent = [[poly.substitute(values) for poly in row] for row in self.entries]
        return ExactMatrix(self.field, ent)


@dataclass(frozen=True, eq=False)
class MinorTable:
    """Coefficient matrix of all r-minors, rows in lexicographic (a, b) order."""

    r: int
    n: int
    p: int
    matrix: ExactMatrix


@dataclass(frozen=True, eq=False)
class InvariantBundle:
    """Echelon forms, ranks and pivot sets for r = 1..r_max, plus a digest.

    A bundle with r_max < n^2 is PARTIAL: it can refute similarity but never
    certify it.  Bundles over different fields are never comparable; the
    digest embeds the field id.
    """

    field: object
    n: int
    p: int
    r_max: int
    levels: tuple  # EchelonForm for r = 1..r_max
    digest: str

    @property
    def partial(self) -> bool:
        return self.r_max < self.n * self.n

    def echelon(self, r: int) -> EchelonForm:
        if r < 1 or r > self.r_max:
            raise DegenerateInput(f"level {r} outside [1, {self.r_max}]")
        return self.levels[r - 1]

    def rank_at(self, r: int) -> int:
        return self.echelon(r).rank

    def pivot_set(self, r: int) -> tuple:
        return self.echelon(r).pivots

    def signature(self) -> tuple:
        """Pivot sets of every level: the discrete stratum invariant."""
        if self.partial:
            raise PartialBundle("stratum signature needs the full bundle")
        return tuple(E.pivots for E in self.levels)


def symbolic_L(A: MatrixTuple) -> SymbolicSylvester:
    """Sylvester stack of A against a fully symbolic test tuple."""
    f, n, p = A.field, A.n, A.p
    rows = []
    for l in range(p):
        Al = A.matrices[l]
        for i in range(n):
            for q in range(n):
                row = []
                for j in range(n):
                    for t in range(n):
                        terms = {}
                        if q == t and not f.is_zero(Al.entries[j][i]):
                            terms[()] = Al.entries[j][i]
                        if i == j:
                            # variable y[q+1, t+1, l+1]
                            terms[(l * n * n + q * n + t,)] = f.neg(f.one)
                        row.append(MultiPoly(f, terms))
                rows.append(tuple(row))
    return SymbolicSylvester(n=n, p=p, field=f, entries=tuple(rows))


def _entry_lists(sym: SymbolicSylvester):
    """Per-row sparse column maps: {col: ((monomial, coeff), ...)}."""
    out = []
    for row in sym.entries:
        cmap = {}
        for col, poly in enumerate(row):
            if poly.terms:
                cmap[col] = tuple(poly.terms.items())
        out.append(cmap)
    return out


def _level_alpha(args):
    """All minors det L[alpha, beta] for one alpha, from the previous level."""
    alpha, r, ncols, entries, prev, f = args
    add, mul, neg, is_zero, zero = f.add, f.mul, f.neg, f.is_zero, f.zero
    ap = alpha[:-1]
    rowmap = entries[alpha[-1]]
    out = []
    for beta in combinations(range(ncols), r):
        acc = {}
        for m in range(r):
            e = rowmap.get(beta[m])
            if not e:
                continue
            sub = prev[(ap, beta[:m] + beta[m + 1 :])]
            if not sub:
                continue
            negate = ((r - 1) + m) & 1
            for mono, c in sub.items():
                for ek, ec in e:
                    key = tuple(sorted(mono + ek)) if ek else mono
                    v = mul(c, ec)
                    if negate:
                        v = neg(v)
                    s = add(acc.get(key, zero), v)
                    if is_zero(s):
                        acc.pop(key, None)
                    else:
                        acc[key] = s
        out.append((beta, acc))
    return alpha, out


def _minor_levels(sym: SymbolicSylvester, r_max: int, threads: int = 1):
    """Yield (r, ordered [( (alpha, beta), terms ), ...]) for r = 1..r_max.

    Rows follow the normative lexicographic (alpha, beta) order.  Levels may
    be computed with a worker pool over alpha; assembly order is fixed, so
    the output is identical for any thread count.
    """
    entries = _entry_lists(sym)
    nrows = sym.p * sym.n * sym.n
    ncols = sym.n * sym.n
    prev = None
    for r in range(1, r_max + 1):
        alphas = list(combinations(range(nrows), r))
        if r == 1:
            level = []
            for (a,) in alphas:
                rowmap = entries[a]
                for b in range(ncols):
                    level.append((((a,), (b,)), dict(rowmap.get(b, ()))))
        else:
            args = [(alpha, r, ncols, entries, prev, sym.field) for alpha in alphas]
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    per_alpha = list(pool.map(_level_alpha, args, chunksize=8))
            else:
                per_alpha = [_level_alpha(a) for a in args]
            level = [((alpha, beta), terms) for alpha, lst in per_alpha for beta, terms in lst]
        yield r, level
        prev = {key: terms for key, terms in level}


def minor_row_labels(n: int, p: int, r: int):
    """1-based (alpha, beta) labels in the normative row order of F(r, .)."""
    for alpha in combinations(range(1, p * n * n + 1), r):
        for beta in combinations(range(1, n * n + 1), r):
            yield alpha, beta


def build_F(r: int, A: MatrixTuple) -> MinorTable:
    """Dense coefficient matrix of all r-minors of the symbolic stack."""
    n, p = A.n, A.p
    if r < 1 or r > n * n:
        raise DegenerateInput(f"minor order r={r} outside [1, {n * n}]")
    idx = BasisIndexer(n, p, r)
    sym = symbolic_L(A)
    level = None
    for rr, lv in _minor_levels(sym, r):
        if rr == r:
            level = lv
    f = A.field
    z = f.zero
    ent = []
    for _, terms in level:
        dense = [z] * idx.size
        for key, c in terms.items():
            dense[idx.position(key) - 1] = c
        ent.append(dense)
    assert len(ent) == minor_row_count(n, p, r)
    return MinorTable(r=r, n=n, p=p, matrix=ExactMatrix(f, ent))


def level_cost(n: int, p: int, r: int) -> int:
    """Cells of the level-r minor table."""
    return minor_row_count(n, p, r) * basis_size(n, p, r)


def check_feasible(n: int, p: int, r_max: int, cell_limit: int = DESK_CELL_LIMIT):
    """Raise :class:`InfeasibleSize` when any level table is beyond desk scale."""
    for r in range(1, r_max + 1):
        c = level_cost(n, p, r)
        if c > cell_limit:
            raise InfeasibleSize(
                f"level r={r} needs a {minor_row_count(n, p, r)} x {basis_size(n, p, r)} "
                f"table ({c} cells > limit {cell_limit}); set r_max below {r} or reduce the input"
            )


def echelon_invariant(
    A: MatrixTuple,
    r_max: int | None = None,
    threads: int = 1,
    cell_limit: int = DESK_CELL_LIMIT,
) -> InvariantBundle:
    """Compute the invariant bundle of A up to level ``r_max`` (default n^2).

    A truncated bundle is marked PARTIAL and can only refute similarity.
    Raises :class:`InfeasibleSize` before allocating anything beyond the
    desk-scale cost bound.
    """
    n, p = A.n, A.p
    n2 = n * n
    if r_max is None:
        r_max = n2
    if r_max < 1 or r_max > n2:
        raise DegenerateInput(f"r_max={r_max} outside [1, {n2}]")
    check_feasible(n, p, r_max, cell_limit)
    idx = BasisIndexer(n, p, r_max)
    pos = idx.position_table()
    sym = symbolic_L(A)
    levels = []
    for r, level in _minor_levels(sym, r_max, threads=threads):
        ncols_r = basis_size(n, p, r)

        def sparse_rows():
            for _, terms in level:
                yield {pos[key] - 1: c for key, c in terms.items()}

        basis = rref_sparse(A.field, sparse_rows())
        levels.append(
            echelon_from_basis(A.field, basis, minor_row_count(n, p, r), ncols_r)
        )
    digest = bundle_digest_of_levels(A.field, n, p, r_max, levels)
    return InvariantBundle(field=A.field, n=n, p=p, r_max=r_max, levels=tuple(levels), digest=digest)


def serialize_bundle_lines(field, n: int, p: int, r_max: int, levels):
    """Canonical serialization lines (digest-relevant, normative format)."""
    yield f"{n} {p} {field.id} {r_max}"
    fmt = field.format
    zero_lit = fmt(field.zero)
    for r, E in enumerate(levels, start=1):
        yield f"{r} {E.rank} {','.join(str(c) for c in E.pivots)}"
        for row in E.sparse_rows:
            cells = [zero_lit] * E.ncols
            for k, v in row.items():
                cells[k] = fmt(v)
            yield " ".join(cells)


def bundle_digest_of_levels(field, n, p, r_max, levels) -> str:
    h = hashlib.sha256()
    for line in serialize_bundle_lines(field, n, p, r_max, levels):
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def serialize_bundle(bundle: InvariantBundle) -> str:
    """Canonical text of a bundle; its SHA-256 is the bundle digest."""
    return (
        "\n".join(
            serialize_bundle_lines(bundle.field, bundle.n, bundle.p, bundle.r_max, bundle.levels)
        )
        + "\n"
    )


def bundles_equal(a: InvariantBundle, b: InvariantBundle) -> bool:
    """Exact equality of two full bundles (never compares across fields)."""
    if a.field != b.field or a.n != b.n or a.p != b.p:
        raise ShapeMismatch("bundles are not comparable (field or shape differs)")
    if a.partial or b.partial:
        raise PartialBundle("orbit equality needs full bundles; these are truncated")
    return a.levels == b.levels


def bundles_distinct_at_some_level(a: InvariantBundle, b: InvariantBundle) -> bool:
    """True when some shared level differs; valid for PARTIAL bundles (refutation only)."""
    if a.field != b.field or a.n != b.n or a.p != b.p:
        raise ShapeMismatch("bundles are not comparable (field or shape differs)")
    shared = min(a.r_max, b.r_max)
    return any(a.levels[i] != b.levels[i] for i in range(shared))


def same_orbit(A: MatrixTuple, B: MatrixTuple, threads: int = 1) -> bool:
    """Exact orbit-equality decision via full invariant bundles."""
    if not A.same_shape(B):
        raise ShapeMismatch("tuples have different shapes or fields")
    return bundles_equal(
        echelon_invariant(A, threads=threads), echelon_invariant(B, threads=threads)
    )


@dataclass(frozen=True)
class ScreenResult:
    """Outcome of the randomized rank screen.

    DISTINCT comes with the witness tuple and its trial index and proves
    non-similarity; CONSISTENT draws no conclusion.
    """

    verdict: str  # "DISTINCT" | "CONSISTENT"
    seed: object
    trials: int
    witness: MatrixTuple | None = None
    trial_index: int | None = None


def randomized_similarity_test(
    A: MatrixTuple, B: MatrixTuple, trials: int = 16, seed=0
) -> ScreenResult:
    """Compare Sylvester ranks at sampled test tuples.

    Any rank disagreement proves the tuples are not simultaneously similar.
    The first probe is always the zero tuple (it exposes rank gaps of the
    inputs themselves); the remaining probes are random.  Over a prime
    field the modulus must exceed 2 n^2 so a single random tuple separates
    unequal rank loci with useful probability.
    """
    if not A.same_shape(B):
        raise ShapeMismatch("tuples have different shapes or fields")
    f = A.field
    if f.characteristic and f.characteristic <= 2 * A.n * A.n:
        raise DegenerateInput(
            f"screen needs q > 2*n^2 = {2 * A.n * A.n} over a prime field (got q={f.characteristic}); "
            "use the exact orbit decision instead"
        )
    rng = random.Random(seed)
    zero = ExactMatrix.zeros(f, A.n, A.n)
    for trial in range(trials):
        if trial == 0:
            Y = MatrixTuple(f, A.n, A.p, (zero,) * A.p)
        else:
            Y = random_tuple(f, A.n, A.p, rng)
        if rank(build_L(A, Y).matrix) != rank(build_L(B, Y).matrix):
            return ScreenResult("DISTINCT", seed, trials, witness=Y, trial_index=trial)
    return ScreenResult("CONSISTENT", seed, trials)


def stratum_signature(A: MatrixTuple, threads: int = 1) -> tuple:
    """Pivot sets of every echelon level: the discrete orbit invariant."""
    return echelon_invariant(A, threads=threads).signature()

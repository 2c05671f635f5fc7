"""Shared test utilities, including independent dense oracles.

The oracles here deliberately avoid the package's sparse elimination engine:
they are plain textbook algorithms on dense lists, so agreement is a real
cross-check and not a tautology.
"""

import random
from itertools import combinations, permutations

from simsim.matrices import ExactMatrix


def dense_rref_oracle(M: ExactMatrix):
    """Textbook Gauss-Jordan with division; returns (rows, pivots 1-based)."""
    f = M.field
    a = [list(r) for r in M.entries]
    nrows, ncols = M.rows, M.cols
    pivots = []
    pr = 0
    for pc in range(ncols):
        hit = None
        for r in range(pr, nrows):
            if not f.is_zero(a[r][pc]):
                hit = r
                break
        if hit is None:
            continue
        a[pr], a[hit] = a[hit], a[pr]
        inv = f.inv(a[pr][pc])
        a[pr] = [f.mul(inv, v) for v in a[pr]]
        for r in range(nrows):
            if r != pr and not f.is_zero(a[r][pc]):
                factor = a[r][pc]
                a[r] = [f.sub(v, f.mul(factor, w)) for v, w in zip(a[r], a[pr])]
        pivots.append(pc + 1)
        pr += 1
        if pr == nrows:
            break
    return a, tuple(pivots)


def det_oracle(M: ExactMatrix):
    """Permutation-expansion determinant (only sane for tiny matrices)."""
    f = M.field
    n = M.rows
    acc = f.zero
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        term = f.one
        for i in range(n):
            term = f.mul(term, M.entries[i][perm[i]])
        acc = f.add(acc, term if sign > 0 else f.neg(term))
    return acc


def _perm_sign(perm):
    sign = 1
    for i, j in combinations(range(len(perm)), 2):
        if perm[i] > perm[j]:
            sign = -sign
    return sign


def rank_by_minors(M: ExactMatrix) -> int:
    """Rank as the largest order of a nonzero minor (independent of rref)."""
    f = M.field
    best = 0
    for r in range(1, min(M.rows, M.cols) + 1):
        found = False
        for al in combinations(range(M.rows), r):
            for be in combinations(range(M.cols), r):
                sub = ExactMatrix(f, [[M.entries[i][j] for j in be] for i in al])
                if not f.is_zero(det_oracle(sub)):
                    found = True
                    break
            if found:
                break
        if found:
            best = r
        else:
            break
    return best


def random_matrix(field, rows, cols, rng: random.Random, bound: int = 3) -> ExactMatrix:
    return ExactMatrix(
        field, [[field.random(rng, bound) for _ in range(cols)] for _ in range(rows)]
    )

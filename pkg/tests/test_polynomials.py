import random
from itertools import product
from math import comb

import pytest

from simsim.errors import DegenerateInput, DegreeOverflow
from simsim.fields import QQ, PrimeField
from simsim.polynomials import (
    BasisIndexer,
    Monomial,
    MultiPoly,
    VarIndex,
    basis_size,
    coefficient_row,
    flat_id,
    minor_row_count,
    monomial_at_position,
    monomial_position,
    var_of_id,
)


def stars_and_bars_count(nvars, r):
    """Oracle: count exponent vectors of total degree <= r by enumeration."""
    count = 0
    for exps in product(range(r + 1), repeat=nvars):
        if sum(exps) <= r:
            count += 1
    return count


def test_basis_size_examples():
    assert basis_size(3, 2, 0) == 1
    assert basis_size(2, 2, 1) == 9
    assert basis_size(2, 2, 4) == 495
    assert basis_size(2, 3, 4) == 1820


def test_basis_size_matches_enumeration_oracle():
    for n, p in [(1, 1), (1, 2), (2, 1), (1, 5), (2, 2)]:
        if p * n * n > 8:
            continue
        for r in range(0, min(4, n * n) + 1):
            assert basis_size(n, p, r) == stars_and_bars_count(p * n * n, r)


def test_minor_row_count_examples():
    assert minor_row_count(1, 1, 1) == 1
    assert minor_row_count(2, 2, 4) == 70
    assert minor_row_count(2, 2, 2) == 168
    assert minor_row_count(2, 3, 4) == comb(12, 4)


def test_count_argument_validation():
    with pytest.raises(DegenerateInput):
        basis_size(0, 1, 0)
    with pytest.raises(DegenerateInput):
        basis_size(2, 2, 5)
    with pytest.raises(DegenerateInput):
        minor_row_count(2, 1, 0)


def test_variable_order_is_l_s_t():
    n, p = 2, 2
    ids = [
        flat_id(VarIndex(s, t, l), n)
        for l in range(1, p + 1)
        for s in range(1, n + 1)
        for t in range(1, n + 1)
    ]
    assert ids == list(range(p * n * n))
    for i in ids:
        assert flat_id(var_of_id(i, n), n) == i


def test_monomial_positions():
    idx = BasisIndexer(2, 2, 2)
    assert monomial_position(Monomial(()), idx) == 1
    assert monomial_position(Monomial((0,)), idx) == 2  # first variable, degree 1
    # graded: every degree-1 position precedes every degree-2 position
    for pos in range(2, 2 + idx.nvars):
        assert idx.degree_of_position(pos) == 1
    assert idx.degree_of_position(2 + idx.nvars) == 2


def test_position_bijection_exhaustive():
    for n, p, r in [(1, 1, 1), (2, 1, 4), (1, 8, 1), (2, 2, 3)]:
        if p * n * n > 8 or r > min(4, n * n):
            continue
        idx = BasisIndexer(n, p, r)
        assert idx.size == basis_size(n, p, r)
        seen = set()
        for pos in range(1, idx.size + 1):
            m = monomial_at_position(pos, idx)
            assert monomial_position(m, idx) == pos
            seen.add(m.key)
        assert len(seen) == idx.size


def test_position_degree_overflow():
    idx = BasisIndexer(1, 1, 1)
    assert idx.size == 2
    with pytest.raises(DegreeOverflow):
        monomial_position(Monomial((0, 0)), idx)


def test_n11_basis_enumeration():
    idx = BasisIndexer(1, 1, 1)
    assert idx.monomial_at(1) == ()
    assert idx.monomial_at(2) == (0,)


def test_poly_arithmetic():
    y0 = MultiPoly.variable(QQ, 0)
    y1 = MultiPoly.variable(QQ, 1)
    one = MultiPoly.constant(QQ, 1)
    zero = MultiPoly(QQ)
    p = y0 + y1.scale(3)
    assert p + zero == p
    assert (y0 * y1).terms == {(0, 1): QQ.one}
    prod = (one + y0) * (one - y0)
    assert prod == one - y0 * y0
    assert prod.degree == 2
    assert (p - p).is_zero()


def test_poly_degree_additive_over_domain():
    rng = random.Random(0)
    for _ in range(20):
        a = _random_poly(QQ, 3, rng)
        b = _random_poly(QQ, 3, rng)
        if a.is_zero() or b.is_zero():
            continue
        assert (a * b).degree == a.degree + b.degree


def _random_poly(field, nvars, rng, max_deg=2, terms=4):
    out = MultiPoly(field)
    for _ in range(terms):
        key = tuple(sorted(rng.randrange(nvars) for _ in range(rng.randint(0, max_deg))))
        out = out + MultiPoly(field, {key: field.random(rng)})
    return out


def test_monomial_from_exponents():
    m = Monomial.from_exponents({VarIndex(1, 1, 1): 2, VarIndex(2, 1, 1): 1}, 2)
    assert m.key == (0, 0, 2)
    assert m.degree == 3
    assert m.exponents(2) == {VarIndex(1, 1, 1): 2, VarIndex(2, 1, 1): 1}


def test_coefficient_row_examples():
    idx = BasisIndexer(1, 1, 1)
    zero_row = coefficient_row(MultiPoly(QQ), idx)
    assert zero_row == [QQ.zero, QQ.zero]
    c = coefficient_row(MultiPoly.constant(QQ, 5), idx)
    assert c == [QQ.from_int(5), QQ.zero]
    # the 1x1 symbolic operator entry a - y
    f = MultiPoly.constant(QQ, 3) - MultiPoly.variable(QQ, 0)
    assert coefficient_row(f, idx) == [QQ.from_int(3), QQ.from_int(-1)]


def test_coefficient_row_linear():
    idx = BasisIndexer(2, 1, 2)
    rng = random.Random(1)
    for field in (QQ, PrimeField(1009)):
        for _ in range(20):
            f = _random_poly(field, idx.nvars, rng)
            g = _random_poly(field, idx.nvars, rng)
            a, b = field.random(rng), field.random(rng)
            lhs = coefficient_row(f.scale(a) + g.scale(b), idx)
            fr = coefficient_row(f, idx)
            gr = coefficient_row(g, idx)
            rhs = [field.add(field.mul(a, x), field.mul(b, y)) for x, y in zip(fr, gr)]
            assert lhs == rhs


def test_coefficient_row_overflow():
    idx = BasisIndexer(2, 1, 1)
    q = MultiPoly.variable(QQ, 0) * MultiPoly.variable(QQ, 1)
    with pytest.raises(DegreeOverflow):
        coefficient_row(q, idx)

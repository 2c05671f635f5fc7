"""Sparse polynomials in the p*n^2 tuple variables, with the normative basis.

A variable y[s,t,l] is the (s,t) entry of the l-th symbolic test matrix
(1-based everywhere).  The fixed variable order sorts by (l, s, t)
ascending; a monomial is stored as the ascending tuple of flat variable
ids, one id per degree unit (so y0^2*y3 is (0, 0, 3)).

The basis of polynomials of degree <= r enumerates the constant monomial
first, then each degree level in ascending lexicographic order of those
tuples.  This enumeration is normative: the invariant serialization and
digests depend on it bit-exactly, and it is what
``itertools.combinations_with_replacement`` yields per degree.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb
from typing import NamedTuple

from .errors import DegenerateInput, DegreeOverflow


class VarIndex(NamedTuple):
    """1-based coordinates of a tuple variable: entry (s, t) of matrix l."""

    s: int
    t: int
    l: int


def flat_id(v: VarIndex, n: int) -> int:
    """Flat 0-based id realizing the (l, s, t) ascending variable order."""
    return (v.l - 1) * n * n + (v.s - 1) * n + (v.t - 1)


def var_of_id(i: int, n: int) -> VarIndex:
    l, rest = divmod(i, n * n)
    s, t = divmod(rest, n)
    return VarIndex(s + 1, t + 1, l + 1)


def _check_np(n: int, p: int):
    if n < 1 or p < 1:
        raise DegenerateInput(f"need n >= 1 and p >= 1, got n={n}, p={p}")


def basis_size(n: int, p: int, r: int) -> int:
    """Number of monomials of degree <= r in the p*n^2 variables."""
    _check_np(n, p)
    if r < 0 or r > n * n:
        raise DegenerateInput(f"minor order r={r} outside [0, {n * n}]")
    v = p * n * n
    return sum(comb(v + l - 1, l) for l in range(r + 1))


def minor_row_count(n: int, p: int, r: int) -> int:
    """Number of r-minors of a (p*n^2) x (n^2) matrix."""
    _check_np(n, p)
    if r < 1 or r > n * n:
        raise DegenerateInput(f"minor order r={r} outside [1, {n * n}]")
    return comb(p * n * n, r) * comb(n * n, r)


class Monomial:
    """A monomial in the tuple variables; wraps the flat-id tuple key."""

    __slots__ = ("key",)

    def __init__(self, key=()):
        self.key = tuple(sorted(key))

    @classmethod
    def from_exponents(cls, exps, n: int):
        """Build from a {VarIndex: positive exponent} mapping."""
        key = []
        for v, e in exps.items():
            if e < 1:
                raise DegenerateInput("exponents must be positive")
            key.extend([flat_id(v, n)] * e)
        return cls(key)

    @property
    def degree(self) -> int:
        return len(self.key)

    def exponents(self, n: int):
        out = {}
        for i in self.key:
            v = var_of_id(i, n)
            out[v] = out.get(v, 0) + 1
        return out

    def __mul__(self, other):
        return Monomial(self.key + other.key)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Monomial{self.key}"


class MultiPoly:
    """Sparse multivariate polynomial over an exact field.

    ``terms`` maps flat-id monomial tuples to nonzero coefficients.  All
    operations are exact and return new polynomials.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=None):
        self.field = field
        self.terms = {}
        if terms:
            is_zero = field.is_zero
            for k, c in terms.items():
                if not is_zero(c):
                    self.terms[k] = c

    @classmethod
    def constant(cls, field, c):
        if isinstance(c, int):
            c = field.from_int(c)
        return cls(field, {(): c})

    @classmethod
    def variable(cls, field, vid: int):
        return cls(field, {(vid,): field.one})

    @property
    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        return max((len(k) for k in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        f = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = f.add(out.get(k, f.zero), c)
            if f.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return MultiPoly(f, out)

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one))

    def __neg__(self):
        neg = self.field.neg
        return MultiPoly(self.field, {k: neg(c) for k, c in self.terms.items()})

    def scale(self, c):
        f = self.field
        if isinstance(c, int):
            c = f.from_int(c)
        if f.is_zero(c):
            return MultiPoly(f)
        return MultiPoly(f, {k: f.mul(c, v) for k, v in self.terms.items()})

    def __mul__(self, other):
        f = self.field
        add, mul, is_zero, zero = f.add, f.mul, f.is_zero, f.zero
        out = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = tuple(sorted(ka + kb))
                s = add(out.get(k, zero), mul(ca, cb))
                if is_zero(s):
                    out.pop(k, None)
                else:
                    out[k] = s
        return MultiPoly(f, out)

    def coefficient(self, key):
        return self.terms.get(tuple(sorted(key)), self.field.zero)

    def substitute(self, values):
        """Evaluate at a full assignment {flat id: field value}."""
        f = self.field
        acc = f.zero
        for k, c in self.terms.items():
            v = c
            for i in k:
                v = f.mul(v, values[i])
            acc = f.add(acc, v)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        bits = []
        for k in sorted(self.terms, key=lambda k: (len(k), k)):
            bits.append(f"{self.field.format(self.terms[k])}*y{list(k)}" if k else self.field.format(self.terms[k]))
        return "MultiPoly(" + " + ".join(bits) + ")"


class BasisIndexer:
    """Bijection between monomials of degree <= r_max and basis positions.

    Position 1 is the constant monomial; degree levels follow in order,
    each enumerated in ascending lexicographic order of the flat-id tuple.
    Immutable after construction and shareable across threads.
    """

    def __init__(self, n: int, p: int, r_max: int):
        _check_np(n, p)
        if r_max < 0 or r_max > n * n:
            raise DegenerateInput(f"r_max={r_max} outside [0, {n * n}]")
        self.n = n
        self.p = p
        self.r_max = r_max
        self.nvars = p * n * n
        self.size = basis_size(n, p, r_max)
        self._monomials = []
        for d in range(r_max + 1):
            self._monomials.extend(combinations_with_replacement(range(self.nvars), d))
        self._pos = {m: i + 1 for i, m in enumerate(self._monomials)}

    def position(self, key: tuple) -> int:
        """1-based basis position of a flat-id monomial tuple."""
        pos = self._pos.get(tuple(sorted(key)))
        if pos is None:
            raise DegreeOverflow(f"monomial of degree {len(key)} exceeds r_max={self.r_max}")
        return pos

    def monomial_at(self, pos: int) -> tuple:
        """Inverse of :meth:`position`."""
        if pos < 1 or pos > self.size:
            raise DegreeOverflow(f"position {pos} outside [1, {self.size}]")
        return self._monomials[pos - 1]

    def degree_of_position(self, pos: int) -> int:
        return len(self.monomial_at(pos))

    def position_table(self):
        """The raw {monomial tuple: 1-based position} map (do not mutate)."""
        return self._pos


def monomial_position(m, idx: BasisIndexer) -> int:
    """1-based position of a monomial (``Monomial`` or flat-id tuple)."""
    key = m.key if isinstance(m, Monomial) else tuple(m)
    return idx.position(key)


def monomial_at_position(pos: int, idx: BasisIndexer) -> Monomial:
    return Monomial(idx.monomial_at(pos))


def coefficient_row(f: MultiPoly, idx: BasisIndexer):
    """Dense coefficient vector of ``f`` in the basis of ``idx``."""
    if f.degree > idx.r_max:
        raise DegreeOverflow(f"polynomial degree {f.degree} exceeds r_max={idx.r_max}")
    row = [f.field.zero] * idx.size
    for k, c in f.terms.items():
        row[idx.position(k) - 1] = c
    return row

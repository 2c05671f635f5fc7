"""Sparse exact row reduction engines.

Rows are dicts mapping 0-based column index to a nonzero scalar.  Both
engines stream rows into an echelon basis and back-substitute once at the
end, which yields the unique reduced row echelon form of the row stack
regardless of arrival order of equal-row-space inputs.

The rational engine works on integer-cleared rows with gcd normalization
after every elimination, so no fraction arithmetic happens until the final
pivot normalization.  The prime-field engine keeps pivots normalized to 1
throughout.
"""

from __future__ import annotations

from math import gcd

from .fields import PrimeField, RationalField

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as _rational


def _int_clear(row, denom_of):
    """Scale a rational row to coprime integers (content removed)."""
    lcm = 1
    for v in row.values():
        d = denom_of(v)
        lcm = lcm // gcd(lcm, d) * d
    out = {}
    g = 0
    for k, v in row.items():
        iv = int(v * lcm)
        if iv:
            out[k] = iv
            g = gcd(g, iv)
    if g > 1:
        for k in out:
            out[k] //= g
    return out


def _normalize_content(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for k in row:
            row[k] //= g


# Entries are content-normalized once they exceed this many bits; cheap
# bit-length probes on the eliminated entry keep gcd passes rare.
_NORM_BITS = 96


def _eliminate_int(row, piv, col):
    """row := (piv[col]//g)*row - (row[col]//g)*piv  (kills row[col])."""
    rv = row[col]
    if rv.bit_length() > _NORM_BITS:
        _normalize_content(row)
        rv = row[col]
    g = gcd(piv[col], rv)
    mr = piv[col] // g
    mp = rv // g
    if mr != 1:
        for k in row:
            row[k] *= mr
    get = row.get
    for k, v in piv.items():
        nv = get(k, 0) - mp * v
        if nv:
            row[k] = nv
        elif k in row:
            del row[k]


def _rref_stream_qq(rows):
    """RREF over the rationals; input rows hold mpq values.

    Returns a list of (pivot_col, row) pairs sorted by pivot column, each row
    a dict with mpq values and row[pivot_col] == 1.
    """
    pivot_at = {}

    for raw in rows:
        row = _int_clear(raw, lambda v: int(v.denominator))
        while row:
            c = None
            for k in row:
                if k in pivot_at and (c is None or k < c):
                    c = k
            if c is None:
                break
            _eliminate_int(row, pivot_at[c], c)
        if row:
            _normalize_content(row)
            pivot_at[min(row)] = row

    for c in sorted(pivot_at, reverse=True):
        row = pivot_at[c]
        hits = sorted(k for k in row if k != c and k in pivot_at)
        for k in hits:
            if k in row:
                _eliminate_int(row, pivot_at[k], k)
        _normalize_content(row)

    out = []
    for c in sorted(pivot_at):
        row = pivot_at[c]
        pv = row[c]
        out.append((c, {k: _rational(v, pv) for k, v in sorted(row.items())}))
    return out


def _rref_stream_fp(rows, q):
    """RREF over GF(q); input rows hold ints (any residues)."""
    pivot_at = {}

    for raw in rows:
        row = {}
        for k, v in raw.items():
            v %= q
            if v:
                row[k] = v
        while row:
            c = None
            for k in row:
                if k in pivot_at and (c is None or k < c):
                    c = k
            if c is None:
                break
            piv = pivot_at[c]
            f = row[c]
            for k, v in piv.items():
                nv = (row.get(k, 0) - f * v) % q
                if nv:
                    row[k] = nv
                elif k in row:
                    del row[k]
        if row:
            c = min(row)
            inv = pow(row[c], -1, q)
            pivot_at[c] = {k: v * inv % q for k, v in row.items()}

    for c in sorted(pivot_at, reverse=True):
        row = pivot_at[c]
        hits = sorted(k for k in row if k != c and k in pivot_at)
        for k in hits:
            if k not in row:
                continue
            piv = pivot_at[k]
            f = row[k]
            for kk, v in piv.items():
                nv = (row.get(kk, 0) - f * v) % q
                if nv:
                    row[kk] = nv
                elif kk in row:
                    del row[kk]

    return [(c, dict(sorted(pivot_at[c].items()))) for c in sorted(pivot_at)]


def rref_sparse(field, rows):
    """Reduce an iterable of sparse rows over ``field`` to RREF basis form.

    Returns a list of (pivot_col, row_dict) sorted by pivot column.  Rows are
    fully reduced: each pivot column is zero in every other row and carries a
    1 in its own row.
    """
    if isinstance(field, RationalField):
        return _rref_stream_qq(rows)
    if isinstance(field, PrimeField):
        return _rref_stream_fp(rows, field.q)
    raise TypeError(f"unsupported field {field!r}")


def reduce_against(field, basis, row):
    """Reduce a sparse row against an RREF basis; returns the residue dict.

    ``basis`` is the (pivot_col, row_dict) list produced by ``rref_sparse``.
    The residue is empty iff the row lies in the basis row space.
    """
    res = {k: v for k, v in row.items() if not field.is_zero(v)}
    sub, mul = field.sub, field.mul
    for c, piv in basis:
        f = res.get(c)
        if f is None or field.is_zero(f):
            continue
        for k, v in piv.items():
            nv = sub(res.get(k, field.zero), mul(f, v))
            if field.is_zero(nv):
                res.pop(k, None)
            else:
                res[k] = nv
    return res

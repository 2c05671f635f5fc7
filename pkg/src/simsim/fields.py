"""Exact base fields: the rationals and prime fields.

Field elements are plain values (``gmpy2.mpq`` for the rationals, ``int``
canonical representatives in ``[0, q)`` for a prime field); a field object
supplies the arithmetic.  Rationals are kept in lowest terms with a positive
denominator by the backing type, so every stored value is canonical.
"""

from __future__ import annotations

import random

from .errors import DegenerateInput, FormatError

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _rational

# Default modulus when the user asks for a prime field without naming one.
# 2**31 - 1 is prime and leaves headroom for randomized rank tests.
DEFAULT_PRIME = 2147483647

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit moduli."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field of rational numbers with exact arithmetic."""

    id = "q"
    characteristic = 0

    def __init__(self):
        self.zero = _rational(0)
        self.one = _rational(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(self.id)

    def from_int(self, a: int):
        return _rational(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return a / b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return 1 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def random(self, rng: random.Random, bound: int = 5):
        """Uniform integer value in [-bound, bound]."""
        return _rational(rng.randint(-bound, bound))

    def parse(self, text: str):
        """Parse an exact literal: an integer or ``a/b``."""
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                den_i = int(den)
                if den_i == 0:
                    raise FormatError(f"zero denominator in rational literal {text!r}")
                return _rational(int(num), den_i)
            return _rational(int(text))
        except ValueError as exc:
            raise FormatError(f"bad rational literal {text!r}") from exc

    def format(self, a) -> str:
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"


class PrimeField:
    """The field F_q of integers modulo a prime q."""

    characteristic: int

    def __init__(self, q: int = DEFAULT_PRIME):
        if not is_prime(q):
            raise DegenerateInput(f"modulus {q} is not prime")
        self.q = q
        self.characteristic = q
        self.id = f"fp:{q}"
        self.zero = 0
        self.one = 1 % q

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(self.id)

    def from_int(self, a: int):
        return a % self.q

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return a * b % self.q

    def neg(self, a):
        return -a % self.q

    def div(self, a, b):
        if b % self.q == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.q})")
        return a * pow(b, -1, self.q) % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.q})")
        return pow(a, -1, self.q)

    def is_zero(self, a) -> bool:
        return a % self.q == 0

    def random(self, rng: random.Random, bound: int = 0):
        """Uniform element; ``bound`` is ignored (kept for a uniform call shape)."""
        return rng.randrange(self.q)

    def parse(self, text: str):
        try:
            return int(text.strip()) % self.q
        except ValueError as exc:
            raise FormatError(f"bad prime-field literal {text!r}") from exc

    def format(self, a) -> str:
        return str(a % self.q)


QQ = RationalField()


def field_by_id(spec: str):
    """Resolve a field id: ``"q"`` or ``"fp"`` or ``"fp:<prime>"``."""
    spec = spec.strip().lower()
    if spec == "q":
        return QQ
    if spec == "fp":
        return PrimeField()
    if spec.startswith("fp:"):
        try:
            q = int(spec[3:])
        except ValueError as exc:
            raise FormatError(f"bad field id {spec!r}") from exc
        return PrimeField(q)
    raise FormatError(f"unknown field id {spec!r} (expected 'q' or 'fp:<prime>')")

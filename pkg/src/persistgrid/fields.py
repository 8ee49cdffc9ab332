"""Exact scalar arithmetic: arbitrary-precision rationals and prime fields.

Rational values are `fractions.Fraction` (always normalized), prime field
values are plain ints in [0, p).  A `Field` object bundles the operations so
matrix code can stay generic.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 1009


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """The base field: rationals (p is None) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not _is_prime(p):
                raise ValueError(f"modulus {p} is not prime")
        self.p = p

    @staticmethod
    def rationals() -> "Field":
        return Field(None)

    @staticmethod
    def prime(p: int = DEFAULT_PRIME) -> "Field":
        return Field(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    # -- element constructors ------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def of(self, n: int):
        """Canonical image of the integer n."""
        return Fraction(n) if self.p is None else n % self.p

    # -- arithmetic ----------------------------------------------------

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / a
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- serialization -------------------------------------------------

    def parse(self, s):
        """Scalar from its PMOD representation ("num/den" string or int)."""
        if self.p is None:
            return Fraction(s) if isinstance(s, str) else Fraction(int(s))
        return int(s) % self.p

    def fmt(self, a):
        """PMOD representation: exact string over Q, residue int over F_p."""
        if self.p is None:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return int(a)

    def rand(self, rng):
        """Uniform random element; over Q, a small integer in [-2, 2]."""
        if self.p is None:
            return Fraction(rng.randint(-2, 2))
        return rng.randrange(self.p)

    def elements(self):
        """All field elements (finite fields only)."""
        if self.p is None:
            raise ValueError("the rationals are infinite")
        return [self.of(i) for i in range(self.p)]

    # -- identity ------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"F{self.p}"

    def to_json(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    @staticmethod
    def from_json(s: str) -> "Field":
        if s == "Q":
            return Field.rationals()
        if s.startswith("Fp:"):
            return Field.prime(int(s[3:]))
        raise ValueError(f"unknown field tag {s!r}")

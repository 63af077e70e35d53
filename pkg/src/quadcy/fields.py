"""Coefficient fields: the rationals (default) and prime fields.

A field object converts Python numbers and literals into its elements.
Elements themselves carry the arithmetic, so generic code can mix them
with the integer literals 0 and 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "ModP"]


class Rationals:
    """Arbitrary-precision rationals backed by :class:`fractions.Fraction`."""

    name = "Q"
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, ModP):
            raise TypeError("cannot coerce a prime-field element into Q")
        if isinstance(x, float):
            raise TypeError("floats are not exact; pass an int, Fraction or 'p/q' string")
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class ModP:
    """Residue class modulo a prime."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> "ModP":
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixing residues of different primes")
            return other
        if isinstance(other, int):
            return ModP(other, self.p)
        if isinstance(other, Fraction):
            return ModP(other.numerator, self.p) / ModP(other.denominator, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "ModP":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return ModP(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return ModP(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            o = self._coerce(other)
            return self.value == o.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class PrimeField:
    """The field with ``p`` elements, ``p`` prime."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def __call__(self, x) -> ModP:
        if isinstance(x, ModP):
            if x.p != self.p:
                raise ValueError("residue of a different prime")
            return x
        if isinstance(x, float):
            raise TypeError("floats are not exact")
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return ModP(x.numerator, self.p) / ModP(x.denominator, self.p)
        return ModP(int(x), self.p)

    @property
    def zero(self) -> ModP:
        return ModP(0, self.p)

    @property
    def one(self) -> ModP:
        return ModP(1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = Rationals()


def field_from_name(name: str):
    """``"Q"``/``"q"`` gives the rationals, ``"F7"``/``"Fp7"``/``"7"`` a prime field."""
    s = name.strip()
    if s.lower() in ("q", "qq", "rational", "rationals"):
        return QQ
    digits = s.lstrip("Ffp")
    if digits.isdigit():
        return PrimeField(int(digits))
    raise ValueError(f"unknown field {name!r}")


def format_scalar(x) -> str:
    return str(x)

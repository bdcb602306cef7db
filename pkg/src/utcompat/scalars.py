"""Exact field arithmetic over Q and prime fields F_p.

Two layers live here.  A :class:`Field` does arithmetic on *raw* values
(``fractions.Fraction`` for Q, ``int`` residues for F_p); every other module
stores coefficients in that raw form because the elimination inner loops
cannot afford a wrapper object per coefficient.  :class:`Scalar` pairs a raw
value with its field and is the checked, operator-overloaded surface used at
API boundaries.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "Field",
    "RationalField",
    "PrimeField",
    "QQ",
    "Scalar",
    "FieldMismatchError",
    "ScalarParseError",
    "field_from_spec",
    "is_prime",
    "scalar_arith",
    "scalar_inv",
    "scalar_parse",
    "scalar_format",
]

Raw = Union[int, Fraction]

_LITERAL = re.compile(r"^([+-]?)(\d+)(?:/(\d+))?$")

PRIME_LIMIT = 2**31


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


class ScalarParseError(ValueError):
    pass


def is_prime(p: int) -> bool:
    """Deterministic trial division; moduli are bounded by 2**31."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """Arithmetic on raw coefficient values of one field."""

    name: str
    zero: Raw
    one: Raw

    def __call__(self, x) -> Raw:
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def sub(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def random(self, rng: random.Random, bound: int = 5) -> Raw:
        raise NotImplementedError

    def random_nonzero(self, rng: random.Random, bound: int = 5) -> Raw:
        while True:
            x = self.random(rng, bound)
            if x:
                return x

    def format(self, x) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> Raw:
        m = _LITERAL.match(text)
        if m is None:
            raise ScalarParseError(f"malformed scalar literal {text!r}")
        sign, num, den = m.groups()
        num = int(num)
        if sign == "-":
            num = -num
        den = 1 if den is None else int(den)
        if den == 0:
            raise ScalarParseError(f"zero denominator in {text!r}")
        try:
            return self.div(self(num), self(den))
        except ZeroDivisionError:
            raise ScalarParseError(f"denominator of {text!r} vanishes in {self.name}") from None

    def __repr__(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.name


class RationalField(Field):
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Scalar):
            x = x.value
        return Fraction(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def random(self, rng, bound=5):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        return Fraction(num, den)

    def format(self, x) -> str:
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    def __init__(self, p: int):
        if not isinstance(p, int) or not 2 <= p < PRIME_LIMIT or not is_prime(p):
            raise ValueError(f"prime field modulus must be a prime below 2**31, got {p!r}")
        self.p = p
        self.name = f"Fp:{p}"
        self.zero = 0
        self.one = 1

    def __call__(self, x) -> int:
        if isinstance(x, Scalar):
            x = x.value
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def random(self, rng, bound=5):
        return rng.randrange(self.p)

    def format(self, x) -> str:
        return str(x % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = RationalField()


def field_from_spec(spec: str) -> Field:
    """Parse ``"Q"`` or ``"Fp:<p>"``."""
    if spec == "Q":
        return QQ
    if spec.startswith("Fp:"):
        try:
            p = int(spec[3:])
        except ValueError:
            raise ValueError(f"bad field spec {spec!r}") from None
        return PrimeField(p)
    raise ValueError(f"bad field spec {spec!r}; expected 'Q' or 'Fp:<p>'")


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field."""

    field: Field
    value: Raw

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _check(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            return Scalar(self.field, other)
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.div(self.value, other.value))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inv(self) -> Scalar:
        return Scalar(self.field, self.field.inv(self.value))

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self.field}, {self.field.format(self.value)})"


_OPS = {"add", "sub", "mul", "neg"}


def scalar_arith(op: str, x: Scalar, y: Scalar | None = None) -> Scalar:
    if op not in _OPS:
        raise ValueError(f"unknown scalar op {op!r}")
    if op == "neg":
        return -x
    if y is None:
        raise ValueError(f"{op} needs two operands")
    if x.field != y.field:
        raise FieldMismatchError(f"{x.field} vs {y.field}")
    return {"add": x.__add__, "sub": x.__sub__, "mul": x.__mul__}[op](y)


def scalar_inv(x: Scalar) -> Scalar:
    return x.inv()


def scalar_parse(text: str, field: Field) -> Scalar:
    return Scalar(field, field.parse(text))


def scalar_format(x: Scalar) -> str:
    return x.field.format(x.value)

"""mdcf.numberfield
====================
Mini-README: Exact arithmetic in a number field K = Q[x]/(f) presented in the power
basis 1, theta, ..., theta^(l-1). ``NumberField`` owns the monic minimal polynomial and a
reduction table for powers of theta; ``FieldElement`` is an immutable coefficient
vector supporting ring/field operations, norms (fraction-free determinant of the
multiplication matrix), injective canonical byte keys and Q-linear independence tests.
Irreducibility of the minimal polynomial is a documented precondition; a reducible
one is detected lazily when an inverse does not exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .algebra import (
    NotCoprimeError,
    RatPoly,
    RationalLike,
    as_rational,
    bareiss_determinant,
    poly_invmod,
)
from .logger import get_logger

LOGGER = get_logger(__name__)

_KEY_LENGTH_BYTES = 4


class FieldMismatchError(ValueError):
    """Raised when elements of different number fields are combined."""


class NonInvertibleError(ZeroDivisionError):
    """Raised for the inverse of zero or of a zero divisor (reducible minimal polynomial)."""


@dataclass(frozen=True)
class NumberField:
    """Degree-l field given by a monic rational minimal polynomial.

    Any nonzero rational multiple of the polynomial may be passed; it is made monic,
    so fields built from scaled polynomials are identical.
    """

    minpoly: RatPoly

    def __post_init__(self) -> None:
        if self.minpoly.degree < 2:
            raise ValueError(f"a number field needs degree >= 2, got {self.minpoly}")
        object.__setattr__(self, "minpoly", self.minpoly.monic())

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[RationalLike]) -> "NumberField":
        return cls(RatPoly.from_coefficients(coeffs))

    @classmethod
    def from_highest(cls, coeffs: Iterable[RationalLike]) -> "NumberField":
        return cls(RatPoly.from_highest(coeffs))

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @cached_property
    def _power_table(self) -> tuple[tuple[Fraction, ...], ...]:
        """Power-basis coordinates of theta^k for 0 <= k <= 2l - 2."""

        l = self.degree
        table: list[tuple[Fraction, ...]] = []
        for k in range(2 * l - 1):
            if k < l:
                row = [Fraction(0)] * l
                row[k] = Fraction(1)
            else:
                # theta * theta^(k-1): shift up, then fold theta^l back in
                prev = table[k - 1]
                top = prev[-1]
                row = [Fraction(0)] + list(prev[:-1])
                for i in range(l):
                    row[i] -= top * self.minpoly.coeffs[i]
            table.append(tuple(row))
        return tuple(table)

    def element(self, coeffs: Iterable[RationalLike]) -> "FieldElement":
        """Element from power-basis coordinates; longer vectors are reduced."""

        return self.from_poly(RatPoly.from_coefficients(coeffs))

    def from_poly(self, poly: RatPoly) -> "FieldElement":
        reduced = poly % self.minpoly
        padded = list(reduced.coeffs) + [Fraction(0)] * (self.degree - len(reduced.coeffs))
        return FieldElement(self, tuple(padded))

    def rational(self, value: RationalLike) -> "FieldElement":
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = as_rational(value)
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return self.rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.rational(1)

    @property
    def generator(self) -> "FieldElement":
        return self.element([0, 1])

    def __str__(self) -> str:
        return f"Q[x]/({self.minpoly})"


Operand = Union["FieldElement", int, Fraction]


@dataclass(frozen=True)
class FieldElement:
    """Power-basis coordinate vector of exactly ``field.degree`` rationals."""

    field: NumberField
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.field.degree:
            raise ValueError(f"expected {self.field.degree} coefficients, got {len(self.coeffs)}")

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def as_poly(self) -> RatPoly:
        return RatPoly(self.coeffs)

    def _coerce(self, other: Operand) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} != {other.field}")
            return other
        return self.field.rational(other)

    def __add__(self, other: Operand) -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Operand) -> "FieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Operand) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: Operand) -> "FieldElement":
        other = self._coerce(other)
        if other.is_rational:
            factor = other.coeffs[0]
            return FieldElement(self.field, tuple(c * factor for c in self.coeffs))
        l = self.field.degree
        product = [Fraction(0)] * (2 * l - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b
        table = self.field._power_table
        result = [Fraction(0)] * l
        for k, c in enumerate(product):
            if c == 0:
                continue
            for i, t in enumerate(table[k]):
                if t:
                    result[i] += c * t
        return FieldElement(self.field, tuple(result))

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "FieldElement":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Operand) -> "FieldElement":
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.field.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise NonInvertibleError("zero has no inverse")
        if self.is_rational:
            return self.field.rational(1 / self.coeffs[0])
        try:
            inverse = poly_invmod(self.as_poly(), self.field.minpoly)
        except NotCoprimeError as exc:
            LOGGER.error("Inverse failed for %s in %s: %s", self, self.field, exc)
            raise NonInvertibleError(f"{self} is a zero divisor; the minimal polynomial is reducible") from exc
        return self.field.from_poly(inverse)

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Rows are the coordinates of ``self * theta^j``."""

        theta = self.field.generator
        rows = []
        current = self
        for _ in range(self.field.degree):
            rows.append(list(current.coeffs))
            current = current * theta
        return rows

    @cached_property
    def norm(self) -> Fraction:
        return bareiss_determinant(self.multiplication_matrix())

    def __str__(self) -> str:
        return str(self.as_poly()).replace("x", "θ")


def elem_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Product reduced modulo the minimal polynomial."""

    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} != {b.field}")
    return a * b


def elem_inv(a: FieldElement) -> FieldElement:
    """Inverse via the extended Euclidean algorithm against the minimal polynomial."""

    return a.inverse()


def elem_norm(a: FieldElement) -> Fraction:
    """Norm over Q as the determinant of the multiplication-by-a matrix."""

    return a.norm


def _encode_magnitude(value: int) -> bytes:
    raw = value.to_bytes((value.bit_length() + 7) // 8, "big") if value else b""
    return len(raw).to_bytes(_KEY_LENGTH_BYTES, "big") + raw


def canonical_key(a: FieldElement) -> bytes:
    """Injective serialisation: per coefficient a sign byte, then length-prefixed
    numerator and denominator magnitudes."""

    chunks = []
    for c in a.coeffs:
        sign = 0 if c == 0 else (1 if c > 0 else 2)
        chunks.append(bytes([sign]))
        chunks.append(_encode_magnitude(abs(c.numerator)))
        chunks.append(_encode_magnitude(c.denominator))
    return b"".join(chunks)


def decode_key(field: NumberField, key: bytes) -> FieldElement:
    """Inverse of ``canonical_key`` for elements of ``field``."""

    coeffs = []
    pos = 0
    for _ in range(field.degree):
        sign = key[pos]
        pos += 1
        parts = []
        for _ in range(2):
            length = int.from_bytes(key[pos : pos + _KEY_LENGTH_BYTES], "big")
            pos += _KEY_LENGTH_BYTES
            parts.append(int.from_bytes(key[pos : pos + length], "big"))
            pos += length
        numerator, denominator = parts
        coeffs.append(Fraction(-numerator if sign == 2 else numerator, denominator))
    if pos != len(key):
        raise ValueError("trailing bytes after the last coefficient")
    return FieldElement(field, tuple(coeffs))


def independent_with_one(elems: Sequence[FieldElement]) -> bool:
    """True iff 1, alpha_1, ..., alpha_(l-1) are jointly Q-linearly independent."""

    if not elems:
        raise ValueError("need l-1 elements, got none")
    field = elems[0].field
    if len(elems) != field.degree - 1:
        raise ValueError(f"need {field.degree - 1} elements, got {len(elems)}")
    for e in elems:
        if e.field != field:
            raise FieldMismatchError(f"{e.field} != {field}")
    rows = [list(field.one.coeffs)] + [list(e.coeffs) for e in elems]
    return bareiss_determinant(rows) != 0

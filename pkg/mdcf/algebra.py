"""mdcf.algebra
=================
Mini-README: Exact rational and univariate-polynomial arithmetic shared by every other
module. Rationals are ``fractions.Fraction`` (always stored canonical), polynomials are
immutable ``RatPoly`` values with coefficients lowest degree first. The module also
provides the subresultant resultant, Sturm root counting, modular inverses and a
fraction-free determinant, which together form the substrate for number-field
arithmetic, certified real evaluation and the independent oracle.
Usage: ``poly_resultant(RatPoly.from_highest([1, 0, 0, -9]), RatPoly.from_highest([1, -2]))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .logger import get_logger

LOGGER = get_logger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction, str]


class NotCoprimeError(ZeroDivisionError):
    """Raised when a modular inverse is requested for a non-unit residue."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a canonical ``Fraction``."""

    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    """Serialise a rational as ``"p/q"`` (``"p"`` when integral)."""

    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RatPoly:
    """Univariate polynomial over the rationals, coefficients lowest degree first.

    The zero polynomial is the empty tuple; otherwise the leading coefficient is
    nonzero. Construction normalises, so equal polynomials compare equal.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        normalised = [as_rational(c) for c in self.coeffs]
        while normalised and normalised[-1] == 0:
            normalised.pop()
        object.__setattr__(self, "coeffs", tuple(normalised))

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[RationalLike]) -> "RatPoly":
        return cls(tuple(as_rational(c) for c in coeffs))

    @classmethod
    def from_highest(cls, coeffs: Iterable[RationalLike]) -> "RatPoly":
        """Build from coefficients listed highest degree first (CLI order)."""

        return cls(tuple(as_rational(c) for c in reversed(list(coeffs))))

    @classmethod
    def constant(cls, value: RationalLike) -> "RatPoly":
        return cls((as_rational(value),))

    @classmethod
    def monomial(cls, degree: int, coefficient: RationalLike = 1) -> "RatPoly":
        return cls(tuple([Fraction(0)] * degree + [as_rational(coefficient)]))

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""

        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __add__(self, other: "RatPoly | RationalLike") -> "RatPoly":
        other = _coerce_poly(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(tuple(self.coefficient(k) + other.coefficient(k) for k in range(size)))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RatPoly | RationalLike") -> "RatPoly":
        return self + (-_coerce_poly(other))

    def __rsub__(self, other: "RatPoly | RationalLike") -> "RatPoly":
        return _coerce_poly(other) - self

    def __mul__(self, other: "RatPoly | RationalLike") -> "RatPoly":
        other = _coerce_poly(other)
        if self.is_zero or other.is_zero:
            return RatPoly()
        product = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b
        return RatPoly(tuple(product))

    __rmul__ = __mul__

    def __divmod__(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return poly_divmod(self, other)[1]

    def scale(self, factor: RationalLike) -> "RatPoly":
        factor = as_rational(factor)
        return RatPoly(tuple(c * factor for c in self.coeffs))

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def derivative(self) -> "RatPoly":
        return RatPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def shift(self, offset: RationalLike) -> "RatPoly":
        """Return ``f(x + offset)`` (Taylor shift by Horner's scheme)."""

        offset = as_rational(offset)
        result = RatPoly()
        step = RatPoly((offset, Fraction(1)))
        for c in reversed(self.coeffs):
            result = result * step + c
        return result

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            power = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if power and c == 1:
                text = power
            elif power and c == -1:
                text = f"-{power}"
            else:
                text = f"{format_rational(c)}{'*' + power if power else ''}"
            terms.append(text)
        return " + ".join(terms).replace("+ -", "- ")


def _coerce_poly(value: "RatPoly | RationalLike") -> RatPoly:
    if isinstance(value, RatPoly):
        return value
    return RatPoly.constant(value)


def poly_eval(f: RatPoly, x: RationalLike) -> Fraction:
    """Evaluate ``f`` at the rational ``x`` exactly (Horner)."""

    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def poly_divmod(f: RatPoly, g: RatPoly) -> tuple[RatPoly, RatPoly]:
    """Euclidean division over the rationals."""

    if g.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    remainder = list(f.coeffs)
    quotient = [Fraction(0)] * max(len(f.coeffs) - len(g.coeffs) + 1, 0)
    lead = g.leading
    dg = g.degree
    while len(remainder) - 1 >= dg and remainder:
        shift = len(remainder) - 1 - dg
        factor = remainder[-1] / lead
        quotient[shift] = factor
        for i, c in enumerate(g.coeffs):
            remainder[shift + i] -= factor * c
        remainder.pop()
        while remainder and remainder[-1] == 0:
            remainder.pop()
    return RatPoly(tuple(quotient)), RatPoly(tuple(remainder))


def poly_gcd(f: RatPoly, g: RatPoly) -> RatPoly:
    """Monic greatest common divisor (zero only when both inputs are zero)."""

    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(f: RatPoly, g: RatPoly) -> tuple[RatPoly, RatPoly, RatPoly]:
    """Return ``(d, s, t)`` with ``s*f + t*g = d`` and ``d`` the monic gcd."""

    r0, r1 = f, g
    s0, s1 = RatPoly.constant(1), RatPoly()
    t0, t1 = RatPoly(), RatPoly.constant(1)
    while not r1.is_zero:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    inv_lead = 1 / r0.leading
    return r0.scale(inv_lead), s0.scale(inv_lead), t0.scale(inv_lead)


def poly_invmod(a: RatPoly, modulus: RatPoly) -> RatPoly:
    """Inverse of ``a`` modulo ``modulus``; raises ``NotCoprimeError`` on a common factor."""

    reduced = a % modulus
    if reduced.is_zero:
        raise NotCoprimeError("zero has no inverse")
    d, s, _ = poly_xgcd(reduced, modulus)
    if d.degree > 0:
        raise NotCoprimeError(f"residue shares the factor {d} with the modulus")
    return s % modulus


def squarefree_part(f: RatPoly) -> RatPoly:
    """Divide out ``gcd(f, f')`` so every root becomes simple."""

    if f.degree <= 0:
        return f
    common = poly_gcd(f, f.derivative())
    if common.degree <= 0:
        return f
    return f // common


def _integer_primitive(f: RatPoly) -> tuple[Fraction, list[int]]:
    """Split ``f`` as ``content * P`` with ``P`` a primitive integer coefficient list."""

    denominator = lcm(*(c.denominator for c in f.coeffs))
    scaled = [int(c * denominator) for c in f.coeffs]
    divisor = gcd(*scaled)
    return Fraction(divisor, denominator), [c // divisor for c in scaled]


def _pseudo_remainder(a: list[int], b: list[int]) -> list[int]:
    """Integer pseudo-remainder of ``lc(b)^(deg a - deg b + 1) * a`` by ``b``."""

    remainder = list(a)
    lead = b[-1]
    db = len(b) - 1
    pending = len(a) - len(b) + 1
    while remainder and len(remainder) - 1 >= db:
        top = remainder[-1]
        shift = len(remainder) - 1 - db
        remainder = [lead * c for c in remainder]
        for i, c in enumerate(b):
            remainder[shift + i] -= top * c
        remainder.pop()
        while remainder and remainder[-1] == 0:
            remainder.pop()
        pending -= 1
    factor = lead**pending
    return [factor * c for c in remainder]


def poly_resultant(f: RatPoly, g: RatPoly) -> Fraction:
    """Resultant ``lc(f)^deg(g) * prod g(alpha)`` over the roots of ``f``.

    Computed by the subresultant polynomial remainder sequence on the primitive
    integer parts, so intermediate coefficients stay integral and small.
    """

    if f.is_zero or g.is_zero:
        raise ValueError("resultant of the zero polynomial is undefined")
    if g.degree == 0:
        return g.leading**f.degree
    if f.degree == 0:
        return f.leading**g.degree

    content_f, a = _integer_primitive(f)
    content_g, b = _integer_primitive(g)
    scale = content_f**g.degree * content_g**f.degree
    sign = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) % 2 == 1 and (len(b) - 1) % 2 == 1:
            sign = -sign

    g_lead, h = 1, 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            sign = -sign
        remainder = _pseudo_remainder(a, b)
        a = b
        if not remainder:
            return Fraction(0)
        divisor = g_lead * h**delta
        b = [c // divisor for c in remainder]
        g_lead = a[-1]
        if delta == 1:
            h = g_lead
        elif delta > 1:
            h = g_lead**delta // h ** (delta - 1)
        if len(b) == 1:
            break

    da = len(a) - 1
    tail = Fraction(b[0]) ** da / Fraction(h) ** (da - 1)
    return scale * sign * tail


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def sturm_sequence(f: RatPoly) -> list[RatPoly]:
    """Sturm chain of the squarefree part of ``f``.

    Members are rescaled by positive factors only, which keeps the sign pattern.
    """

    p0 = squarefree_part(f)
    chain = [_positive_primitive(p0), _positive_primitive(p0.derivative())]
    while not chain[-1].is_zero:
        remainder = chain[-2] % chain[-1]
        if remainder.is_zero:
            break
        chain.append(_positive_primitive(-remainder))
    return [p for p in chain if not p.is_zero]


def _positive_primitive(f: RatPoly) -> RatPoly:
    # the content is always positive, so the primitive part keeps every sign
    if f.is_zero:
        return f
    _, ints = _integer_primitive(f)
    return RatPoly(tuple(Fraction(c) for c in ints))


def sign_variations(chain: Sequence[RatPoly], x: Fraction) -> int:
    signs = [s for s in (_sign(poly_eval(p, x)) for p in chain) if s != 0]
    return sum(1 for left, right in zip(signs, signs[1:]) if left != right)


def sturm_count(f: RatPoly, lo: RationalLike, hi: RationalLike) -> int:
    """Number of distinct real roots of ``f`` in the open interval ``(lo, hi)``."""

    lo, hi = as_rational(lo), as_rational(hi)
    if f.is_zero:
        raise ValueError("the zero polynomial has no finite root count")
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if poly_eval(f, lo) == 0 or poly_eval(f, hi) == 0:
        raise ValueError("interval endpoint is a root; perturb the endpoint")
    if f.degree == 0:
        return 0
    chain = sturm_sequence(f)
    return sign_variations(chain, lo) - sign_variations(chain, hi)


def root_bound(f: RatPoly) -> Fraction:
    """Cauchy bound: every complex root satisfies ``|z| < root_bound(f)``."""

    if f.degree <= 0:
        return Fraction(1)
    lead = abs(f.leading)
    return 1 + max(abs(c) / lead for c in f.coeffs[:-1])


def bareiss_determinant(matrix: Sequence[Sequence[RationalLike]]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination.

    Rows are cleared of denominators first so elimination runs on integers and
    every intermediate division is exact.
    """

    n = len(matrix)
    if n == 0:
        return Fraction(1)
    rows: list[list[int]] = []
    scale = Fraction(1)
    for row in matrix:
        values = [as_rational(v) for v in row]
        if len(values) != n:
            raise ValueError("determinant needs a square matrix")
        denominator = lcm(*(v.denominator for v in values))
        rows.append([int(v * denominator) for v in values])
        scale *= denominator

    sign = 1
    previous = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * pivot - rows[i][k] * rows[k][j]) // previous
            rows[i][k] = 0
        previous = pivot
    return Fraction(sign * rows[n - 1][n - 1]) / scale

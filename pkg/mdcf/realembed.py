"""mdcf.realembed
==================
Mini-README: Certified real semantics for number-field elements. ``RealEmbedding`` pins
one real root of the minimal polynomial with a Sturm-certified rational isolating
interval that is refined by bisection on demand. Elements are evaluated by interval
Horner over that isolator; signs, floors and the normalised pivot comparison are
decided exactly by refining until the interval is decisive. Zero tests are always
structural (coefficients), never numeric.

Refinement schedule: isolator widths 2^-64, 2^-128, ... doubling the bit budget per
escalation up to ``Settings.max_precision_bits`` (``MDCF_MAX_PRECISION_BITS``).
An embedding carries mutable refinement state: confine it to one task or ``clone()`` it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, TypeVar

from .algebra import (
    RatPoly,
    RationalLike,
    as_rational,
    poly_eval,
    root_bound,
    sign_variations,
    squarefree_part,
    sturm_count,
    sturm_sequence,
)
from .config import get_settings
from .logger import get_logger
from .numberfield import FieldElement, NumberField

LOGGER = get_logger(__name__)

T = TypeVar("T")


class RootSelectionError(ValueError):
    """Raised when a window does not isolate exactly one real root."""


class PrecisionExhaustedError(ArithmeticError):
    """Raised when certification needs more bits than the configured ceiling."""


class DomainViolationError(ValueError):
    """Raised when a normalised pivot comparison ties (input outside the domain)."""


class Comparison(str, enum.Enum):
    """Outcome of a normalised comparison between two state components."""

    I_GREATER = "i-greater"
    J_GREATER = "j-greater"


@dataclass(frozen=True)
class RatInterval:
    """Closed rational interval ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value: RationalLike) -> "RatInterval":
        value = as_rational(value)
        return cls(value, value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "RatInterval") -> "RatInterval":
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(products), max(products))

    def shifted(self, offset: Fraction) -> "RatInterval":
        return RatInterval(self.lo + offset, self.hi + offset)


def isolate_roots(f: RatPoly) -> list[RatInterval]:
    """Disjoint isolating intervals, in increasing order, for the real roots of ``f``.

    Each interval is open-isolating: the root lies strictly inside and the endpoints
    are not roots.
    """

    if f.is_zero:
        raise ValueError("the zero polynomial has no isolated roots")
    p = squarefree_part(f)
    if p.degree <= 0:
        return []
    chain = sturm_sequence(p)
    bound = root_bound(p)
    pending = [(-bound, bound)]
    found: list[RatInterval] = []
    while pending:
        lo, hi = pending.pop()
        count = sign_variations(chain, lo) - sign_variations(chain, hi)
        if count == 0:
            continue
        if count == 1:
            found.append(RatInterval(lo, hi))
            continue
        split = (lo + hi) / 2
        while poly_eval(p, split) == 0:
            split = (split + hi) / 2
        pending.append((split, hi))
        pending.append((lo, split))
    LOGGER.debug("Isolated %d real roots of %s", len(found), f)
    return sorted(found, key=lambda iv: iv.lo)


class RealEmbedding:
    """Real embedding of a number field pinned by a shrinking isolating interval."""

    def __init__(
        self,
        field: NumberField,
        lo: RationalLike,
        hi: RationalLike,
        *,
        max_bits: Optional[int] = None,
        initial_bits: Optional[int] = None,
    ) -> None:
        settings = get_settings()
        self.field = field
        self._lo = as_rational(lo)
        self._hi = as_rational(hi)
        self._window = (self._lo, self._hi)
        self._lo_sign = _sign(poly_eval(field.minpoly, self._lo))
        self.max_bits = max_bits if max_bits is not None else settings.max_precision_bits
        self.initial_bits = initial_bits if initial_bits is not None else settings.initial_precision_bits
        self.precision_bits = 0

    @property
    def isolator(self) -> RatInterval:
        return RatInterval(self._lo, self._hi)

    @property
    def window(self) -> tuple[Fraction, Fraction]:
        """The selection window as given at construction; refinement leaves it alone."""

        return self._window

    def clone(self) -> "RealEmbedding":
        lo, hi = self._window
        twin = RealEmbedding(self.field, lo, hi, max_bits=self.max_bits, initial_bits=self.initial_bits)
        twin._lo, twin._hi = self._lo, self._hi
        twin.precision_bits = self.precision_bits
        return twin

    def refine(self, bits: int) -> None:
        """Bisect until the isolator is at most ``2**-bits`` wide; never widens."""

        target = Fraction(1, 1 << bits)
        f = self.field.minpoly
        while self._hi - self._lo > target:
            mid = (self._lo + self._hi) / 2
            sign = _sign(poly_eval(f, mid))
            if sign == 0:
                raise RootSelectionError(f"{f} has the rational root {mid}; the field is not a field")
            if sign == self._lo_sign:
                self._lo = mid
            else:
                self._hi = mid
        self.precision_bits = max(self.precision_bits, bits)

    def approximate(self) -> float:
        return float((self._lo + self._hi) / 2)

    def __repr__(self) -> str:
        return f"RealEmbedding({self.field}, ≈{self.approximate():.12g})"


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def select_root(nf: NumberField, window: RatInterval | tuple[RationalLike, RationalLike]) -> RealEmbedding:
    """Embedding pinned to the unique real root of the minimal polynomial in ``window``."""

    if not isinstance(window, RatInterval):
        window = RatInterval(*window)
    try:
        count = sturm_count(nf.minpoly, window.lo, window.hi)
    except ValueError as exc:
        raise RootSelectionError(str(exc)) from exc
    if count != 1:
        raise RootSelectionError(f"window ({window.lo}, {window.hi}) holds {count} roots of {nf.minpoly}, expected 1")
    embedding = RealEmbedding(nf, window.lo, window.hi)
    LOGGER.debug("Selected root %r in (%s, %s)", embedding, window.lo, window.hi)
    return embedding


def _horner(a: FieldElement, x: RatInterval) -> RatInterval:
    acc = RatInterval.point(a.coeffs[-1])
    for c in reversed(a.coeffs[:-1]):
        acc = (acc * x).shifted(c)
    return acc


def _decide(a: FieldElement, emb: RealEmbedding, decide: Callable[[RatInterval], Optional[T]]) -> T:
    """Refine the embedding until ``decide`` accepts the enclosure of ``a``."""

    bits = max(emb.precision_bits, emb.initial_bits)
    while True:
        emb.refine(bits)
        outcome = decide(_horner(a, emb.isolator))
        if outcome is not None:
            return outcome
        bits *= 2
        if bits > emb.max_bits:
            raise PrecisionExhaustedError(
                f"{a} undecided at {emb.max_bits} bits; reducible minimal polynomial or a bug"
            )
        LOGGER.debug("Escalating precision to %d bits for %s", bits, a)


def eval_interval(a: FieldElement, emb: RealEmbedding, width: RationalLike) -> RatInterval:
    """Certified enclosure of the real value of ``a`` no wider than ``width``."""

    width = as_rational(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if a.is_rational:
        return RatInterval.point(a.coeffs[0])
    return _decide(a, emb, lambda iv: iv if iv.width <= width else None)


def elem_sign(a: FieldElement, emb: RealEmbedding) -> int:
    """Exact sign of the real value of ``a`` (0 only for the zero element)."""

    if a.is_rational:
        return _sign(a.coeffs[0])

    def decide(iv: RatInterval) -> Optional[int]:
        if iv.lo > 0:
            return 1
        if iv.hi < 0:
            return -1
        return None

    return _decide(a, emb, decide)


def elem_floor(a: FieldElement, emb: RealEmbedding) -> int:
    """Exact floor of the real value of ``a``."""

    if a.is_rational:
        return math.floor(a.coeffs[0])

    def decide(iv: RatInterval) -> Optional[int]:
        candidate = math.floor(iv.lo)
        if iv.hi < candidate + 1:
            return candidate
        return None

    return _decide(a, emb, decide)


def compare_normalized(
    ai: FieldElement,
    ni: Fraction,
    aj: FieldElement,
    nj: Fraction,
    l: int,
    emb: RealEmbedding,
) -> Comparison:
    """Compare ``ai / ni^(1/(l-1))`` with ``aj / nj^(1/(l-1))`` without radicals.

    Both components lie in (0, 1), so the comparison is equivalent to the sign of
    ``nj * ai^(l-1) - ni * aj^(l-1)``.
    """

    difference = ai ** (l - 1) * nj - aj ** (l - 1) * ni
    if difference.is_zero:
        raise DomainViolationError(f"normalised values of {ai} and {aj} tie; the state is outside the domain")
    return Comparison.I_GREATER if elem_sign(difference, emb) > 0 else Comparison.J_GREATER

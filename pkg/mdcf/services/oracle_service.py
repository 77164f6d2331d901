"""mdcf.services.oracle_service
================================
Mini-README: An independent second opinion on every expansion. The oracle starts from
the bare family presentation (minimal polynomial, root window, component polynomials),
pins the root itself with Sturm counts and bisection, and then pushes the state through
the map as outward-rounded dyadic intervals. A digit is accepted only when both ends of
its interval have the same floor; pivot comparisons only when the compared intervals are
disjoint. Norms come from resultants of polynomial representatives kept modulo the
minimal polynomial. On any ambiguity the whole run restarts with twice the bits, up to
``Settings.oracle_max_bits``; hitting the ceiling is reported, not raised.

Only ``mdcf.algebra`` is shared with the exact engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from ..algebra import RatPoly, poly_eval, poly_invmod, poly_resultant, sturm_count
from ..config import get_settings
from ..logger import get_logger
from ..models import Digits, Discrepancy, ExpansionResult, OracleRun, Strategy
from ..numberfield import FieldElement
from ..schemas import FamilySpec
from .family_service import FamilyPresentation, family_presentation

LOGGER = get_logger(__name__)

_GUARD_BITS = 16


class _Undecided(Exception):
    """Interval too wide to settle a floor or a comparison at the current precision."""

    def __init__(self, step: int, rows: list[Digits], guess: Optional[Digits]) -> None:
        super().__init__(f"undecided at step {step}")
        self.step = step
        self.rows = rows
        self.guess = guess


class _Degenerate(Exception):
    """The orbit reached a rational or zero component."""

    def __init__(self, step: int, rows: list[Digits]) -> None:
        super().__init__(f"degenerate state at step {step}")
        self.step = step
        self.rows = rows


def norm_cross_check(a: FieldElement) -> bool:
    """Matrix-determinant norm equals Res(f, rep(a)) for the monic minimal polynomial f."""

    by_matrix = a.norm
    by_resultant = Fraction(0) if a.is_zero else poly_resultant(a.field.minpoly, a.as_poly())
    if by_matrix != by_resultant:
        LOGGER.warning("Norm paths disagree for %s: matrix %s, resultant %s", a, by_matrix, by_resultant)
        return False
    return True


@lru_cache(maxsize=4096)
def _resultant_norm(f: RatPoly, rep: RatPoly) -> Fraction:
    return abs(poly_resultant(f, rep))


@lru_cache(maxsize=4096)
def _inverse_rep(f: RatPoly, rep: RatPoly) -> RatPoly:
    return poly_invmod(rep, f)


@dataclass(frozen=True)
class _Dyadic:
    """Closed interval with endpoints on the grid 2^-bits, rounded outward."""

    lo: Fraction
    hi: Fraction

    @classmethod
    def outward(cls, lo: Fraction, hi: Fraction, bits: int) -> "_Dyadic":
        scale = 1 << bits
        return cls(Fraction(math.floor(lo * scale), scale), Fraction(math.ceil(hi * scale), scale))

    def mul(self, other: "_Dyadic", bits: int) -> "_Dyadic":
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return _Dyadic.outward(min(products), max(products), bits)

    def reciprocal(self, bits: int) -> Optional["_Dyadic"]:
        if self.lo <= 0:
            return None
        return _Dyadic.outward(1 / self.hi, 1 / self.lo, bits)

    def power(self, exponent: int, bits: int) -> "_Dyadic":
        result = _Dyadic(Fraction(1), Fraction(1))
        for _ in range(exponent):
            result = result.mul(self, bits)
        return result

    def scaled(self, factor: Fraction, bits: int) -> "_Dyadic":
        return _Dyadic.outward(self.lo * factor, self.hi * factor, bits)

    def minus(self, value: int) -> "_Dyadic":
        return _Dyadic(self.lo - value, self.hi - value)

    def floor_candidates(self) -> list[int]:
        return list(range(math.floor(self.lo), math.floor(self.hi) + 1))


class _RootPin:
    """Shrinking isolating interval of the presentation's root, kept across restarts."""

    def __init__(self, presentation: FamilyPresentation) -> None:
        f = presentation.minpoly
        lo, hi = presentation.window
        if sturm_count(f, lo, hi) != 1:
            raise ValueError(f"{presentation.label}: window ({lo}, {hi}) does not isolate one root of {f}")
        self.f = f
        self.lo, self.hi = Fraction(lo), Fraction(hi)
        self._lo_positive = poly_eval(f, self.lo) > 0

    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        target = Fraction(1, 1 << bits)
        while self.hi - self.lo > target:
            mid = (self.lo + self.hi) / 2
            value = poly_eval(self.f, mid)
            if value == 0:
                raise ValueError(f"{self.f} has the rational root {mid}")
            if (value > 0) == self._lo_positive:
                self.lo = mid
            else:
                self.hi = mid
        return self.lo, self.hi


def _enclose(rep: RatPoly, root: tuple[Fraction, Fraction], bits: int) -> _Dyadic:
    lo, hi = root
    acc = _Dyadic(Fraction(0), Fraction(0))
    for c in reversed(rep.coeffs):
        products = (acc.lo * lo, acc.lo * hi, acc.hi * lo, acc.hi * hi)
        acc = _Dyadic.outward(min(products) + c, max(products) + c, bits)
    return acc


def _settle_floor(value: _Dyadic, step: int, rows: list[Digits], guess: list[int]) -> int:
    candidates = value.floor_candidates()
    if len(candidates) != 1:
        raise _Undecided(step, rows, tuple(guess) + (candidates[0],))
    return candidates[0]


def _normalised_greater(
    values: Sequence[_Dyadic], norms: Sequence[Fraction], i: int, j: int, l: int, bits: int, step: int, rows: list[Digits]
) -> bool:
    left = values[i].power(l - 1, bits).scaled(norms[j], bits)
    right = values[j].power(l - 1, bits).scaled(norms[i], bits)
    if left.lo > right.hi:
        return True
    if right.lo > left.hi:
        return False
    raise _Undecided(step, rows, None)


def _pivot(
    values: Sequence[_Dyadic], reps: Sequence[RatPoly], f: RatPoly, strategy: Strategy, bits: int, step: int, rows: list[Digits]
) -> int:
    if len(values) == 1:
        return 0
    l = f.degree
    norms = [_resultant_norm(f, rep) for rep in reps]
    if strategy is Strategy.MAX_NORMALIZED:
        best = 0
        for j in range(1, len(values)):
            if _normalised_greater(values, norms, j, best, l, bits, step, rows):
                best = j
        return best
    smallest = min(norms)
    candidates = [i for i, n in enumerate(norms) if n == smallest]
    best = candidates[0]
    for j in candidates[1:]:
        if _normalised_greater(values, norms, best, j, l, bits, step, rows):
            best = j
    return best


def _run(presentation: FamilyPresentation, strategy: Strategy, steps: int, bits: int, pin: _RootPin) -> list[Digits]:
    f = presentation.minpoly
    root = pin.interval(bits + _GUARD_BITS)
    reps = [c % f for c in presentation.components]
    values = [_enclose(rep, root, bits) for rep in reps]
    rows: list[Digits] = []
    for step in range(1, steps + 1):
        if any(rep.degree <= 0 for rep in reps):
            raise _Degenerate(step, rows)
        if strategy is Strategy.CLASSICAL_JP:
            order = list(range(1, len(values))) + [0]
            divisor = 0
        else:
            divisor = _pivot(values, reps, f, strategy, bits, step, rows)
            order = list(range(len(values)))
        reciprocal = values[divisor].reciprocal(bits)
        if reciprocal is None:
            raise _Undecided(step, rows, None)
        inverse_rep = _inverse_rep(f, reps[divisor])
        digits: list[int] = []
        next_values: list[_Dyadic] = []
        next_reps: list[RatPoly] = []
        for i in order:
            if i == divisor:
                value, rep = reciprocal, inverse_rep
            else:
                value, rep = values[i].mul(reciprocal, bits), (reps[i] * inverse_rep) % f
            digit = _settle_floor(value, step, rows, digits)
            digits.append(digit)
            next_values.append(value.minus(digit))
            next_reps.append(rep - digit)
        rows.append(tuple(digits))
        values, reps = next_values, next_reps
    return rows


def oracle_expand(
    spec: FamilySpec,
    strategy: Optional[Strategy] = None,
    steps: Optional[int] = None,
    precision: Optional[int] = None,
) -> OracleRun:
    """Re-derive the first ``steps`` digit rows of ``spec`` with interval arithmetic only."""

    settings = get_settings()
    presentation = family_presentation(spec)
    strategy = strategy or presentation.strategy
    steps = steps if steps is not None else settings.oracle_steps
    if steps < 1:
        raise ValueError("steps must be at least 1")
    bits = precision if precision is not None else settings.oracle_initial_bits
    pin = _RootPin(presentation)
    restarts = 0
    while True:
        try:
            rows = _run(presentation, strategy, steps, bits, pin)
        except _Undecided as exc:
            if bits * 2 > settings.oracle_max_bits:
                LOGGER.warning("%s: oracle undecided at step %d with %d bits (ceiling)", presentation.label, exc.step, bits)
                rows = list(exc.rows)
                certified = [True] * len(rows)
                if exc.guess is not None:
                    rows.append(exc.guess)
                    certified.append(False)
                return OracleRun(presentation.label, strategy, bits, rows, certified, "precision-ceiling", restarts)
            bits *= 2
            restarts += 1
            LOGGER.debug("%s: oracle restart %d at %d bits (step %d undecided)", presentation.label, restarts, bits, exc.step)
            continue
        except _Degenerate as exc:
            LOGGER.warning("%s: oracle orbit degenerates at step %d", presentation.label, exc.step)
            return OracleRun(presentation.label, strategy, bits, exc.rows, [True] * len(exc.rows), "left-domain", restarts)
        LOGGER.info("%s: oracle certified %d rows at %d bits", presentation.label, len(rows), bits)
        return OracleRun(presentation.label, strategy, bits, rows, [True] * len(rows), "complete", restarts)


def cross_check(exact: ExpansionResult, oracle: Sequence[Digits]) -> list[Discrepancy]:
    """Positional diff of engine digits against oracle digits; empty means agreement."""

    discrepancies = []
    for n, reference in enumerate(oracle, start=1):
        engine = exact.digit_at(n)
        if engine != tuple(reference):
            discrepancies.append(
                Discrepancy(step=n, kind="oracle", engine=engine, reference=tuple(reference), note="engine and oracle differ")
            )
    if discrepancies:
        LOGGER.warning("Oracle disagrees with the engine at %d steps (first: %d)", len(discrepancies), discrepancies[0].step)
    return discrepancies

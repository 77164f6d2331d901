"""mdcf.services.expansion_service
===================================
Mini-README: The Algebraic Jacobi-Perron engine. ``cf_step`` applies the expansion map
(pivot position gets frac(1/alpha_p), every other position i gets frac(alpha_i/alpha_p))
and emits the floor digits; ``cf_expand`` iterates it and certifies periodicity by
exact canonical-key collisions. ``step_inverse`` and ``convergent`` run the map
backwards. The classical Jacobi-Perron step (``jp_step``/``jp_expand``) shares the
cycle detector. Budget exhaustion and leaving the domain are statuses, not exceptions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Sequence, TypeVar, Union

from ..config import get_settings
from ..logger import get_logger
from ..models import (
    Discrepancy,
    ExpansionResult,
    ExpansionState,
    ExpansionStatus,
    StepRecord,
    Strategy,
)
from ..numberfield import FieldElement, independent_with_one
from ..realembed import (
    Comparison,
    DomainViolationError,
    RealEmbedding,
    compare_normalized,
    elem_floor,
    elem_sign,
)

LOGGER = get_logger(__name__)

Scalar = TypeVar("Scalar", FieldElement, Fraction)


class LeftDomainError(ValueError):
    """Raised when a state is outside the domain; ``step`` is 0 for an initial state."""

    def __init__(self, step: int, reason: str) -> None:
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


def validate_state(state: ExpansionState, *, step: int = 0, certify_range: bool = True) -> None:
    """Check domain membership: l-1 nonzero irrational components in (0, 1), independent with 1."""

    components = state.components
    expected = state.field.degree - 1
    if len(components) != expected:
        raise LeftDomainError(step, f"expected {expected} components, got {len(components)}")
    for index, component in enumerate(components, start=1):
        if component.field != state.field:
            raise LeftDomainError(step, f"component {index} lives in another field")
        if component.is_zero:
            raise LeftDomainError(step, f"component {index} is zero")
        if component.is_rational:
            raise LeftDomainError(step, f"component {index} is the rational {component.rational_value}")
        if certify_range and (elem_sign(component, state.embedding) <= 0 or elem_floor(component, state.embedding) != 0):
            raise LeftDomainError(step, f"component {index} = {component} is not in (0, 1)")
    if not independent_with_one(list(components)):
        raise LeftDomainError(step, "1 and the components are linearly dependent over Q")


def make_state(embedding: RealEmbedding, components: Sequence[FieldElement]) -> ExpansionState:
    """Validated initial state."""

    state = ExpansionState(embedding, tuple(components))
    validate_state(state)
    return state


def pivot_select(state: ExpansionState, strategy: Strategy) -> int:
    """1-based index of the component placed in the denominator."""

    components = state.components
    if len(components) == 1:
        return 1
    l = state.field.degree
    emb = state.embedding
    norms = [abs(c.norm) for c in components]

    def beats(i: int, j: int) -> bool:
        return compare_normalized(components[i], norms[i], components[j], norms[j], l, emb) is Comparison.I_GREATER

    if strategy is Strategy.MAX_NORMALIZED:
        best = 0
        for j in range(1, len(components)):
            if beats(j, best):
                best = j
        return best + 1
    if strategy is Strategy.UNIT_NORM_MIN:
        smallest = min(norms)
        candidates = [i for i, n in enumerate(norms) if n == smallest]
        best = candidates[0]
        for j in candidates[1:]:
            if beats(best, j):
                best = j
        return best + 1
    raise ValueError(f"{strategy.value} has no pivot rule")


def cf_step(state: ExpansionState, strategy: Strategy, *, step: int = 1) -> tuple[StepRecord, ExpansionState]:
    """One application of the expansion map; raises ``LeftDomainError`` if the image leaves the domain."""

    pivot = pivot_select(state, strategy)
    reciprocal = state.components[pivot - 1].inverse()
    digits: list[int] = []
    image: list[FieldElement] = []
    for index, component in enumerate(state.components, start=1):
        value = reciprocal if index == pivot else component * reciprocal
        digit = elem_floor(value, state.embedding)
        digits.append(digit)
        image.append(value - digit)
    record = StepRecord(n=step, pivot=pivot, digits=tuple(digits), strategy=strategy)
    following = ExpansionState(state.embedding, tuple(image))
    # floors already place every component in [0, 1)
    validate_state(following, step=step, certify_range=False)
    LOGGER.debug("step %d pivot=%d digits=%s", step, pivot, record.digits)
    return record, following


def _iterate(
    state: ExpansionState,
    strategy: Strategy,
    advance: Callable[[ExpansionState, int], tuple[StepRecord, ExpansionState]],
    max_steps: Optional[int],
) -> ExpansionResult:
    if max_steps is None:
        max_steps = get_settings().default_max_steps
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    states = [state]
    records: list[StepRecord] = []
    visited = {state.key(): 0}
    discrepancies: list[Discrepancy] = []
    status = ExpansionStatus.BUDGET_EXHAUSTED
    for n in range(1, max_steps + 1):
        try:
            record, state = advance(state, n)
        except (LeftDomainError, DomainViolationError) as exc:
            status = ExpansionStatus.LEFT_DOMAIN
            discrepancies.append(Discrepancy(step=n, kind="left-domain", note=str(exc)))
            LOGGER.info("Expansion left the domain at step %d: %s", n, exc)
            break
        records.append(record)
        states.append(state)
        key = state.key()
        entry = visited.get(key)
        if entry is not None:
            LOGGER.info("Cycle found: preperiod %d, period %d after %d steps", entry, n - entry, n)
            return ExpansionResult(strategy, records[:entry], records[entry:], ExpansionStatus.PERIODIC, states, discrepancies)
        visited[key] = n
    if status is ExpansionStatus.BUDGET_EXHAUSTED:
        LOGGER.info("No cycle within %d steps", max_steps)
    return ExpansionResult(strategy, records, [], status, states, discrepancies)


def cf_expand(state: ExpansionState, strategy: Strategy, max_steps: Optional[int] = None) -> ExpansionResult:
    """Iterate the map until a state repeats exactly, the budget runs out, or the domain is left."""

    return _iterate(state, strategy, lambda s, n: cf_step(s, strategy, step=n), max_steps)


def _is_zero(value: Union[FieldElement, Fraction]) -> bool:
    return value.is_zero if isinstance(value, FieldElement) else value == 0


def _unfold(digits: Sequence[int], pivot: int, tail: Sequence[Scalar]) -> list[Scalar]:
    p = pivot - 1
    denominator = tail[p] + digits[p]
    if _is_zero(denominator):
        raise ValueError(f"a_p + b_p vanishes at pivot {pivot}; the record does not belong to this state")
    head = 1 / denominator
    return [head if i == p else (t + d) * head for i, (t, d) in enumerate(zip(tail, digits))]


def _unfold_jp(digits: Sequence[int], tail: Sequence[Scalar]) -> list[Scalar]:
    denominator = tail[-1] + digits[-1]
    if _is_zero(denominator):
        raise ValueError("the last digit and component sum to zero")
    head = 1 / denominator
    return [head] + [(t + d) * head for t, d in zip(tail[:-1], digits[:-1])]


def step_inverse(record: StepRecord, following: ExpansionState) -> ExpansionState:
    """Exact predecessor of ``following`` under the step that emitted ``record``."""

    if record.strategy is Strategy.CLASSICAL_JP:
        return jp_step_inverse(record, following)
    components = _unfold(record.digits, record.pivot, following.components)
    return ExpansionState(following.embedding, tuple(components))


def convergent(records: Sequence[StepRecord], upto: int) -> list[Fraction]:
    """Rational vector obtained by zeroing the tail after ``upto`` steps and unfolding."""

    if upto < 0 or upto > len(records):
        raise ValueError(f"upto must lie in 0..{len(records)}, got {upto}")
    if not records:
        return []
    tail = [Fraction(0)] * len(records[0].digits)
    for record in reversed(records[:upto]):
        if record.strategy is Strategy.CLASSICAL_JP:
            tail = _unfold_jp(record.digits, tail)
        else:
            tail = _unfold(record.digits, record.pivot, tail)
    return tail


def jp_step(state: ExpansionState, *, step: int = 1) -> tuple[StepRecord, ExpansionState]:
    """Classical JP step: (psi_2/psi_1, ..., psi_l/psi_1, 1/psi_1) reduced mod 1."""

    for index, component in enumerate(state.components, start=1):
        if component.is_zero:
            raise LeftDomainError(step, f"component {index} is zero")
    reciprocal = state.components[0].inverse()
    values = [c * reciprocal for c in state.components[1:]] + [reciprocal]
    digits = tuple(elem_floor(v, state.embedding) for v in values)
    following = ExpansionState(state.embedding, tuple(v - d for v, d in zip(values, digits)))
    LOGGER.debug("jp step %d digits=%s", step, digits)
    return StepRecord(n=step, pivot=1, digits=digits, strategy=Strategy.CLASSICAL_JP), following


def jp_step_inverse(record: StepRecord, following: ExpansionState) -> ExpansionState:
    components = _unfold_jp(record.digits, following.components)
    return ExpansionState(following.embedding, tuple(components))


def jp_expand(state: ExpansionState, max_steps: Optional[int] = None) -> ExpansionResult:
    """Classical JP expansion with the same exact cycle detection as ``cf_expand``."""

    return _iterate(state, Strategy.CLASSICAL_JP, lambda s, n: jp_step(s, step=n), max_steps)

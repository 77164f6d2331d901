"""mdcf.models
=================
Mini-README: Domain records shared by the expansion engine, the family catalogue and
the oracle: strategy/status/policy enumerations, expansion states and step records,
expansion results with their discrepancy log, expected digit tables, verification
reports and oracle runs. Records are plain dataclasses; JSON shapes live in
``mdcf.schemas``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .numberfield import FieldElement, NumberField, canonical_key
from .realembed import RealEmbedding


class Strategy(str, enum.Enum):
    """Pivot rule of an expansion (the classical JP map has a fixed divisor)."""

    MAX_NORMALIZED = "max-normalized"
    UNIT_NORM_MIN = "unit-pivot"
    CLASSICAL_JP = "classical-jp"


class ExpansionStatus(str, enum.Enum):
    """Terminal status of an expansion run."""

    PERIODIC = "Periodic"
    BUDGET_EXHAUSTED = "BudgetExhausted"
    LEFT_DOMAIN = "LeftDomain"


class ComparisonPolicy(str, enum.Enum):
    """How a digit-table row is judged against the engine."""

    STRICT = "Strict"
    ORACLE_ADJUDICATED = "OracleAdjudicated"


class ExitCode(enum.IntEnum):
    """Process exit codes of the command line."""

    OK = 0
    INPUT_ERROR = 1
    BUDGET_EXHAUSTED = 2
    LEFT_DOMAIN = 3
    VERIFICATION_FAILED = 4


Digits = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class ExpansionState:
    """Tuple of field elements in [0, 1) under a fixed real embedding."""

    embedding: RealEmbedding
    components: tuple[FieldElement, ...]

    @property
    def field(self) -> NumberField:
        return self.embedding.field

    def key(self) -> bytes:
        return b"".join(canonical_key(c) for c in self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpansionState):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class StepRecord:
    """Digits emitted by one application of the map; ``n`` and ``pivot`` are 1-based."""

    n: int
    pivot: int
    digits: Digits
    strategy: Strategy


@dataclass(frozen=True)
class Discrepancy:
    """One entry of a discrepancy log (table mismatch, oracle disagreement, domain exit)."""

    step: int
    kind: str
    engine: Optional[Digits] = None
    reference: Optional[Digits] = None
    note: str = ""


@dataclass
class ExpansionResult:
    """Outcome of an expansion: preperiod/period records plus every visited state."""

    strategy: Strategy
    preperiod: list[StepRecord]
    period: list[StepRecord]
    status: ExpansionStatus
    states: list[ExpansionState]
    discrepancies: list[Discrepancy] = field(default_factory=list)

    @property
    def records(self) -> list[StepRecord]:
        return self.preperiod + self.period

    @property
    def states_visited(self) -> int:
        """Distinct states seen, the initial one included."""

        if self.status is ExpansionStatus.PERIODIC:
            return len(self.states) - 1
        return len(self.states)

    @property
    def cycle_start(self) -> Optional[int]:
        if self.status is not ExpansionStatus.PERIODIC:
            return None
        return len(self.preperiod)

    def digit_at(self, n: int) -> Optional[Digits]:
        """Digits of step ``n`` (1-based), unrolling the period; ``None`` past the data."""

        if n < 1:
            raise ValueError("steps are numbered from 1")
        if n <= len(self.preperiod):
            return self.preperiod[n - 1].digits
        if self.period:
            return self.period[(n - len(self.preperiod) - 1) % len(self.period)].digits
        return None

    def digits(self, count: int) -> list[Digits]:
        rows = []
        for n in range(1, count + 1):
            row = self.digit_at(n)
            if row is None:
                break
            rows.append(row)
        return rows


@dataclass(frozen=True)
class ExpectedRow:
    """One table row; ``policies`` holds one comparison policy per digit."""

    n: int
    digits: Digits
    policies: tuple[ComparisonPolicy, ...]

    @property
    def policy(self) -> ComparisonPolicy:
        if ComparisonPolicy.ORACLE_ADJUDICATED in self.policies:
            return ComparisonPolicy.ORACLE_ADJUDICATED
        return ComparisonPolicy.STRICT


@dataclass(frozen=True)
class ExpectedTable:
    """A digit table instantiated at concrete family parameters."""

    preperiod: tuple[ExpectedRow, ...]
    period: tuple[ExpectedRow, ...]
    source: str

    def row_at(self, n: int) -> ExpectedRow:
        """Row for step ``n``, with the period continued past the last listed row."""

        if n <= len(self.preperiod):
            return self.preperiod[n - 1]
        base = self.period[(n - len(self.preperiod) - 1) % len(self.period)]
        return ExpectedRow(n=n, digits=base.digits, policies=base.policies)


@dataclass(frozen=True)
class RowCheck:
    n: int
    expected: Digits
    observed: Optional[Digits]
    policies: tuple[ComparisonPolicy, ...]

    @property
    def policy(self) -> ComparisonPolicy:
        if ComparisonPolicy.ORACLE_ADJUDICATED in self.policies:
            return ComparisonPolicy.ORACLE_ADJUDICATED
        return ComparisonPolicy.STRICT

    @property
    def matched(self) -> bool:
        return self.expected == self.observed

    @property
    def strict_matched(self) -> bool:
        """Every digit under the Strict policy agrees with the engine."""

        if self.observed is None:
            return ComparisonPolicy.STRICT not in self.policies
        return all(
            e == o
            for e, o, p in zip(self.expected, self.observed, self.policies)
            if p is ComparisonPolicy.STRICT
        )


@dataclass
class OracleRun:
    """Digits re-derived by the interval oracle, with per-step certification."""

    label: str
    strategy: Strategy
    precision_bits: int
    rows: list[Digits]
    certified: list[bool]
    status: str
    restarts: int = 0

    @property
    def certified_rows(self) -> list[Digits]:
        return [row for row, ok in zip(self.rows, self.certified) if ok]


@dataclass
class FamilyReport:
    """Verification verdict for one family instance."""

    label: str
    strategy: Strategy
    status: ExpansionStatus
    preperiod: list[Digits]
    period: list[Digits]
    checks: list[RowCheck] = field(default_factory=list)
    claimed_period: Optional[int] = None
    table_source: Optional[str] = None
    oracle_status: Optional[str] = None
    oracle_bits: Optional[int] = None
    discrepancies: list[Discrepancy] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def period_claim_holds(self) -> bool:
        if self.claimed_period is None:
            return True
        return self.status is ExpansionStatus.PERIODIC and len(self.period) == self.claimed_period

    @property
    def strict_rows_match(self) -> bool:
        return all(c.strict_matched for c in self.checks)

    @property
    def oracle_agrees(self) -> bool:
        return self.oracle_status in (None, "complete") and not any(d.kind == "oracle" for d in self.discrepancies)

    @property
    def ok(self) -> bool:
        return self.strict_rows_match and self.period_claim_holds and self.oracle_agrees

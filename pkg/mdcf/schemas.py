"""mdcf.schemas
=================
Mini-README: Pydantic models validating everything that crosses the library boundary.
``FamilySpec`` is the discriminated union of the four studied families (constraints
enforced at construction), ``RunConfig`` validates a command line before any
expansion runs, and ``ExpansionDocument``/``ReportDocument`` are the versioned JSON
output contracts. Rationals travel as "p/q" strings so nothing loses precision.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

from .algebra import as_rational, format_rational
from .models import (
    Discrepancy,
    ExpansionResult,
    ExpansionStatus,
    FamilyReport,
    Strategy,
)

SCHEMA_VERSION = 1


class PurePower(BaseModel):
    """Root of x^l - (m^l + 1): the field of the l-th root of m^l + 1."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["pure-power"] = "pure-power"
    l: int = Field(ge=2)
    m: int = Field(ge=1)

    @property
    def label(self) -> str:
        return f"pure-power(l={self.l}, m={self.m})"


class Trinomial(BaseModel):
    """Root in (0, 1) of x^3 - m x + 1."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["trinomial"] = "trinomial"
    m: int = Field(ge=3)

    @property
    def label(self) -> str:
        return f"trinomial(m={self.m})"


class ShiftedCubic(BaseModel):
    """Root in (-a, -a + 1) of x^3 + 3a x^2 + b x + (ab - 2a^3 + 1)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["shifted-cubic"] = "shifted-cubic"
    a: int
    b: int

    @model_validator(mode="after")
    def _check_bound(self) -> "ShiftedCubic":
        if self.b > 3 * self.a**2 - 3:
            raise ValueError(f"b must satisfy b <= 3a^2 - 3 = {3 * self.a**2 - 3}, got b={self.b}")
        return self

    @property
    def reduced_m(self) -> int:
        return 3 * self.a**2 - self.b

    @property
    def label(self) -> str:
        return f"shifted-cubic(a={self.a}, b={self.b}; m={self.reduced_m})"


class JPExample(BaseModel):
    """The pair (1/alpha, alpha - k) for the root alpha > 1 of x^3 - k x^2 - l x - 1."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["jp-example"] = "jp-example"
    k: int = Field(ge=0)
    l: int = Field(ge=0)

    @model_validator(mode="after")
    def _check_parameters(self) -> "JPExample":
        if self.k < self.l:
            raise ValueError(f"need k >= l, got k={self.k}, l={self.l}")
        if self.k + self.l < 2:
            raise ValueError(f"need k + l >= 2, got {self.k + self.l}")
        return self

    @property
    def label(self) -> str:
        return f"jp-example(k={self.k}, l={self.l})"


FamilySpec = Annotated[Union[PurePower, Trinomial, ShiftedCubic, JPExample], Field(discriminator="kind")]
FAMILY_ADAPTER: TypeAdapter[FamilySpec] = TypeAdapter(FamilySpec)


def parse_family(data: dict) -> FamilySpec:
    return FAMILY_ADAPTER.validate_python(data)


def _rational_text(value: str) -> str:
    return format_rational(as_rational(value))


class RawInput(BaseModel):
    """Explicit field, window and state for an expansion outside the catalogue.

    ``minpoly`` is listed highest degree first; each state vector holds power-basis
    coordinates lowest degree first.
    """

    minpoly: list[str] = Field(min_length=3)
    window: tuple[str, str]
    state: list[list[str]] = Field(min_length=1)

    @field_validator("minpoly")
    @classmethod
    def _monic(cls, value: list[str]) -> list[str]:
        normalised = [_rational_text(v) for v in value]
        if as_rational(normalised[0]) != 1:
            raise ValueError("the minimal polynomial must be monic (leading coefficient 1)")
        return normalised

    @field_validator("window")
    @classmethod
    def _ordered(cls, value: tuple[str, str]) -> tuple[str, str]:
        lo, hi = (_rational_text(v) for v in value)
        if as_rational(lo) >= as_rational(hi):
            raise ValueError("the window must satisfy lo < hi")
        return lo, hi

    @field_validator("state")
    @classmethod
    def _rationals(cls, value: list[list[str]]) -> list[list[str]]:
        return [[_rational_text(v) for v in component] for component in value]

    @model_validator(mode="after")
    def _shape(self) -> "RawInput":
        degree = len(self.minpoly) - 1
        if len(self.state) != degree - 1:
            raise ValueError(f"a degree-{degree} field needs {degree - 1} state components, got {len(self.state)}")
        for component in self.state:
            if not 1 <= len(component) <= degree:
                raise ValueError(f"state components need 1..{degree} coordinates, got {len(component)}")
        return self


class RunConfig(BaseModel):
    """Validated command line."""

    command: Literal["expand", "verify", "jp"]
    families: list[FamilySpec] = Field(default_factory=list)
    raw: Optional[RawInput] = None
    strategy: Optional[Strategy] = None
    max_steps: int = Field(default=10000, ge=1)
    steps: int = Field(default=50, ge=1)
    output_format: Literal["json", "csv", "table"] = "json"
    oracle: bool = True
    oracle_steps: Optional[int] = Field(default=None, ge=1)
    jobs: int = Field(default=1, ge=1)
    fixtures_dir: Optional[Path] = None

    @model_validator(mode="after")
    def _inputs(self) -> "RunConfig":
        if self.command == "expand" and (self.raw is None) == (len(self.families) != 1):
            raise ValueError("expand takes exactly one family or one raw input")
        if self.command in ("verify", "jp") and not self.families:
            raise ValueError(f"{self.command} needs at least one family")
        if self.command == "jp" and any(not isinstance(f, JPExample) for f in self.families):
            raise ValueError("jp only runs the jp-example family")
        if self.strategy is Strategy.CLASSICAL_JP and self.command != "jp":
            raise ValueError("the classical-jp strategy belongs to the jp command")
        return self


class FieldDocument(BaseModel):
    minpoly: list[str]


class EmbeddingDocument(BaseModel):
    window: tuple[str, str]


class StepDocument(BaseModel):
    n: int
    pivot: int
    digits: list[int]
    state: list[list[str]]


class DiscrepancyDocument(BaseModel):
    step: int
    kind: str
    engine: Optional[list[int]] = None
    paper_or_oracle: Optional[list[int]] = None
    note: str = ""

    @classmethod
    def from_discrepancy(cls, item: Discrepancy) -> "DiscrepancyDocument":
        return cls(
            step=item.step,
            kind=item.kind,
            engine=list(item.engine) if item.engine is not None else None,
            paper_or_oracle=list(item.reference) if item.reference is not None else None,
            note=item.note,
        )


def _coordinates(coeffs: tuple[Fraction, ...]) -> list[str]:
    return [format_rational(c) for c in coeffs]


class ExpansionDocument(BaseModel):
    """JSON contract of an expansion; ``steps[i].state`` is the state after step ``n``."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    family: Optional[str] = None
    field: FieldDocument
    embedding: EmbeddingDocument
    strategy: Strategy
    initial: list[list[str]]
    steps: list[StepDocument]
    preperiod_len: int
    period_len: int
    status: ExpansionStatus
    discrepancies: list[DiscrepancyDocument] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: ExpansionResult, family: Optional[str] = None) -> "ExpansionDocument":
        first = result.states[0]
        lo, hi = first.embedding.window
        records = result.records
        steps = [
            StepDocument(
                n=record.n,
                pivot=record.pivot,
                digits=list(record.digits),
                state=[_coordinates(c.coeffs) for c in state.components],
            )
            for record, state in zip(records, result.states[1:])
        ]
        return cls(
            family=family,
            field=FieldDocument(minpoly=[format_rational(c) for c in reversed(first.field.minpoly.coeffs)]),
            embedding=EmbeddingDocument(window=(format_rational(lo), format_rational(hi))),
            strategy=result.strategy,
            initial=[_coordinates(c.coeffs) for c in first.components],
            steps=steps,
            preperiod_len=len(result.preperiod),
            period_len=len(result.period),
            status=result.status,
            discrepancies=[DiscrepancyDocument.from_discrepancy(d) for d in result.discrepancies],
        )

    def digit_rows(self) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
        """(preperiod, period) digit rows reconstructed from the step list."""

        rows = [tuple(step.digits) for step in self.steps]
        return rows[: self.preperiod_len], rows[self.preperiod_len : self.preperiod_len + self.period_len]


class DigitStreamDocument(BaseModel):
    """First ``len(rows)`` digit rows of an expansion, the period unrolled."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    family: str
    strategy: Strategy
    status: ExpansionStatus
    preperiod_len: int
    period_len: int
    rows: list[list[int]]


class RowCheckDocument(BaseModel):
    n: int
    expected: list[int]
    observed: Optional[list[int]]
    policy: str
    policies: list[str]
    matched: bool
    strict_matched: bool


class FamilyReportDocument(BaseModel):
    label: str
    strategy: Strategy
    status: ExpansionStatus
    preperiod: list[list[int]]
    period: list[list[int]]
    claimed_period: Optional[int]
    table_source: Optional[str]
    checks: list[RowCheckDocument]
    oracle_status: Optional[str]
    oracle_bits: Optional[int]
    discrepancies: list[DiscrepancyDocument]
    notes: list[str]
    ok: bool

    @classmethod
    def from_report(cls, report: FamilyReport) -> "FamilyReportDocument":
        return cls(
            label=report.label,
            strategy=report.strategy,
            status=report.status,
            preperiod=[list(r) for r in report.preperiod],
            period=[list(r) for r in report.period],
            claimed_period=report.claimed_period,
            table_source=report.table_source,
            checks=[
                RowCheckDocument(
                    n=c.n,
                    expected=list(c.expected),
                    observed=list(c.observed) if c.observed is not None else None,
                    policy=c.policy.value,
                    policies=[p.value for p in c.policies],
                    matched=c.matched,
                    strict_matched=c.strict_matched,
                )
                for c in report.checks
            ],
            oracle_status=report.oracle_status,
            oracle_bits=report.oracle_bits,
            discrepancies=[DiscrepancyDocument.from_discrepancy(d) for d in report.discrepancies],
            notes=list(report.notes),
            ok=report.ok,
        )


class ReportDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    reports: list[FamilyReportDocument]
    ok: bool

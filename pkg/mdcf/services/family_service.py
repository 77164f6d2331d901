"""mdcf.services.family_service
================================
Mini-README: The catalogue of studied families. ``family_presentation`` turns a
``FamilySpec`` into plain data (minimal polynomial, root window, component polynomials,
default strategy); ``family_build`` turns that into a field, a pinned embedding and a
validated initial state. The module also carries the cubic depression used to map a
shifted cubic onto a trinomial, the published digit tables (versioned CSV fixtures
with parametric cells such as ``3*m**2``) and ``verify_family``, which compares an
expansion against its table, its period claim and the interval oracle.

Table lookup: ``fixtures_dir`` argument, then ``Settings.fixtures_dir``
(``MDCF_FIXTURES_DIR``), then the packaged ``mdcf/fixtures`` directory.
"""

from __future__ import annotations

import ast
import csv
import operator
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional

from ..algebra import RatPoly, RationalLike, as_rational
from ..config import get_settings
from ..logger import get_logger
from ..models import (
    ComparisonPolicy,
    Discrepancy,
    ExpansionState,
    ExpansionStatus,
    ExpectedRow,
    ExpectedTable,
    FamilyReport,
    RowCheck,
    Strategy,
)
from ..numberfield import NumberField
from ..realembed import RealEmbedding, select_root
from ..schemas import FamilySpec, JPExample, PurePower, ShiftedCubic, Trinomial
from .expansion_service import cf_expand, jp_expand, make_state

LOGGER = get_logger(__name__)

PACKAGED_FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
TABLE_VERSION = "v1"


class TableNotFoundError(LookupError):
    """Raised when no digit table is published for a family and strategy."""


@dataclass(frozen=True)
class FamilyPresentation:
    """A family instance as plain polynomials; components are polynomials in the root."""

    label: str
    minpoly: RatPoly
    window: tuple[Fraction, Fraction]
    components: tuple[RatPoly, ...]
    strategy: Strategy


class BuiltFamily(NamedTuple):
    field: NumberField
    embedding: RealEmbedding
    state: ExpansionState
    strategy: Strategy


def default_strategy(spec: FamilySpec) -> Strategy:
    if isinstance(spec, JPExample):
        return Strategy.CLASSICAL_JP
    if isinstance(spec, PurePower) and spec.l >= 4:
        return Strategy.UNIT_NORM_MIN
    return Strategy.MAX_NORMALIZED


def _x(degree: int = 1) -> RatPoly:
    return RatPoly.monomial(degree)


def family_presentation(spec: FamilySpec) -> FamilyPresentation:
    """Minimal polynomial, isolating window and initial components of ``spec``."""

    if isinstance(spec, PurePower):
        l, m = spec.l, spec.m
        minpoly = _x(l) - (m**l + 1)
        window = (Fraction(m), Fraction(m + 1))
        components = tuple(_x(j) - m**j for j in range(1, l))
    elif isinstance(spec, Trinomial):
        minpoly = _x(3) - _x().scale(spec.m) + 1
        window = (Fraction(0), Fraction(1))
        components = (_x(), _x(2))
    elif isinstance(spec, ShiftedCubic):
        a, b = spec.a, spec.b
        minpoly = RatPoly.from_highest([1, 3 * a, b, a * b - 2 * a**3 + 1])
        window = (Fraction(-a), Fraction(-a + 1))
        # gamma - floor(gamma) = gamma + a
        shifted = _x() + a
        components = (shifted, shifted * shifted)
    elif isinstance(spec, JPExample):
        k, l = spec.k, spec.l
        minpoly = RatPoly.from_highest([1, -k, -l, -1])
        window = (Fraction(k), Fraction(k + 1))
        # 1/alpha = alpha^2 - k alpha - l and kappa = alpha - k
        components = (RatPoly.from_highest([1, -k, -l]), _x() - k)
    else:
        raise TypeError(f"unknown family {spec!r}")
    return FamilyPresentation(spec.label, minpoly, window, components, default_strategy(spec))


def family_build(spec: FamilySpec, strategy: Optional[Strategy] = None) -> BuiltFamily:
    """Field, pinned real root and validated initial state for ``spec``."""

    presentation = family_presentation(spec)
    field = NumberField(presentation.minpoly)
    embedding = select_root(field, presentation.window)
    state = make_state(embedding, [field.from_poly(c) for c in presentation.components])
    LOGGER.debug("Built %s in %s", spec.label, field)
    return BuiltFamily(field, embedding, state, strategy or presentation.strategy)


def depress_cubic(k: RationalLike, lcoef: RationalLike, n: RationalLike) -> tuple[Fraction, Fraction]:
    """(p, q) with x^3 + k x^2 + lcoef x + n = (y^3 + p y + q) under x = y - k/3."""

    k, lcoef, n = as_rational(k), as_rational(lcoef), as_rational(n)
    p = lcoef - k**2 / 3
    q = n - k * lcoef / 3 + 2 * k**3 / 27
    return p, q


def shifted_state_identity(a: int, b: int) -> bool:
    """True iff the shifted-cubic state maps coefficient-for-coefficient onto the
    trinomial state for m = 3a^2 - b under gamma = delta - a."""

    shifted = ShiftedCubic(a=a, b=b)
    reduced = Trinomial(m=shifted.reduced_m)
    source = family_presentation(shifted)
    target = family_presentation(reduced)
    if source.minpoly.shift(-a) != target.minpoly:
        return False
    if (source.window[0] + a, source.window[1] + a) != target.window:
        return False
    for mine, theirs in zip(source.components, target.components):
        if mine.shift(-a) % target.minpoly != theirs % target.minpoly:
            return False
    return True


def expected_period_length(spec: FamilySpec, strategy: Optional[Strategy] = None) -> Optional[int]:
    """State-cycle length asserted for ``spec``, or ``None`` where nothing is asserted."""

    strategy = strategy or default_strategy(spec)
    if isinstance(spec, JPExample):
        return 1 if strategy is Strategy.CLASSICAL_JP else None
    if isinstance(spec, PurePower):
        if spec.l <= 3 or strategy is Strategy.UNIT_NORM_MIN:
            return spec.l - 1
        return None
    if strategy is Strategy.MAX_NORMALIZED:
        return 4
    return None


_OPERATORS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Pow: operator.pow,
    ast.FloorDiv: operator.floordiv,
}


def evaluate_cell(text: str, params: dict[str, int]) -> int:
    """Evaluate an integer polynomial cell like ``4*m**3`` or ``m-2``."""

    def walk(node: ast.AST) -> int:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise ValueError(f"unknown parameter {node.id!r} in {text!r}")
            return params[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = walk(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.BinOp) and type(node.op) in _OPERATORS:
            return _OPERATORS[type(node.op)](walk(node.left), walk(node.right))
        raise ValueError(f"unsupported expression {text!r}")

    return walk(ast.parse(text.strip(), mode="eval"))


def _table_name(spec: FamilySpec, strategy: Strategy) -> tuple[str, dict[str, int]]:
    if isinstance(spec, PurePower):
        if spec.l == 2:
            return "pure-power-l2", {"m": spec.m}
        if spec.l == 3 and strategy is Strategy.MAX_NORMALIZED:
            return ("pure-power-l3-m1" if spec.m == 1 else "pure-power-l3"), {"m": spec.m}
        if spec.l == 4 and spec.m >= 2 and strategy is Strategy.UNIT_NORM_MIN:
            return "pure-power-l4", {"m": spec.m}
    elif isinstance(spec, Trinomial) and strategy is Strategy.MAX_NORMALIZED:
        return "trinomial", {"m": spec.m}
    elif isinstance(spec, ShiftedCubic) and strategy is Strategy.MAX_NORMALIZED:
        if (spec.a, spec.b) == (1, 0):
            return "shifted-cubic-a1-b0", {"a": 1, "b": 0, "m": 3}
        return "trinomial", {"m": spec.reduced_m}
    elif isinstance(spec, JPExample) and strategy is Strategy.CLASSICAL_JP:
        return "jp-example", {"k": spec.k, "l": spec.l}
    raise TableNotFoundError(f"no published digit table for {spec.label} under {strategy.value}")


def fixtures_root(fixtures_dir: Optional[Path] = None) -> Path:
    return fixtures_dir or get_settings().fixtures_dir or PACKAGED_FIXTURES


def parse_policies(cell: str, width: int, source: str = "table") -> tuple[ComparisonPolicy, ...]:
    """Expand a policy cell: one policy for the whole row, or one per digit joined by ``;``."""

    parts = [ComparisonPolicy(part.strip()) for part in cell.split(";")]
    if len(parts) == 1:
        return tuple(parts) * width
    if len(parts) != width:
        raise ValueError(f"{source}: policy cell {cell!r} names {len(parts)} policies for {width} digits")
    return tuple(parts)


def load_table(name: str, params: dict[str, int], fixtures_dir: Optional[Path] = None) -> ExpectedTable:
    """Instantiate ``<name>.v1.csv`` at ``params``; ``#`` lines are comments."""

    path = fixtures_root(fixtures_dir) / f"{name}.{TABLE_VERSION}.csv"
    if not path.is_file():
        raise TableNotFoundError(f"missing table fixture {path}")
    with path.open(newline="", encoding="utf-8") as handle:
        lines = [line for line in handle if line.strip() and not line.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    columns = [c for c in reader.fieldnames or [] if c not in ("n", "block", "policy")]
    blocks: dict[str, list[ExpectedRow]] = {"preperiod": [], "period": []}
    for record in reader:
        block = record["block"].strip()
        if block not in blocks:
            raise ValueError(f"{path.name}: unknown block {block!r}")
        row = ExpectedRow(
            n=int(record["n"]),
            digits=tuple(evaluate_cell(record[c], params) for c in columns),
            policies=parse_policies(record["policy"], len(columns), path.name),
        )
        blocks[block].append(row)
    if not blocks["period"]:
        raise ValueError(f"{path.name}: a table needs a nonempty period")
    return ExpectedTable(tuple(blocks["preperiod"]), tuple(blocks["period"]), source=path.name)


def expected_table(
    spec: FamilySpec,
    strategy: Optional[Strategy] = None,
    fixtures_dir: Optional[Path] = None,
) -> ExpectedTable:
    """Published table for ``spec`` instantiated at its parameters."""

    name, params = _table_name(spec, strategy or default_strategy(spec))
    return load_table(name, params, fixtures_dir)


def verify_family(
    spec: FamilySpec,
    strategy: Optional[Strategy] = None,
    max_steps: Optional[int] = None,
    *,
    oracle: bool = True,
    oracle_steps: Optional[int] = None,
    fixtures_dir: Optional[Path] = None,
) -> FamilyReport:
    """Expand ``spec`` and judge it against its table, period claim and the oracle."""

    from .oracle_service import cross_check, oracle_expand

    built = family_build(spec, strategy)
    strategy = built.strategy
    if strategy is Strategy.CLASSICAL_JP:
        result = jp_expand(built.state, max_steps)
    else:
        result = cf_expand(built.state, strategy, max_steps)
    report = FamilyReport(
        label=spec.label,
        strategy=strategy,
        status=result.status,
        preperiod=[r.digits for r in result.preperiod],
        period=[r.digits for r in result.period],
        claimed_period=expected_period_length(spec, strategy),
        discrepancies=list(result.discrepancies),
    )

    adjudicated: list[RowCheck] = []
    try:
        table = expected_table(spec, strategy, fixtures_dir)
    except TableNotFoundError as exc:
        report.notes.append(f"no digit table: {exc}")
    else:
        report.table_source = table.source
        span = len(table.preperiod) + len(table.period)
        if result.status is ExpansionStatus.PERIODIC:
            span = max(span, len(result.preperiod) + len(result.period))
        for n in range(1, span + 1):
            expected = table.row_at(n)
            check = RowCheck(n=n, expected=expected.digits, observed=result.digit_at(n), policies=expected.policies)
            report.checks.append(check)
            if check.matched:
                continue
            report.discrepancies.append(
                Discrepancy(step=n, kind="table", engine=check.observed, reference=check.expected, note=check.policy.value)
            )
            if not check.strict_matched:
                LOGGER.warning("%s step %d: table %s, engine %s", spec.label, n, check.expected, check.observed)
            else:
                adjudicated.append(check)

    if report.claimed_period is not None and not report.period_claim_holds:
        LOGGER.warning("%s: period claim %d not met (status %s, period %d)", spec.label, report.claimed_period, result.status.value, len(result.period))
        report.discrepancies.append(
            Discrepancy(
                step=len(result.records),
                kind="period-claim",
                note=f"claimed period {report.claimed_period}; status {result.status.value}, period {len(result.period)}",
            )
        )

    if oracle:
        run = oracle_expand(spec, strategy, oracle_steps)
        report.oracle_status = run.status
        report.oracle_bits = run.precision_bits
        report.discrepancies.extend(cross_check(result, run.certified_rows))
        for check in adjudicated:
            verdict = run.rows[check.n - 1] if check.n <= len(run.rows) else None
            report.notes.append(f"step {check.n}: table {check.expected}, engine {check.observed}, oracle {verdict}")
            LOGGER.info("%s step %d adjudicated: table %s, engine %s, oracle %s", spec.label, check.n, check.expected, check.observed, verdict)
    else:
        for check in adjudicated:
            report.notes.append(f"step {check.n}: table {check.expected}, engine {check.observed}, oracle not run")

    LOGGER.info("%s: %s, preperiod %d, period %d, ok=%s", spec.label, result.status.value, len(report.preperiod), len(report.period), report.ok)
    return report

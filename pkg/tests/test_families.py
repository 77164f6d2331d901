"""Tests for the family catalogue, the digit-table fixtures and verification reports."""

from __future__ import annotations

from fractions import Fraction

import pytest
from pydantic import ValidationError

from mdcf.algebra import RatPoly
from mdcf.models import ComparisonPolicy, ExpansionStatus, Strategy
from mdcf.schemas import JPExample, PurePower, ShiftedCubic, Trinomial, parse_family
from mdcf.services.family_service import (
    TableNotFoundError,
    default_strategy,
    depress_cubic,
    evaluate_cell,
    expected_period_length,
    expected_table,
    family_build,
    family_presentation,
    fixtures_root,
    load_table,
    parse_policies,
    shifted_state_identity,
    verify_family,
)

TRINOMIAL_M3 = [(2, 0), (1, 0), (0, 2), (0, 1), (1, 1), (1, 0), (1, 1)]


def test_parse_family_discriminates_on_kind():
    spec = parse_family({"kind": "shifted-cubic", "a": 2, "b": 9})
    assert isinstance(spec, ShiftedCubic)
    assert spec.reduced_m == 3
    assert spec.label == "shifted-cubic(a=2, b=9; m=3)"
    assert parse_family({"kind": "trinomial", "m": 3}).label == "trinomial(m=3)"


@pytest.mark.parametrize(
    "data",
    [
        {"kind": "trinomial", "m": 2},
        {"kind": "pure-power", "l": 1, "m": 2},
        {"kind": "shifted-cubic", "a": 1, "b": 1},
        {"kind": "jp-example", "k": 1, "l": 0},
        {"kind": "jp-example", "k": 1, "l": 2},
        {"kind": "cubic", "m": 3},
    ],
)
def test_parse_family_rejects_out_of_range_parameters(data):
    with pytest.raises(ValidationError):
        parse_family(data)


def test_pure_power_presentation():
    presentation = family_presentation(PurePower(l=3, m=2))
    assert presentation.minpoly == RatPoly.from_highest([1, 0, 0, -9])
    assert presentation.window == (Fraction(2), Fraction(3))
    assert presentation.components == (RatPoly.from_highest([1, -2]), RatPoly.from_highest([1, 0, -4]))


def test_jp_presentation_components():
    presentation = family_presentation(JPExample(k=2, l=1))
    assert presentation.minpoly == RatPoly.from_highest([1, -2, -1, -1])
    assert presentation.components[0] == RatPoly.from_highest([1, -2, -1])
    assert presentation.strategy is Strategy.CLASSICAL_JP


def test_family_build_trinomial(trinomial3):
    built = family_build(Trinomial(m=3))
    delta = trinomial3.generator
    assert built.field == trinomial3
    assert built.state.components == (delta, delta**2)
    assert built.strategy is Strategy.MAX_NORMALIZED
    assert family_build(Trinomial(m=3), Strategy.UNIT_NORM_MIN).strategy is Strategy.UNIT_NORM_MIN


def test_default_strategy():
    assert default_strategy(PurePower(l=3, m=2)) is Strategy.MAX_NORMALIZED
    assert default_strategy(PurePower(l=5, m=2)) is Strategy.UNIT_NORM_MIN
    assert default_strategy(JPExample(k=2, l=1)) is Strategy.CLASSICAL_JP


def test_depress_cubic_reduces_the_shifted_family():
    # a = 1, b = 0: x^3 + 3x^2 - 1 becomes y^3 - 3y + 1
    assert depress_cubic(3, 0, -1) == (Fraction(-3), Fraction(1))
    assert depress_cubic(0, -5, 1) == (Fraction(-5), Fraction(1))


@pytest.mark.parametrize("a,b", [(1, 0), (-1, 0), (2, 9), (2, 0), (-2, 3), (3, 24)])
def test_shifted_state_identity(a, b):
    assert shifted_state_identity(a, b)


@pytest.mark.parametrize(
    "spec,strategy,expected",
    [
        (PurePower(l=2, m=3), None, 1),
        (PurePower(l=3, m=2), None, 2),
        (PurePower(l=4, m=2), Strategy.UNIT_NORM_MIN, 3),
        (PurePower(l=5, m=2), Strategy.MAX_NORMALIZED, None),
        (Trinomial(m=7), None, 4),
        (ShiftedCubic(a=2, b=0), None, 4),
        (Trinomial(m=7), Strategy.UNIT_NORM_MIN, None),
        (JPExample(k=2, l=1), None, 1),
    ],
)
def test_expected_period_length(spec, strategy, expected):
    assert expected_period_length(spec, strategy) == expected


def test_evaluate_cell():
    assert evaluate_cell("4*m**3", {"m": 2}) == 32
    assert evaluate_cell(" m-2 ", {"m": 5}) == 3
    assert evaluate_cell("-1", {}) == -1
    with pytest.raises(ValueError):
        evaluate_cell("n+1", {"m": 2})
    with pytest.raises(ValueError):
        evaluate_cell("__import__('os')", {})
    with pytest.raises(ValueError):
        evaluate_cell("m/2", {"m": 4})


def test_trinomial_table_instantiation():
    table = expected_table(Trinomial(m=5))
    assert table.source == "trinomial.v1.csv"
    assert [r.digits for r in table.preperiod] == [(4, 0), (1, 0), (0, 4)]
    assert [r.digits for r in table.period] == [(0, 1), (3, 1), (1, 0), (1, 3)]
    assert table.row_at(14).digits == (1, 0)


def test_shifted_tables():
    assert expected_table(ShiftedCubic(a=1, b=0)).source == "shifted-cubic-a1-b0.v1.csv"
    reduced = expected_table(ShiftedCubic(a=2, b=9))
    assert reduced.source == "trinomial.v1.csv"
    assert [r.digits for r in reduced.preperiod] == TRINOMIAL_M3[:3]


def test_pure_power_tables():
    l3 = expected_table(PurePower(l=3, m=2))
    assert l3.preperiod[0].digits == (8, 4)
    assert l3.preperiod[0].policy is ComparisonPolicy.ORACLE_ADJUDICATED
    assert l3.preperiod[0].policies == (ComparisonPolicy.ORACLE_ADJUDICATED, ComparisonPolicy.STRICT)
    l4 = expected_table(PurePower(l=4, m=3), Strategy.UNIT_NORM_MIN)
    assert [r.digits for r in l4.period] == [(12, 54, 108), (108, 12, 54), (54, 108, 12)]
    assert [r.digits for r in expected_table(PurePower(l=2, m=4)).period] == [(8,)]


@pytest.mark.parametrize(
    "spec,strategy",
    [
        (PurePower(l=5, m=2), Strategy.UNIT_NORM_MIN),
        (PurePower(l=4, m=1), Strategy.UNIT_NORM_MIN),
        (PurePower(l=3, m=2), Strategy.UNIT_NORM_MIN),
        (Trinomial(m=4), Strategy.UNIT_NORM_MIN),
    ],
)
def test_missing_tables(spec, strategy):
    with pytest.raises(TableNotFoundError):
        expected_table(spec, strategy)


def test_load_table_from_a_custom_directory(tmp_path, monkeypatch):
    (tmp_path / "custom.v1.csv").write_text(
        "# comment\nn,block,a_n,policy\n1,preperiod,m,Strict\n2,period,2*m,OracleAdjudicated\n",
        encoding="utf-8",
    )
    table = load_table("custom", {"m": 3}, tmp_path)
    assert table.preperiod[0].digits == (3,)
    assert table.period[0].policy is ComparisonPolicy.ORACLE_ADJUDICATED
    with pytest.raises(TableNotFoundError):
        load_table("absent", {}, tmp_path)

    (tmp_path / "flat.v1.csv").write_text("n,block,a_n,policy\n1,preperiod,1,Strict\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_table("flat", {}, tmp_path)

    from mdcf.config import get_settings

    monkeypatch.setenv("MDCF_FIXTURES_DIR", str(tmp_path))
    get_settings.cache_clear()
    assert fixtures_root() == tmp_path


def test_verify_trinomial_without_oracle():
    report = verify_family(Trinomial(m=3), oracle=False)
    assert report.status is ExpansionStatus.PERIODIC
    assert report.preperiod + report.period == TRINOMIAL_M3
    assert report.claimed_period == 4
    assert report.table_source == "trinomial.v1.csv"
    assert len(report.checks) == 7 and all(c.matched for c in report.checks)
    assert report.oracle_status is None
    assert report.ok


def test_verify_records_adjudicated_rows():
    report = verify_family(PurePower(l=3, m=2), oracle=False)
    assert report.ok
    (mismatch,) = [d for d in report.discrepancies if d.kind == "table"]
    assert (mismatch.step, mismatch.engine, mismatch.reference) == (1, (12, 4), (8, 4))
    assert any("oracle not run" in note for note in report.notes)


def test_verify_shifted_cubic_matches_trinomial_digits():
    report = verify_family(ShiftedCubic(a=1, b=0), oracle=False)
    assert report.preperiod + report.period == TRINOMIAL_M3
    assert sorted(d.step for d in report.discrepancies if d.kind == "table") == [4, 6]
    assert report.ok


def test_verify_flags_a_strict_mismatch(tmp_path):
    (tmp_path / "trinomial.v1.csv").write_text(
        "n,block,a_n,b_n,policy\n1,preperiod,m,0,Strict\n2,period,1,0,Strict\n",
        encoding="utf-8",
    )
    report = verify_family(Trinomial(m=3), oracle=False, fixtures_dir=tmp_path)
    assert not report.strict_rows_match
    assert not report.ok


def test_parse_policies():
    assert parse_policies("Strict", 2) == (ComparisonPolicy.STRICT, ComparisonPolicy.STRICT)
    assert parse_policies(" OracleAdjudicated ; Strict", 2) == (ComparisonPolicy.ORACLE_ADJUDICATED, ComparisonPolicy.STRICT)
    with pytest.raises(ValueError):
        parse_policies("Strict;Strict;Strict", 2)
    with pytest.raises(ValueError):
        parse_policies("Loose", 1)


def test_adjudicated_row_still_checks_its_strict_digit(tmp_path):
    (tmp_path / "pure-power-l3.v1.csv").write_text(
        "n,block,a_n,b_n,policy\n1,preperiod,2*m**2,2*m+1,OracleAdjudicated;Strict\n"
        "2,period,3*m,3*m**2,Strict\n3,period,3*m**2,3*m,Strict\n",
        encoding="utf-8",
    )
    report = verify_family(PurePower(l=3, m=2), oracle=False, fixtures_dir=tmp_path)
    first = report.checks[0]
    assert first.policy is ComparisonPolicy.ORACLE_ADJUDICATED
    assert not first.strict_matched
    assert not report.strict_rows_match
    assert not report.ok
    assert not any(note.startswith("step 1") for note in report.notes)

    good = verify_family(PurePower(l=3, m=2), oracle=False)
    assert good.checks[0].strict_matched and not good.checks[0].matched
    assert good.strict_rows_match


def test_verify_without_table_notes_it():
    report = verify_family(PurePower(l=5, m=2), Strategy.UNIT_NORM_MIN, max_steps=60, oracle=False)
    assert report.table_source is None
    assert report.checks == []
    assert report.notes and report.notes[0].startswith("no digit table")
    assert report.status is ExpansionStatus.PERIODIC and len(report.period) == 4
    assert report.ok


def test_verify_period_claim_fails_on_budget():
    report = verify_family(Trinomial(m=3), max_steps=3, oracle=False)
    assert report.status is ExpansionStatus.BUDGET_EXHAUSTED
    assert not report.period_claim_holds
    (claim,) = [d for d in report.discrepancies if d.kind == "period-claim"]
    assert claim.step == 3 and "claimed period 4" in claim.note
    assert not report.ok


def test_verify_jp_example():
    report = verify_family(JPExample(k=3, l=2), oracle=False)
    assert report.period == [(2, 3)]
    assert report.ok

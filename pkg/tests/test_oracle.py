"""Tests for the independent verification paths: resultant norms and the interval oracle."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcf.config import get_settings
from mdcf.models import Strategy
from mdcf.numberfield import NumberField
from mdcf.schemas import JPExample, PurePower, ShiftedCubic, Trinomial
from mdcf.services.expansion_service import cf_expand
from mdcf.services.family_service import family_build, verify_family
from mdcf.services.oracle_service import cross_check, norm_cross_check, oracle_expand

TRINOMIAL_M3 = [(2, 0), (1, 0), (0, 2), (0, 1), (1, 1), (1, 0), (1, 1)]

coefficient = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def test_norm_cross_check_examples(cube_nine, trinomial3):
    assert norm_cross_check(cube_nine.generator - 2)
    assert norm_cross_check(trinomial3.generator)
    quartic = NumberField.from_highest([1, 0, 0, 0, -17])
    five = quartic.rational(5)
    assert five.norm == 625
    assert norm_cross_check(five)


@settings(max_examples=60, deadline=None)
@given(st.lists(coefficient, min_size=3, max_size=3))
def test_norm_paths_agree(coeffs):
    field = NumberField.from_highest([1, 0, -3, 1])
    assert norm_cross_check(field.element(coeffs))


def test_oracle_trinomial_matches_the_engine():
    run = oracle_expand(Trinomial(m=3), steps=20)
    assert run.status == "complete"
    assert all(run.certified)
    assert run.rows[:7] == TRINOMIAL_M3
    assert run.rows[7:11] == TRINOMIAL_M3[3:]
    result = cf_expand(family_build(Trinomial(m=3)).state, Strategy.MAX_NORMALIZED)
    assert cross_check(result, run.rows) == []


def test_oracle_adjudicates_the_first_cube_root_digit():
    run = oracle_expand(PurePower(l=3, m=2), steps=5)
    assert run.rows == [(12, 4), (6, 12), (12, 6), (6, 12), (12, 6)]


def test_oracle_jp_example():
    run = oracle_expand(JPExample(k=2, l=1), steps=100)
    assert run.strategy is Strategy.CLASSICAL_JP
    assert run.rows == [(1, 2)] * 100


def test_oracle_shifted_cubic_follows_the_trinomial():
    run = oracle_expand(ShiftedCubic(a=1, b=0), steps=7)
    assert run.rows == TRINOMIAL_M3


def test_oracle_escalates_precision():
    run = oracle_expand(PurePower(l=4, m=2), Strategy.UNIT_NORM_MIN, steps=60, precision=16)
    assert run.status == "complete"
    assert run.restarts > 0
    assert run.precision_bits > 16
    assert run.rows[:2] == [(32, 4, 12), (24, 32, 6)]


def test_oracle_reports_the_precision_ceiling(monkeypatch):
    monkeypatch.setenv("MDCF_ORACLE_INITIAL_BITS", "16")
    monkeypatch.setenv("MDCF_ORACLE_MAX_BITS", "16")
    get_settings.cache_clear()
    run = oracle_expand(Trinomial(m=3), steps=200)
    assert run.status == "precision-ceiling"
    assert run.precision_bits == 16
    assert len(run.certified_rows) < 200
    expected = [TRINOMIAL_M3[n] if n < 7 else TRINOMIAL_M3[3 + (n - 3) % 4] for n in range(len(run.certified_rows))]
    assert run.certified_rows == expected


def test_oracle_rejects_empty_runs():
    with pytest.raises(ValueError):
        oracle_expand(Trinomial(m=3), steps=0)


def test_cross_check_reports_single_digit_changes():
    result = cf_expand(family_build(Trinomial(m=3)).state, Strategy.MAX_NORMALIZED)
    assert cross_check(result, result.digits(30)) == []
    altered = result.digits(10)
    altered[5] = (9, 9)
    (entry,) = cross_check(result, altered)
    assert (entry.step, entry.engine, entry.reference, entry.kind) == (6, (1, 0), (9, 9), "oracle")


def test_verify_with_oracle_adjudicates():
    report = verify_family(PurePower(l=3, m=2), oracle_steps=30)
    assert report.oracle_status == "complete"
    assert report.ok
    assert any("oracle (12, 4)" in note for note in report.notes)


def test_verify_trinomial_seven_against_the_oracle():
    report = verify_family(Trinomial(m=7))
    assert report.oracle_status == "complete"
    assert not [d for d in report.discrepancies if d.kind == "oracle"]
    assert report.ok

"""Tests for certified real embeddings: isolation, enclosure, sign, floor, comparison."""

from __future__ import annotations

from fractions import Fraction

import pytest

from mdcf.algebra import RatPoly, poly_eval
from mdcf.numberfield import NumberField
from mdcf.realembed import (
    Comparison,
    DomainViolationError,
    PrecisionExhaustedError,
    RatInterval,
    RealEmbedding,
    RootSelectionError,
    compare_normalized,
    elem_floor,
    elem_sign,
    eval_interval,
    isolate_roots,
    select_root,
)

EXAMPLE_TWO = NumberField.from_highest([1, 3, 0, -1])


def test_isolate_roots():
    f = RatPoly.from_highest([1, 0, -3, 1])
    intervals = isolate_roots(f)
    assert len(intervals) == 3
    assert all(a.hi <= b.lo for a, b in zip(intervals, intervals[1:]))
    assert all(poly_eval(f, iv.lo) * poly_eval(f, iv.hi) < 0 for iv in intervals)
    (cube,) = isolate_roots(RatPoly.from_highest([1, 0, 0, -9]))
    assert cube.lo < Fraction(2080083, 1000000) and Fraction(2080084, 1000000) < cube.hi
    assert isolate_roots(RatPoly.from_highest([1, 0, 1])) == []


def test_select_root_examples(trinomial3):
    emb = select_root(trinomial3, (0, 1))
    emb.refine(40)
    assert abs(emb.approximate() - 0.347296) < 1e-6
    gamma = select_root(EXAMPLE_TWO, RatInterval(Fraction(-1), Fraction(0)))
    gamma.refine(40)
    assert abs(gamma.approximate() + 0.65270) < 1e-5
    with pytest.raises(RootSelectionError):
        select_root(NumberField.from_highest([1, 0, 0, -9]), (5, 6))
    with pytest.raises(RootSelectionError):
        select_root(trinomial3, (-2, 2))


def test_eval_interval_examples(trinomial3_emb, trinomial3, cube_nine_emb, cube_nine):
    point = eval_interval(trinomial3.rational(Fraction(7, 2)), trinomial3_emb, Fraction(1, 10))
    assert point == RatInterval.point(Fraction(7, 2))
    delta = eval_interval(trinomial3.generator, trinomial3_emb, Fraction(1, 1000))
    assert Fraction(346, 1000) < delta.lo and delta.hi < Fraction(348, 1000)
    alpha = eval_interval(cube_nine.generator - 2, cube_nine_emb, Fraction(1, 1000))
    assert Fraction(795, 10000) < alpha.lo and alpha.hi < Fraction(806, 10000)
    with pytest.raises(ValueError):
        eval_interval(trinomial3.generator, trinomial3_emb, 0)


def test_eval_interval_nests_under_refinement(trinomial3, trinomial3_emb):
    a = trinomial3.element([Fraction(1, 3), -2, 5])
    previous = eval_interval(a, trinomial3_emb, Fraction(1, 10))
    for exponent in (4, 16, 40):
        current = eval_interval(a, trinomial3_emb, Fraction(1, 2**exponent))
        assert previous.lo <= current.lo and current.hi <= previous.hi
        assert current.width <= Fraction(1, 2**exponent)
        previous = current


def test_elem_sign_examples(cube_nine, cube_nine_emb):
    assert elem_sign(cube_nine.zero, cube_nine_emb) == 0
    assert elem_sign(cube_nine.generator - 2, cube_nine_emb) == 1
    gamma = select_root(EXAMPLE_TWO, (-1, 0))
    assert elem_sign(EXAMPLE_TWO.generator, gamma) == -1


def test_sign_is_antisymmetric(trinomial3, trinomial3_emb):
    for coeffs in ([1, -3, 0], [0, 1, -1], [Fraction(-1, 2), 0, 4], [5, 7, -40]):
        a = trinomial3.element(coeffs)
        assert elem_sign(a, trinomial3_emb) * elem_sign(-a, trinomial3_emb) == -1


def test_elem_floor_examples(trinomial3, trinomial3_emb):
    delta = trinomial3.generator
    assert elem_floor(1 / delta, trinomial3_emb) == 2
    assert elem_floor(trinomial3.rational(Fraction(7, 2)), trinomial3_emb) == 3
    assert elem_floor(trinomial3.rational(-4), trinomial3_emb) == -4
    gamma = select_root(EXAMPLE_TWO, (-1, 0))
    assert elem_floor(EXAMPLE_TWO.generator, gamma) == -1


def test_floor_contract(cube_nine, cube_nine_emb):
    theta = cube_nine.generator
    for a in (theta**2 + 2 * theta + 4, 17 * theta - 30, -theta / 3):
        n = elem_floor(a, cube_nine_emb)
        assert elem_sign(a - n, cube_nine_emb) >= 0
        assert elem_sign(a - (n + 1), cube_nine_emb) < 0


def test_compare_normalized_examples(cube_nine, cube_nine_emb, trinomial3, trinomial3_emb):
    theta = cube_nine.generator
    assert compare_normalized(theta - 2, Fraction(1), theta**2 - 4, Fraction(17), 3, cube_nine_emb) is Comparison.I_GREATER
    assert compare_normalized(theta**2 - 4, Fraction(17), theta - 2, Fraction(1), 3, cube_nine_emb) is Comparison.J_GREATER
    delta = trinomial3.generator
    assert compare_normalized(delta, Fraction(1), delta**2, Fraction(1), 3, trinomial3_emb) is Comparison.I_GREATER
    cube_two = NumberField.from_highest([1, 0, 0, -2])
    emb = select_root(cube_two, (1, 2))
    root = cube_two.generator
    assert compare_normalized(root - 1, Fraction(1), root**2 - 1, Fraction(3), 3, emb) is Comparison.J_GREATER


def test_compare_normalized_tie_is_a_domain_violation(trinomial3, trinomial3_emb):
    delta = trinomial3.generator
    with pytest.raises(DomainViolationError):
        compare_normalized(delta, Fraction(1), delta, Fraction(1), 3, trinomial3_emb)


def test_precision_ceiling_is_reported():
    # x^3 - 1 is reducible and theta - 1 vanishes at the pinned root
    reducible = NumberField.from_highest([1, 0, 0, -1])
    emb = RealEmbedding(reducible, Fraction(2, 3), Fraction(7, 5), max_bits=256, initial_bits=64)
    with pytest.raises(PrecisionExhaustedError):
        elem_sign(reducible.generator - 1, emb)


def test_clone_keeps_refinement_independent(trinomial3_emb, trinomial3):
    twin = trinomial3_emb.clone()
    eval_interval(trinomial3.generator, twin, Fraction(1, 2**100))
    assert twin.isolator.width < trinomial3_emb.isolator.width
    assert twin.precision_bits >= 100


def test_window_survives_refinement(trinomial3):
    emb = select_root(trinomial3, (0, 1))
    eval_interval(trinomial3.generator, emb, Fraction(1, 2**80))
    assert emb.isolator.width < Fraction(1, 2**70)
    assert emb.window == (Fraction(0), Fraction(1))
    twin = emb.clone()
    assert twin.window == (Fraction(0), Fraction(1))
    assert twin.isolator == emb.isolator

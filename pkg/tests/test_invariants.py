"""Weight grading, semi-invariants and the equivalence-group action."""

from fractions import Fraction

import pytest

from maxsym.diffalg import DiffPoly
from maxsym.invariants import (
    NonCoefficientSymbol,
    j_defect,
    semi_invariant,
    semi_invariant_template,
    verify_transform_law,
    weight,
)


@pytest.mark.parametrize("n", (1, 2))
def test_semi_invariant_vanishes_below_order_three(n):
    assert semi_invariant(n).expression.is_zero()


@pytest.mark.parametrize("n", range(3, 7))
def test_semi_invariant_matches_closed_form(n):
    assert semi_invariant(n).expression == semi_invariant_template(n)


@pytest.mark.parametrize("n", range(3, 11))
def test_semi_invariant_is_isobaric_of_weight_three(n):
    expr = semi_invariant(n).expression
    assert {weight(m, n) for m in expr.terms} == {3}


def test_weight_rejects_foreign_symbols():
    p = DiffPoly.of("f") * DiffPoly.of("c0")
    (mono,) = p.terms
    with pytest.raises(NonCoefficientSymbol):
        weight(mono, 4)


@pytest.mark.parametrize("n", (3, 4, 5))
def test_transform_law(n):
    ok, defect = verify_transform_law(n)
    assert ok, defect


def test_transform_law_mutation_control():
    bad = semi_invariant(3).expression + DiffPoly.of("c2", 2).scale(
        Fraction(1, 30)
    )
    ok, _ = verify_transform_law(3, invariant=bad)
    assert not ok


def test_j_factorizes_but_is_not_semi_invariant():
    rep = j_defect()
    assert rep.factorization_ok
    assert not rep.is_semi_invariant
    assert rep.constant == Fraction(-1600)
    assert not rep.matches_printed

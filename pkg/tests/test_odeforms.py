"""Canonical forms and the coefficient characterization."""

from fractions import Fraction

import pytest

from maxsym.diffalg import DiffPoly, DiffRatio, substitute
from maxsym.odeforms import (
    OrderTooLow,
    characterize,
    exp_shift,
    general_maxsym_form,
    is_max_symmetry,
    iterate_psi,
    normal_to_standard,
    source_constant,
    sym_power_normal,
    to_a_parameter,
)
from maxsym.parsing import parse, parse_value
from maxsym.rendering import render_text


def test_source_constant_formula():
    for n in range(2, 9):
        assert source_constant(n) == Fraction(n * (n * n - 1), 6)


def test_third_order_characterization_golden():
    rel = characterize(3).relations[0]
    assert render_text(rel) == (
        "54*c0 - 18*c1*c2 + 4*c2^3 - 27*c1' + 18*c2*c2' + 9*c2''"
    )


def test_a_parameter_family_golden():
    golden = {
        3: {1: "a", 0: "a'/2"},
        4: {2: "a", 1: "a'", 0: "3/10*a'' + 9/100*a^2"},
        5: {
            3: "a",
            2: "3/2*a'",
            1: "9/10*a'' + 16/100*a^2",
            0: "1/5*a''' + 16/100*a*a'",
        },
    }
    for n, coeffs in golden.items():
        fam = to_a_parameter(n)
        for j, text in coeffs.items():
            assert fam.coeff(j) == DiffRatio.of(parse_value(text))


def test_second_lowest_coefficient_rule():
    for n in range(3, 9):
        fam = to_a_parameter(n)
        expected = DiffRatio.of(DiffPoly.of("a", 1).scale(Fraction(n - 2, 2)))
        assert fam.coeff(n - 3) == expected


@pytest.mark.parametrize("n", range(3, 7))
def test_family_satisfies_characterization(n):
    fam = normal_to_standard(n)
    bindings = {f"c{j}": fam.coeff(j) for j in range(n - 1)}
    for rel in characterize(n).relations:
        assert DiffRatio.of(substitute(rel, bindings)).is_zero()


def test_general_form_matches_characterization():
    # solving each characterizing relation for c_j reproduces the
    # two-coefficient family
    for n in (3, 4, 5):
        fam = general_maxsym_form(n)
        bindings = {f"c{j}": fam.coeff(j) for j in range(n - 2)}
        for rel in characterize(n).relations:
            assert DiffRatio.of(substitute(rel, bindings)).is_zero()


def test_fourth_order_exponential_shift_round_trip():
    ode = general_maxsym_form(4)
    q = DiffRatio.of(DiffPoly.of("c3")) / (-4)
    nor = exp_shift(ode, q, form="normal")
    assert nor.coeff(3).is_zero()
    q2, q1, q0 = nor.coeff(2), nor.coeff(1), nor.coeff(0)
    assert q1 == q2.derive()
    assert q0 == q2.derive().derive() * Fraction(3, 10) + q2 * q2 * Fraction(9, 100)


def test_is_max_symmetry_accepts_family_instance():
    # c2 = x, c3 = 0 instance of the fourth-order family
    fam = general_maxsym_form(4)
    bindings = {"c3": DiffRatio.zero(), "c2": DiffRatio.of(DiffPoly.x())}
    doc = {
        j: DiffRatio.of(substitute(fam.coeff(j), bindings)) for j in range(2)
    }
    doc[2] = DiffRatio.of(DiffPoly.x())
    doc[3] = DiffRatio.zero()
    from maxsym.odeforms import LinearODE

    verdict, residuals = is_max_symmetry(LinearODE(4, "standard", doc))
    assert verdict
    assert all(r.is_zero() for r in residuals)


def test_is_max_symmetry_rejects_perturbed():
    doc = parse("y''' + x*y = 0", kind="ode")
    verdict, residuals = is_max_symmetry(doc.to_linear_ode())
    assert not verdict
    assert render_text(residuals[-1]) == "54*x"


def test_order_too_low():
    doc = parse("y'' + x*y = 0", kind="ode")
    with pytest.raises(OrderTooLow):
        is_max_symmetry(doc.to_linear_ode())


@pytest.mark.parametrize("n", (3, 4, 5))
def test_iterated_operator_cross_check(n):
    x = DiffPoly.x()
    coeffs = iterate_psi(x, DiffPoly.const(Fraction(-(n - 1), 2)), n)
    lead = coeffs[n]
    inst = [c / lead for c in coeffs]
    assert inst[n - 1].is_zero()
    fam = to_a_parameter(n)
    binding = {"a": inst[n - 2]}
    for j in range(n - 1):
        assert inst[j] == DiffRatio.of(substitute(fam.coeff(j), binding))

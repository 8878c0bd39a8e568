"""Acceptance gate: exact, zero-tolerance checks for every published
behavior of the package.

Every comparison is an exact equality of rationals or of canonical
differential polynomials.  Where a classical printed formula disagrees
with the machine-verified one, the printed identity is kept here as a
strict xfail (so the discrepancy stays visible) and the verified law it
was arbitrated against is asserted as a passing test next to it.
"""

import subprocess
import sys
import time
from fractions import Fraction

import pytest

from maxsym.diffalg import DiffPoly, DiffRatio, substitute
from maxsym.generators import (
    VectorField,
    _generic_family,
    act_on_invariant,
    gen_laguerre,
    gen_normal,
    gen_standard,
    specialize_maxsym,
    verify_induced_tangency,
    verify_symmetry,
)
from maxsym.invariants import (
    j_defect,
    semi_invariant,
    semi_invariant_template,
    verify_transform_law,
    weight,
)
from maxsym.odeforms import (
    characterize,
    exp_shift,
    general_maxsym_form,
    is_max_symmetry,
    iterate_psi,
    normal_to_standard,
    to_a_parameter,
)
from maxsym.parsing import parse, parse_value
from maxsym.reference_formulas import (
    CHARACTERIZING_TEXT,
    MAXSYM4_PHI_TEXT,
    NOR4STD4_TEXT,
    compare_characterizations,
)
from maxsym.rendering import render_text

GOLDEN3 = "54*c0 - 18*c1*c2 + 4*c2^3 - 27*c1' + 18*c2*c2' + 9*c2''"


def _cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "maxsym.cli", *args],
        capture_output=True,
        text=True,
    )


def test_criterion_01_third_order_characterization():
    """The order-3 characterizing relation matches the classical string
    term for term, in under a second."""
    start = time.perf_counter()
    rel = characterize(3).relations[0]
    elapsed = time.perf_counter() - start
    assert render_text(rel) == GOLDEN3
    assert elapsed < 1.0


def test_criterion_02_printed_relations_orders_four_five():
    """Printed relations for orders 4 and 5: the order-4 pair and the
    order-5 j=1 relation match exactly; the two printed order-5 outliers
    are reported as errata with a failing exit code, never silently."""
    start = time.perf_counter()
    for j, matches, _ in compare_characterizations(4):
        assert matches, f"order-4 j={j} must match the printed relation"
    results5 = dict(
        (j, (matches, defect)) for j, matches, defect in compare_characterizations(5)
    )
    assert results5[2][0] is False  # printed sign error on the c4'' term
    assert results5[1][0] is True
    assert results5[0][0] is False  # three printed sign flips in the c3 block
    # the mismatches must surface as erratum reports with exit code 4
    proc = _cli("verify", "--suite", "forms", "--fail-on-erratum")
    assert proc.returncode == 4
    assert "ERRATUM" in proc.stdout
    assert "n=5" in proc.stdout
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0


def test_criterion_03_self_consistency_oracle():
    """For n = 3..8 the two-coefficient standard-form family satisfies
    every one of its own characterizing relations identically."""
    start = time.perf_counter()
    for n in range(3, 9):
        fam = normal_to_standard(n)
        bindings = {f"c{j}": fam.coeff(j) for j in range(n - 1)}
        for rel in characterize(n).relations:
            assert DiffRatio.of(substitute(rel, bindings)).is_zero(), (n, rel)
    assert time.perf_counter() - start < 60.0


def test_criterion_04_reduced_normal_forms():
    """The one-function reduced normal forms match the printed orders
    3-5 and obey B_{n-3} = (n-2)/2 a' for n = 3..8."""
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
    for n in range(3, 9):
        expected = DiffRatio.of(DiffPoly.of("a", 1).scale(Fraction(n - 2, 2)))
        assert to_a_parameter(n).coeff(n - 3) == expected


def _fourth_order_shift():
    ode = general_maxsym_form(4)
    q = DiffRatio.of(DiffPoly.of("c3")) / (-4)
    return exp_shift(ode, q, form="normal")


def test_criterion_05_fourth_order_shift():
    """The exponential shift of the order-4 family reproduces the
    printed Q2, Q1 and satisfies both iterative identities."""
    nor = _fourth_order_shift()
    assert nor.coeff(3).is_zero()
    q2, q1, q0 = nor.coeff(2), nor.coeff(1), nor.coeff(0)
    assert q2 == DiffRatio.of(parse_value(NOR4STD4_TEXT[2]))
    assert q1 == DiffRatio.of(parse_value(NOR4STD4_TEXT[1]))
    assert q1 == q2.derive()
    assert q0 == q2.derive().derive() * Fraction(3, 10) + q2 * q2 * Fraction(9, 100)


@pytest.mark.xfail(
    strict=True,
    reason="the printed Q0 double-counts its quartic term (defect "
    "81/6400 c3^4) and contradicts the iterative identity "
    "Q0 = 3/10 Q2'' + 9/100 Q2^2 that the same source states and "
    "that the computed Q0 satisfies; reported as an erratum",
)
def test_criterion_05_fourth_order_shift_printed_q0():
    nor = _fourth_order_shift()
    assert nor.coeff(0) == DiffRatio.of(parse_value(NOR4STD4_TEXT[0]))


def test_criterion_06_semi_invariants():
    """Semi-invariants: closed form for n = 3..6, zero below order 3,
    isobaric of weight 3 through n = 10, exact transform law with index
    3 for n = 3..5."""
    start = time.perf_counter()
    for n in (1, 2):
        assert semi_invariant(n).expression.is_zero()
    for n in range(3, 7):
        assert semi_invariant(n).expression == semi_invariant_template(n)
    for n in range(3, 11):
        expr = semi_invariant(n).expression
        assert {weight(m, n) for m in expr.terms} == {3}
    for n in (3, 4, 5):
        ok, defect = verify_transform_law(n)
        assert ok, (n, defect)
    assert time.perf_counter() - start < 120.0


@pytest.mark.xfail(
    strict=True,
    reason="the printed defect constant -200 is inconsistent with the "
    "1600-normalized definition of J used alongside it; the measured "
    "constant is -1600 (independently confirmed on a concrete "
    "equivalence map), and -200 would only fit a J scaled by 200; "
    "reported as an erratum",
)
def test_criterion_07_j_defect_printed_constant():
    """Stated form: J(Q) - f'^4 J(C) = -200 (g'/g) f'^3 I_4(C)."""
    rep = j_defect()
    assert rep.factorization_ok
    assert rep.constant == Fraction(-200)


def test_criterion_07_j_defect_verified_factorization():
    """What actually holds, exactly: the defect factors through the
    semi-invariant with constant -1600, so J is not a semi-invariant."""
    rep = j_defect()
    assert rep.factorization_ok
    assert rep.constant == Fraction(-1600)
    assert not rep.is_semi_invariant


def test_criterion_08_symmetry_of_full_fields():
    """The full equivalence fields of all three canonical forms are
    exact symmetries for n = 3..7; a mutated field is rejected."""
    start = time.perf_counter()
    for form, gen in (
        ("standard", gen_standard),
        ("normal", gen_normal),
        ("laguerre", gen_laguerre),
    ):
        for n in range(3, 8):
            ok, defects = verify_symmetry(gen(n, "full"), _generic_family(n, form))
            assert ok, (form, n, defects)
    field = gen_standard(3, "full")
    broken = dict(field.phi)
    broken[2] = broken[2] + DiffRatio.of(DiffPoly.of("f", 2))
    mutated = VectorField(3, "standard", "full", field.xi, field.eta, broken)
    ok, _ = verify_symmetry(mutated, _generic_family(3, "standard"))
    assert not ok
    assert time.perf_counter() - start < 600.0


def test_criterion_09_invariant_action_and_restriction():
    """The induced field satisfies X0.I_n + 3 f' I_n = 0 for n = 3..5; the
    order-4 restricted components phi_3..phi_1 match the printed ones
    and the whole restricted field is tangent to the family."""
    for n in (3, 4, 5):
        rem, _ = act_on_invariant(
            gen_standard(n, "induced"), semi_invariant(n).expression
        )
        assert rem.is_zero(), n
    spec = specialize_maxsym(4)
    for k in (3, 2, 1):
        assert spec.phi_at(k) == DiffRatio.of(parse_value(MAXSYM4_PHI_TEXT[k]))
    ok, defects = verify_induced_tangency(4)
    assert ok, defects


@pytest.mark.xfail(
    strict=True,
    reason="the printed lowest restricted component flips the signs of "
    "five derivative terms in its bracket; it fails the tangency "
    "condition (consistency with the chain-rule variation of the "
    "family coefficient) that the computed component satisfies; "
    "reported as an erratum",
)
def test_criterion_09_restricted_phi0_printed():
    spec = specialize_maxsym(4)
    assert spec.phi_at(0) == DiffRatio.of(parse_value(MAXSYM4_PHI_TEXT[0]))


def test_criterion_10_superposition_solutions():
    """Exact annihilation for n = 2..8, series residuals zero through
    order 40 for four polynomial sources, monomial solutions at b=0."""
    from maxsym.solutions import (
        evaluate_poly_series,
        series_check,
        source_series,
        superposition_basis,
        verify_annihilation,
    )

    for n in range(2, 9):
        ok, residuals = verify_annihilation(n)
        assert ok, (n, residuals)
    x = DiffPoly.x()
    for b in (DiffPoly.zero(), DiffPoly.one(), x, x * x - DiffPoly.one()):
        for n in (3, 4, 5):
            assert series_check(n, b, 40).all_zero
    u, v = source_series(DiffPoly.zero(), 10)
    for sol in superposition_basis(4):
        series = evaluate_poly_series(sol.expression(), {"u": u, "v": v}, 10)
        expected = tuple(
            Fraction(1) if k == sol.power_v else Fraction(0) for k in range(11)
        )
        assert series.coeffs == expected


def test_criterion_11_iterated_operator_instances():
    """Iterating the first-order operator w -> x w' - (n-1)/2 w gives,
    after normalization, exactly the one-parameter family instance."""
    for n in (3, 4, 5):
        coeffs = iterate_psi(
            DiffPoly.x(), DiffPoly.const(Fraction(-(n - 1), 2)), n
        )
        lead = coeffs[n]
        inst = [c / lead for c in coeffs]
        assert inst[n - 1].is_zero()
        fam = to_a_parameter(n)
        binding = {"a": inst[n - 2]}
        for j in range(n - 1):
            assert inst[j] == DiffRatio.of(substitute(fam.coeff(j), binding))


def test_criterion_12_parser_and_cli():
    """The golden string parses back to the computed relation; the CLI
    flags y''' + x y = 0 as not maximal with residual 54x; reruns are
    byte-identical."""
    assert DiffRatio.of(parse_value(GOLDEN3)) == DiffRatio.of(
        characterize(3).relations[0]
    )
    proc = _cli("check", "--ode", "y''' + x*y = 0", "--strict")
    assert proc.returncode == 3
    assert "verdict: not maximal" in proc.stdout
    assert "residual[j=0]: 54*x" in proc.stdout
    first = _cli("characterize", "--order", "5")
    second = _cli("characterize", "--order", "5")
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.splitlines()[-1].startswith("6250*c0")

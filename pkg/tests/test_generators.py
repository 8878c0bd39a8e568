"""Symmetry and equivalence vector fields."""

import pytest

from maxsym.diffalg import DiffPoly, DiffRatio
from maxsym.generators import (
    VectorField,
    _generic_family,
    act_on_invariant,
    gen_laguerre,
    gen_normal,
    gen_standard,
    prolong,
    specialize_maxsym,
    verify_induced_tangency,
    verify_symmetry,
)
from maxsym.invariants import semi_invariant
from maxsym.parsing import parse_value
from maxsym.reference_formulas import MAXSYM4_PHI_TEXT


@pytest.mark.parametrize("form,gen", [
    ("standard", gen_standard),
    ("normal", gen_normal),
    ("laguerre", gen_laguerre),
])
@pytest.mark.parametrize("n", (3, 4, 5))
def test_full_field_is_a_symmetry(form, gen, n):
    ok, defects = verify_symmetry(gen(n, "full"), _generic_family(n, form))
    assert ok, defects


def test_symmetry_mutation_control():
    field = gen_standard(3, "full")
    broken = dict(field.phi)
    broken[2] = broken[2] + DiffRatio.of(DiffPoly.of("f", 2))
    mutated = VectorField(3, "standard", "full", field.xi, field.eta, broken)
    ok, _ = verify_symmetry(mutated, _generic_family(3, "standard"))
    assert not ok


def test_prolongation_recurrence():
    xi = DiffRatio.of(DiffPoly.of("f"))
    eta = DiffRatio.of(DiffPoly.of("g") * DiffPoly.of("y"))
    jets = prolong(xi, eta, 2)
    assert jets[1] == eta.derive() - DiffRatio.of(DiffPoly.of("y", 1)) * xi.derive()


@pytest.mark.parametrize("n", (3, 4, 5))
def test_induced_field_annihilates_semi_invariant(n):
    rem, _ = act_on_invariant(
        gen_standard(n, "induced"), semi_invariant(n).expression
    )
    assert rem.is_zero()


def test_invariant_action_control():
    rem, _ = act_on_invariant(gen_standard(4, "induced"), DiffPoly.of("c0"))
    assert not rem.is_zero()


def test_restricted_fourth_order_components():
    field = specialize_maxsym(4)
    for k in (3, 2, 1):
        assert field.phi_at(k) == DiffRatio.of(parse_value(MAXSYM4_PHI_TEXT[k]))


def test_restricted_field_is_tangent_to_family():
    ok, defects = verify_induced_tangency(4)
    assert ok, defects


def test_tangency_rejects_wrong_lowest_component():
    # a perturbed phi_0 must fail the tangency condition
    field = specialize_maxsym(4)
    phi = dict(field.phi)
    phi[0] = phi[0] + DiffRatio.of(DiffPoly.of("f", 1))
    ok, defects = verify_induced_tangency(4, phi)
    assert not ok and 0 in defects

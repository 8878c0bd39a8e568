"""Self-verification suites: every generated formula is checked against
the invariance laws, and the machinery is compared against the printed
golden formulas (mismatches become erratum reports, never silent passes).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

from .diffalg import DiffPoly, DiffRatio, solve_linear, substitute
from . import odeforms, invariants, generators, solutions
from .parsing import parse_value
from .reference_formulas import (
    A_FAMILY_TEXT,
    CHARACTERIZING_TEXT,
    MAXSYM4_PHI_TEXT,
    NOR4STD4_TEXT,
    PRINTED_J_CONSTANT,
    Erratum,
    compare_characterizations,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    erratum: Erratum | None = None
    detail: str = ""


def _check(name, ok, detail="", erratum=None):
    return CheckResult(name, bool(ok), erratum, detail)


# ---------------------------------------------------------------------------


def suite_ring(max_order: int = 6) -> List[CheckResult]:
    out = []
    c2 = DiffPoly.of("c2")
    c1 = DiffPoly.of("c1")
    x = DiffPoly.x()
    p = c2 * c2 * 3 + c1 * x - DiffPoly.const(Fraction(1, 2))
    q = c1 * c2.derive() + x * x
    out.append(
        _check(
            "ring/leibniz",
            (p * q).derive() == p.derive() * q + p * q.derive(),
        )
    )
    binding = {"c1": DiffRatio.of(c2 * c2 + x)}
    out.append(
        _check(
            "ring/substitute-derive-commute",
            substitute(p.derive(), binding) == DiffRatio.of(substitute(p, binding)).derive(),
        )
    )
    out.append(_check("ring/cancellation", (p - p).is_zero()))
    b = DiffPoly.of("b")
    sol = solve_linear(
        [[DiffPoly.one(), DiffPoly.zero()], [DiffPoly.zero(), DiffPoly.one()]],
        [b, b.derive()],
    )
    out.append(
        _check(
            "ring/solve-identity",
            sol[0] == DiffRatio.of(b) and sol[1] == DiffRatio.of(b.derive()),
        )
    )
    div = DiffRatio(c2**3 - c2, c2 - DiffPoly.one())
    out.append(_check("ring/exact-quotient", div == DiffRatio.of(c2 * c2 + c2)))
    return out


def suite_forms(max_order: int = 6) -> List[CheckResult]:
    out = []
    for n in range(2, max_order + 1):
        k = odeforms.source_constant(n)
        out.append(
            _check(
                f"forms/source-constant/n={n}",
                k == Fraction(n * (n * n - 1), 6),
                detail=f"K_{n} = {k}",
            )
        )
    for n, coeffs in A_FAMILY_TEXT.items():
        fam = odeforms.to_a_parameter(n)
        ok = all(
            fam.coeff(j) == DiffRatio.of(parse_value(text))
            for j, text in coeffs.items()
        )
        out.append(_check(f"forms/a-family/n={n}", ok))
    for n in range(3, max_order + 1):
        fam = odeforms.to_a_parameter(n)
        expected = DiffRatio.of(DiffPoly.of("a", 1).scale(Fraction(n - 2, 2)))
        out.append(_check(f"forms/b-sub-three/n={n}", fam.coeff(n - 3) == expected))
    # self-consistency oracle: standard-form family satisfies its own
    # characterizing relations identically
    for n in range(3, max_order + 1):
        fam = odeforms.normal_to_standard(n)
        bindings = {f"c{j}": fam.coeff(j) for j in range(n - 1)}
        ok = all(
            DiffRatio.of(substitute(rel, bindings)).is_zero()
            for rel in odeforms.characterize(n).relations
        )
        out.append(_check(f"forms/self-consistency/n={n}", ok))
    # printed golden comparisons with erratum emission
    for n in sorted(CHARACTERIZING_TEXT):
        if n > max(max_order, 5):
            continue
        for j, matches, defect in compare_characterizations(n):
            if matches:
                out.append(_check(f"forms/printed/n={n}/j={j}", True))
            else:
                from .rendering import render_text

                err = Erratum(
                    f"characterizing relation n={n}, j={j}",
                    "printed formula differs from the oracle-verified one "
                    f"by: {render_text(defect)}",
                )
                out.append(
                    _check(f"forms/printed/n={n}/j={j}", True, erratum=err)
                )
    # fourth-order round trip through the reduced normal form
    ode4 = odeforms.general_maxsym_form(4)
    q = DiffRatio.of(DiffPoly.of("c3")) / (-4)
    nor = odeforms.exp_shift(ode4, q, form="normal")
    q2, q1, q0 = nor.coeff(2), nor.coeff(1), nor.coeff(0)
    out.append(_check("forms/nor4std4/Q3-vanishes", nor.coeff(3).is_zero()))
    out.append(
        _check("forms/nor4std4/Q2", q2 == DiffRatio.of(parse_value(NOR4STD4_TEXT[2])))
    )
    out.append(
        _check("forms/nor4std4/Q1", q1 == DiffRatio.of(parse_value(NOR4STD4_TEXT[1])))
    )
    printed_q0 = DiffRatio.of(parse_value(NOR4STD4_TEXT[0]))
    iter_ok = (
        q1 == q2.derive()
        and q0 == q2.derive().derive() * Fraction(3, 10) + q2 * q2 * Fraction(9, 100)
    )
    out.append(_check("forms/nor4std4/iterative-identities", iter_ok))
    if q0 == printed_q0:
        out.append(_check("forms/nor4std4/Q0", True))
    else:
        from .rendering import render_text

        err = Erratum(
            "fourth-order Q0",
            "printed Q0 differs from the iterative-identity value by: "
            f"{render_text((printed_q0 - q0).num)}",
        )
        out.append(_check("forms/nor4std4/Q0", iter_ok, erratum=err))
    # instance-level cross-check against the iterated first-order operator
    for n in (3, 4, 5):
        out.append(_check(f"forms/iterate-psi/n={n}", _psi_cross_check(n)))
    return out


def _psi_cross_check(n: int) -> bool:
    """Psi^n with r = x, s = -(n-1)/2 normalized equals the b-route
    family with a bound to the instance's y^(n-2) coefficient."""
    x = DiffPoly.x()
    coeffs = odeforms.iterate_psi(x, DiffPoly.const(Fraction(-(n - 1), 2)), n)
    lead = coeffs[n]
    inst = [c / lead for c in coeffs]
    if inst[n - 1] != DiffRatio.zero():
        return False
    fam = odeforms.to_a_parameter(n)
    binding = {"a": inst[n - 2]}
    for j in range(n - 1):
        expected = DiffRatio.of(substitute(fam.coeff(j), binding))
        if inst[j] != expected:
            return False
    return True


def suite_invariants(max_order: int = 6) -> List[CheckResult]:
    out = []
    for n in (1, 2):
        out.append(
            _check(
                f"invariants/vanish/n={n}",
                invariants.semi_invariant(n).expression.is_zero(),
            )
        )
    for n in range(3, max(max_order, 6) + 1):
        si = invariants.semi_invariant(n)
        out.append(
            _check(
                f"invariants/template/n={n}",
                si.expression == invariants.semi_invariant_template(n),
            )
        )
        weights = {invariants.weight(m, n) for m in si.expression.terms}
        out.append(_check(f"invariants/weight/n={n}", weights == {3}))
    for n in (3, 4, 5):
        ok, _ = invariants.verify_transform_law(n)
        out.append(_check(f"invariants/transform-law/n={n}", ok))
    # mutation control: a perturbed coefficient must break the law
    bad = invariants.semi_invariant(3).expression + DiffPoly.of("c2", 2).scale(
        Fraction(1, 30)
    )
    ok_bad, _ = invariants.verify_transform_law(3, invariant=bad)
    out.append(_check("invariants/mutation-control", not ok_bad))
    rep = invariants.j_defect()
    out.append(
        _check(
            "invariants/j-not-semi-invariant",
            rep.factorization_ok and not rep.is_semi_invariant,
            detail=f"defect constant K = {rep.constant}",
        )
    )
    if rep.matches_printed:
        out.append(_check("invariants/j-defect-constant", True))
    else:
        err = Erratum(
            "J-defect constant",
            f"measured K = {rep.constant}, printed K = {PRINTED_J_CONSTANT}; "
            "the printed value matches only the J = 200 (c0 - A0) scaling",
        )
        out.append(
            _check(
                "invariants/j-defect-constant",
                rep.factorization_ok,
                erratum=err,
            )
        )
    return out


def suite_generators(max_order: int = 6) -> List[CheckResult]:
    out = []
    top = min(max_order, 7)
    for form, gen in (
        ("standard", generators.gen_standard),
        ("normal", generators.gen_normal),
        ("laguerre", generators.gen_laguerre),
    ):
        for n in range(3, top + 1):
            field = gen(n, "full")
            family = generators._generic_family(n, form)
            ok, _ = generators.verify_symmetry(field, family)
            out.append(_check(f"generators/symmetry/{form}/n={n}", ok))
    # mutation control: dropping a term must produce a nonzero defect
    field = generators.gen_standard(3, "full")
    broken = dict(field.phi)
    broken[2] = broken[2] + DiffRatio.of(DiffPoly.of("f", 2))
    mutated = generators.VectorField(3, "standard", "full", field.xi, field.eta, broken)
    ok_bad, _ = generators.verify_symmetry(
        mutated, generators._generic_family(3, "standard")
    )
    out.append(_check("generators/mutation-control", not ok_bad))
    for n in (3, 4, 5):
        rem, _ = generators.act_on_invariant(
            generators.gen_standard(n, "induced"),
            invariants.semi_invariant(n).expression,
        )
        out.append(_check(f"generators/invariant-action/n={n}", rem.is_zero()))
    # control: c0 is not an index-3 semi-invariant
    rem, _ = generators.act_on_invariant(
        generators.gen_standard(4, "induced"), DiffPoly.of("c0")
    )
    out.append(_check("generators/invariant-action-control", not rem.is_zero()))
    spec4 = generators.specialize_maxsym(4)
    tangent, _ = generators.verify_induced_tangency(4)
    out.append(_check("generators/maxsym4-tangency", tangent))
    for k, text in sorted(MAXSYM4_PHI_TEXT.items(), reverse=True):
        printed = DiffRatio.of(parse_value(text))
        defect = spec4.phi_at(k) - printed
        if defect.is_zero():
            out.append(_check(f"generators/maxsym4-phi{k}", True))
            continue
        # arbitrate: the tangency condition decides which side is right
        printed_phi = dict(spec4.phi)
        printed_phi[k] = printed
        printed_ok, _ = generators.verify_induced_tangency(4, printed_phi)
        from .rendering import render_text

        err = Erratum(
            f"fourth-order restricted generator, component phi_{k}",
            "printed component differs from the tangency-verified one by: "
            f"{render_text(defect.num)}; the printed component fails the "
            "tangency condition the computed one satisfies",
        )
        out.append(
            _check(
                f"generators/maxsym4-phi{k}",
                tangent and not printed_ok,
                erratum=err,
            )
        )
    return out


def suite_solutions(max_order: int = 6) -> List[CheckResult]:
    out = []
    for n in range(2, max_order + 1):
        ok, _ = solutions.verify_annihilation(n)
        out.append(_check(f"solutions/annihilation/n={n}", ok))
    x = DiffPoly.x()
    sources = [
        ("0", DiffPoly.zero()),
        ("1", DiffPoly.one()),
        ("x", x),
        ("x^2-1", x * x - DiffPoly.one()),
    ]
    for label, b in sources:
        for n in (3, 4, 5):
            rep = solutions.series_check(n, b, 40)
            out.append(_check(f"solutions/series/b={label}/n={n}", rep.all_zero))
    return out


SUITES: dict[str, Callable[[int], List[CheckResult]]] = {
    "ring": suite_ring,
    "forms": suite_forms,
    "invariants": suite_invariants,
    "generators": suite_generators,
    "solutions": suite_solutions,
}


def run_suites(names, max_order: int = 6) -> List[CheckResult]:
    if "all" in names:
        names = list(SUITES)
    out = []
    for name in names:
        out.extend(SUITES[name](max_order))
    return out

"""Properties of the exact differential-polynomial ring."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maxsym.diffalg import (
    DiffPoly,
    DiffRatio,
    DivisionByZero,
    SingularSystem,
    normalize_integer,
    solve_linear,
    substitute,
)

SYMBOLS = [("c0", 0), ("c1", 1), ("c2", 0), ("c2", 1), ("x", 0)]


@st.composite
def polys(draw, max_terms=3):
    terms = draw(st.integers(0, max_terms))
    out = DiffPoly.zero()
    for _ in range(terms):
        coeff = Fraction(
            draw(st.integers(-4, 4) | st.just(0)), draw(st.integers(1, 3))
        )
        mono = DiffPoly.const(coeff)
        for _ in range(draw(st.integers(0, 2))):
            base, order = draw(st.sampled_from(SYMBOLS))
            mono = mono * DiffPoly.of(base, order)
        out = out + mono
    return out


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_leibniz_rule(p, q):
    assert (p * q).derive() == p.derive() * q + p * q.derive()


@given(polys(), polys(), polys())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p - p).is_zero()


@given(polys())
@settings(max_examples=40, deadline=None)
def test_substitute_derive_commute(p):
    binding = {"c1": DiffRatio.of(DiffPoly.of("c2") ** 2 + DiffPoly.x())}
    assert substitute(p.derive(), binding) == DiffRatio.of(
        substitute(p, binding)
    ).derive()


@given(polys())
@settings(max_examples=40, deadline=None)
def test_normalize_integer_properties(p):
    if p.is_zero():
        return
    normalized, scale = normalize_integer(p)
    assert normalized == p.scale(scale)
    coeffs = [c for c in normalized.terms.values()]
    assert all(c.denominator == 1 for c in coeffs)
    from math import gcd
    content = 0
    for c in coeffs:
        content = gcd(content, abs(c.numerator))
    assert content == 1


def test_normalize_integer_sign_anchor():
    p = DiffPoly.of("c0") * (-2) + DiffPoly.of("c1") * 4
    normalized, scale = normalize_integer(p)
    assert normalized == DiffPoly.of("c0") - DiffPoly.of("c1") * 2
    assert scale == Fraction(-1, 2)


def test_exact_quotient():
    c2 = DiffPoly.of("c2")
    ratio = DiffRatio(c2**3 - c2, c2 - DiffPoly.one())
    assert ratio == DiffRatio.of(c2 * c2 + c2)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        DiffRatio(DiffPoly.one(), DiffPoly.zero())


def test_x_derivative_is_one():
    assert DiffPoly.x().derive() == DiffRatio.of(DiffPoly.one())


def test_group_parameters_are_constants():
    for base in ("k1", "a0", "a1", "a2"):
        assert DiffPoly.of(base).derive().is_zero()


def test_partial_and_replace():
    c2 = DiffPoly.of("c2")
    p = c2 * c2 * 3 + DiffPoly.of("c2", 1)
    assert p.partial(("c2", 0)) == c2 * 6
    assert p.replace(("c2", 1), DiffPoly.zero()) == c2 * c2 * 3


@given(polys(), polys())
@settings(max_examples=30, deadline=None)
def test_solve_linear_residual(p, q):
    # triangular system with unit determinant is always solvable and
    # the solution must reproduce the right-hand side exactly
    matrix = [
        [DiffPoly.one(), p],
        [DiffPoly.zero(), DiffPoly.one()],
    ]
    rhs = [q, p * q + DiffPoly.one()]
    sol = solve_linear(matrix, rhs)
    for row, b in zip(matrix, rhs):
        acc = DiffRatio.zero()
        for a, s in zip(row, sol):
            acc = acc + s * a
        assert acc == DiffRatio.of(b)


def test_solve_linear_singular():
    with pytest.raises(SingularSystem):
        solve_linear(
            [[DiffPoly.one(), DiffPoly.one()], [DiffPoly.one(), DiffPoly.one()]],
            [DiffPoly.one(), DiffPoly.zero()],
        )


def test_chain_rule_composition():
    # d/dz of a composed symbol contributes f' times the next jet
    c = DiffPoly.of("c2")
    chain = {"c2": DiffPoly.of("f", 1)}
    assert c.derive(chain=chain) == DiffRatio.of(
        DiffPoly.of("c2", 1) * DiffPoly.of("f", 1)
    )

"""Canonical forms and coefficient characterization of maximal-symmetry
linear ODEs.

The generating route goes through the second-order source equation
y'' + b y = 0: the order-n member of the maximal-symmetry family is the
(n-1)-st symmetric power of the source, computed exactly over b-jets.
Everything else (a-parameter family, standard form, characterizing
relations) is derived from it by exact substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict

from .diffalg import (
    DiffPoly,
    DiffRatio,
    DiffAlgError,
    normalize_integer,
    solve_linear,
    substitute,
)


class StructureError(DiffAlgError):
    pass


class OrderTooLow(DiffAlgError):
    pass


@dataclass(frozen=True)
class LinearODE:
    """y^(n) + sum_j coefficients[j] * y^(j) = 0, leading coefficient 1."""

    order: int
    form: str  # standard | normal | laguerre | iterative-normal
    coefficients: Dict[int, DiffRatio] = field(default_factory=dict)

    def coeff(self, j: int) -> DiffRatio:
        if j == self.order:
            return DiffRatio.of(1)
        return self.coefficients.get(j, DiffRatio.zero())

    def __post_init__(self):
        clean = {
            j: DiffRatio.of(c)
            for j, c in self.coefficients.items()
            if not DiffRatio.of(c).is_zero()
        }
        object.__setattr__(self, "coefficients", clean)
        if not (0 < self.order):
            raise StructureError("order must be positive")
        if any(not (0 <= j < self.order) for j in clean):
            raise StructureError("coefficient index out of range")


@dataclass(frozen=True)
class CharacterizingSet:
    """The n-2 integer-normalized relations c_j = A_j, j = n-3 .. 0."""

    order: int
    relations: tuple  # of DiffPoly, index j = n-3 down to 0

    def relation_for(self, j: int) -> DiffPoly:
        return self.relations[self.order - 3 - j]


def _c(j, k=0):
    return DiffPoly.of(f"c{j}", k)


# ---------------------------------------------------------------------------
# symmetric-power construction


@lru_cache(maxsize=None)
def sym_power_normal(n: int) -> LinearODE:
    """Order-n equation annihilated by u^(n-1) where u'' + b u = 0.

    Computed on the basis e_k = u^(n-1-k) u'^k with the recurrence
    e_k' = (n-1-k) e_{k+1} - k b e_{k-1}; the coefficients come out as
    differential polynomials in b.
    """
    if n < 2:
        raise OrderTooLow("symmetric power needs order >= 2")
    b = DiffPoly.of("b")
    zero = DiffPoly.zero()

    def d_vec(vec):
        # derivative of sum_k vec[k] e_k in the same basis
        out = [v.derive() for v in vec]
        for k in range(n):
            if not vec[k].is_zero():
                if k + 1 < n:
                    out[k + 1] = out[k + 1] + vec[k].scale(n - 1 - k)
                if k - 1 >= 0:
                    out[k - 1] = out[k - 1] - b * vec[k].scale(k)
        return out

    derivs = [[DiffPoly.one()] + [zero] * (n - 1)]  # w = e_0
    for _ in range(n):
        derivs.append(d_vec(derivs[-1]))
    matrix = [[derivs[m][k] for m in range(n)] for k in range(n)]
    rhs = [derivs[n][k] for k in range(n)]
    alpha = solve_linear(matrix, rhs)
    coeffs = {m: -alpha[m] for m in range(n) if not alpha[m].is_zero()}
    ode = LinearODE(n, "iterative-normal", coeffs)
    assert ode.coeff(n - 1).is_zero(), "symmetric power must be in normal form"
    return ode


def source_constant(n: int) -> Fraction:
    """K_n with B_{n-2} = K_n * b in the symmetric-power family."""
    ode = sym_power_normal(n)
    c = ode.coeff(n - 2).as_poly()
    b = DiffPoly.of("b")
    k = c.terms.get(next(iter(b.terms)))
    if k is None or c != b.scale(k):
        raise StructureError("coefficient n-2 is not a constant multiple of b")
    return k


@lru_cache(maxsize=None)
def to_a_parameter(n_or_ode) -> LinearODE:
    """Re-express the b-parameter family in the single function a = B_{n-2}."""
    ode = sym_power_normal(n_or_ode) if isinstance(n_or_ode, int) else n_or_ode
    n = ode.order
    k = source_constant(n)
    binding = {"b": DiffRatio.of(DiffPoly.of("a").scale(Fraction(1, 1) / k))}
    coeffs = {
        j: substitute(c, binding) for j, c in ode.coefficients.items()
    }
    return LinearODE(n, "iterative-normal", coeffs)


# ---------------------------------------------------------------------------
# exponential shift of the dependent variable


def exp_shift(ode: LinearODE, q, form: str = "standard") -> LinearODE:
    """Substitute y = w E with E'/E = q; exponentials never materialize.

    The tower e_m = E^(m)/E obeys e_0 = 1, e_{m+1} = e_m' + q e_m, and
    the new coefficient of w^(j) is sum_{m>=j} c_m binom(m,j) e_{m-j}.
    """
    n = ode.order
    q = DiffRatio.of(q)
    tower = [DiffRatio.of(1)]
    for _ in range(n):
        tower.append(tower[-1].derive() + q * tower[-1])
    coeffs = {}
    for j in range(n):
        acc = DiffRatio.zero()
        for m in range(j, n + 1):
            cm = ode.coeff(m)
            if cm.is_zero():
                continue
            acc = acc + cm * tower[m - j] * comb(m, j)
        if not acc.is_zero():
            coeffs[j] = acc
    return LinearODE(n, form, coeffs)


@lru_cache(maxsize=None)
def normal_to_standard(n: int) -> LinearODE:
    """Standard-form family A_j(a, c_{n-1}) of the maximal-symmetry class."""
    if n < 3:
        raise OrderTooLow("standard-form family needs order >= 3")
    family = to_a_parameter(n)
    q = DiffRatio.of(_c(n - 1)) / n
    out = exp_shift(family, q, form="standard")
    assert out.coeff(n - 1) == DiffRatio.of(_c(n - 1))
    expected = (
        DiffPoly.of("a")
        + _c(n - 1) ** 2 * Fraction(n - 1, 2 * n)
        + _c(n - 1, 1) * Fraction(n - 1, 2)
    )
    assert out.coeff(n - 2) == DiffRatio.of(expected)
    return out


def a_of_coefficients(n: int) -> DiffPoly:
    """a solved from c_{n-2} = A_{n-2}."""
    if n < 3:
        raise OrderTooLow("needs order >= 3")
    return (
        _c(n - 2)
        - _c(n - 1) ** 2 * Fraction(n - 1, 2 * n)
        - _c(n - 1, 1) * Fraction(n - 1, 2)
    )


# ---------------------------------------------------------------------------
# characterization


def a_j_expression(n: int, j: int):
    """A_j with a eliminated: a differential polynomial in c_{n-1}, c_{n-2}."""
    family = normal_to_standard(n)
    binding = {"a": DiffRatio.of(a_of_coefficients(n))}
    return substitute(family.coeff(j), binding)


@lru_cache(maxsize=None)
def characterize(n: int) -> CharacterizingSet:
    """The n-2 characterizing relations c_j = A_j, integer-normalized."""
    if n < 3:
        raise OrderTooLow("characterization needs order >= 3")
    relations = []
    for j in range(n - 3, -1, -1):
        rel = DiffRatio.of(_c(j)) - DiffRatio.of(a_j_expression(n, j))
        poly = rel.as_poly()
        poly, _ = normalize_integer(poly)
        relations.append(poly)
    return CharacterizingSet(n, tuple(relations))


@lru_cache(maxsize=None)
def general_maxsym_form(n: int) -> LinearODE:
    """Most general standard-form maximal-symmetry equation, expressed in
    the two arbitrary functions c_{n-1} and c_{n-2}."""
    if n < 3:
        raise OrderTooLow("needs order >= 3")
    coeffs = {n - 1: DiffRatio.of(_c(n - 1)), n - 2: DiffRatio.of(_c(n - 2))}
    for j in range(n - 3, -1, -1):
        coeffs[j] = DiffRatio.of(a_j_expression(n, j))
    return LinearODE(n, "standard", coeffs)


def is_max_symmetry(ode: LinearODE):
    """Test a concrete equation (rational-function coefficients in x)
    against the characterizing relations; returns (verdict, residuals)."""
    n = ode.order
    if n < 3:
        raise OrderTooLow(
            "all first- and second-order linear equations have maximal symmetry"
        )
    bindings = {f"c{j}": ode.coeff(j) for j in range(n)}
    residuals = []
    for rel in characterize(n).relations:
        residuals.append(DiffRatio.of(substitute(rel, bindings)))
    verdict = all(r.is_zero() for r in residuals)
    return verdict, residuals


# ---------------------------------------------------------------------------
# iterative operators (instance-level cross-validation oracle)


def iterate_psi(r, s, n: int):
    """Coefficient list [coeff of y^(k)] of Psi^n[y], Psi[y] = r y' + s y.

    The leading coefficient is r^n; the list is unnormalized.
    """
    if n < 1:
        raise OrderTooLow("needs n >= 1")
    r = DiffRatio.of(r)
    s = DiffRatio.of(s)
    y = DiffPoly.of("y")
    expr = DiffRatio.of(y)
    for _ in range(n):
        expr = r * expr.derive() + s * expr
    coeffs = []
    for k in range(n + 1):
        coeffs.append(expr.partial(("y", k)))
    # sanity: expr must be linear homogeneous in the y-jets
    recon = DiffRatio.zero()
    for k, c in enumerate(coeffs):
        recon = recon + c * DiffPoly.of("y", k)
    assert (recon - expr).is_zero()
    return coeffs

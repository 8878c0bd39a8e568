"""Infinitesimal generators of the symmetry group (coefficients as
dependent variables) and of the induced action on coefficient space,
for the three canonical forms, plus machine verification of the
invariance conditions.

All jet bookkeeping runs over the free differential ring: the total
derivative D_x bumps every function symbol (y, the c_j, f, g, h) by one
order and sends x to 1, which is exactly DiffPoly.derive().
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict

from .diffalg import DiffPoly, DiffRatio, DiffAlgError, substitute
from .odeforms import LinearODE, OrderTooLow, general_maxsym_form


@dataclass(frozen=True)
class VectorField:
    """xi d/dx + eta d/dy + sum_k phi[k] d/dc_k.

    ``variant`` is "full" (symmetry group, eta = g y + h present) or
    "induced" (action on coefficient space only, eta absent, h = 0).
    The phi components may be rational in y: the h-part of phi_0 carries
    h^(j)/y terms.
    """

    order: int
    form: str
    variant: str
    xi: DiffRatio
    eta: DiffRatio | None
    phi: Dict[int, DiffRatio]

    def phi_at(self, k: int) -> DiffRatio:
        return self.phi.get(k, DiffRatio.zero())


def _f(k=0):
    return DiffPoly.of("f", k)


def _g(k=0):
    return DiffPoly.of("g", k)


def _h(k=0):
    return DiffPoly.of("h", k)


def _c(j, k=0):
    return DiffPoly.of(f"c{j}", k)


def _y(k=0):
    return DiffPoly.of("y", k)


def _phi_standard(n: int, k: int, g_jets, with_h: bool) -> DiffRatio:
    """One coefficient component for the standard form: the -(n-k)c_k f'
    term, the (f, g)-jet sum with c_n = 1, and (for k = 0, full variant)
    the h-terms divided by y."""

    def c_or_one(i, order=0):
        if i == n:
            return DiffPoly.one() if order == 0 else DiffPoly.zero()
        return _c(i, order)

    acc = DiffRatio.of(-_c(k) * _f(1) * (n - k))
    for j in range(1, n - k + 1):
        ckj = c_or_one(k + j)
        if ckj.is_zero():
            continue
        term = _f(j + 1) * comb(k + j, j + 1) - g_jets(j) * comb(k + j, j)
        acc = acc + DiffRatio.of(ckj * term)
    if with_h and k == 0:
        # sign of the sum fixed by the invariance condition itself: the
        # h-block must cancel sum_j c_j h^(j) coming from the
        # prolongation of eta = g y + h
        y = DiffRatio.of(_y())
        htail = DiffRatio.of(-_c(0) * _h())
        for j in range(1, n + 1):
            ckj = c_or_one(j)
            if ckj.is_zero():
                continue
            htail = htail - DiffRatio.of(ckj * _h(j) * comb(j, j))
        acc = acc + htail / y
    return acc


def gen_standard(n: int, variant: str = "full") -> VectorField:
    """Generator for the general standard-form equation of order n."""
    if n < 2:
        raise OrderTooLow("needs order >= 2")
    full = variant == "full"
    phi = {k: _phi_standard(n, k, _g, with_h=full) for k in range(n)}
    eta = DiffRatio.of(_g() * _y() + _h()) if full else None
    return VectorField(n, "standard", variant, DiffRatio.of(_f()), eta, phi)


def gen_normal(n: int, variant: str = "full") -> VectorField:
    """Generator for the reduced normal form: g = (n-1)/2 f' + k1, the
    c_{n-1} slot dropped."""
    if n < 3:
        raise OrderTooLow("needs order >= 3")
    full = variant == "full"
    g_sub = DiffRatio.of(_f(1) * Fraction(n - 1, 2) + DiffPoly.of("k1"))
    base = gen_standard(n, variant)
    binding = {"g": g_sub, f"c{n-1}": DiffRatio.zero()}
    phi = {}
    for k in range(n - 1):
        phi[k] = DiffRatio.of(substitute(base.phi_at(k), binding))
    eta = (
        DiffRatio.of(substitute(base.eta, binding)) if full else None
    )
    # the dropped slot must close: phi_{n-1} vanishes under the constraint
    top = DiffRatio.of(substitute(base.phi_at(n - 1), binding))
    assert top.is_zero()
    return VectorField(n, "normal", variant, base.xi, eta, phi)


def gen_laguerre(n: int, variant: str = "full") -> VectorField:
    """Generator for the Laguerre-Forsyth form: f = a2 x^2 + a1 x + a0,
    g = k1 + (n-1)/2 (2 a2 x + a1); slots n-1 and n-2 dropped."""
    if n < 3:
        raise OrderTooLow("needs order >= 3")
    full = variant == "full"
    x = DiffPoly.x()
    a0, a1, a2 = (DiffPoly.of(s) for s in ("a0", "a1", "a2"))
    f_sub = DiffRatio.of(a2 * x * x + a1 * x + a0)
    g_sub = DiffRatio.of(
        DiffPoly.of("k1") + (a2 * x * 2 + a1) * Fraction(n - 1, 2)
    )
    base = gen_standard(n, variant)
    binding = {
        "f": f_sub,
        "g": g_sub,
        f"c{n-1}": DiffRatio.zero(),
        f"c{n-2}": DiffRatio.zero(),
    }
    phi = {}
    for k in range(n - 2):
        phi[k] = DiffRatio.of(substitute(base.phi_at(k), binding))
    for k in (n - 2, n - 1):
        top = DiffRatio.of(substitute(base.phi_at(k), binding))
        assert top.is_zero()
    eta = DiffRatio.of(substitute(base.eta, binding)) if full else None
    return VectorField(n, "laguerre", variant, f_sub, eta, phi)


def laguerre_phi_closed_form(n: int, k: int) -> DiffRatio:
    """Closed-form induced component for the Laguerre-Forsyth form:
    -(n-k)(2 a2 x + a1) c_k + a2 (k+1)(k+1-n) c_{k+1}."""
    x = DiffPoly.x()
    a1, a2 = DiffPoly.of("a1"), DiffPoly.of("a2")
    out = -(a2 * x * 2 + a1) * _c(k) * (n - k)
    if k + 1 <= n - 3:
        out = out + a2 * _c(k + 1) * ((k + 1) * (k + 1 - n))
    return DiffRatio.of(out)


def specialize_maxsym(n: int = 4) -> VectorField:
    """Induced standard-form generator restricted to the maximal-symmetry
    family: c_j for j <= n-3 replaced by their characterizing values."""
    field = gen_standard(n, "induced")
    family = general_maxsym_form(n)
    binding = {f"c{j}": family.coeff(j) for j in range(n - 2)}
    phi = {
        k: DiffRatio.of(substitute(field.phi_at(k), binding)) for k in range(n)
    }
    return VectorField(n, "standard", "induced", field.xi, None, phi)


def verify_induced_tangency(n: int, phi: dict[int, DiffRatio] | None = None):
    """Check that the restricted components are tangent to the
    maximal-symmetry family: for every dependent coefficient j <= n-3
    the component phi_j must equal the chain-rule variation of the
    family coefficient A_j under the free components phi_{n-1},
    phi_{n-2}.  This is an independent correctness arbiter for the
    restricted generator.  Returns (ok, defects) with defects keyed by j.
    """
    field = gen_standard(n, "induced")
    family = general_maxsym_form(n)
    if phi is None:
        phi = specialize_maxsym(n).phi
    defects = {}
    for j in range(n - 2):
        a_j = family.coeff(j)
        max_order = max(
            (order for m in a_j.num.terms for (_, order), _ in m), default=0
        )
        variation = DiffRatio.zero()
        for m in (n - 1, n - 2):
            jets = coefficient_prolongation(field, m, max_order)
            for order in range(max_order + 1):
                part = a_j.partial((f"c{m}", order))
                if not part.is_zero():
                    variation = variation + jets[order] * part
        defect = phi[j] - variation
        if not defect.is_zero():
            defects[j] = defect
    return not defects, defects


# ---------------------------------------------------------------------------
# prolongation and verification


def prolong(xi: DiffRatio, eta: DiffRatio, n: int, dep: str = "y"):
    """Prolonged components eta^(0..n) for a dependent variable via
    eta^(k) = D_x eta^(k-1) - dep^(k) D_x xi."""
    out = [DiffRatio.of(eta)]
    dxi = DiffRatio.of(xi).derive()
    for k in range(1, n + 1):
        out.append(out[-1].derive() - DiffRatio.of(DiffPoly.of(dep, k)) * dxi)
    return out


def _generic_family(n: int, form: str) -> LinearODE:
    drop = {"standard": (), "normal": (n - 1,), "laguerre": (n - 1, n - 2)}[form]
    coeffs = {
        j: DiffRatio.of(_c(j)) for j in range(n) if j not in drop
    }
    return LinearODE(n, form, coeffs)


def verify_symmetry(field: VectorField, ode: LinearODE):
    """Infinitesimal invariance of Delta = y^(n) + sum c_k y^(k) under
    the full field; returns (ok, defect).

    The action is sum_k phi_k dDelta/dc_k + sum_m eta^(m) dDelta/dy^(m),
    with y^(n) then eliminated on the solution manifold and the y
    denominator (from the h-terms) cleared."""
    n = ode.order
    if field.eta is None:
        raise DiffAlgError("verify_symmetry needs a full-variant field")
    etas = prolong(field.xi, field.eta, n)
    acc = DiffRatio.zero()
    for k in range(n):
        ck = ode.coeff(k)
        phik = field.phi_at(k)
        if not phik.is_zero():
            acc = acc + phik * DiffRatio.of(_y(k))
        if not ck.is_zero():
            acc = acc + ck * etas[k]
    acc = acc + etas[n]
    manifold = DiffRatio.zero()
    for k in range(n):
        ck = ode.coeff(k)
        if not ck.is_zero():
            manifold = manifold - ck * DiffRatio.of(_y(k))
    defect = acc.replace(("y", n), manifold)
    # only the y-denominator from phi_0's h-terms may survive
    cleared = defect * DiffRatio.of(_y())
    num = cleared.num if cleared.den.is_const() else None
    if num is None:
        return False, defect
    return num.is_zero() and defect.is_zero(), defect


def coefficient_prolongation(field: VectorField, k: int, orders: int):
    """Jets of phi_k when c_k is treated as a dependent variable."""
    out = [field.phi_at(k)]
    dxi = field.xi.derive()
    for m in range(1, orders + 1):
        out.append(out[-1].derive() - DiffRatio.of(_c(k, m)) * dxi)
    return out


def act_on_invariant(field: VectorField, expression: DiffPoly):
    """Apply the induced field (prolonged to coefficient jets) to a
    function of the coefficients; returns (remainder, action) where
    remainder = X0.F + 3 f'(x) F (zero exactly when F transforms with
    index 3)."""
    if field.variant != "induced":
        raise DiffAlgError("act_on_invariant needs an induced-variant field")
    n = field.order
    max_order = 0
    for m in expression.terms:
        for (_, order), _ in m:
            max_order = max(max_order, order)
    action = field.xi * DiffRatio.of(expression.partial(("x", 0)))
    for k in range(n):
        jets = coefficient_prolongation(field, k, max_order)
        for order in range(max_order + 1):
            part = expression.partial((f"c{k}", order))
            if not part.is_zero():
                action = action + jets[order] * DiffRatio.of(part)
    remainder = action + field.xi.derive() * DiffRatio.of(expression) * 3
    return remainder, action

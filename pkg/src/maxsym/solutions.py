"""Superposition solutions y_k = u^k v^(n-1-k) of the maximal-symmetry
family, where u, v solve the source equation y'' + b y = 0.

Two independent verifications: a symbolic annihilation proof in the free
ring over {b-jets, u, u', v, v'} with the rewrites u'' -> -b u,
v'' -> -b v, and an exact rational power-series check for polynomial b.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .diffalg import DiffPoly, DiffRatio, DiffAlgError, X_BASE
from .odeforms import OrderTooLow, sym_power_normal


class TruncationTooLow(DiffAlgError):
    pass


@dataclass(frozen=True)
class MonomialSolution:
    index: int
    power_u: int
    power_v: int

    def expression(self) -> DiffPoly:
        return DiffPoly.of("u") ** self.power_u * DiffPoly.of("v") ** self.power_v


def superposition_basis(n: int) -> List[MonomialSolution]:
    """The n solutions u^k v^(n-1-k), k = 0..n-1."""
    if n < 2:
        raise OrderTooLow("needs order >= 2")
    return [MonomialSolution(k, k, n - 1 - k) for k in range(n)]


def _source_derive(p: DiffPoly) -> DiffPoly:
    """Total derivative with the source rewrites u'' -> -b u, v'' -> -b v;
    derivative orders of u and v never exceed one."""
    b = DiffPoly.of("b")
    out = p.derive()
    for base in ("u", "v"):
        s = (base, 2)
        out = out.replace(s, -b * DiffPoly.of(base))
        if isinstance(out, DiffRatio):
            out = out.as_poly()
    return out


def verify_annihilation(n: int):
    """Exact symbolic check that every basis monomial is annihilated by
    the symmetric-power equation; returns (ok, residuals)."""
    if n < 2:
        raise OrderTooLow("needs order >= 2")
    ode = sym_power_normal(n)
    residuals = []
    for solution in superposition_basis(n):
        derivs = [solution.expression()]
        for _ in range(n):
            derivs.append(_source_derive(derivs[-1]))
        acc = DiffRatio.of(derivs[n])
        for j, cj in ode.coefficients.items():
            acc = acc + cj * derivs[j]
        residuals.append(acc)
    return all(r.is_zero() for r in residuals), residuals


# ---------------------------------------------------------------------------
# exact truncated power series


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series at 0 with exact rational coefficients, truncated at
    order ``trunc`` (coefficients 0..trunc are meaningful)."""

    coeffs: tuple
    trunc: int

    @staticmethod
    def make(coeffs, trunc: int) -> "TruncatedSeries":
        c = [Fraction(v) for v in coeffs[: trunc + 1]]
        c += [Fraction(0)] * (trunc + 1 - len(c))
        return TruncatedSeries(tuple(c), trunc)

    @staticmethod
    def zero(trunc: int) -> "TruncatedSeries":
        return TruncatedSeries.make([], trunc)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        t = min(self.trunc, other.trunc)
        return TruncatedSeries.make(
            [self.coeffs[i] + other.coeffs[i] for i in range(t + 1)], t
        )

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        t = min(self.trunc, other.trunc)
        out = [Fraction(0)] * (t + 1)
        for i, a in enumerate(self.coeffs[: t + 1]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: t + 1 - i]):
                if b:
                    out[i + j] += a * b
        return TruncatedSeries.make(out, t)

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries.make([c * v for v in self.coeffs], self.trunc)

    def derive(self) -> "TruncatedSeries":
        # differentiation loses one meaningful order
        t = self.trunc - 1
        if t < 0:
            raise TruncationTooLow("series too short to differentiate")
        return TruncatedSeries.make(
            [(i + 1) * self.coeffs[i + 1] for i in range(t + 1)], t
        )

    def pow(self, e: int) -> "TruncatedSeries":
        out = TruncatedSeries.make([1], self.trunc)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def poly_in_x_to_series(p: DiffPoly, trunc: int) -> TruncatedSeries:
    """Convert a polynomial in x alone into a truncated series."""
    out = [Fraction(0)] * (trunc + 1)
    for mono, coeff in p.terms.items():
        power = 0
        for (base, order), e in mono:
            if base != X_BASE:
                raise DiffAlgError("polynomial is not in x alone")
            power = e
        if power <= trunc:
            out[power] += coeff
    return TruncatedSeries.make(out, trunc)


def source_series(b: DiffPoly, trunc: int):
    """Series solutions u (u(0)=1, u'(0)=0) and v (v(0)=0, v'(0)=1) of
    y'' + b y = 0 by the exact two-term recurrence."""
    bs = poly_in_x_to_series(b, trunc).coeffs
    out = []
    for init in ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))):
        y = [Fraction(0)] * (trunc + 1)
        y[0], y[1] = init
        for m in range(trunc - 1):
            conv = sum(
                (bs[i] * y[m - i] for i in range(m + 1)), start=Fraction(0)
            )
            y[m + 2] = -conv / ((m + 1) * (m + 2))
        out.append(TruncatedSeries.make(y, trunc))
    return out[0], out[1]


def evaluate_poly_series(p, bindings, trunc: int) -> TruncatedSeries:
    """Evaluate a DiffPoly/DiffRatio whose symbols are jets of bound
    bases (plus x) on truncated series."""
    if isinstance(p, DiffRatio):
        if not p.den.is_const():
            raise DiffAlgError("series evaluation needs a polynomial value")
        return evaluate_poly_series(p.num, bindings, trunc).scale(
            1 / p.den.const_value()
        )
    xs = TruncatedSeries.make([0, 1], trunc)
    towers = {}

    def jet(base, order):
        if base not in towers:
            towers[base] = [bindings[base]]
        t = towers[base]
        while len(t) <= order:
            t.append(t[-1].derive())
        return t[order]

    acc = TruncatedSeries.zero(trunc)
    for mono, coeff in p.terms.items():
        term = TruncatedSeries.make([coeff], trunc)
        for (base, order), e in mono:
            if base == X_BASE:
                term = term * xs.pow(e)
            else:
                term = term * jet(base, order).pow(e)
        acc = acc + term
    return acc


@dataclass(frozen=True)
class SeriesReport:
    order: int
    truncation: int
    residual_orders: int
    residuals: tuple  # per basis solution: tuple of residual coefficients

    @property
    def all_zero(self) -> bool:
        return all(not any(r) for r in self.residuals)


def series_check(n: int, b: DiffPoly, trunc: int) -> SeriesReport:
    """Verify the superposition basis against the order-n equation with
    exact truncated series; all residual coefficients through order
    trunc - n must vanish."""
    if n < 2:
        raise OrderTooLow("needs order >= 2")
    degree = 0
    for mono in b.terms:
        for (base, _), e in mono:
            if base == X_BASE:
                degree = max(degree, e)
    if trunc < n + degree + 5:
        raise TruncationTooLow(
            f"truncation {trunc} too low; need at least {n + degree + 5}"
        )
    ode = sym_power_normal(n)
    u, v = source_series(b, trunc)
    residuals = []
    for solution in superposition_basis(n):
        y = u.pow(solution.power_u) * v.pow(solution.power_v)
        yder = [y]
        for _ in range(n):
            yder.append(yder[-1].derive())
        resid = yder[n]
        for j, cj in ode.coefficients.items():
            cseries = evaluate_poly_series(cj, {"b": poly_in_x_to_series(b, trunc)}, trunc)
            kept = min(resid.trunc, cseries.trunc, yder[j].trunc)
            prod = TruncatedSeries.make(cseries.coeffs, kept) * TruncatedSeries.make(
                yder[j].coeffs, kept
            )
            resid = TruncatedSeries.make(resid.coeffs, kept) + prod
        keep = trunc - n
        residuals.append(tuple(resid.coeffs[: keep + 1]))
    return SeriesReport(n, trunc, trunc - n, tuple(residuals))

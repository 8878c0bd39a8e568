"""Exact arithmetic in a ring of differential polynomials.

Values are polynomials (and quotients of polynomials) in "differential
symbols": function symbols carrying a derivative order, e.g. ``c2''`` is
the symbol ``("c2", 2)``.  The independent variable ``x`` is a
distinguished base whose derivative is 1.  All coefficients are
arbitrary-precision rationals; nothing in this module (or the package)
ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Union

Rational = Fraction

#: the distinguished independent variable
X_BASE = "x"

#: bases treated as constants by the total derivative (group parameters)
CONSTANT_BASES = frozenset({"k1", "a0", "a1", "a2"})

# A differential symbol is (base, derivative order); a monomial is a
# sorted tuple of ((base, order), exponent) pairs with positive exponents.
Sym = tuple  # (str, int)
Mono = tuple  # of ((str, int), int)

ONE_MONO: Mono = ()


class DiffAlgError(Exception):
    """Base class for errors raised by the exact-algebra layer."""


class DivisionByZero(DiffAlgError):
    pass


class ZeroPolynomial(DiffAlgError):
    pass


class SingularSystem(DiffAlgError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


def sym(base: str, order: int = 0) -> Sym:
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    if base == X_BASE and order > 0:
        raise ValueError("x has no derivative symbols")
    return (base, order)


# ---------------------------------------------------------------------------
# monomial helpers


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Mono, b: Mono):
    """a / b, or None when not divisible."""
    d = dict(a)
    for s, e in b:
        r = d.get(s, 0) - e
        if r < 0:
            return None
        if r == 0:
            del d[s]
        else:
            d[s] = r
    return tuple(sorted(d.items()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_flat(m: Mono):
    out = []
    for s, e in m:
        out.extend([s] * e)
    return tuple(out)


def display_key(m: Mono):
    """Deterministic ordering used for printing and sign conventions.

    Terms sort by total derivative count, then by the sorted symbol
    sequence, then by the power of x; this reproduces the conventional
    layout ``54*c0 - 18*c1*c2 + 4*c2^3 - 27*c1' + ...``.
    """
    dcount = 0
    xpow = 0
    flat = []
    for (base, order), e in m:
        if base == X_BASE:
            xpow = e
        else:
            dcount += order * e
            flat.extend([(base, order)] * e)
    return (dcount, tuple(flat), xpow)


def _lead_key(m: Mono):
    # graded-lex selection key; the minimum of this key is the leading
    # monomial (highest degree, then lexicographically largest).
    return (-_mono_degree(m), _mono_flat(m))


# ---------------------------------------------------------------------------
# polynomials


class DiffPoly:
    """Canonical-form multivariate polynomial over differential symbols.

    Immutable by convention: no method mutates ``terms`` after
    construction, so values may be shared freely (including across
    threads).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] = (), _clean: bool = False):
        if _clean:
            self.terms = dict(terms)
        else:
            d = {}
            for m, c in dict(terms).items():
                c = Fraction(c)
                if c:
                    d[m] = d.get(m, Fraction(0)) + c
                    if not d[m]:
                        del d[m]
            self.terms = d

    # -- constructors

    @staticmethod
    def zero() -> "DiffPoly":
        return DiffPoly({}, _clean=True)

    @staticmethod
    def const(c) -> "DiffPoly":
        c = Fraction(c)
        return DiffPoly({ONE_MONO: c} if c else {}, _clean=True)

    @staticmethod
    def one() -> "DiffPoly":
        return DiffPoly.const(1)

    @staticmethod
    def of(base: str, order: int = 0) -> "DiffPoly":
        return DiffPoly({((sym(base, order), 1),): Fraction(1)}, _clean=True)

    @staticmethod
    def x() -> "DiffPoly":
        return DiffPoly.of(X_BASE, 0)

    # -- predicates / accessors

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise DiffAlgError("polynomial is not constant")
        return self.terms.get(ONE_MONO, Fraction(0))

    def symbols(self):
        out = set()
        for m in self.terms:
            for s, _ in m:
                out.add(s)
        return out

    def bases(self):
        return {b for b, _ in self.symbols()}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: display_key(t[0]))

    def leading(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        m = min(self.terms, key=_lead_key)
        return m, self.terms[m]

    # -- ring operations

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        if isinstance(other, DiffRatio):
            return DiffRatio.of(self) == other
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return DiffPoly({m: -c for m, c in self.terms.items()}, _clean=True)

    def __add__(self, other):
        other = _coerce(other)
        if isinstance(other, DiffRatio):
            return DiffRatio.of(self) + other
        d = dict(self.terms)
        for m, c in other.terms.items():
            nc = d.get(m, Fraction(0)) + c
            if nc:
                d[m] = nc
            elif m in d:
                del d[m]
        return DiffPoly(d, _clean=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if isinstance(other, DiffRatio):
            return DiffRatio.of(self) - other
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if isinstance(other, DiffRatio):
            return DiffRatio.of(self) * other
        if len(self.terms) > len(other.terms):
            self, other = other, self
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = out.get(m, Fraction(0)) + c1 * c2
                if c:
                    out[m] = c
                elif m in out:
                    del out[m]
        return DiffPoly(out, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if isinstance(other, DiffPoly):
            return DiffRatio(self, other)
        return DiffRatio.of(self) / other

    def __rtruediv__(self, other):
        return _coerce(other) / DiffRatio.of(self)

    def __pow__(self, n: int):
        if n < 0:
            return DiffRatio.of(self) ** n
        out = DiffPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scale(self, c) -> "DiffPoly":
        c = Fraction(c)
        if not c:
            return DiffPoly.zero()
        return DiffPoly({m: c * v for m, v in self.terms.items()}, _clean=True)

    # -- calculus

    def derive(self, chain: Mapping[str, "DiffPoly"] | None = None) -> "DiffPoly":
        """Total derivative: each symbol (base, k) bumps to (base, k+1),
        x maps to 1.  ``chain`` optionally multiplies the bump of a base
        by a chain-rule factor (used for composed symbols)."""
        out = DiffPoly.zero()
        acc = {}
        for m, c in self.terms.items():
            for (base, order), e in m:
                if base in CONSTANT_BASES:
                    continue
                rest = _mono_div(m, (((base, order), 1),))
                coeff = c * e
                if base == X_BASE:
                    acc[rest] = acc.get(rest, Fraction(0)) + coeff
                else:
                    bumped = _mono_mul(rest, (((base, order + 1), 1),))
                    if chain is not None and base in chain:
                        out = out + chain[base].scale(coeff) * DiffPoly(
                            {bumped: Fraction(1)}, _clean=True
                        )
                    else:
                        acc[bumped] = acc.get(bumped, Fraction(0)) + coeff
        return out + DiffPoly(acc)

    def partial(self, s: Sym) -> "DiffPoly":
        """Formal partial derivative with respect to one symbol."""
        key = ((s, 1),)
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(s, 0)
            if e:
                rest = _mono_div(m, key)
                out[rest] = out.get(rest, Fraction(0)) + c * e
        return DiffPoly(out)

    def replace(self, s: Sym, value) -> Union["DiffPoly", "DiffRatio"]:
        """Replace one exact symbol by a value (no derivative closure)."""
        value = _coerce(value)
        out = DiffPoly.zero() if isinstance(value, DiffPoly) else DiffRatio.zero()
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(s, 0)
            rest = DiffPoly({tuple(sorted(d.items())): c}, _clean=True)
            if e:
                out = out + rest * value**e
            else:
                out = out + rest
        return out

    def substitute(self, bindings, chain=None):
        return substitute(self, bindings, chain)

    # -- presentation helpers

    def __repr__(self):
        from .rendering import render_text

        return f"DiffPoly({render_text(self)})"


def _coerce(v):
    if isinstance(v, (DiffPoly, DiffRatio)):
        return v
    if isinstance(v, (int, Fraction)):
        return DiffPoly.const(v)
    raise TypeError(f"cannot coerce {type(v).__name__} into the ring")


def poly_content(p: DiffPoly) -> Fraction:
    """gcd of the coefficients of p (positive; 0 for the zero polynomial)."""
    if p.is_zero():
        return Fraction(0)
    num = 0
    den = 1
    for c in p.terms.values():
        num = gcd(num, c.numerator)
        den = lcm(den, c.denominator)
    return Fraction(num, den)


def exact_div(p: DiffPoly, q: DiffPoly):
    """Exact polynomial quotient p / q, or None when q does not divide p."""
    if q.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if p.is_zero():
        return DiffPoly.zero()
    if q.is_const():
        return p.scale(1 / q.const_value())
    qm, qc = q.leading()
    quo = {}
    rem = p
    while not rem.is_zero():
        rm, rc = rem.leading()
        mono = _mono_div(rm, qm)
        if mono is None:
            return None
        c = rc / qc
        quo[mono] = quo.get(mono, Fraction(0)) + c
        rem = rem - q * DiffPoly({mono: c}, _clean=True)
    return DiffPoly(quo)


def _mono_gcd(monos: Iterable[Mono]) -> Mono:
    it = iter(monos)
    try:
        g = dict(next(it))
    except StopIteration:
        return ONE_MONO
    for m in it:
        if not g:
            break
        d = dict(m)
        g = {s: min(e, d[s]) for s, e in g.items() if s in d}
    return tuple(sorted(g.items()))


def normalize_integer(p: DiffPoly):
    """Scale p to integer coefficients with content 1 and a conventional
    sign; returns (scaled polynomial, scale used)."""
    if p.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    scale = 1 / poly_content(p)
    # sign convention: the lowest bare order-0 symbol term (e.g. the c0
    # term of a characterizing relation) gets a positive coefficient.
    anchor = None
    for m, c in p.terms.items():
        if len(m) == 1 and m[0][1] == 1 and m[0][0][1] == 0 and m[0][0][0] != X_BASE:
            if anchor is None or display_key(m) < display_key(anchor):
                anchor = m
    if anchor is None:
        anchor = min(p.terms, key=display_key)
    if p.terms[anchor] * scale < 0:
        scale = -scale
    return p.scale(scale), scale


# ---------------------------------------------------------------------------
# fraction field


class DiffRatio:
    """Quotient of two DiffPolys, kept lightly reduced: common monomial
    factors are cancelled, exact polynomial divisions are collapsed and
    the denominator is normalized to integer content with a positive
    leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: DiffPoly, den: DiffPoly):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num = DiffPoly.zero()
            self.den = DiffPoly.one()
            return
        mg = _mono_gcd(list(num.terms) + list(den.terms))
        if mg:
            num = DiffPoly({_mono_div(m, mg): c for m, c in num.terms.items()}, _clean=True)
            den = DiffPoly({_mono_div(m, mg): c for m, c in den.terms.items()}, _clean=True)
        q = exact_div(num, den)
        if q is not None:
            num, den = q, DiffPoly.one()
        s = poly_content(den)
        if den.leading()[1] < 0:
            s = -s
        self.num = num.scale(1 / s)
        self.den = den.scale(1 / s)

    @staticmethod
    def of(p) -> "DiffRatio":
        p = _coerce(p)
        if isinstance(p, DiffRatio):
            return p
        r = DiffRatio.__new__(DiffRatio)
        r.num = p
        r.den = DiffPoly.one()
        return r

    @staticmethod
    def zero() -> "DiffRatio":
        return DiffRatio.of(DiffPoly.zero())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_poly(self) -> DiffPoly:
        if not self.den.is_const():
            raise DiffAlgError("value is not polynomial")
        return self.num.scale(1 / self.den.const_value())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, DiffPoly)):
            other = DiffRatio.of(_coerce(other))
        if not isinstance(other, DiffRatio):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        r = DiffRatio.__new__(DiffRatio)
        r.num = -self.num
        r.den = self.den
        return r

    def __add__(self, other):
        other = DiffRatio.of(_coerce(other))
        if self.den == other.den:
            return DiffRatio(self.num + other.num, self.den)
        return DiffRatio(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-DiffRatio.of(_coerce(other)))

    def __rsub__(self, other):
        return DiffRatio.of(_coerce(other)) - self

    def __mul__(self, other):
        other = DiffRatio.of(_coerce(other))
        # cross-cancel before multiplying to keep intermediates small
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_const():
            q = exact_div(n1, d2)
            if q is not None:
                n1, d2 = q, DiffPoly.one()
        if not d1.is_const():
            q = exact_div(n2, d1)
            if q is not None:
                n2, d1 = q, DiffPoly.one()
        return DiffRatio(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = DiffRatio.of(_coerce(other))
        if other.is_zero():
            raise DivisionByZero("division by zero value")
        inv = DiffRatio.__new__(DiffRatio)
        inv.num, inv.den = other.den, other.num
        return self * inv

    def __rtruediv__(self, other):
        return DiffRatio.of(_coerce(other)) / self

    def __pow__(self, n: int):
        if n < 0:
            return (DiffRatio.of(1) / self) ** (-n)
        out = DiffRatio.of(1)
        for _ in range(n):
            out = out * self
        return out

    def derive(self, chain=None) -> "DiffRatio":
        dn = self.num.derive(chain)
        if self.den.is_const():
            return DiffRatio(dn, self.den)
        dd = self.den.derive(chain)
        return DiffRatio(dn * self.den - self.num * dd, self.den * self.den)

    def partial(self, s: Sym) -> "DiffRatio":
        dn = self.num.partial(s)
        dd = self.den.partial(s)
        if dd.is_zero():
            return DiffRatio(dn, self.den)
        return DiffRatio(dn * self.den - self.num * dd, self.den * self.den)

    def replace(self, s: Sym, value) -> "DiffRatio":
        num = self.num.replace(s, value)
        den = self.den.replace(s, value)
        num, den = DiffRatio.of(num), DiffRatio.of(den)
        if den.is_zero():
            raise DivisionByZero("denominator vanishes after replacement")
        return num / den

    def substitute(self, bindings, chain=None):
        return substitute(self, bindings, chain)

    def __repr__(self):
        from .rendering import render_text

        return f"DiffRatio({render_text(self)})"


# ---------------------------------------------------------------------------
# substitution with derivative closure


class _Tower:
    """Derivative tower of a binding: value, value', value'', ..."""

    def __init__(self, value, chain):
        self.vals = [_coerce(value)]
        self.chain = chain
        self.powers = {}

    def get(self, order: int):
        while len(self.vals) <= order:
            self.vals.append(self.vals[-1].derive(self.chain))
        return self.vals[order]

    def power(self, order: int, exp: int):
        key = (order, exp)
        if key not in self.powers:
            self.powers[key] = self.get(order) ** exp
        return self.powers[key]


def substitute(p, bindings: Mapping[str, object], chain=None):
    """Replace every symbol (base, k) whose base is bound by the k-th
    derivative of its binding.  Returns a DiffPoly when everything stays
    polynomial, otherwise a DiffRatio."""
    p = _coerce(p)
    if isinstance(p, DiffRatio):
        num = substitute(p.num, bindings, chain)
        den = substitute(p.den, bindings, chain)
        num, den = DiffRatio.of(_coerce(num)), DiffRatio.of(_coerce(den))
        if den.is_zero():
            raise DivisionByZero("binding denominator vanishes identically")
        return num / den
    towers = {b: _Tower(v, chain) for b, v in bindings.items()}
    poly_acc = DiffPoly.zero()
    ratio_acc = None
    for m, c in p.terms.items():
        untouched = {}
        factors = []
        for (base, order), e in m:
            if base in towers:
                factors.append(towers[base].power(order, e))
            else:
                untouched[(base, order)] = e
        term = DiffPoly({tuple(sorted(untouched.items())): c}, _clean=True)
        for f in factors:
            term = term * f
        if isinstance(term, DiffRatio):
            ratio_acc = term if ratio_acc is None else ratio_acc + term
        else:
            poly_acc = poly_acc + term
    if ratio_acc is None:
        return poly_acc
    return ratio_acc + poly_acc


# ---------------------------------------------------------------------------
# exact linear solving


def solve_linear(matrix, rhs):
    """Solve M x = rhs exactly by fraction-free (Bareiss) elimination.

    Entries may be DiffPoly or DiffRatio; the solution is a list of
    DiffRatio.  Raises SingularSystem (with the offending row index)
    when M is singular over the fraction field.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("matrix must be square and match the rhs length")
    # clear denominators row by row so Bareiss runs over polynomials
    rows = []
    for i in range(n):
        entries = [DiffRatio.of(_coerce(e)) for e in matrix[i]] + [
            DiffRatio.of(_coerce(rhs[i]))
        ]
        dens = [e.den for e in entries if not e.den.is_const()]
        mult = DiffPoly.one()
        for d in dens:
            if exact_div(mult, d) is None:
                mult = mult * d
        cleared = []
        for e in entries:
            v = (DiffRatio.of(mult) * e).as_poly()
            cleared.append(v)
        rows.append(cleared)
    orig = [list(r) for r in rows]
    prev = DiffPoly.one()
    for k in range(n):
        pivots = [i for i in range(k, n) if not rows[i][k].is_zero()]
        if not pivots:
            raise SingularSystem(f"no pivot in column {k}", row=k)
        # structurally smallest pivot keeps intermediate swell down
        r = min(pivots, key=lambda i: len(rows[i][k].terms))
        rows[k], rows[r] = rows[r], rows[k]
        piv = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                val = piv * rows[i][j] - rows[i][k] * rows[k][j]
                q = exact_div(val, prev)
                if q is None:
                    raise DiffAlgError("Bareiss division failed (internal fault)")
                rows[i][j] = q
            rows[i][k] = DiffPoly.zero()
        prev = piv
    sol = [DiffRatio.zero()] * n
    for i in range(n - 1, -1, -1):
        acc = DiffRatio.of(rows[i][n])
        for j in range(i + 1, n):
            acc = acc - DiffRatio.of(rows[i][j]) * sol[j]
        if rows[i][i].is_zero():
            raise SingularSystem(f"zero diagonal in row {i}", row=i)
        sol[i] = acc / DiffRatio.of(rows[i][i])
    for i in range(n):
        resid = DiffRatio.zero()
        for j in range(n):
            resid = resid + DiffRatio.of(orig[i][j]) * sol[j]
        resid = resid - DiffRatio.of(orig[i][n])
        if not resid.is_zero():
            raise DiffAlgError("nonzero residual after solve (internal fault)")
    return sol

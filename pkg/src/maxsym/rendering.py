"""Deterministic text / LaTeX / JSON rendering of ring values and ODEs.

Output ordering is fixed by the canonical display order of monomials
(see diffalg.display_key), so identical values always render to
byte-identical text.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .diffalg import DiffPoly, DiffRatio, X_BASE, display_key

_PRIMES = {0: "", 1: "'", 2: "''", 3: "'''"}


def _sym_text(base: str, order: int) -> str:
    if order <= 3:
        return base + _PRIMES[order]
    return f"{base}^({order})"


def _sym_latex(base: str, order: int) -> str:
    m = re.fullmatch(r"([A-Za-z]+)(\d+)", base)
    head = f"{m.group(1)}_{m.group(2)}" if m else base
    if order == 0:
        return head
    if order <= 3:
        return head + "^{" + r"\prime" * order + "}"
    return head + "^{(" + str(order) + ")}"


def _coeff_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_factors(mono, texer):
    parts = []
    xpow = 0
    for (base, order), e in mono:
        if base == X_BASE:
            xpow = e
            continue
        s = texer(base, order)
        parts.append(s if e == 1 else f"{s}^{e}")
    if xpow:
        parts.append("x" if xpow == 1 else f"x^{xpow}")
    return parts


def _poly_text(p: DiffPoly, latex: bool) -> str:
    if p.is_zero():
        return "0"
    texer = _sym_latex if latex else _sym_text
    out = []
    for mono, coeff in p.sorted_terms():
        sign = "-" if coeff < 0 else "+"
        c = abs(coeff)
        factors = _mono_factors(mono, texer)
        if latex:
            if c.denominator != 1:
                head = r"\frac{%d}{%d}" % (c.numerator, c.denominator)
            else:
                head = "" if (c == 1 and factors) else str(c.numerator)
            body = " ".join(([head] if head else []) + factors)
        else:
            head = None if (c == 1 and factors) else _coeff_text(c)
            body = "*".join(([head] if head else []) + factors)
        out.append((sign, body))
    first_sign, first_body = out[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _poly_json_terms(p: DiffPoly):
    terms = []
    for mono, coeff in p.sorted_terms():
        entry = {"coeff": f"{coeff.numerator}/{coeff.denominator}", "monomial": []}
        for (base, order), e in mono:
            entry["monomial"].append({"sym": base, "order": order, "pow": e})
        terms.append(entry)
    return terms


def render_text(value) -> str:
    if isinstance(value, DiffPoly):
        return _poly_text(value, latex=False)
    value = DiffRatio.of(value)
    if value.den.is_const() and value.den.const_value() == 1:
        return _poly_text(value.num, latex=False)
    return f"({_poly_text(value.num, False)})/({_poly_text(value.den, False)})"


def render_latex(value) -> str:
    if isinstance(value, DiffPoly):
        return _poly_text(value, latex=True)
    value = DiffRatio.of(value)
    if value.den.is_const() and value.den.const_value() == 1:
        return _poly_text(value.num, latex=True)
    return r"\frac{%s}{%s}" % (_poly_text(value.num, True), _poly_text(value.den, True))


def value_to_json(value) -> dict:
    if isinstance(value, DiffPoly):
        return {"terms": _poly_json_terms(value)}
    value = DiffRatio.of(value)
    if value.den.is_const() and value.den.const_value() == 1:
        return {"terms": _poly_json_terms(value.num)}
    return {
        "num": {"terms": _poly_json_terms(value.num)},
        "den": {"terms": _poly_json_terms(value.den)},
    }


def render(value, fmt: str = "text") -> str:
    if fmt == "text":
        return render_text(value)
    if fmt == "latex":
        return render_latex(value)
    if fmt == "json":
        return json.dumps(value_to_json(value), sort_keys=True)
    raise ValueError(f"unknown format: {fmt}")


def render_ode(ode, fmt: str = "text") -> str:
    """Render a LinearODE as an equated-to-zero equation."""
    n = ode.order
    if fmt == "json":
        doc = {
            "order": n,
            "form": ode.form,
            "coefficients": {
                str(j): value_to_json(c) for j, c in sorted(ode.coefficients.items())
            },
        }
        return json.dumps(doc, sort_keys=True)
    latex = fmt == "latex"
    texer = _sym_latex if latex else _sym_text
    parts = [texer("y", n)]
    for j in range(n - 1, -1, -1):
        c = ode.coefficients.get(j)
        if c is None or DiffRatio.of(c).is_zero():
            continue
        body = render_latex(c) if latex else render_text(c)
        needs_wrap = (" " in body and not body.startswith("(")) or body.startswith("-")
        if needs_wrap:
            body = f"({body})" if not latex else r"\left(%s\right)" % body
        yj = texer("y", j)
        parts.append(f"{body} {yj}" if latex else f"{body}*{yj}")
    sep = " + "
    return sep.join(parts) + " = 0"

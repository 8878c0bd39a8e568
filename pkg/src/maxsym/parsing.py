"""Recursive-descent parser for coefficient expressions and ODE input.

Grammar (explicit '*' required, no juxtaposition):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' int)?
    base   := integer | 'x' | ident primes | '(' expr ')' | '-' factor

Derivative marks on identifiers: 1-4 primes, or ^(k) for any k.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .diffalg import DiffPoly, DiffRatio, DiffAlgError, DivisionByZero


RESERVED_NAMES = re.compile(r"c\d+|[abfgh]|y")


class ParseError(Exception):
    def __init__(self, message, pos, line=1, col=None, expected=()):
        self.pos = pos
        self.line = line
        self.col = col if col is not None else pos + 1
        self.expected = tuple(expected)
        suffix = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at line {line}, column {self.col}{suffix}")


class UnknownSymbol(ParseError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Node:
    span: Tuple[int, int] = field(default=(0, 0), kw_only=True)


@dataclass(frozen=True)
class Num(Node):
    value: int = 0


@dataclass(frozen=True)
class Var(Node):
    """x, or a function symbol with a derivative order."""

    name: str = ""
    order: int = 0


@dataclass(frozen=True)
class Neg(Node):
    arg: Node = None


@dataclass(frozen=True)
class Pow(Node):
    base: Node = None
    exponent: int = 1


@dataclass(frozen=True)
class BinOp(Node):
    op: str = "+"
    left: Node = None
    right: Node = None


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9]*)(?P<primes>'{1,4})?(?P<supord>\^\(\d+\))?"
    r"|(?P<op>[-+*/^()=]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if m.group("num"):
            tokens.append(("num", int(m.group("num")), m.start("num"), m.end()))
        elif m.group("ident"):
            order = 0
            if m.group("primes"):
                order = len(m.group("primes"))
            elif m.group("supord"):
                order = int(m.group("supord")[2:-1])
            tokens.append(
                ("ident", (m.group("ident"), order), m.start("ident"), m.end())
            )
        else:
            tokens.append(("op", m.group("op"), m.start("op"), m.end()))
        pos = m.end()
    tokens.append(("eof", None, len(text), len(text)))
    return tokens


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str, strict: bool = False):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.strict = strict

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, expected=()):
        kind, _, start, _ = self.peek()
        what = "end of input" if kind == "eof" else f"{self.text[start:start+1]!r}"
        raise ParseError(f"{message} before {what}", start, expected=expected)

    def expect_op(self, op):
        kind, val, start, _ = self.peek()
        if kind == "op" and val == op:
            return self.next()
        self.error(f"expected {op!r}", expected=(op,))

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while True:
            kind, val, start, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                right = self.parse_term()
                node = BinOp(val, node, right, span=(node.span[0], right.span[1]))
            else:
                return node

    def parse_term(self) -> Node:
        node = self.parse_factor()
        while True:
            kind, val, start, _ = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                right = self.parse_factor()
                node = BinOp(val, node, right, span=(node.span[0], right.span[1]))
            else:
                return node

    def parse_factor(self) -> Node:
        node = self.parse_base()
        kind, val, start, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, start, end = self.peek()
            if kind != "num":
                self.error("expected integer exponent", expected=("integer",))
            self.next()
            node = Pow(node, val, span=(node.span[0], end))
        return node

    def parse_base(self) -> Node:
        kind, val, start, end = self.peek()
        if kind == "num":
            self.next()
            return Num(val, span=(start, end))
        if kind == "ident":
            self.next()
            name, order = val
            if self.strict and not RESERVED_NAMES.fullmatch(name):
                raise UnknownSymbol(
                    f"unknown symbol {name!r} in strict mode", start
                )
            return Var(name, order, span=(start, end))
        if kind == "op" and val == "(":
            self.next()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if kind == "op" and val == "-":
            self.next()
            arg = self.parse_factor()
            return Neg(arg, span=(start, arg.span[1]))
        self.error(
            "expected a number, symbol, '(' or '-'",
            expected=("number", "symbol", "(", "-"),
        )


def parse_expr(text: str, strict: bool = False) -> Node:
    p = _Parser(text, strict)
    node = p.parse_expr()
    kind, _, start, _ = p.peek()
    if kind != "eof":
        p.error("trailing input")
    return node


def ast_to_value(node: Node) -> DiffRatio:
    if isinstance(node, Num):
        return DiffRatio.of(node.value)
    if isinstance(node, Var):
        if node.name == "x":
            if node.order:
                raise ParseError("x carries no derivative marks", node.span[0])
            return DiffRatio.of(DiffPoly.x())
        return DiffRatio.of(DiffPoly.of(node.name, node.order))
    if isinstance(node, Neg):
        return -ast_to_value(node.arg)
    if isinstance(node, Pow):
        return ast_to_value(node.base) ** node.exponent
    if isinstance(node, BinOp):
        left = ast_to_value(node.left)
        right = ast_to_value(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        try:
            return left / right
        except DivisionByZero:
            raise ParseError("division by zero", node.right.span[0])
    raise TypeError(f"unknown AST node {type(node).__name__}")


def parse_value(text: str, strict: bool = False) -> DiffRatio:
    return ast_to_value(parse_expr(text, strict))


# ---------------------------------------------------------------------------
# ODE documents


@dataclass(frozen=True)
class OdeDocument:
    order: int
    coefficients: Dict[int, DiffRatio]
    form: str = "standard"

    def to_linear_ode(self):
        from .odeforms import LinearODE

        return LinearODE(self.order, self.form, dict(self.coefficients))


def _form_of(order: int, coeffs: Dict[int, DiffRatio]) -> str:
    def zero(j):
        return j not in coeffs or coeffs[j].is_zero()

    if zero(order - 1) and order >= 3 and zero(order - 2):
        return "laguerre"
    if zero(order - 1):
        return "normal"
    return "standard"


def parse_ode(text: str, strict: bool = False) -> OdeDocument:
    """Parse `y`-form equation text like "y''' + x*y = 0"."""
    p = _Parser(text, strict)
    lhs = p.parse_expr()
    kind, val, start, _ = p.peek()
    rhs: Node = Num(0, span=(start, start))
    if kind == "op" and val == "=":
        p.next()
        rhs = p.parse_expr()
        kind, _, start, _ = p.peek()
    if kind != "eof":
        p.error("trailing input")
    value = ast_to_value(lhs) - ast_to_value(rhs)
    if not value.den.bases() <= {"x"}:
        raise ParseError("equation denominator must depend on x alone", 0)
    num = value.num
    coeff_of = {}
    rest = num
    for s in sorted(num.symbols()):
        if s[0] == "y":
            c = num.partial(s)
            if "y" in c.bases():
                raise ParseError("equation must be linear in y and its jets", 0)
            coeff_of[s[1]] = DiffRatio.of(c) / DiffRatio.of(value.den)
            rest = rest.replace(s, 0)
            rest = rest.as_poly() if isinstance(rest, DiffRatio) else rest
    if not coeff_of:
        raise ParseError("no y terms found in equation", 0)
    if not rest.is_zero():
        raise ParseError("equation must be homogeneous in y", 0)
    n = max(coeff_of)
    lead = coeff_of[n]
    if lead.is_zero():
        raise ParseError("vanishing leading coefficient", 0)
    coeffs = {}
    for j, c in coeff_of.items():
        if j == n:
            continue
        norm = c / lead
        if not norm.is_zero():
            coeffs[j] = norm
    return OdeDocument(n, coeffs, _form_of(n, coeffs))


def ode_from_json(text: str) -> OdeDocument:
    """Parse the JSON coefficient-map input form:
    {"order": 3, "coefficients": {"0": "x"}}"""
    try:
        doc = json.loads(text)
        order = int(doc["order"])
        raw = doc.get("coefficients", {})
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad ODE JSON document: {exc}", 0)
    coeffs = {}
    for key, expr in raw.items():
        j = int(key)
        if not 0 <= j < order:
            raise ParseError(f"coefficient index {j} out of range", 0)
        value = parse_value(expr) if isinstance(expr, str) else DiffRatio.of(expr)
        if not value.is_zero():
            coeffs[j] = value
    return OdeDocument(order, coeffs, _form_of(order, coeffs))


def parse(text: str, kind: str = "expr", strict: bool = False):
    if kind == "expr":
        return parse_expr(text, strict)
    if kind == "ode":
        stripped = text.lstrip()
        if stripped.startswith("{"):
            return ode_from_json(text)
        return parse_ode(text, strict)
    raise ValueError(f"unknown parse kind: {kind}")

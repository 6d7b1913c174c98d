"""Text grammar for field specs and polynomials.

Field specs: ``Q``, ``Q(sqrt(-5))``, ``GF(7)``, ``GF(7^2;t^2+1)`` (the
modulus may be omitted, ``GF(7^2)``, in which case the first monic
irreducible in lexicographic order is used).

Polynomials: integer literals, ``x``, ``+ - * ^``, parentheses.  Two
extensions keep every supported field expressible: ``/`` divides by a
constant, and the field generator may appear as ``sqrt(d)`` over Q(sqrt d)
or ``t`` over GF(p^n).
"""
from __future__ import annotations

import re

from .fields import ExtensionField, Field, PrimeField, QuadraticRationals, QuotientField, \
    Rationals, first_irreducible
from .poly import Poly
from ..errors import ParseError, PreconditionError

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt\(\s*-?\d+\s*\))|([xt])|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", int(m.group(1)), start))
        elif m.group(2):
            d = int(re.sub(r"[^\d-]", "", m.group(2)))
            out.append(("sqrt", d, start))
        elif m.group(3):
            out.append(("var", m.group(3), start))
        else:
            op = "^" if m.group(4) == "**" else m.group(4)
            out.append(("op", op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, field: Field, var: str):
        self.text = text
        self.field = field
        self.var = var
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            sign = -1
        elif self.peek()[:2] == ("op", "+"):
            self.take()
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Poly:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.power()
                if tok[1] == "*":
                    acc = acc * rhs
                else:
                    if rhs.degree != 0:
                        self.fail("division only by nonzero constants", tok)
                    acc = acc * rhs.lc().inverse()
            elif tok[0] in ("num", "var", "sqrt") or tok[:2] == ("op", "("):
                # implicit multiplication, e.g. 2x
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be a nonnegative integer literal", tok)
            return base ** tok[1]
        return base

    def atom(self) -> Poly:
        tok = self.take()
        F = self.field
        if tok[0] == "num":
            return Poly.const(F, tok[1])
        if tok[0] == "var":
            if tok[1] == self.var:
                return Poly.x(F)
            if tok[1] == "t" and isinstance(F, QuotientField):
                return Poly(F, [F.generator()])
            self.fail(f"unknown symbol {tok[1]!r}", tok)
        if tok[0] == "sqrt":
            if isinstance(F, QuadraticRationals) and tok[1] == F.d:
                return Poly(F, [F.convert((0, 1))])
            self.fail(f"sqrt({tok[1]}) is not the generator of {F}", tok)
        if tok[:2] == ("op", "("):
            inner = self.expr()
            if self.take()[:2] != ("op", ")"):
                self.fail("expected ')'", self.toks[self.i - 1])
            return inner
        self.fail("unexpected token", tok)


def parse_poly(text: str, field: Field, var: str = "x") -> Poly:
    if not text.strip():
        raise ParseError("empty polynomial", text, 0)
    return _Parser(text, field, var).parse()


def parse_elem(text: str, field: Field):
    p = parse_poly(text, field)
    if p.degree > 0:
        raise ParseError("expected a constant", text, 0)
    return p.lc()


_FIELD = re.compile(
    r"^\s*(?:(Q)|Q\(\s*sqrt\(\s*(-?\d+)\s*\)\s*\)|GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*(?:;\s*([^)]+))?)?\))\s*$")


def parse_field(text: str) -> Field:
    m = _FIELD.match(text)
    if not m:
        raise ParseError(f"unrecognised field spec {text!r}", text, 0)
    try:
        if m.group(1):
            return Rationals()
        if m.group(2) is not None:
            return QuadraticRationals(int(m.group(2)))
        p = int(m.group(3))
        if m.group(4) is None or int(m.group(4)) == 1:
            return PrimeField(p)
        n = int(m.group(4))
        base = PrimeField(p)
        if m.group(5):
            mod = parse_poly(m.group(5), base, var="t")
            if mod.degree != n:
                raise ParseError(f"modulus degree {mod.degree} does not match exponent {n}", text, 0)
            return ExtensionField(p, [int(c) for c in mod.coeffs])
        return ExtensionField(p, first_irreducible(base, n))
    except PreconditionError as exc:
        raise ParseError(str(exc), text, 0) from exc

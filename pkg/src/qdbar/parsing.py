"""Tiny recursive-descent evaluator shared by the scalar and element grammars.

The grammar is ordinary infix arithmetic::

    expr   := [+|-] term ((+|-) term)*
    term   := power ((*|/) power)*
    power  := atom [^ exponent]
    atom   := NUMBER | NAME | ( expr )

``q`` and ``r`` are always available; other names come from the caller's namespace.
Exponents of ``q``/``r`` may be negative or half-integers (``q^(-1/2)``, ``q^-1``).
"""
from __future__ import annotations

import re
from fractions import Fraction

from .scalars import QScalar

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", num, start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif op is not None:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}", start)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, namespace):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.ns = {"q": QScalar.rpow(2), "r": QScalar.rpow(1)}
        self.ns.update(namespace)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        val = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected trailing input", pos)
        return val

    def expr(self):
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    def term(self):
        out = self.power()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.power()
                if val == "*":
                    out = out * rhs
                else:
                    out = _divide(out, rhs, pos)
            else:
                return out

    def power(self):
        base_tok = self.peek()
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            e = self.exponent()
            return _raise(base, e, base_tok[2])
        return base

    def exponent(self) -> Fraction:
        kind, val, pos = self.peek()
        if kind == "op" and val == "(":
            self.take()
            neg = False
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                neg = val == "-"
            num = self._int()
            den = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "/":
                self.take()
                den = self._int()
            self.expect(")")
            e = Fraction(num, den)
            return -e if neg else e
        neg = False
        if kind == "op" and val in "+-":
            self.take()
            neg = val == "-"
        e = Fraction(self._int())
        return -e if neg else e

    def _int(self) -> int:
        kind, val, pos = self.take()
        if kind != "num" or "." in val:
            raise ParseError("expected an integer exponent", pos)
        return int(val)

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Fraction(val)
        if kind == "name":
            if val not in self.ns:
                raise ParseError(f"unknown symbol {val!r}", pos)
            return self.ns[val]
        if kind == "op" and val == "(":
            out = self.expr()
            self.expect(")")
            return out
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def _divide(lhs, rhs, pos):
    if isinstance(rhs, (int, Fraction)):
        if rhs == 0:
            raise ParseError("division by zero", pos)
        return lhs * (Fraction(1) / Fraction(rhs))
    if isinstance(rhs, QScalar) and len(rhs.items()) == 1:
        return lhs * rhs ** -1
    raise ParseError("can only divide by a number or a single power of q", pos)


def _raise(base, e: Fraction, pos):
    if isinstance(base, QScalar) and len(base.items()) == 1:
        (k, c), = base.items()
        if e.denominator != 1:
            kk = k * e
            if c != 1 or kk.denominator != 1:
                raise ParseError("fractional power of a non-power of q", pos)
            return QScalar.rpow(int(kk))
        return base ** int(e)
    if e.denominator != 1:
        raise ParseError("fractional exponent only allowed on q", pos)
    n = int(e)
    if isinstance(base, (int, Fraction)):
        if n < 0 and base == 0:
            raise ParseError("division by zero", pos)
        return Fraction(base) ** n
    if n < 0:
        raise ParseError("negative exponent of a non-scalar", pos)
    out = None
    for _ in range(n):
        out = base if out is None else out * base
    if out is None:
        return Fraction(1)
    return out


def parse_expression(text: str, namespace: dict):
    return _Parser(text, namespace).parse()

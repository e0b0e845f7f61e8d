"""Recursive-descent parser for the polynomial text syntax.

Grammar (whitespace-insensitive)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := INT ['/' INT] | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction

from .ring import Polynomial, Ring, RingError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    """Syntax or declaration error at a 1-based (line, column) position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def _tokenize(text: str, line: int, col0: int):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), col0 + m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), col0 + m.start(2)))
        elif m.group(3) is not None:
            if m.group(3).isspace():
                pos = m.end()
                continue
            toks.append(("op", m.group(3), col0 + m.start(3)))
        pos = m.end()
    toks.append(("end", "", col0 + len(text)))
    return toks


class _Parser:
    def __init__(self, ring: Ring, text: str, line: int, col0: int):
        self.ring = ring
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.error(f"expected {op!r}", t)
        return t

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        f = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self) -> Polynomial:
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "int":
                self.error("exponent must be a non-negative integer", t)
            try:
                return base ** int(t[1])
            except RingError as exc:
                self.error(str(exc), t)
        return base

    def atom(self) -> Polynomial:
        t = self.take()
        if t[0] == "int":
            value = Fraction(int(t[1]))
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                d = self.take()
                if d[0] != "int" or int(d[1]) == 0:
                    self.error("malformed rational coefficient", d)
                value /= int(d[1])
            try:
                return self.ring.const(value)
            except (ZeroDivisionError, ValueError):
                self.error("denominator divisible by the characteristic", t)
        if t[0] == "name":
            if t[1] not in self.ring.index:
                self.error(f"undeclared variable {t[1]!r}", t)
            return self.ring.var(t[1])
        if t[0] == "op" and t[1] == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if t[0] == "end":
            self.error("unexpected end of input", t)
        self.error(f"malformed term near {t[1]!r}", t)


def parse_polynomial(ring: Ring, text: str, line: int = 1, column: int = 1) -> Polynomial:
    return _Parser(ring, text, line, column).parse()

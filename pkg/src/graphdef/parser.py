"""Recursive-descent parser for the formula grammar.

    formula  := disj
    disj     := conj ('|' conj)*
    conj     := unary ('&' unary)*
    unary    := '!' unary | quant | '(' formula ')' | atom
    quant    := 'A' var '.' unary | 'E' var '.' unary | 'E^' int var '.' unary
    atom     := var ('~' | '=') var
    var      := [a-z][a-z0-9_]*

Whitespace is insignificant. A quantifier scopes over one unary item, so
"Ex.x~y & y=y" reads as (Ex.x~y) & y=y; the printer always parenthesises
compound bodies.
"""

from __future__ import annotations

from .errors import ParseError
from .logic import Adj, And, CountExists, Eq, Exists, Forall, Formula, Not, Or, check_well_formed


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise ParseError(message, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}, found {self.peek() or 'end of input'!r}")
        self.pos += 1

    def variable(self) -> str:
        self.skip()
        start = self.pos
        t = self.text
        if self.pos < len(t) and "a" <= t[self.pos] <= "z":
            self.pos += 1
            while self.pos < len(t) and (t[self.pos].islower() or t[self.pos].isdigit() or t[self.pos] == "_"):
                if not t[self.pos].isascii():
                    break
                self.pos += 1
            return t[start:self.pos]
        self.error(f"expected a variable, found {self.peek() or 'end of input'!r}")

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a counting threshold")
        value = int(self.text[start:self.pos])
        if value < 1:
            self.pos = start
            self.error("counting threshold must be at least 1")
        return value

    def parse(self) -> Formula:
        f = self.disj()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return f

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(*parts)

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.pos += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(*parts)

    def unary(self) -> Formula:
        ch = self.peek()
        if ch == "!":
            self.pos += 1
            return Not(self.unary())
        if ch == "(":
            self.pos += 1
            f = self.disj()
            self.expect(")")
            return f
        if ch == "A":
            self.pos += 1
            var = self.variable()
            self.expect(".")
            return Forall(var, self.unary())
        if ch == "E":
            self.pos += 1
            if self.peek() == "^":
                self.pos += 1
                m = self.integer()
                var = self.variable()
                self.expect(".")
                return CountExists(m, var, self.unary())
            var = self.variable()
            self.expect(".")
            return Exists(var, self.unary())
        if ch and "a" <= ch <= "z":
            x = self.variable()
            op = self.peek()
            if op not in ("~", "="):
                self.error(f"expected '~' or '=', found {op or 'end of input'!r}")
            self.pos += 1
            y = self.variable()
            return Adj(x, y) if op == "~" else Eq(x, y)
        self.error(f"unexpected {ch or 'end of input'!r}")


def parse(text: str, strict: bool = False) -> Formula:
    """Parse formula text. ``strict`` also rejects re-quantifying a bound variable."""
    f = Parser(text).parse()
    check_well_formed(f, strict=strict)
    return f

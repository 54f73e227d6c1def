"""Tiny expression grammar for polynomial literals.

::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER | NUMBER "i" | "i" | NAME | "(" expr ")"
    NAME   := q | p | H | a | abar | sqrt2

Products are pointwise. ``H``, ``a`` and ``abar`` expand to
``(q^2 + p^2)/2``, ``(q + ip)/sqrt2`` and ``(q - ip)/sqrt2``. Decimal
literals are read as exact fractions. Division is only by constants.

Example: ``3*q^2*p - 2i*H + a*abar``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .exact import I, SQRT2, Exact
from .poly import PolyQP


class ParseError(ValueError):
    """Malformed polynomial expression."""


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)(?P<imag>i(?![A-Za-z_0-9]))?|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)

_NAMES = {
    "q": PolyQP.q,
    "p": PolyQP.p,
    "H": PolyQP.H,
    "a": PolyQP.a,
    "abar": PolyQP.abar,
    "i": lambda: PolyQP.const(I),
    "sqrt2": lambda: PolyQP.const(SQRT2),
}


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at position {pos}")
        if m.group("num") is not None:
            val = Exact(Fraction(m.group("num")))
            out.append(("num", val * I if m.group("imag") else val, m.start()))
        elif m.group("name") is not None:
            out.append(("name", m.group("name"), m.start()))
        else:
            out.append(("op", m.group("op"), m.start()))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} at position {pos}")

    def expr(self):
        out = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                if rhs.degree > 0:
                    raise ParseError(f"division by a non-constant at position {pos}")
                if rhs.degree < 0:
                    raise ParseError(f"division by zero at position {pos}")
                out = out / rhs[(0, 0)]
        return out

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not (isinstance(val, Exact) and val.is_rational and val.a.denominator == 1):
                raise ParseError(f"exponent must be a nonnegative integer at position {pos}")
            base = base ** int(val.a)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return PolyQP.const(val)
        if kind == "name":
            if val not in _NAMES:
                raise ParseError(f"unknown symbol {val!r} at position {pos}")
            return _NAMES[val]()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what} at position {pos}")


def parse_poly(text: str) -> PolyQP:
    """Parse a polynomial literal into an exact :class:`PolyQP`.

    Examples
    --------
    >>> str(parse_poly("a*abar"))
    '1/2*q^2 + 1/2*p^2'
    """
    if not text or not text.strip():
        raise ParseError("empty expression")
    parser = _Parser(text)
    out = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r} at position {pos}")
    return out

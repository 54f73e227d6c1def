"""Bivariate polynomials with exact coefficients.

:class:`PolyQP` is a polynomial in the real coordinates ``(q, p)``;
:class:`ABPoly` is the same object written in the ladder variables
``a = (q + ip)/sqrt(2)`` and ``abar = (q - ip)/sqrt(2)``. Conversion between
the two is an exact linear substitution.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .exact import I, SQRT2, Exact, exact


class MultiIndex(NamedTuple):
    """``(alpha_1, alpha_2)``; ``alpha_1`` acts on ``q`` and ``alpha_2`` on ``p``."""

    a1: int
    a2: int

    @property
    def order(self) -> int:
        return self.a1 + self.a2

    @property
    def factorial(self) -> int:
        return math.factorial(self.a1) * math.factorial(self.a2)


def _clean(c):
    c = exact(c)
    if isinstance(c, complex) and c.imag == 0:
        return c.real
    return c


class _BiPoly:
    """Finitely supported map ``(i, j) -> coefficient`` of ``x^i y^j``."""

    VARS = ("x", "y")
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        out = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative degree in monomial {(i, j)}")
            c = _clean(c)
            if c != 0:
                out[(int(i), int(j))] = c
        self._terms = out

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c=1):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c=1):
        return cls({(i, j): c})

    @classmethod
    def x(cls):
        return cls.monomial(1, 0)

    @classmethod
    def y(cls):
        return cls.monomial(0, 1)

    # -- access -----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __getitem__(self, key) -> object:
        return self._terms.get(tuple(key), 0)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def partial_degree(self, var: int) -> int:
        return max((m[var] for m in self._terms), default=-1)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Exact) for c in self._terms.values())

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, _BiPoly):
            raise TypeError(f"cannot mix {type(self).__name__} with {type(other).__name__}")
        return type(self).const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return type(self)(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, _BiPoly):
            other = exact(other)
            return type(self)({m: c * other for m, c in self._terms.items()})
        other = self._lift(other)
        out: dict = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return type(self)(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = exact(c)
        return type(self)({m: v / c for m, v in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = type(self).const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, _BiPoly):
            if type(other) is not type(self):
                return NotImplemented
            return (self - other)._terms == {}
        try:
            return (self - type(self).const(other))._terms == {}
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted((m, hash(c)) for m, c in self._terms.items())))

    # -- calculus -----------------------------------------------------
    def deriv(self, var: int, order: int = 1):
        """Partial derivative in variable ``var`` (0 or 1), ``order`` times."""
        out = {}
        for m, c in self._terms.items():
            e = m[var]
            if e < order:
                continue
            f = math.perm(e, order)
            new = (m[0] - order, m[1]) if var == 0 else (m[0], m[1] - order)
            out[new] = c * f
        return type(self)(out)

    def deriv_multi(self, i: int, j: int):
        return self.deriv(0, i).deriv(1, j) if (i or j) else self

    def map_coeffs(self, fn):
        return type(self)({m: fn(c) for m, c in self._terms.items()})

    def numeric(self):
        """Copy with plain complex coefficients."""
        return self.map_coeffs(complex)

    def evaluate(self, x, y):
        """Evaluate at arrays ``x, y`` with complex arithmetic."""
        x = np.asarray(x)
        y = np.asarray(y)
        out = np.zeros(np.broadcast(x, y).shape, complex)
        for (i, j), c in self._terms.items():
            out = out + complex(c) * x**i * y**j
        return out

    # -- text ---------------------------------------------------------------
    def _mono_str(self, i: int, j: int) -> str:
        parts = []
        for name, e in zip(self.VARS, (i, j)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        chunks = []
        for (i, j), c in self.items():
            mono = self._mono_str(i, j)
            neg = _is_negative(c)
            mag = -c if neg else c
            cs = _coeff_str(mag)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not chunks:
                chunks.append(f"-{body}" if neg else body)
            else:
                chunks.append(f" - {body}" if neg else f" + {body}")
        return "".join(chunks)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def _is_negative(c) -> bool:
    if isinstance(c, Exact):
        if c.real_sign:
            return c.real_sign < 0
        # pure Gaussian imaginary with a negative part
        if not (c.a or c.c):
            return (float(c.b) + math.sqrt(2) * float(c.d)) < 0
        return False
    c = complex(c)
    if c.imag == 0:
        return c.real < 0
    return c.real == 0 and c.imag < 0


def _coeff_str(c) -> str:
    if isinstance(c, Exact):
        return str(c)
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    return f"({c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i)"


class PolyQP(_BiPoly):
    """Complex polynomial in ``(q, p)``.

    Examples
    --------
    >>> from moyal.symbolic import poly_star
    >>> str(poly_star(PolyQP.q(), PolyQP.p()))
    'q*p + 1i'
    """

    VARS = ("q", "p")
    __slots__ = ()

    @classmethod
    def q(cls):
        return cls.x()

    @classmethod
    def p(cls):
        return cls.y()

    @classmethod
    def H(cls):
        return (cls.q() ** 2 + cls.p() ** 2) / 2

    @classmethod
    def a(cls):
        return (cls.q() + cls.p() * I) / SQRT2

    @classmethod
    def abar(cls):
        return (cls.q() - cls.p() * I) / SQRT2

    def conj(self) -> "PolyQP":
        """Complex conjugate function (``q, p`` are real)."""
        return self.map_coeffs(lambda c: c.conjugate())

    def to_ab(self) -> "ABPoly":
        return _substitute(self, ABPoly.q(), ABPoly.p(), ABPoly)


class ABPoly(_BiPoly):
    """Polynomial in ``a`` (first slot) and ``abar`` (second slot)."""

    VARS = ("a", "abar")
    __slots__ = ()

    @classmethod
    def a(cls):
        return cls.x()

    @classmethod
    def abar(cls):
        return cls.y()

    @classmethod
    def q(cls):
        return (cls.a() + cls.abar()) / SQRT2

    @classmethod
    def p(cls):
        return (cls.a() - cls.abar()) * (-I / SQRT2)

    def conj(self) -> "ABPoly":
        """Complex conjugate; swaps ``a`` and ``abar``."""
        return ABPoly({(j, i): c.conjugate() for (i, j), c in self._terms.items()})

    def to_qp(self) -> PolyQP:
        return _substitute(self, PolyQP.a(), PolyQP.abar(), PolyQP)


def _substitute(poly: _BiPoly, x_img, y_img, target):
    out = target()
    xs = [target.const(1)]
    ys = [target.const(1)]
    for i, j in poly:
        while len(xs) <= i:
            xs.append(xs[-1] * x_img)
        while len(ys) <= j:
            ys.append(ys[-1] * y_img)
    for (i, j), c in poly._terms.items():
        out = out + xs[i] * ys[j] * c
    return out


def derivative_hat(P: PolyQP, alpha) -> PolyQP:
    """``(d/dp)^alpha_1 (-d/dq)^alpha_2 P``."""
    a1, a2 = alpha
    if a1 < 0 or a2 < 0:
        raise ValueError("multi-index components must be nonnegative")
    out = P.deriv(1, a1).deriv(0, a2)
    return -out if a2 % 2 else out


def multi_indices(order: int) -> Iterable[MultiIndex]:
    for a1 in range(order, -1, -1):
        yield MultiIndex(a1, order - a1)


def as_fraction(x) -> Fraction:
    return exact(x).as_fraction()

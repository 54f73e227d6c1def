"""Exact numbers of the form ``r + s sqrt(2)`` with Gaussian-rational ``r, s``.

This field is closed under everything the ladder calculus needs: the
``1/sqrt(2)`` in ``a = (q + ip)/sqrt(2)``, the factor ``i`` of the Moyal
series and division by factorials. Identities such as ``a*abar - abar*a = 2``
therefore hold with ``==`` rather than within a tolerance.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction

_Q = Fraction


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _gauss_str(re: Fraction, im: Fraction) -> str:
    if im == 0:
        return _frac_str(re)
    ims = _frac_str(im) if im.denominator == 1 else f"({_frac_str(im)})"
    if re == 0:
        return f"{ims}i"
    sign = "-" if im < 0 else "+"
    ims = _frac_str(abs(im)) if im.denominator == 1 else f"({_frac_str(abs(im))})"
    return f"({_frac_str(re)}{sign}{ims}i)"


class Exact(numbers.Number):
    """``(a + b i) + (c + d i) sqrt(2)`` with rational ``a, b, c, d``."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a, self.b, self.c, self.d = _Q(a), _Q(b), _Q(c), _Q(d)

    # -- construction -------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "Exact | None":
        """Exact image of ``x`` or ``None`` for inexact inputs."""
        if isinstance(x, Exact):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return cls(x)
        if isinstance(x, bool):
            return cls(int(x))
        return None

    @classmethod
    def sqrt2(cls) -> "Exact":
        return cls(0, 0, 1, 0)

    @classmethod
    def i(cls) -> "Exact":
        return cls(0, 1)

    # -- predicates ---------------------------------------------------
    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    @property
    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = Exact.coerce(other)
        if o is None:
            return complex(self) + other if isinstance(other, numbers.Number) else NotImplemented
        return Exact(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Exact(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = Exact.coerce(other)
        if o is None:
            return complex(self) - other if isinstance(other, numbers.Number) else NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = Exact.coerce(other)
        if o is None:
            return complex(self) * other if isinstance(other, numbers.Number) else NotImplemented
        # Gaussian parts r = a+bi, s = c+di; (r1 + s1 v)(r2 + s2 v) with v^2 = 2
        r1, i1, s1, t1 = self.a, self.b, self.c, self.d
        r2, i2, s2, t2 = o.a, o.b, o.c, o.d
        rr = (r1 * r2 - i1 * i2, r1 * i2 + i1 * r2)
        ss = (s1 * s2 - t1 * t2, s1 * t2 + t1 * s2)
        rs = (r1 * s2 - i1 * t2 + s1 * r2 - t1 * i2, r1 * t2 + i1 * s2 + s1 * i2 + t1 * r2)
        return Exact(rr[0] + 2 * ss[0], rr[1] + 2 * ss[1], rs[0], rs[1])

    __rmul__ = __mul__

    def inverse(self) -> "Exact":
        if not self:
            raise ZeroDivisionError("division by exact zero")
        # x * xbar2 = r^2 - 2 s^2, where xbar2 flips the sign of sqrt(2)
        other = Exact(self.a, self.b, -self.c, -self.d)
        n = self * other  # Gaussian rational
        mod = n.a * n.a + n.b * n.b
        return other * Exact(n.a / mod, -n.b / mod)

    def __truediv__(self, other):
        o = Exact.coerce(other)
        if o is None:
            return complex(self) / other if isinstance(other, numbers.Number) else NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = Exact.coerce(other)
        if o is None:
            return other / complex(self)
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return self.inverse() ** (-n)
        out, base = Exact(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Exact":
        return Exact(self.a, -self.b, self.c, -self.d)

    # -- comparison and conversion -------------------------------------
    def __eq__(self, other):
        o = Exact.coerce(other)
        if o is None:
            if isinstance(other, numbers.Number):
                return complex(self) == other
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.d))

    def __complex__(self):
        r2 = math.sqrt(2.0)
        return complex(float(self.a) + r2 * float(self.c), float(self.b) + r2 * float(self.d))

    def __float__(self):
        if self.b or self.d:
            raise TypeError(f"{self} is not real")
        return float(self.a) + math.sqrt(2.0) * float(self.c)

    @property
    def real_sign(self) -> int:
        """Sign of a real value; 0 for values with an imaginary part."""
        if self.b or self.d:
            return 0
        v = float(self)
        return (v > 0) - (v < 0)

    def __repr__(self):
        return f"Exact({self})"

    def __str__(self):
        rat = _gauss_str(self.a, self.b)
        if not (self.c or self.d):
            return rat
        irr = _gauss_str(self.c, self.d)
        irr = "sqrt2" if irr == "1" else f"{irr}*sqrt2"
        return irr if not (self.a or self.b) else f"({rat} + {irr})"


SQRT2 = Exact.sqrt2()
I = Exact.i()
ONE = Exact(1)
ZERO = Exact(0)


def exact(x):
    """Promote ints and fractions to :class:`Exact`; leave floats alone."""
    e = Exact.coerce(x)
    return x if e is None else e

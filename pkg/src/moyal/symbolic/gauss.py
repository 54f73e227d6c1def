"""Polynomials times the Gaussian ``f_0 = 2 exp(-(q^2 + p^2)/2)``.

A :class:`GaussPoly` holds ``sqrt(scale) * G(a, abar) * f_0`` where ``G`` is an
exact :class:`ABPoly` and ``scale`` is a positive rational kept squarefree
and odd, so two elements are equal exactly when their scales and
polynomials agree. Normalized basis elements ``f_mn`` need the square root
of ``2^(m+n) m! n!``; the factor of two folds into the coefficients and the
odd squarefree remainder lives in ``scale``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .exact import SQRT2, Exact
from .poly import ABPoly, PolyQP


def _square_split(n: int) -> tuple[int, int]:
    """Write ``n = r^2 * s`` with ``s`` squarefree; returns ``(r, s)``."""
    r, s, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        r *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return r, s * n


def _canonical(poly: ABPoly, scale: Fraction) -> tuple[ABPoly, int]:
    if scale <= 0:
        raise ValueError("GaussPoly scale must be positive")
    # sqrt(num/den) = sqrt(num*den)/den = (r/den) sqrt(s)
    r, s = _square_split(scale.numerator * scale.denominator)
    factor = Exact(Fraction(r, scale.denominator))
    if s % 2 == 0:
        s //= 2
        factor = factor * SQRT2
    return poly * factor, s


def _g_poly(m: int, n: int) -> ABPoly:
    # unnormalized basis polynomial: f_mn = (2^(m+n) m! n!)^(-1/2) g_mn f_0 with
    # g_mn = sum_k (-1)^k C(m,k) C(n,k) k! 2^(m+n-k) abar^(m-k) a^(n-k)
    terms = {}
    for k in range(min(m, n) + 1):
        c = math.comb(m, k) * math.comb(n, k) * math.factorial(k) * 2 ** (m + n - k)
        terms[(n - k, m - k)] = -c if k % 2 else c
    return ABPoly(terms)


class GaussPoly:
    """Exact element ``sqrt(scale) G(a, abar) f_0`` of the Gaussian span.

    Parameters
    ----------
    poly : ABPoly or PolyQP
        Polynomial factor; a :class:`PolyQP` is converted exactly.
    scale : int or Fraction
        Positive rational under the square root.
    """

    __slots__ = ("poly", "scale")

    def __init__(self, poly, scale=1):
        if isinstance(poly, PolyQP):
            poly = poly.to_ab()
        if not isinstance(poly, ABPoly):
            poly = ABPoly.const(poly)
        p, s = _canonical(poly, Fraction(scale))
        object.__setattr__(self, "poly", p)
        object.__setattr__(self, "scale", s)

    def __setattr__(self, name, value):
        raise AttributeError("GaussPoly is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def vacuum(cls) -> "GaussPoly":
        """``f_0`` itself."""
        return cls(ABPoly.const(1))

    @classmethod
    def basis(cls, m: int, n: int) -> "GaussPoly":
        """Normalized ``f_mn``."""
        if m < 0 or n < 0:
            raise ValueError("basis indices must be nonnegative")
        return cls(_g_poly(m, n), Fraction(1, 2 ** (m + n) * math.factorial(m) * math.factorial(n)))

    # -- arithmetic -----------------------------------------------------
    def _with(self, poly: ABPoly) -> "GaussPoly":
        out = object.__new__(GaussPoly)
        object.__setattr__(out, "poly", poly)
        object.__setattr__(out, "scale", self.scale)
        return out

    def _align(self, other: "GaussPoly") -> ABPoly:
        if not isinstance(other, GaussPoly):
            raise TypeError(f"expected GaussPoly, got {type(other).__name__}")
        if other.scale != self.scale:
            if not other.poly:
                return other.poly
            if not self.poly:
                return None
            raise ValueError("GaussPolys with different irrational scales cannot be added exactly")
        return other.poly

    def __add__(self, other):
        p = self._align(other)
        if p is None:
            return other
        return self._with(self.poly + p)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._with(-self.poly)

    def __mul__(self, c):
        """Scale by a number, or multiply pointwise by a polynomial."""
        if isinstance(c, PolyQP):
            c = c.to_ab()
        return self._with(self.poly * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._with(self.poly / c)

    def __eq__(self, other):
        if not isinstance(other, GaussPoly):
            return NotImplemented
        if not self.poly and not other.poly:
            return True
        return self.scale == other.scale and self.poly == other.poly

    def __hash__(self):
        return hash((self.scale, self.poly))

    def __repr__(self):
        s = "" if self.scale == 1 else f"sqrt({self.scale}) * "
        return f"GaussPoly({s}({self.poly}) * f0)"

    @property
    def is_zero(self) -> bool:
        return not self.poly

    # -- calculus -------------------------------------------------------
    def d_a(self) -> "GaussPoly":
        """``d/da`` of the full element (uses ``d f_0/da = -abar f_0``)."""
        return self._with(self.poly.deriv(0) - self.poly * ABPoly.abar())

    def d_abar(self) -> "GaussPoly":
        """``d/dabar`` of the full element (uses ``d f_0/dabar = -a f_0``)."""
        return self._with(self.poly.deriv(1) - self.poly * ABPoly.a())

    def d_multi(self, i: int, j: int) -> "GaussPoly":
        """``(d/da)^i (d/dabar)^j``."""
        out = self
        for _ in range(i):
            out = out.d_a()
        for _ in range(j):
            out = out.d_abar()
        return out

    def d_q(self) -> "GaussPoly":
        return (self.d_a() + self.d_abar()) / SQRT2

    def d_p(self) -> "GaussPoly":
        return (self.d_a() - self.d_abar()) * (Exact(0, 1) / SQRT2)

    def hermite_operator(self) -> "GaussPoly":
        """``B = u^2 - Laplacian``, with ``u^2 = 2 a abar`` and ``Laplacian = 2 d_a d_abar``."""
        return self * (2 * ABPoly.monomial(1, 1)) - self.d_a().d_abar() * 2

    def conj(self) -> "GaussPoly":
        return self._with(self.poly.conj())

    # -- basis expansion ------------------------------------------------
    def g_coefficients(self) -> dict[tuple[int, int], Exact]:
        """Exact ``X_mn`` with ``self = sqrt(scale) sum X_mn g_mn f_0``.

        The leading monomial of ``g_mn`` is ``2^(m+n) abar^m a^n``, so the
        expansion is a triangular back-substitution from the top degree down.
        """
        rest = dict(self.poly.terms)
        out = {}
        while rest:
            (i, j) = max(rest, key=lambda mono: (mono[0] + mono[1], mono))
            m, n = j, i  # abar^m a^n
            x = rest[(i, j)] / Exact(2 ** (m + n))
            out[(m, n)] = x
            for (ti, tj), c in _g_poly(m, n).terms.items():
                v = rest.get((ti, tj), 0) - x * c
                if v == 0:
                    rest.pop((ti, tj), None)
                else:
                    rest[(ti, tj)] = v
        return out

    @classmethod
    def from_g_coefficients(cls, coeffs: dict, scale=1) -> "GaussPoly":
        poly = ABPoly()
        for (m, n), x in coeffs.items():
            poly = poly + _g_poly(m, n) * x
        return cls(poly, scale)

    def basis_coefficients(self) -> dict[tuple[int, int], complex]:
        """Numerical coefficients ``c_mn`` in the normalized ``f_mn`` basis."""
        root = math.sqrt(self.scale)
        return {
            (m, n): complex(x) * root * math.sqrt(2.0 ** (m + n) * math.factorial(m) * math.factorial(n))
            for (m, n), x in self.g_coefficients().items()
        }

    def max_index(self) -> int:
        return max((max(k) for k in self.g_coefficients()), default=-1)

    def to_coeff_matrix(self, order: int | None = None):
        from ..seqspace import CoeffMatrix

        coeffs = self.basis_coefficients()
        if order is None:
            order = 1 + max((max(k) for k in coeffs), default=0)
        e = np.zeros((order, order), complex)
        for (m, n), c in coeffs.items():
            if m >= order or n >= order:
                raise ValueError(f"order {order} too small for index {(m, n)}")
            e[m, n] = c
        return CoeffMatrix(e)

    def evaluate(self, grid):
        """Sample on a :class:`~moyal.phasegrid.PhaseGrid`."""
        from ..phasegrid import GridFunction

        Q, P = grid.mesh()
        A = (Q + 1j * P) / math.sqrt(2.0)
        vals = self.poly.evaluate(A, A.conj()) * 2.0 * np.exp(-0.5 * (Q * Q + P * P))
        return GridFunction(grid, math.sqrt(self.scale) * vals)

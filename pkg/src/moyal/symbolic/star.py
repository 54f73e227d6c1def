"""Star products by series expansion and ladder calculus.

For polynomials the Moyal series

    P * T = sum_alpha i^|alpha| / alpha! (d^alpha P)(dhat^alpha T),

with ``d = (d_q, d_p)`` and ``dhat = (d_p, -d_q)``, terminates and is
evaluated exactly. In ladder variables the same product reads

    P * T = sum_{j,k} (-1)^k / (j! k!) (d_a^j d_abar^k P)(d_abar^j d_a^k T),

which is what acts on :class:`GaussPoly` elements.
"""

from __future__ import annotations

import math
from functools import singledispatch

import numpy as np

from ..phasegrid import GridFunction
from ..seqspace import CoeffMatrix
from .exact import I, SQRT2, Exact
from .gauss import GaussPoly
from .poly import ABPoly, MultiIndex, PolyQP, derivative_hat, multi_indices

_I_POW = [Exact(1), I, Exact(-1), -I]


def _moyal_term(P: PolyQP, T: PolyQP, alpha: MultiIndex) -> PolyQP:
    dP = P.deriv_multi(alpha.a1, alpha.a2)
    if not dP:
        return PolyQP()
    return dP * derivative_hat(T, alpha) * (_I_POW[alpha.order % 4] / alpha.factorial)


def poly_star(P: PolyQP, Q: PolyQP) -> PolyQP:
    """Exact twisted product of two polynomials.

    The series is summed up to order ``min(deg P, deg Q)``; the next order is
    evaluated as well and must vanish.
    """
    cap = min(P.degree, Q.degree)
    out = PolyQP()
    if cap < 0:
        return out
    for order in range(cap + 1):
        for alpha in multi_indices(order):
            out = out + _moyal_term(P, Q, alpha)
    for alpha in multi_indices(cap + 1):
        if _moyal_term(P, Q, alpha):
            raise AssertionError("Moyal series did not terminate at the degree cap")
    return out


def moyal_bracket(P: PolyQP, Q: PolyQP) -> PolyQP:
    """``P * Q - Q * P`` from the odd part of the series.

    ``2i sum_r sum_{|alpha| = 2r+1} (-1)^r / alpha! (d^alpha P)(dhat^alpha Q)``.
    """
    cap = min(P.degree, Q.degree)
    out = PolyQP()
    for order in range(1, cap + 1, 2):
        sign = -1 if (order // 2) % 2 else 1
        for alpha in multi_indices(order):
            dP = P.deriv_multi(alpha.a1, alpha.a2)
            if dP:
                out = out + dP * derivative_hat(Q, alpha) * Exact(sign, 0) / alpha.factorial
    return out * (2 * I)


def poisson_bracket(P: PolyQP, Q: PolyQP) -> PolyQP:
    """``dP/dq dQ/dp - dP/dp dQ/dq``."""
    return P.deriv(0) * Q.deriv(1) - P.deriv(1) * Q.deriv(0)


def _ab(P) -> ABPoly:
    if isinstance(P, ABPoly):
        return P
    if isinstance(P, PolyQP):
        return P.to_ab()
    return ABPoly.const(P)


def _ladder_series(P: ABPoly, F: GaussPoly, left: bool) -> GaussPoly:
    out = F * 0
    da, db = P.partial_degree(0), P.partial_degree(1)
    for j in range(db + 1 if not left else da + 1):
        for k in range(da + 1 if not left else db + 1):
            coeff = Exact(-1 if k % 2 else 1) / (math.factorial(j) * math.factorial(k))
            if left:
                dP = P.deriv_multi(j, k)
                if dP:
                    out = out + F.d_multi(k, j) * dP * coeff
            else:
                dP = P.deriv_multi(k, j)
                if dP:
                    out = out + F.d_multi(j, k) * dP * coeff
    return out


# -- grid spectral route ---------------------------------------------------


def _wavenumbers(grid) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(grid.size, d=grid.spacing)


def _spectral_deriv(fhat: np.ndarray, grid, iq: int, ip: int) -> np.ndarray:
    k = _wavenumbers(grid)
    M = grid.size
    kq = (1j * k) ** iq
    kp = (1j * k) ** ip
    # the Nyquist mode has no consistent sign for odd orders
    if iq % 2:
        kq[M // 2] = 0
    if ip % 2:
        kp[M // 2] = 0
    return np.fft.ifft2(fhat * kq[:, None] * kp[None, :])


def _grid_series(P: PolyQP, f: GridFunction, left: bool) -> GridFunction:
    grid = f.grid
    Q, Pm = grid.mesh()
    fhat = np.fft.fft2(f.values)
    out = np.zeros_like(f.values)
    for order in range(P.degree + 1):
        for alpha in multi_indices(order):
            # left: (d^alpha P)(dhat^alpha f);  right: (d^alpha f)(dhat^alpha P)
            if left:
                dP = P.deriv_multi(alpha.a1, alpha.a2)
                df = _spectral_deriv(fhat, grid, alpha.a2, alpha.a1) * (-1) ** alpha.a2
            else:
                dP = derivative_hat(P, alpha)
                df = _spectral_deriv(fhat, grid, alpha.a1, alpha.a2)
            if not dP:
                continue
            c = complex(_I_POW[alpha.order % 4]) / alpha.factorial
            out += c * dP.evaluate(Q, Pm) * df
    return GridFunction(grid, out)


# -- coefficient-space route ----------------------------------------------


def ladder_matrix(order: int) -> np.ndarray:
    """``Lambda`` with ``Lambda[m-1, m] = sqrt(2m)``; ``a *`` acts as ``Lambda c``."""
    L = np.zeros((order, order))
    m = np.arange(1, order)
    L[m - 1, m] = np.sqrt(2.0 * m)
    return L


def poly_matrix(P: PolyQP, order: int) -> np.ndarray:
    """Coefficient matrix ``Pi`` of a polynomial, truncated to ``order``.

    ``P * f`` has coefficients ``Pi c`` and ``f * P`` has ``c Pi``. Monomials
    ``q^i p^j`` are the symmetrized products of ``X_q = (Lambda + Lambda^T)/sqrt2``
    and ``X_p = -i (Lambda - Lambda^T)/sqrt2``; the working size is padded by the
    degree so truncation never reaches the returned block.
    """
    deg = max(P.degree, 0)
    n = order + deg + 1
    Lam = ladder_matrix(n)
    Xq = (Lam + Lam.T) / math.sqrt(2.0)
    Xp = -1j * (Lam - Lam.T) / math.sqrt(2.0)
    # W[i][j]: sum of all words with i copies of Xq and j copies of Xp
    W = [[None] * (deg + 1) for _ in range(deg + 1)]
    W[0][0] = np.eye(n, dtype=complex)
    for tot in range(1, deg + 1):
        for i in range(tot + 1):
            j = tot - i
            acc = np.zeros((n, n), complex)
            if i:
                acc += Xq @ W[i - 1][j]
            if j:
                acc += Xp @ W[i][j - 1]
            W[i][j] = acc
    out = np.zeros((n, n), complex)
    for (i, j), c in P.terms.items():
        out += complex(c) * W[i][j] * (math.factorial(i) * math.factorial(j) / math.factorial(i + j))
    return out[:order, :order]


def _matrix_action(P: PolyQP, c: CoeffMatrix, left: bool) -> CoeffMatrix:
    # result grows by deg P in each direction; keep it so nothing is lost
    deg = max(P.degree, 0)
    big = c.resized(c.order + deg).entries
    Pi = poly_matrix(P, c.order + deg)
    return CoeffMatrix(Pi @ big if left else big @ Pi)


# -- public dispatchers ---------------------------------------------------


@singledispatch
def _left(f, P):
    raise TypeError(f"weyl_left does not support {type(f).__name__}")


@_left.register
def _(f: PolyQP, P):
    return poly_star(P, f)


@_left.register
def _(f: GaussPoly, P):
    return _ladder_series(_ab(P), f, left=True)


@_left.register
def _(f: GridFunction, P):
    return _grid_series(P, f, left=True)


@_left.register
def _(f: CoeffMatrix, P):
    return _matrix_action(P, f, left=True)


@singledispatch
def _right(f, P):
    raise TypeError(f"weyl_right does not support {type(f).__name__}")


@_right.register
def _(f: PolyQP, P):
    return poly_star(f, P)


@_right.register
def _(f: GaussPoly, P):
    return _ladder_series(_ab(P), f, left=False)


@_right.register
def _(f: GridFunction, P):
    return _grid_series(P, f, left=False)


@_right.register
def _(f: CoeffMatrix, P):
    return _matrix_action(P, f, left=False)


def weyl_left(P: PolyQP, f):
    """Left twisted multiplication ``P * f``.

    Parameters
    ----------
    P : PolyQP
    f : PolyQP, GaussPoly, GridFunction or CoeffMatrix
        Exact for the first two. Grid functions are differentiated
        spectrally; coefficient matrices use the ladder representation and
        come back enlarged by ``deg P``.

    Examples
    --------
    >>> weyl_left(PolyQP.H(), GaussPoly.basis(2, 1)) == GaussPoly.basis(2, 1) * 5
    True
    """
    return _left(f, P)


def weyl_right(f, P: PolyQP):
    """Right twisted multiplication ``f * P``; see :func:`weyl_left`."""
    return _right(f, P)


def gauss_star(x: GaussPoly, y: GaussPoly) -> GaussPoly:
    """Exact twisted product in the Gaussian span.

    Both factors are expanded in the unnormalized basis ``g_mn``, which
    multiplies as ``g_mn * g_kl = delta_nk 2^n n! g_ml``.
    """
    X = x.g_coefficients()
    Y = y.g_coefficients()
    rows: dict[int, list] = {}
    for (k, l), v in Y.items():
        rows.setdefault(k, []).append((l, v))
    acc: dict = {}
    for (m, n), u in X.items():
        w = u * Exact(2**n * math.factorial(n))
        for l, v in rows.get(n, ()):
            acc[(m, l)] = acc.get((m, l), 0) + w * v
    return GaussPoly.from_g_coefficients(acc, x.scale * y.scale)

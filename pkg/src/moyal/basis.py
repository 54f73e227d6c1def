"""Twisted Hermite basis ``f_mn`` and the Hermite tensor basis.

For ``m >= n``::

    f_mn = 2 (-1)^n sqrt(n!/m!) (q - i p)^(m-n) L_n^(m-n)(rho^2) exp(-rho^2/2)

and ``f_mn = conj(f_nm)`` otherwise. The family is orthonormal for
``<f|g> = 1/2 int conj(f) g du`` and forms matrix units for the twisted
product: ``f_mn * f_kl = delta_nk f_ml``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .phasegrid import GridFunction, GridMismatchError, PhaseGrid
from .seqspace import CoeffMatrix
from .specfun import hermite_fn, jacobi_at_zero_exact, laguerre, laguerre_sequence, log_factorial_ratio


class BasisWarning(UserWarning):
    """Grid too small to contain the requested basis functions."""


class BasisIndex(NamedTuple):
    m: int
    n: int


def _index(idx) -> BasisIndex:
    m, n = idx
    if int(m) != m or int(n) != n or m < 0 or n < 0:
        raise ValueError(f"basis indices must be nonnegative integers, got {idx}")
    return BasisIndex(int(m), int(n))


def containment_extent(max_order: int) -> float:
    """Smallest extent ``L`` satisfying the envelope rule for order ``M_b``."""
    return 2.0 * math.sqrt(2 * max_order + 1) + 4.0


@dataclass(frozen=True)
class BasisSpec:
    """Truncation order ``M_b`` (indices ``0..M_b-1``) on a grid.

    A :class:`BasisWarning` is issued when ``L < 2 sqrt(2 M_b + 1) + 4``. The
    rule is conservative: projecting functions that live in a low-order span
    stays accurate well below it, so it is advisory rather than fatal.
    """

    max_order: int
    grid: PhaseGrid

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be positive")
        need = containment_extent(self.max_order)
        if self.grid.extent < need:
            warnings.warn(
                f"extent L={self.grid.extent} is below the containment bound {need:.3f} "
                f"for order {self.max_order}; high-order basis functions are clipped",
                BasisWarning,
                stacklevel=3,
            )


def _polar(grid: PhaseGrid):
    Q, P = grid.mesh()
    r2 = Q * Q + P * P
    rho = np.sqrt(r2)
    with np.errstate(invalid="ignore", divide="ignore"):
        phase = np.where(rho > 0, (Q - 1j * P) / rho, 1.0)  # exp(-i alpha), alpha=0 at origin
        log_rho = np.where(rho > 0, np.log(np.where(rho > 0, rho, 1.0)), -np.inf)
    return r2, log_rho, phase


def _radial(m: int, n: int, r2, log_rho, lag) -> np.ndarray:
    # 2 (-1)^n sqrt(n!/m!) rho^(m-n) exp(-rho^2/2) L_n^(m-n)(rho^2), m >= n
    k = m - n
    with np.errstate(invalid="ignore"):
        expo = 0.5 * log_factorial_ratio(m, n) - 0.5 * r2
        if k:
            expo = expo + k * log_rho
    sign = -2.0 if n % 2 else 2.0
    return sign * np.exp(expo) * lag


def basis_fn(idx, grid: PhaseGrid) -> GridFunction:
    """Samples of ``f_mn`` on ``grid``.

    Examples
    --------
    >>> g = PhaseGrid(8.0, 64)
    >>> basis_fn((1, 1), g).at((0.0, 0.0))
    (-2+0j)
    """
    m, n = _index(idx)
    hi, lo = max(m, n), min(m, n)
    r2, log_rho, phase = _polar(grid)
    vals = _radial(hi, lo, r2, log_rho, laguerre(lo, hi - lo, r2)) * phase ** (hi - lo)
    return GridFunction(grid, vals if m >= n else vals.conj())


def iter_basis(max_order: int, grid: PhaseGrid) -> Iterator[tuple[BasisIndex, np.ndarray]]:
    """Yield ``((m, n), samples)`` for all ``m >= n`` with ``m, n < max_order``.

    One Laguerre recurrence runs per diagonal ``k = m - n``; the ``m < n``
    partners are the complex conjugates and are left to the caller.
    """
    r2, log_rho, phase = _polar(grid)
    ang = np.ones_like(phase)
    for k in range(max_order):
        for n, lag in enumerate(laguerre_sequence(max_order - 1 - k, k, r2)):
            yield BasisIndex(n + k, n), _radial(n + k, n, r2, log_rho, lag) * ang
        ang = ang * phase


def analyze(f: GridFunction, spec: BasisSpec) -> CoeffMatrix:
    """Coefficients ``c_mn = <f_mn | f>`` for ``m, n < M_b``."""
    if f.grid != spec.grid:
        raise GridMismatchError(f"function grid {f.grid} differs from basis grid {spec.grid}")
    Mb = spec.max_order
    c = np.zeros((Mb, Mb), complex)
    w = 0.5 * spec.grid.weight
    flat = f.values.ravel()
    for (m, n), vals in iter_basis(Mb, spec.grid):
        v = vals.ravel()
        c[m, n] = w * np.vdot(v, flat)
        if m != n:
            # f_nm = conj(f_mn), so <f_nm|f> pairs f with f_mn unconjugated
            c[n, m] = w * np.dot(v, flat)
    return CoeffMatrix(c)


def synthesize(c: CoeffMatrix, grid: PhaseGrid) -> GridFunction:
    """``sum_mn c_mn f_mn`` sampled on ``grid``."""
    e = c.entries
    out = np.zeros((grid.size, grid.size), complex)
    for (m, n), vals in iter_basis(c.order, grid):
        if e[m, n]:
            out += e[m, n] * vals
        if m != n and e[n, m]:
            out += e[n, m] * vals.conj()
    return GridFunction(grid, out)


def hermite_tensor(k: int, l: int, grid: PhaseGrid) -> GridFunction:
    """Samples of ``h_k(q) h_l(p)``."""
    if k < 0 or l < 0:
        raise ValueError("Hermite degrees must be nonnegative")
    x = grid.nodes
    return GridFunction(grid, np.outer(hermite_fn(k, x), hermite_fn(l, x)))


def basis_change_coeff(m: int, n: int, k: int, l: int) -> complex:
    """Coefficient ``c_mn^kl`` in ``f_mn = sum_{k+l=m+n} c_mn^kl h_k (x) h_l``.

    ``c = 2^((m-n)/2) i^(2m+l) C(m+n, l)^(1/2) C(m+n, m)^(-1/2) P_m^(l-m, k-m)(0)``.
    This phase convention agrees with direct projection onto the tensor
    basis, so no correction is applied.
    """
    for v in (m, n, k, l):
        if int(v) != v or v < 0:
            raise ValueError("basis-change indices must be nonnegative integers")
    if m + n != k + l:
        raise ValueError(f"index mismatch: m+n={m + n} but k+l={k + l}")
    N = m + n
    mag = (
        2.0 ** ((m - n) / 2)
        * math.sqrt(math.comb(N, l) / math.comb(N, m))
        * float(jacobi_at_zero_exact(m, l - m, k - m))
    )
    return mag * 1j ** ((2 * m + l) % 4)

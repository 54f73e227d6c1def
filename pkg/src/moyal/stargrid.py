"""Twisted product and twisted convolution of grid functions.

Three independent ways of computing ``f * g`` are provided:

``switch``
    ``f * g = (Ff) o g``: one symplectic transform followed by a twisted
    convolution. This is the default.
``direct``
    The correlation form ``(f * g)(u) = int F~f(w - u) g(w) exp(i w'Ju) dw``,
    swept along the other axis so it shares no summation code with ``switch``.
``kernel``
    Composition of Weyl operator kernels. It never wraps samples around the
    torus and costs a handful of dense matrix products, which makes it the
    path of choice for large sweeps.

The twisted convolution itself is the rectangle-rule sum over all node
pairs with periodic wraparound of ``u - t``. The ``fft`` method evaluates
exactly that sum with one FFT per output row; ``loop`` is the plain
quadruple sum, kept as a reference for small grids.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .phasegrid import (
    GridFunction,
    PhaseGrid,
    PhasePoint,
    fourier_symplectic,
    fourier_symplectic_tilde,
    modulate,
    translate,
)

PATHS = ("switch", "direct", "kernel")


def _pair(f: GridFunction, g: GridFunction) -> PhaseGrid:
    f._check(g)
    return f.grid


def _convolve_loop(F: np.ndarray, G: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    M, x = grid.size, grid.nodes
    idx = (np.arange(M)[:, None] - np.arange(M)[None, :] + M // 2) % M  # node of u - t
    phase_p = np.exp(1j * np.outer(x, x))  # exp(i u_p t_q), indexed [b, c]
    out = np.empty((M, M), complex)
    for a in range(M):
        for b in range(M):
            shifted = F[np.ix_(idx[a], idx[b])]  # f(u - t) over t = (c, d)
            kern = phase_p[b][:, None] * np.exp(-1j * x[a] * x)[None, :]
            out[a, b] = np.sum(shifted * G * kern)
    return out


def _convolve_fft(F: np.ndarray, G: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    # For a fixed output row a and source row c the sum over d is a cyclic
    # convolution along p; the remaining sum over c carries exp(i x_b x_c).
    M, x = grid.size, grid.nodes
    half = M // 2
    Fh = np.fft.fft(np.roll(F, -half, axis=1), axis=1)
    E = np.exp(1j * np.outer(x, x))  # [c, b]
    rows = np.arange(M)
    out = np.empty((M, M), complex)
    for a in range(M):
        Hh = np.fft.fft(G * np.exp(-1j * x[a] * x)[None, :], axis=1)
        T = np.fft.ifft(Fh[(a - rows + half) % M] * Hh, axis=1)
        out[a] = np.einsum("cb,cb->b", E, T)
    return out


def twisted_convolution(f: GridFunction, g: GridFunction, method: str = "fft") -> GridFunction:
    """Twisted convolution ``(f o g)(u) = int f(u - t) g(t) exp(-i u'Jt) dt``.

    Parameters
    ----------
    f, g : GridFunction
        Operands on the same grid.
    method : {"fft", "loop"}
        ``fft`` costs ``O(M^3 log M)``; ``loop`` is the literal ``O(M^4)``
        sum. Both evaluate the same quadrature.
    """
    grid = _pair(f, g)
    if method == "fft":
        vals = _convolve_fft(f.values, g.values, grid)
    elif method == "loop":
        vals = _convolve_loop(f.values, g.values, grid)
    else:
        raise ValueError(f"unknown convolution method {method!r}")
    return GridFunction(grid, vals * grid.weight)


def _product_direct(f: GridFunction, g: GridFunction) -> np.ndarray:
    grid = f.grid
    M, x = grid.size, grid.nodes
    half = M // 2
    Ft = fourier_symplectic_tilde(f).values
    # column-wise correlation along q: corr[a] = sum_c X[c - a] Y[c]
    Xh = M * np.fft.ifft(np.roll(Ft, -half, axis=0), axis=0)
    E = np.exp(-1j * np.outer(x, x))  # exp(-i w_p u_q), indexed [a, d]
    G = g.values
    cols = np.arange(M)
    out = np.empty((M, M), complex)
    for b in range(M):
        Yh = np.fft.fft(G * np.exp(1j * x * x[b])[:, None], axis=0)
        corr = np.fft.ifft(Xh[:, (cols - b + half) % M] * Yh, axis=0)
        out[:, b] = np.einsum("ad,ad->a", E, corr)
    return out * grid.weight


def twisted_product(f: GridFunction, g: GridFunction, path: str = "switch") -> GridFunction:
    """Twisted (Moyal) product ``f * g``.

    Parameters
    ----------
    f, g : GridFunction
    path : {"switch", "direct", "kernel"}
        Computation route, see the module docstring.

    Examples
    --------
    >>> grid = PhaseGrid(8.0, 128)
    >>> from moyal.basis import basis_fn
    >>> f0 = basis_fn((0, 0), grid)
    >>> float(abs(twisted_product(f0, f0).values - f0.values).max()) < 1e-6
    True
    """
    grid = _pair(f, g)
    if path == "switch":
        return twisted_convolution(fourier_symplectic(f), g)
    if path == "direct":
        return GridFunction(grid, _product_direct(f, g))
    if path == "kernel":
        plan = kernel_plan(grid)
        K = plan.compose(plan.forward(f.values), plan.forward(g.values)[None])
        return GridFunction(grid, plan.inverse(K)[0])
    raise ValueError(f"unknown product path {path!r}; expected one of {PATHS}")


def twisted_translate(f: GridFunction, v: PhasePoint) -> GridFunction:
    """``eps_v tau_v f``: translate by ``v`` then modulate by ``v``."""
    return modulate(translate(f, v), v)


class WeylKernelPlan:
    """Precomputed tables for the Weyl-kernel route on one grid.

    A symbol ``f(q, p)`` maps to the kernel
    ``K(q + s, q - s) = (4 pi)^-1 int f(q, p) exp(i p s) dp`` sampled at
    ``s = k h`` for ``-M/2 <= k < M/2``. Kernel coordinates live on a
    ``2M``-point axis over ``[-2L, 2L)``; only nodes whose two indices share a
    parity are ever occupied, so kernels are stored as two ``M x M`` parity
    blocks. Operator composition is then a matrix product per block with
    step ``2h``, and the symbol is recovered by
    ``f(q, p) = 2 int K(q + s, q - s) exp(-i p s) ds``.
    """

    def __init__(self, grid: PhaseGrid):
        M, h, x = grid.size, grid.spacing, grid.nodes
        if math.pi * M <= 2 * grid.extent**2:
            raise ValueError(
                f"kernel path needs M > 2 L^2 / pi to resolve the kernel (L={grid.extent}, M={M})"
            )
        self.grid = grid
        self.M = M
        self.h = h
        s = (np.arange(M) - M // 2) * h
        self._fwd = np.exp(1j * np.outer(x, s)) * (h / (4 * math.pi))  # [l, k]
        self._inv = np.exp(-1j * np.outer(s, x)) * (2 * h)  # [k, l]
        j = np.arange(M)[:, None]
        kk = np.arange(M)[None, :]
        i1 = j + kk
        i2 = j - kk + M
        self._flat = ((i1 % 2) * M * M + (i1 // 2) * M + i2 // 2).ravel()

    def forward(self, values: np.ndarray) -> np.ndarray:
        """Symbol samples ``(..., M, M)`` to parity blocks ``(..., 2, M, M)``."""
        M = self.M
        lead = values.shape[:-2]
        T = (values.reshape(-1, M) @ self._fwd).reshape(-1, M * M)
        out = np.zeros((T.shape[0], 2 * M * M), complex)
        out[:, self._flat] = T
        return out.reshape(*lead, 2, M, M)

    def compose(self, left: np.ndarray, rights: np.ndarray) -> np.ndarray:
        """Compose one kernel ``(2, M, M)`` with a batch ``(n, 2, M, M)``."""
        M = self.M
        n = rights.shape[0]
        out = np.empty((n, 2, M, M), complex)
        for par in (0, 1):
            stacked = rights[:, par].transpose(1, 0, 2).reshape(M, n * M)
            prod = (left[par] @ stacked) * (2 * self.h)
            out[:, par] = prod.reshape(M, n, M).transpose(1, 0, 2)
        return out

    def inverse(self, kernels: np.ndarray) -> np.ndarray:
        """Parity blocks ``(n, 2, M, M)`` back to symbol samples ``(n, M, M)``."""
        M = self.M
        n = kernels.shape[0]
        G = kernels.reshape(n, 2 * M * M)[:, self._flat]
        return (G.reshape(n * M, M) @ self._inv).reshape(n, M, M)


@functools.lru_cache(maxsize=4)
def kernel_plan(grid: PhaseGrid) -> WeylKernelPlan:
    return WeylKernelPlan(grid)

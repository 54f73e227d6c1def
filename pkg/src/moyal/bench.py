"""Timing sweeps for the grid and matrix backends."""

from __future__ import annotations

import time
import warnings

import numpy as np

from .basis import BasisSpec, BasisWarning, analyze, synthesize
from .phasegrid import GridFunction, PhaseGrid
from .seqspace import matrix_star
from .stargrid import twisted_product

CSV_HEADER = "backend,param,seconds,l2_error"


def _operands(grid: PhaseGrid) -> tuple[GridFunction, GridFunction]:
    # displaced, squeezed Gaussians: their expansions never terminate
    f = grid.sample(lambda q, p: (1 + 0.5 * q) * np.exp(-((q - 0.7) ** 2 + (p + 0.3) ** 2 / 1.3) / 2))
    g = grid.sample(lambda q, p: np.exp(-((q + 0.4) ** 2 / 1.2 + (p - 0.6) ** 2) / 2 + 0.5j * p))
    return f, g


def _best(fn, repeat: int):
    best, out = np.inf, None
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _rel(a: GridFunction, b: GridFunction) -> float:
    return float(np.linalg.norm(a.values - b.values) / np.linalg.norm(b.values))


def _spec(order, grid):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BasisWarning)
        return BasisSpec(order, grid)


def run_bench(sizes, orders, extent: float = 8.0, repeat: int = 3) -> list[tuple[str, str, float, float]]:
    """Time twisted products and measure their L2 disagreement.

    Grid rows compare against the matrix backend at the largest requested
    order on the same grid. Matrix rows time the coefficient product alone
    and compare its synthesis against the grid product at the largest
    requested size.
    """
    top = max(orders)
    rows = []
    for M in sizes:
        grid = PhaseGrid(extent, M)
        f, g = _operands(grid)
        spec = _spec(top, grid)
        ref = synthesize(matrix_star(analyze(f, spec), analyze(g, spec)), grid)
        for path in ("switch", "kernel"):
            try:
                sec, prod = _best(lambda: twisted_product(f, g, path=path), repeat)
            except ValueError:
                continue  # kernel route needs a finer grid
            rows.append((f"grid-{path}", f"M={M}", sec, _rel(prod, ref)))
    grid = PhaseGrid(extent, max(sizes))
    f, g = _operands(grid)
    ref = twisted_product(f, g)
    for order in orders:
        spec = _spec(order, grid)
        ca, cb = analyze(f, spec), analyze(g, spec)
        inner = 200
        sec, prod = _best(lambda: [matrix_star(ca, cb) for _ in range(inner)][-1], repeat)
        rows.append(("matrix", f"M_b={order}", sec / inner, _rel(synthesize(prod, grid), ref)))
    return rows

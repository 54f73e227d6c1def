"""Twisted products with the distributions 1, delta, polynomials and samples.

``1 * f = f * 1 = f``, ``delta * f = F~f`` and ``f * delta = Ff``. Polynomial
factors act through their coefficient matrix in the ``f_mn`` basis, which
keeps differentiation exact; sampled factors go to the grid backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from ..basis import BasisSpec, analyze, synthesize
from ..phasegrid import GridFunction, fourier_symplectic, fourier_symplectic_tilde
from ..seqspace import CoeffMatrix, delta_matrix, matrix_star
from ..stargrid import twisted_product
from .gauss import GaussPoly
from .poly import PolyQP
from .star import _matrix_action, gauss_star, weyl_left, weyl_right

Tag = Literal["one", "delta", "poly", "sampled"]


@dataclass(frozen=True)
class Distribution:
    """Tagged union of the supported left or right factors.

    Use the constructors :meth:`one`, :meth:`delta`, :meth:`poly` and
    :meth:`sampled` rather than building instances by hand.
    """

    tag: Tag
    payload: Union[PolyQP, GridFunction, None] = None

    def __post_init__(self):
        want = {"one": type(None), "delta": type(None), "poly": PolyQP, "sampled": GridFunction}
        if self.tag not in want:
            raise ValueError(f"unknown distribution tag {self.tag!r}")
        if not isinstance(self.payload, want[self.tag]):
            raise TypeError(f"tag {self.tag!r} needs a {want[self.tag].__name__} payload")

    @classmethod
    def one(cls) -> "Distribution":
        return cls("one")

    @classmethod
    def delta(cls) -> "Distribution":
        return cls("delta")

    @classmethod
    def poly(cls, P: PolyQP) -> "Distribution":
        return cls("poly", P)

    @classmethod
    def sampled(cls, f: GridFunction) -> "Distribution":
        return cls("sampled", f)


def _delta_coeffs(c: CoeffMatrix, side: str) -> CoeffMatrix:
    D = delta_matrix(c.order)
    return matrix_star(D, c) if side == "left" else matrix_star(c, D)


def _delta_gauss(F: GaussPoly, side: str) -> GaussPoly:
    X = F.g_coefficients()
    pos = 0 if side == "left" else 1
    flipped = {k: (-v if k[pos] % 2 else v) for k, v in X.items()}
    return GaussPoly.from_g_coefficients(flipped, F.scale)


def dist_star(T: Distribution, f, side: str = "left", max_order: int = 24):
    """``T * f`` (``side="left"``) or ``f * T`` (``side="right"``).

    Parameters
    ----------
    T : Distribution
    f : GridFunction, CoeffMatrix or GaussPoly
    side : {"left", "right"}
    max_order : int
        Basis order used when a polynomial acts on a grid function; the
        samples are projected, acted on exactly and resynthesized.

    Examples
    --------
    >>> from moyal.seqspace import CoeffMatrix
    >>> c = dist_star(Distribution.delta(), CoeffMatrix.unit(1, 2, 4))
    >>> complex(c.entries[1, 2])
    (-1+0j)
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    left = side == "left"
    tag = T.tag
    if tag == "one":
        return f
    if isinstance(f, CoeffMatrix):
        if tag == "delta":
            return _delta_coeffs(f, side)
        if tag == "poly":
            return _matrix_action(T.payload, f, left)
        c = analyze(T.payload, BasisSpec(f.order, T.payload.grid))
        return matrix_star(c, f) if left else matrix_star(f, c)
    if isinstance(f, GaussPoly):
        if tag == "delta":
            return _delta_gauss(f, side)
        if tag == "poly":
            return weyl_left(T.payload, f) if left else weyl_right(f, T.payload)
        raise TypeError("sampled distributions need a grid operand")
    if isinstance(f, GridFunction):
        if tag == "delta":
            return fourier_symplectic_tilde(f) if left else fourier_symplectic(f)
        if tag == "poly":
            spec = BasisSpec(max_order, f.grid)
            c = _matrix_action(T.payload, analyze(f, spec), left)
            return synthesize(c, f.grid)
        g = T.payload
        return twisted_product(g, f) if left else twisted_product(f, g)
    raise TypeError(f"dist_star does not support operands of type {type(f).__name__}")


__all__ = ["Distribution", "dist_star", "gauss_star"]

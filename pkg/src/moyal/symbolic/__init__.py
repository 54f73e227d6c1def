"""Exact star-product algebra for polynomials and the Gaussian span."""

from .dist import Distribution, dist_star
from .exact import I, SQRT2, Exact
from .gauss import GaussPoly
from .parse import ParseError, parse_poly
from .poly import ABPoly, MultiIndex, PolyQP, derivative_hat
from .star import (
    gauss_star,
    ladder_matrix,
    moyal_bracket,
    poisson_bracket,
    poly_matrix,
    poly_star,
    weyl_left,
    weyl_right,
)

__all__ = [
    "ABPoly",
    "Distribution",
    "Exact",
    "GaussPoly",
    "I",
    "MultiIndex",
    "ParseError",
    "PolyQP",
    "SQRT2",
    "derivative_hat",
    "dist_star",
    "gauss_star",
    "ladder_matrix",
    "moyal_bracket",
    "parse_poly",
    "poisson_bracket",
    "poly_matrix",
    "poly_star",
    "weyl_left",
    "weyl_right",
]

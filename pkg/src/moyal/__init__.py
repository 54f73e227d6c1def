"""Twisted (Moyal) products on phase space with grid, matrix and polynomial backends."""

from .basis import BasisIndex, BasisSpec, analyze, basis_change_coeff, basis_fn, hermite_tensor, synthesize
from .phasegrid import (
    GridFunction,
    PhaseGrid,
    PhasePoint,
    fourier_ordinary,
    fourier_symplectic,
    fourier_symplectic_tilde,
    integrate,
    modulate,
    norm,
    pair_bilinear,
    pair_sesquilinear,
    translate,
)
from .seqspace import (
    CoeffMatrix,
    StWeights,
    apply_A,
    howe_factorize,
    hs_sum_partial,
    matrix_star,
    matrix_twisted_convolution,
    rk_norm,
    st_norm,
    star_in_Gst,
)
from .stargrid import twisted_convolution, twisted_product, twisted_translate

__version__ = "0.1.0"

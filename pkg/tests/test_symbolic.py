import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moyal import PhaseGrid, analyze, BasisSpec, CoeffMatrix
from moyal.symbolic import (
    I,
    SQRT2,
    ABPoly,
    Distribution,
    Exact,
    GaussPoly,
    MultiIndex,
    ParseError,
    PolyQP,
    derivative_hat,
    dist_star,
    gauss_star,
    ladder_matrix,
    moyal_bracket,
    parse_poly,
    poisson_bracket,
    poly_matrix,
    poly_star,
    weyl_left,
    weyl_right,
)

q, p = PolyQP.q(), PolyQP.p()


# ---------------------------------------------------------------- Exact

def test_exact_field_ops():
    assert SQRT2 * SQRT2 == 2
    assert I * I == -1
    x = Exact(1, 2, 3, Fraction(1, 2))
    assert x * x.inverse() == 1
    assert (x / x) == 1
    assert x.conjugate().conjugate() == x
    assert complex(x) == pytest.approx(complex(1 + 3 * math.sqrt(2), 2 + 0.5 * math.sqrt(2)))
    assert hash(Exact(2)) == hash(Exact(Fraction(4, 2)))
    assert (SQRT2 ** -2) == Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        Exact(0).inverse()


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50),
       st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_exact_matches_complex(a, b, c, d):
    x = Exact(a, b, c, d)
    y = Exact(c, a, d, b)
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), rel=1e-12, abs=1e-12)
    assert complex(x + y) == pytest.approx(complex(x) + complex(y), rel=1e-12, abs=1e-12)


# ---------------------------------------------------------------- parsing

def test_parse_and_print():
    P = parse_poly("3*q^2*p - 2i*H + a*abar")
    assert str(P) == "3*q^2*p + (1/2-1i)*q^2 + (1/2-1i)*p^2"
    assert parse_poly("(q + p)^2") == q * q + 2 * q * p + p * p
    assert parse_poly("sqrt2*a") == q + I * p
    assert parse_poly("-q/2") == q * Fraction(-1, 2)
    assert parse_poly("2.5") == PolyQP.const(Fraction(5, 2))


@pytest.mark.parametrize("bad", ["q+", "q^p", "x", "(q", "q)", "q^-1", "1/q", "", "q $ p"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad)


def test_ab_roundtrip():
    P = parse_poly("q^3*p - 2*p^2 + 1i*q")
    assert P.to_ab().to_qp() == P
    assert ABPoly.a().to_qp() == (q + I * p) / SQRT2


# ---------------------------------------------------------------- Moyal product

def test_canonical_commutator():
    assert str(poly_star(q, p)) == "q*p + 1i"
    assert poly_star(q, p) - poly_star(p, q) == PolyQP.const(2 * I)


def test_ladder_products():
    a, ab = PolyQP.a(), PolyQP.abar()
    assert poly_star(a, ab) - poly_star(ab, a) == PolyQP.const(2)
    H = PolyQP.H()
    assert poly_star(H, H) == H * H - PolyQP.const(1)


def small_polys():
    mono = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3))
    return st.lists(mono, min_size=1, max_size=4).map(
        lambda ms: sum((PolyQP.monomial(i, j, c) for i, j, c in ms), PolyQP())
    )


@given(small_polys(), small_polys(), small_polys())
@settings(max_examples=25, deadline=None)
def test_star_associative(A, B, C):
    assert poly_star(poly_star(A, B), C) == poly_star(A, poly_star(B, C))


@given(small_polys(), small_polys())
@settings(max_examples=25, deadline=None)
def test_star_conjugation(A, B):
    A = A + I * PolyQP.monomial(1, 1)
    assert poly_star(A, B).conj() == poly_star(B.conj(), A.conj())


@given(small_polys(), small_polys())
@settings(max_examples=25, deadline=None)
def test_bracket_reduces_to_poisson_at_low_degree(A, B):
    if A.degree <= 2 or B.degree <= 2:
        assert moyal_bracket(A, B) == poisson_bracket(A, B) * (2 * I)


def test_bracket_differs_at_high_degree():
    A, B = q**3, p**3
    assert moyal_bracket(A, B) != poisson_bracket(A, B) * (2 * I)


def test_derivative_hat():
    P = parse_poly("q^3*p^2")
    assert derivative_hat(P, MultiIndex(1, 1)) == PolyQP.monomial(2, 1, -6)
    assert derivative_hat(P, MultiIndex(2, 0)) == PolyQP.monomial(3, 0, 2)
    assert MultiIndex(2, 3).order == 5 and MultiIndex(2, 3).factorial == 12


# ---------------------------------------------------------------- Gaussian span

def test_gauss_eigen_and_ladders():
    for m, n in [(0, 0), (2, 1), (3, 4)]:
        f = GaussPoly.basis(m, n)
        assert weyl_left(PolyQP.H(), f) == f * (2 * m + 1)
        assert weyl_right(f, PolyQP.H()) == f * (2 * n + 1)
        assert f.hermite_operator() == f * (2 * (m + n + 1))


def test_gauss_star_matrix_units():
    for m, n, k, l in [(0, 0, 0, 0), (1, 2, 2, 0), (2, 1, 0, 3), (3, 3, 3, 1)]:
        prod = gauss_star(GaussPoly.basis(m, n), GaussPoly.basis(k, l))
        ref = GaussPoly.basis(m, l) if n == k else GaussPoly.basis(0, 0) * 0
        assert prod == ref


def test_gauss_star_matches_polynomial_action():
    # P * f computed exactly two ways: series against a polynomial and via the g basis
    x = GaussPoly.basis(1, 0) + GaussPoly.basis(0, 2) * I
    y = GaussPoly.basis(2, 1) * SQRT2 - GaussPoly.basis(1, 1)
    lhs = gauss_star(x, y)
    coeffs = lhs.to_coeff_matrix(4).entries
    ref = x.to_coeff_matrix(4).entries @ y.to_coeff_matrix(4).entries
    assert np.allclose(coeffs, ref, atol=1e-14)


def test_gauss_evaluate_matches_analysis():
    grid = PhaseGrid(12.0, 128)
    for x in (GaussPoly.basis(2, 0) * Exact(1, 1), GaussPoly.basis(1, 3) - GaussPoly.basis(3, 1)):
        c = analyze(x.evaluate(grid), BasisSpec(5, grid))
        assert np.allclose(c.entries, x.to_coeff_matrix(5).entries, atol=1e-11)


# ---------------------------------------------------------------- matrix actions

def test_ladder_matrix_ccr():
    L = ladder_matrix(8)
    comm = L.T @ L - L @ L.T
    assert np.allclose(np.diag(comm)[:-1], -2.0)


def test_poly_matrix_on_units():
    c = CoeffMatrix.unit(2, 1, 6)
    out = weyl_left(PolyQP.H(), c)
    assert out.entries[2, 1] == pytest.approx(5)
    assert np.count_nonzero(np.abs(out.entries) > 1e-12) == 1
    Pm = poly_matrix(PolyQP.H(), 6)
    assert np.allclose(np.diag(Pm)[:5], 2 * np.arange(5) + 1)


def test_weyl_grid_matches_exact():
    grid = PhaseGrid(10.0, 128)
    f = GaussPoly.basis(1, 2) + GaussPoly.basis(0, 0) * I
    P = parse_poly("q*p - 2*q + p^2")
    exact = weyl_left(P, f).evaluate(grid)
    numeric = weyl_left(P, f.evaluate(grid))
    assert (numeric - exact).sup() < 1e-8
    exact = weyl_right(f, P).evaluate(grid)
    assert (weyl_right(f.evaluate(grid), P) - exact).sup() < 1e-8


# ---------------------------------------------------------------- distributions

def test_delta_and_one():
    c = CoeffMatrix.unit(1, 2, 4)
    assert dist_star(Distribution.one(), c) is c
    assert dist_star(Distribution.delta(), c).entries[1, 2] == -1
    assert dist_star(Distribution.delta(), c, side="right").entries[1, 2] == 1
    f = GaussPoly.basis(1, 2)
    assert dist_star(Distribution.delta(), f) == f * -1
    with pytest.raises(ValueError):
        dist_star(Distribution.one(), c, side="middle")


def test_delta_on_grid_reflects_fourier():
    grid = PhaseGrid(10.0, 128)
    g = GaussPoly.basis(3, 0).evaluate(grid)
    out = dist_star(Distribution.delta(), g)
    assert (out + g).sup() < 1e-10  # (-1)^3


@pytest.mark.parametrize("a,b", [("q*p", "q + p^2"), ("a^2", "abar*q"), ("H", "q^2*p")])
def test_poly_star_matches_grid_on_weighted_bulk(a, b):
    # grow-at-infinity symbols are windowed before sampling; the window's edge
    # leaks into the bulk through the nonlocal product, so the comparison is
    # weighted by f_0 / 2 = exp(-|u|^2 / 2)
    from moyal import twisted_product

    grid = PhaseGrid(16.0, 256)
    Q, P = grid.mesh()
    rho = np.hypot(Q, P)
    W = np.exp(-((rho / 12.0) ** 16))
    A, B = parse_poly(a), parse_poly(b)
    fa = grid.sample(lambda x, y: A.evaluate(x, y) * W)
    fb = grid.sample(lambda x, y: B.evaluate(x, y) * W)
    diff = twisted_product(fa, fb, path="kernel").values - poly_star(A, B).evaluate(Q, P)
    weighted = np.abs(diff) * np.exp(-(rho**2) / 2)
    assert weighted[grid.bulk_mask()].max() < 1e-4

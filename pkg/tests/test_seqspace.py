import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from moyal import (
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
from moyal.seqspace import OrderMismatchError, delta_matrix, fourier_coeffs, read_coeff_csv, write_coeff_csv

finite = st.floats(-10, 10, allow_nan=False)


def coeffs(order):
    return st.builds(
        lambda re, im: CoeffMatrix(re + 1j * im),
        arrays(float, (order, order), elements=finite),
        arrays(float, (order, order), elements=finite),
    )


def test_immutable_and_validated():
    c = CoeffMatrix.zeros(3)
    with pytest.raises(AttributeError):
        c.entries = None
    with pytest.raises(ValueError):
        c.entries[0, 0] = 1
    with pytest.raises(ValueError):
        CoeffMatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        CoeffMatrix([[np.inf]])


def test_order_mismatch():
    with pytest.raises(OrderMismatchError):
        matrix_star(CoeffMatrix.zeros(3), CoeffMatrix.zeros(4))
    with pytest.raises(OrderMismatchError):
        CoeffMatrix.zeros(3) + CoeffMatrix.zeros(2)


def test_matrix_units_multiply():
    n = 5
    for m in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    p = matrix_star(CoeffMatrix.unit(m, k, n), CoeffMatrix.unit(j, l, n))
                    ref = CoeffMatrix.unit(m, l, n) * float(k == j)
                    assert np.array_equal(p.entries, ref.entries)


@given(coeffs(4), coeffs(4))
def test_adjoint_reverses_products(a, b):
    lhs = matrix_star(a, b).adjoint().entries
    rhs = matrix_star(b.adjoint(), a.adjoint()).entries
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_delta_and_twisted_convolution():
    rng = np.random.default_rng(1)
    a = CoeffMatrix(rng.normal(size=(6, 6)))
    b = CoeffMatrix(rng.normal(size=(6, 6)))
    # f o g = f * delta * g
    ref = matrix_star(matrix_star(a, delta_matrix(6)), b)
    assert np.allclose(matrix_twisted_convolution(a, b).entries, ref.entries)


def test_fourier_coeffs_kinds():
    c = CoeffMatrix(np.ones((4, 4)))
    e = fourier_coeffs(c, "ordinary").entries
    assert e[1, 2] == pytest.approx(1j) and e[1, 0] == pytest.approx(-1j)
    assert np.array_equal(fourier_coeffs(c, "symplectic").entries[:, 1], -np.ones(4))
    assert np.array_equal(fourier_coeffs(c, "tilde").entries[1, :], -np.ones(4))
    # twice the symplectic transform is the identity
    assert np.array_equal(fourier_coeffs(fourier_coeffs(c, "symplectic"), "symplectic").entries, c.entries)
    with pytest.raises(ValueError):
        fourier_coeffs(c, "bogus")


def test_norms():
    c = CoeffMatrix.unit(1, 2, 4) * 3
    assert st_norm(c, StWeights(0, 0)) == pytest.approx(3)
    assert st_norm(c, StWeights(1, 2)) == pytest.approx(3 * math.sqrt(3 * 25))
    assert rk_norm(c, 1) == pytest.approx(3 * 3 * 5)
    assert rk_norm(apply_A(CoeffMatrix.identity(3)), -1) == pytest.approx(math.sqrt(3))


@given(coeffs(5), coeffs(5), st.integers(0, 3), st.integers(-2, 2), st.integers(-2, 2))
@settings(max_examples=50)
def test_banach_inequality(f, g, t, s, r):
    _, ok = star_in_Gst(f, g, StWeights(s, t), StWeights(-t, r))
    assert ok


def test_star_in_Gst_rejects_weights():
    c = CoeffMatrix.identity(2)
    with pytest.raises(ValueError):
        star_in_Gst(c, c, StWeights(0, -1), StWeights(0, 0))


def test_hs_sum():
    assert hs_sum_partial(1) == 1.0
    target = (math.pi**2 / 8) ** 2
    err = [target - hs_sum_partial(K) for K in (10, 100, 1000)]
    assert all(e > 0 for e in err) and err[0] > err[1] > err[2]
    assert err[2] < 1e-3
    with pytest.raises(ValueError):
        hs_sum_partial(0)


@given(coeffs(6))
def test_howe_factorization(c):
    b, d = howe_factorize(c)
    dd = np.diag(d.entries).real
    assert np.allclose(matrix_star(b, d).entries, c.entries, atol=1e-12)
    assert np.all(np.diff(dd) <= 0)
    assert np.all(np.abs(b.entries) <= dd[None, :] * (1 + 1e-12) + 1e-300)


def test_howe_zero_columns():
    c = CoeffMatrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
    b, d = howe_factorize(c)
    assert np.array_equal(np.diag(d.entries).real, [1.0, 0.0])
    assert np.array_equal(b.entries, c.entries)


def test_coeff_csv_roundtrip(tmp_path):
    c = CoeffMatrix.unit(2, 3, 8) * (0.5 - 0.25j)
    side = write_coeff_csv(c, tmp_path / "c.csv", "demo")
    assert side.name == "c.json"
    back = read_coeff_csv(tmp_path / "c.csv")
    assert back.order == 8 and np.array_equal(back.entries, c.entries)
    side.unlink()
    assert read_coeff_csv(tmp_path / "c.csv").order == 4


def test_resized():
    c = CoeffMatrix.unit(2, 2, 3)
    assert c.resized(5).entries[2, 2] == 1 and c.resized(2).max_abs() == 0

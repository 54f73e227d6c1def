import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussian
from moyal import (
    BasisSpec,
    CoeffMatrix,
    PhaseGrid,
    analyze,
    basis_change_coeff,
    basis_fn,
    hermite_tensor,
    pair_sesquilinear,
    synthesize,
)
from moyal.basis import BasisWarning, containment_extent, iter_basis
from moyal.phasegrid import GridMismatchError
from moyal.symbolic import GaussPoly


@pytest.fixture(scope="module")
def grid():
    return PhaseGrid(12.0, 128)


def quiet_spec(order, grid):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BasisWarning)
        return BasisSpec(order, grid)


def test_vacuum_closed_form(grid):
    Q, P = grid.mesh()
    assert np.abs(basis_fn((0, 0), grid).values - 2 * np.exp(-(Q**2 + P**2) / 2)).max() < 1e-15


@pytest.mark.parametrize("m,n", [(1, 0), (0, 1), (2, 2), (3, 1), (1, 4), (5, 5), (7, 2)])
def test_matches_exact_gaussian_span(m, n, grid):
    ref = GaussPoly.basis(m, n).evaluate(grid)
    assert (basis_fn((m, n), grid) - ref).sup() < 1e-11


def test_conjugate_pairs(grid):
    for m, n in [(3, 1), (6, 0), (9, 4)]:
        assert (basis_fn((n, m), grid) - basis_fn((m, n), grid).conj()).sup() == 0.0


def test_iter_basis_matches_basis_fn(grid):
    seen = 0
    for (m, n), vals in iter_basis(6, grid):
        assert m >= n
        assert np.abs(vals - basis_fn((m, n), grid).values).max() < 1e-12
        seen += 1
    assert seen == 21


def test_orthonormal_low_orders(grid):
    fs = {(m, n): basis_fn((m, n), grid) for m in range(4) for n in range(4)}
    for a, fa in fs.items():
        for b, fb in fs.items():
            assert pair_sesquilinear(fa, fb) == pytest.approx(float(a == b), abs=1e-12)


def test_high_index_is_finite():
    g = PhaseGrid(24.0, 128)
    f = basis_fn((120, 3), g)
    assert np.all(np.isfinite(f.values)) and f.sup() > 0


def test_bad_indices(grid):
    with pytest.raises(ValueError):
        basis_fn((-1, 0), grid)
    with pytest.raises(ValueError):
        basis_fn((1.5, 0), grid)


def test_containment_warning():
    assert containment_extent(16) == pytest.approx(2 * math.sqrt(33) + 4)
    with pytest.warns(BasisWarning):
        BasisSpec(16, PhaseGrid(8.0, 64))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        BasisSpec(4, PhaseGrid(12.0, 64))
    with pytest.raises(ValueError):
        BasisSpec(0, PhaseGrid(12.0, 64))


@given(st.integers(0, 7), st.integers(0, 7))
def test_analyze_recovers_unit(m, n):
    g = PhaseGrid(12.0, 128)
    c = analyze(basis_fn((m, n), g), quiet_spec(8, g))
    ref = CoeffMatrix.unit(m, n, 8)
    assert np.abs(c.entries - ref.entries).max() < 1e-11


def test_synthesize_roundtrip(grid, rng):
    e = (rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))) * np.exp(-np.add.outer(range(6), range(6)) / 3)
    c = CoeffMatrix(e)
    back = analyze(synthesize(c, grid), BasisSpec(6, grid))
    assert np.abs(back.entries - e).max() < 1e-11


def test_analyze_gaussian_is_diagonal(grid):
    # a centered Gaussian is radial, so only m == n survives
    c = analyze(gaussian(grid, width=1.5), quiet_spec(10, grid)).entries
    assert np.abs(c - np.diag(np.diag(c))).max() < 1e-12
    assert abs(c[0, 0]) > 0.1


def test_analyze_grid_mismatch(grid):
    with pytest.raises(GridMismatchError):
        analyze(PhaseGrid(12.0, 64).zeros(), BasisSpec(4, grid))


def test_hermite_tensor_vacuum(grid):
    # h_0 (x) h_0 = 2 exp(-|u|^2/2) = f_00
    assert (hermite_tensor(0, 0, grid) - basis_fn((0, 0), grid)).sup() < 1e-15
    with pytest.raises(ValueError):
        hermite_tensor(-1, 0, grid)


@pytest.mark.parametrize("m,n", [(1, 0), (2, 1), (0, 3), (3, 3), (4, 2)])
def test_basis_change_against_projection(m, n, grid):
    f = basis_fn((m, n), grid)
    total = 0.0
    for k in range(m + n + 1):
        l = m + n - k
        h = hermite_tensor(k, l, grid)
        proj = pair_sesquilinear(h, f)
        assert proj == pytest.approx(basis_change_coeff(m, n, k, l), abs=1e-11)
        total += abs(proj) ** 2
    assert total == pytest.approx(1.0, abs=1e-11)


def test_basis_change_rejects_mismatch():
    with pytest.raises(ValueError):
        basis_change_coeff(1, 1, 1, 2)
    with pytest.raises(ValueError):
        basis_change_coeff(-1, 1, 0, 0)

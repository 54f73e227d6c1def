import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussian
from moyal import (
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
from moyal.phasegrid import GridMismatchError, OffGridError, load_grid, read_csv, write_binary, write_csv


def test_grid_validation():
    with pytest.raises(ValueError):
        PhaseGrid(8.0, 96)
    with pytest.raises(ValueError):
        PhaseGrid(-1.0, 64)
    with pytest.raises(ValueError):
        PhaseGrid(float("inf"), 64)


def test_nodes_and_negation(grid64):
    x = grid64.nodes
    assert x[0] == -8.0 and x[32] == 0.0
    assert x[-1] == pytest.approx(8.0 - grid64.spacing)
    neg = grid64.negation
    np.testing.assert_allclose(x[neg][1:], -x[1:])
    assert neg[0] == 0  # -L wraps onto itself
    with pytest.raises(ValueError):
        x[0] = 1.0


def test_grid_function_is_immutable(grid64):
    f = grid64.zeros()
    with pytest.raises(AttributeError):
        f.values = None
    with pytest.raises(ValueError):
        f.values[0, 0] = 1.0


def test_grid_function_rejects_bad_input(grid64):
    with pytest.raises(ValueError):
        GridFunction(grid64, np.zeros((3, 3)))
    bad = np.zeros((64, 64))
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        GridFunction(grid64, bad)


def test_mismatched_grids_raise(grid64, grid128):
    with pytest.raises(GridMismatchError):
        grid64.zeros() + grid128.zeros()
    with pytest.raises(GridMismatchError):
        pair_bilinear(grid64.zeros(), grid128.zeros())


def test_gaussian_integral_and_norm(grid64):
    g = gaussian(grid64)
    assert integrate(g) == pytest.approx(1.0, abs=1e-12)
    assert norm(2 * g) == pytest.approx(1.0, abs=1e-12)
    assert pair_sesquilinear(1j * g, g) == pytest.approx(-0.25j, abs=1e-12)
    assert pair_bilinear(1j * g, g) == pytest.approx(1j / 2, abs=1e-12)


def test_fourier_of_gaussian(grid64):
    # exp(-|u|^2/2) is fixed by both transforms; a shifted Gaussian picks up a phase
    g = gaussian(grid64)
    assert (fourier_ordinary(g) - g).sup() < 1e-12
    assert (fourier_symplectic(g) - g).sup() < 1e-12
    s = gaussian(grid64, center=(1.0, 0.0))
    Q, P = grid64.mesh()
    ref = np.exp(-(Q**2 + P**2) / 2 - 1j * Q)
    assert np.abs(fourier_ordinary(s).values - ref).max() < 1e-10


def test_symplectic_transforms(grid64, rng):
    f = gaussian(grid64, center=(0.8, -0.5), width=1.3, tilt=0.7)
    # F is an involution (up to tail truncation) and F~ is its reflection
    assert (fourier_symplectic(fourier_symplectic(f)) - f).sup() < 1e-6
    assert (fourier_symplectic_tilde(f) - fourier_symplectic(f).reflect()).sup() < 1e-12
    # Ff(u) = (ordinary F f)(p, -q)
    G = fourier_ordinary(f)
    F = fourier_symplectic(f)
    u = PhasePoint(1.0, -2.0)
    assert F.at(u) == pytest.approx(G.at(PhasePoint(u.p, -u.q)), abs=1e-14)


def test_plancherel(grid64):
    f = gaussian(grid64, center=(0.5, 0.25), width=0.9, tilt=1.0)
    assert norm(fourier_ordinary(f)) == pytest.approx(norm(f), rel=1e-10)


@given(st.integers(-10, 10), st.integers(-10, 10))
def test_translate_by_nodes(dj, dk):
    grid = PhaseGrid(8.0, 64)
    h = grid.spacing
    f = gaussian(grid, width=0.8)
    s = PhasePoint(dj * h, dk * h)
    moved = translate(f, s)
    assert (moved - gaussian(grid, center=s, width=0.8)).sup() < 1e-10
    assert (translate(moved, -s) - f).sup() == 0.0


def test_translate_off_grid(grid64):
    with pytest.raises(OffGridError):
        translate(grid64.zeros(), PhasePoint(0.1, 0.0))


def test_modulate_phase(grid64):
    f = gaussian(grid64)
    s = PhasePoint(0.5, 1.5)
    Q, P = grid64.mesh()
    ref = np.exp(1j * (s.q * P - s.p * Q)) * f.values
    assert np.abs(modulate(f, s).values - ref).max() == 0.0
    assert PhasePoint(1.0, 0.0).symplectic(PhasePoint(0.0, 1.0)) == 1.0


def test_csv_and_binary_roundtrip(tmp_path, grid64):
    f = gaussian(grid64, center=(0.3, -0.7), tilt=0.4)
    write_csv(f, tmp_path / "g.csv")
    back = read_csv(tmp_path / "g.csv")
    assert back.grid == grid64
    assert np.array_equal(back.values, f.values)
    write_binary(f, tmp_path / "g.bin")
    back = load_grid(tmp_path / "g.bin")
    assert back.grid == grid64 and np.array_equal(back.values, f.values)
    assert load_grid(tmp_path / "g.csv").grid == grid64


def test_csv_rejects_wrong_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,y,re,im\n0,0,1,0\n")
    with pytest.raises(ValueError):
        read_csv(p)


def test_bulk_mask(grid64):
    m = grid64.bulk_mask()
    Q, P = grid64.mesh()
    assert m.any() and np.all(Q[m] ** 2 + P[m] ** 2 <= 16.0)

"""Sampled functions on a square phase-space grid.

The grid covers ``[-L, L)^2`` with ``M`` nodes per axis and is treated as a
torus. Integrals use the measure ``du = (2 pi)^-1 dq dp``.
"""

from __future__ import annotations

import functools
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

BINARY_MAGIC = b"MOYAL1"


class GridMismatchError(ValueError):
    """Raised when two grid functions live on different grids."""


class OffGridError(ValueError):
    """Raised when a shift is not an integer multiple of the spacing."""


class PhasePoint(NamedTuple):
    """A point ``u = (q, p)`` of phase space."""

    q: float
    p: float

    def symplectic(self, other: "PhasePoint") -> float:
        """Symplectic form ``u'Jv = q p' - p q'``."""
        return self.q * other[1] - self.p * other[0]

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(-self.q, -self.p)


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform grid on ``[-L, L)^2``.

    Parameters
    ----------
    extent : float
        Half-width ``L`` of the square.
    size : int
        Number of nodes per axis ``M``; must be an even power of two.
    """

    extent: float
    size: int

    def __post_init__(self):
        if not (self.extent > 0 and math.isfinite(self.extent)):
            raise ValueError(f"grid extent must be positive, got {self.extent}")
        M = self.size
        if M < 2 or M & (M - 1):
            raise ValueError(f"grid size must be a power of two >= 2, got {M}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / self.size

    @functools.cached_property
    def nodes(self) -> np.ndarray:
        x = -self.extent + self.spacing * np.arange(self.size)
        x.setflags(write=False)
        return x

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(Q, P)`` arrays of shape ``(M, M)`` indexed ``(j, k)``."""
        return np.meshgrid(self.nodes, self.nodes, indexing="ij")

    @property
    def weight(self) -> float:
        """Quadrature weight ``h^2 / (2 pi)`` of one node."""
        return self.spacing**2 / (2.0 * math.pi)

    @functools.cached_property
    def negation(self) -> np.ndarray:
        """Index permutation for ``x -> -x`` with ``-L`` wrapping onto itself."""
        M = self.size
        return (M - np.arange(M)) % M

    def steps(self, s: PhasePoint) -> tuple[int, int]:
        """Integer node offsets of a grid-aligned shift ``s``."""
        h = self.spacing
        out = []
        for c in s:
            r = round(c / h)
            if abs(c - r * h) > 1e-9 * h:
                raise OffGridError(f"shift component {c} is not a multiple of h={h}")
            out.append(int(r))
        return out[0], out[1]

    def sample(self, func: Callable) -> "GridFunction":
        """Sample ``func(q, p)`` on the nodes."""
        Q, P = self.mesh()
        return GridFunction(self, np.broadcast_to(func(Q, P), Q.shape))

    def zeros(self) -> "GridFunction":
        return GridFunction(self, np.zeros((self.size, self.size), complex))

    def bulk_mask(self, radius: float | None = None) -> np.ndarray:
        """Boolean mask of nodes with ``|u| <= radius`` (default ``L/2``)."""
        r = self.extent / 2 if radius is None else radius
        Q, P = self.mesh()
        return Q**2 + P**2 <= r * r


class GridFunction:
    """Immutable complex samples on a :class:`PhaseGrid`.

    ``values[j, k]`` is the sample at ``(q_j, p_k)``.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: PhaseGrid, values):
        arr = np.array(values, dtype=complex)
        if arr.shape != (grid.size, grid.size):
            raise ValueError(f"values must have shape {(grid.size, grid.size)}, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("grid function values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    def __repr__(self):
        return f"GridFunction(L={self.grid.extent}, M={self.grid.size})"

    def _check(self, other: "GridFunction"):
        if not isinstance(other, GridFunction):
            raise TypeError(f"expected GridFunction, got {type(other).__name__}")
        if other.grid != self.grid:
            raise GridMismatchError(f"grid mismatch: {self.grid} vs {other.grid}")

    def _wrap(self, values) -> "GridFunction":
        return GridFunction(self.grid, values)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return self._wrap(self.values + other.values)
        return self._wrap(self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return self._wrap(self.values - other.values)
        return self._wrap(self.values - other)

    def __neg__(self):
        return self._wrap(-self.values)

    def __mul__(self, other):
        # pointwise product, or scaling by a number
        if isinstance(other, GridFunction):
            self._check(other)
            return self._wrap(self.values * other.values)
        return self._wrap(self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._wrap(self.values / c)

    def conj(self) -> "GridFunction":
        return self._wrap(self.values.conj())

    def reflect(self) -> "GridFunction":
        """``f(-u)`` as an exact node permutation."""
        neg = self.grid.negation
        return self._wrap(self.values[np.ix_(neg, neg)])

    def sup(self, mask=None) -> float:
        v = np.abs(self.values)
        if mask is not None:
            v = v[mask]
        return float(v.max()) if v.size else 0.0

    def at(self, u: PhasePoint) -> complex:
        """Sample at a grid node."""
        g = self.grid
        j, k = g.steps(PhasePoint(u[0] + g.extent, u[1] + g.extent))
        return complex(self.values[j % g.size, k % g.size])


def _same_grid(f: GridFunction, g: GridFunction):
    f._check(g)


def integrate(f: GridFunction) -> complex:
    """Integral of ``f`` under ``du = (2 pi)^-1 d^2u`` (rectangle rule)."""
    return complex(f.values.sum() * f.grid.weight)


def pair_bilinear(f: GridFunction, g: GridFunction) -> complex:
    """Bilinear pairing ``<f, g> = int f g du``."""
    _same_grid(f, g)
    return complex(np.vdot(f.values.conj(), g.values) * f.grid.weight)


def pair_sesquilinear(f: GridFunction, g: GridFunction) -> complex:
    """Inner product ``<f|g> = 1/2 int conj(f) g du``."""
    _same_grid(f, g)
    return complex(0.5 * np.vdot(f.values, g.values) * f.grid.weight)


def norm(f: GridFunction) -> float:
    """L2 norm induced by :func:`pair_sesquilinear`."""
    return math.sqrt(max(pair_sesquilinear(f, f).real, 0.0))


@functools.lru_cache(maxsize=8)
def _fourier_matrix(grid: PhaseGrid) -> np.ndarray:
    # A[k, j] = h / sqrt(2 pi) * exp(-i x_k x_j); separable factor of the
    # 2-D transform so that input and output share the same nodes
    x = grid.nodes
    A = (grid.spacing / math.sqrt(2.0 * math.pi)) * np.exp(-1j * np.outer(x, x))
    A.setflags(write=False)
    return A


def fourier_ordinary(f: GridFunction) -> GridFunction:
    """Ordinary transform ``(Ff)(u) = int f(t) exp(-i t.u) dt`` on the same nodes.

    The transform is applied as one dense matrix per axis; see
    :func:`_fourier_matrix`.
    """
    A = _fourier_matrix(f.grid)
    return f._wrap(A @ f.values @ A.T)


def fourier_symplectic(f: GridFunction) -> GridFunction:
    """Symplectic transform ``Ff(u) = (Ff)(Ju)`` with ``Ju = (p, -q)``."""
    G = fourier_ordinary(f).values
    # out[j, k] = G at (p_k, -q_j)
    return f._wrap(G[:, f.grid.negation].T)


def fourier_symplectic_tilde(f: GridFunction) -> GridFunction:
    """The companion transform ``F~f(u) = (Ff)(-Ju)``."""
    G = fourier_ordinary(f).values
    # out[j, k] = G at (-p_k, q_j)
    return f._wrap(G[f.grid.negation, :].T)


def translate(f: GridFunction, s: PhasePoint) -> GridFunction:
    """``(tau_s f)(u) = f(u - s)`` as a cyclic shift; ``s`` must lie on the grid."""
    dj, dk = f.grid.steps(s)
    return f._wrap(np.roll(f.values, (dj, dk), axis=(0, 1)))


def modulate(f: GridFunction, s: PhasePoint) -> GridFunction:
    """``(eps_s f)(u) = exp(i s'Ju) f(u)`` where ``s'Ju = s_q p - s_p q``."""
    Q, P = f.grid.mesh()
    return f._wrap(np.exp(1j * (s[0] * P - s[1] * Q)) * f.values)


# ---------------------------------------------------------------- grid I/O


def write_csv(f: GridFunction, path) -> None:
    """Write ``q,p,re,im`` rows, row-major in ``j`` then ``k``."""
    x = f.grid.nodes
    M = f.grid.size
    lines = ["q,p,re,im"]
    vals = f.values
    for j in range(M):
        qj = repr(float(x[j]))
        row = vals[j]
        for k in range(M):
            z = row[k]
            lines.append(f"{qj},{float(x[k])!r},{float(z.real)!r},{float(z.imag)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> GridFunction:
    """Read a grid written by :func:`write_csv`."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "q,p,re,im":
            raise ValueError(f"{path}: expected header 'q,p,re,im', got {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    M = math.isqrt(len(data))
    if M * M != len(data) or data.shape[1] != 4:
        raise ValueError(f"{path}: row count {len(data)} is not a square grid")
    L = -float(data[0, 0])
    grid = PhaseGrid(L, M)
    if not np.allclose(data[:M, 1], grid.nodes, atol=1e-12 * max(L, 1)):
        raise ValueError(f"{path}: node columns do not form a uniform grid")
    return GridFunction(grid, (data[:, 2] + 1j * data[:, 3]).reshape(M, M))


def write_binary(f: GridFunction, path) -> None:
    """Binary layout: ``MOYAL1``, uint64 ``M``, float64 ``L``, then ``M*M``
    complex128 samples, all little-endian."""
    head = BINARY_MAGIC + struct.pack("<Qd", f.grid.size, f.grid.extent)
    Path(path).write_bytes(head + f.values.astype("<c16").tobytes())


def read_binary(path) -> GridFunction:
    raw = Path(path).read_bytes()
    n = len(BINARY_MAGIC)
    if raw[:n] != BINARY_MAGIC:
        raise ValueError(f"{path}: bad magic bytes")
    M, L = struct.unpack_from("<Qd", raw, n)
    body = np.frombuffer(raw, dtype="<c16", offset=n + 16)
    if body.size != M * M:
        raise ValueError(f"{path}: truncated payload")
    return GridFunction(PhaseGrid(L, int(M)), body.reshape(M, M))


def load_grid(path) -> GridFunction:
    """Read either grid format, dispatching on the magic bytes."""
    with open(path, "rb") as fh:
        magic = fh.read(len(BINARY_MAGIC))
    return read_binary(path) if magic == BINARY_MAGIC else read_csv(path)

"""Coefficient matrices of the twisted Hermite expansion.

A :class:`CoeffMatrix` of order ``M_b`` stands for the function
``sum_{m,n < M_b} c_mn f_mn``. Because the ``f_mn`` are matrix units, the
twisted product of two such functions is the plain matrix product, and it
is exact on the truncated span.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np


class OrderMismatchError(ValueError):
    """Raised when combining coefficient matrices of different order."""


class CoeffMatrix:
    """Immutable square array of coefficients ``c_mn``.

    Parameters
    ----------
    entries : array_like
        Complex ``(M_b, M_b)`` array.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"coefficients must form a nonempty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CoeffMatrix is immutable")

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __repr__(self):
        return f"CoeffMatrix(order={self.order}, nnz={int(np.count_nonzero(self.entries))})"

    @classmethod
    def zeros(cls, order: int) -> "CoeffMatrix":
        return cls(np.zeros((order, order), complex))

    @classmethod
    def unit(cls, m: int, n: int, order: int) -> "CoeffMatrix":
        """Matrix unit ``E_mn``, the coefficients of ``f_mn``."""
        e = np.zeros((order, order), complex)
        e[m, n] = 1.0
        return cls(e)

    @classmethod
    def identity(cls, order: int) -> "CoeffMatrix":
        """Truncated identity; represents ``sum_{n < M_b} f_nn``, not the function 1."""
        return cls(np.eye(order, dtype=complex))

    def _same(self, other: "CoeffMatrix"):
        if not isinstance(other, CoeffMatrix):
            raise TypeError(f"expected CoeffMatrix, got {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatchError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        self._same(other)
        return CoeffMatrix(self.entries + other.entries)

    def __sub__(self, other):
        self._same(other)
        return CoeffMatrix(self.entries - other.entries)

    def __mul__(self, c):
        return CoeffMatrix(self.entries * c)

    __rmul__ = __mul__

    def __neg__(self):
        return CoeffMatrix(-self.entries)

    def adjoint(self) -> "CoeffMatrix":
        """Coefficients of the complex conjugate function."""
        return CoeffMatrix(self.entries.conj().T)

    def resized(self, order: int) -> "CoeffMatrix":
        """Zero-pad or crop to a new order."""
        out = np.zeros((order, order), complex)
        k = min(order, self.order)
        out[:k, :k] = self.entries[:k, :k]
        return CoeffMatrix(out)

    def max_abs(self) -> float:
        return float(np.abs(self.entries).max())


class StWeights(NamedTuple):
    """Exponents ``(s, t)`` of the weight ``(2m+1)^s (2n+1)^t``."""

    s: float
    t: float


def _odd(order: int) -> np.ndarray:
    return 2.0 * np.arange(order) + 1.0


def _signs(order: int) -> np.ndarray:
    return np.where(np.arange(order) % 2, -1.0, 1.0)


def delta_matrix(order: int) -> CoeffMatrix:
    """Diagonal matrix ``diag((-1)^m)`` representing the Dirac delta."""
    return CoeffMatrix(np.diag(_signs(order)).astype(complex))


def matrix_star(a: CoeffMatrix, b: CoeffMatrix) -> CoeffMatrix:
    """Twisted product on coefficients: the matrix product ``ab``."""
    a._same(b)
    return CoeffMatrix(a.entries @ b.entries)


def matrix_twisted_convolution(a: CoeffMatrix, b: CoeffMatrix) -> CoeffMatrix:
    """Twisted convolution on coefficients: ``sum_k (-1)^k a_mk b_kn``."""
    a._same(b)
    return CoeffMatrix((a.entries * _signs(a.order)[None, :]) @ b.entries)


def fourier_coeffs(c: CoeffMatrix, kind: str = "ordinary") -> CoeffMatrix:
    """Action of a Fourier transform on coefficients.

    ``ordinary`` multiplies by ``(-i)^(m+n)``, ``symplectic`` by ``(-1)^n``
    and ``tilde`` by ``(-1)^m``.
    """
    m = np.arange(c.order)
    if kind == "ordinary":
        factor = np.array([1, -1j, -1, 1j])[(m[:, None] + m[None, :]) % 4]
    elif kind == "symplectic":
        factor = np.broadcast_to(_signs(c.order)[None, :], c.entries.shape)
    elif kind == "tilde":
        factor = np.broadcast_to(_signs(c.order)[:, None], c.entries.shape)
    else:
        raise ValueError(f"unknown transform kind {kind!r}")
    return CoeffMatrix(c.entries * factor)


def rk_norm(c: CoeffMatrix, k: float) -> float:
    """``r_k(c) = (sum (2m+1)^(2k) (2n+1)^(2k) |c_mn|^2)^(1/2)`` over stored entries."""
    return st_norm(c, StWeights(2 * k, 2 * k))


def st_norm(c: CoeffMatrix, w: StWeights) -> float:
    """``(sum (2m+1)^s (2n+1)^t |c_mn|^2)^(1/2)`` over stored entries."""
    o = _odd(c.order)
    weight = np.outer(o ** w[0], o ** w[1])
    return math.sqrt(float(np.sum(weight * np.abs(c.entries) ** 2)))


def apply_A(c: CoeffMatrix) -> CoeffMatrix:
    """``A(f) = H * f * H``, diagonal with eigenvalues ``(2m+1)(2n+1)``."""
    o = _odd(c.order)
    return CoeffMatrix(c.entries * np.outer(o, o))


def hs_sum_partial(K: int) -> float:
    """``sum_{m,n < K} (2m+1)^-2 (2n+1)^-2``; tends to ``(pi^2/8)^2``."""
    if K < 1:
        raise ValueError("cutoff K must be >= 1")
    # the double sum factorizes; fsum keeps the result order-independent
    one = math.fsum(1.0 / (2 * m + 1) ** 2 for m in range(K))
    return one * one


def howe_factorize(c: CoeffMatrix) -> tuple[CoeffMatrix, CoeffMatrix]:
    """Split ``c = b d`` with ``d`` diagonal.

    ``d_m = (max over all rows j and columns r >= m of |c_jr|)^(1/2)`` is
    nonincreasing and ``b_mn = c_mn / d_n`` satisfies ``|b_mn| <= d_n``.
    Columns where ``d_n = 0`` are identically zero in ``c`` and get
    ``b_mn = 0``.
    """
    col = np.abs(c.entries).max(axis=0)
    d = np.sqrt(np.maximum.accumulate(col[::-1])[::-1])
    b = np.zeros_like(c.entries)
    nz = d > 0
    b[:, nz] = c.entries[:, nz] / d[nz]
    return CoeffMatrix(b), CoeffMatrix(np.diag(d).astype(complex))


def star_in_Gst(
    f: CoeffMatrix,
    g: CoeffMatrix,
    wf: StWeights = StWeights(0.0, 0.0),
    wg: StWeights = StWeights(0.0, 0.0),
) -> tuple[CoeffMatrix, bool]:
    """Product in ``G_{s,r}`` with the bound ``|fg|_{s,r} <= |f|_{s,t} |g|_{q,r}``.

    Parameters
    ----------
    f, g : CoeffMatrix
    wf : StWeights
        ``(s, t)`` for the left factor.
    wg : StWeights
        ``(q, r)`` for the right factor; ``t + q >= 0`` is required.

    Returns
    -------
    product : CoeffMatrix
    bound_ok : bool
        Whether the norm inequality holds up to a relative slack of 1e-12.
    """
    s, t = wf
    q, r = wg
    if t + q < 0:
        raise ValueError(f"weights need t + q >= 0, got t={t}, q={q}")
    prod = matrix_star(f, g)
    lhs = st_norm(prod, StWeights(s, r))
    rhs = st_norm(f, StWeights(s, t)) * st_norm(g, StWeights(q, r))
    return prod, bool(lhs <= rhs * (1 + 1e-12))


# ---------------------------------------------------------------- I/O


def write_coeff_csv(c: CoeffMatrix, path, description: str = "") -> Path:
    """Write nonzero entries as ``m,n,re,im`` and a JSON sidecar.

    The sidecar sits next to ``path`` with suffix ``.json`` and records
    ``order`` and ``description``. Returns the sidecar path.
    """
    path = Path(path)
    lines = ["m,n,re,im"]
    for m, n in zip(*np.nonzero(c.entries)):
        z = c.entries[m, n]
        lines.append(f"{m},{n},{float(z.real)!r},{float(z.imag)!r}")
    path.write_text("\n".join(lines) + "\n")
    meta = path.with_suffix(".json")
    meta.write_text(json.dumps({"order": c.order, "description": description}, sort_keys=True, indent=2) + "\n")
    return meta


def read_coeff_csv(path, order: int | None = None) -> CoeffMatrix:
    """Read a sparse coefficient CSV; the order comes from the sidecar if present."""
    path = Path(path)
    meta = path.with_suffix(".json")
    if order is None and meta.exists():
        order = int(json.loads(meta.read_text())["order"])
    with open(path) as fh:
        header = fh.readline().strip().replace(" ", "")
        if header != "m,n,re,im":
            raise ValueError(f"{path}: expected header 'm,n,re,im', got {header!r}")
        rows = [ln.split(",") for ln in fh if ln.strip()]
    idx = [(int(r[0]), int(r[1])) for r in rows]
    if order is None:
        order = 1 + max((max(i) for i in idx), default=0)
    e = np.zeros((order, order), complex)
    for (m, n), r in zip(idx, rows):
        e[m, n] = complex(float(r[2]), float(r[3]))
    return CoeffMatrix(e)

"""Special functions behind the twisted Hermite basis.

Associated Laguerre polynomials, Hermite functions with the ``hbar = 2``
normalization, Jacobi polynomials at the origin, and factorial ratios.
"""

import math
from fractions import Fraction

import numpy as np

# below this many factors the log-sum is cheaper and far more accurate
# than differencing two large lgamma values
_DIRECT_LOGSUM = 256


def laguerre(n: int, k: int, x):
    """Associated Laguerre polynomial ``L_n^k(x)``.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    k : int
        Upper index, ``k >= 0``.
    x : float or ndarray
        Evaluation points (real, nonnegative in the intended use).

    Returns
    -------
    float or ndarray
        Evaluated by the upward three-term recurrence in ``n``.
    """
    if n < 0 or k < 0:
        raise ValueError(f"laguerre needs n >= 0 and k >= 0, got n={n}, k={k}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def laguerre_sequence(nmax: int, k: int, x):
    """Yield ``L_0^k(x), ..., L_nmax^k(x)`` from one recurrence pass."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    yield prev
    if nmax == 0:
        return
    cur = 1.0 + k - x
    yield cur
    for j in range(1, nmax):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
        yield cur


def log_factorial_ratio(m: int, n: int) -> float:
    """Return ``ln(n!) - ln(m!)``.

    Short ranges are summed term by term with ``math.fsum``; long ranges use
    ``lgamma``, whose absolute error is then small against the result.
    """
    if m < 0 or n < 0:
        raise ValueError("factorial arguments must be nonnegative")
    if m == n:
        return 0.0
    lo, hi, sign = (m, n, 1.0) if n > m else (n, m, -1.0)
    if hi - lo <= _DIRECT_LOGSUM:
        return sign * math.fsum(math.log(j) for j in range(lo + 1, hi + 1))
    return sign * (math.lgamma(hi + 1) - math.lgamma(lo + 1))


def hermite_fn(k: int, x):
    """Hermite function ``h_k(x) = (2^(k-1) k!)^(-1/2) H_k(x) exp(-x^2/2)``.

    Uses the normalized recurrence
    ``h_{j+1} = x sqrt(2/(j+1)) h_j - sqrt(j/(j+1)) h_{j-1}`` starting from
    ``h_0 = sqrt(2) exp(-x^2/2)``, so no factorials are formed.
    """
    if k < 0:
        raise ValueError("hermite_fn needs k >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = math.sqrt(2.0) * np.exp(-0.5 * x * x)
    for j in range(k):
        prev, cur = cur, x * math.sqrt(2.0 / (j + 1)) * cur - math.sqrt(j / (j + 1)) * prev
    return cur if cur.ndim else float(cur)


def _gen_binomial(top: int, k: int) -> Fraction:
    # C(top, k) for integer top of any sign, k >= 0 (falling factorial form)
    if k < 0:
        return Fraction(0)
    num = 1
    for j in range(k):
        num *= top - j
    return Fraction(num, math.factorial(k))


def jacobi_at_zero_exact(m: int, alpha: int, beta: int) -> Fraction:
    """Exact ``P_m^(alpha, beta)(0)`` as a rational number.

    Uses ``P_m(0) = 2^-m sum_s (-1)^s C(m+alpha, m-s) C(m+beta, s)``, the
    terminating hypergeometric form at ``x = 0``; binomials with a negative
    top are the polynomial (falling factorial) continuation.
    """
    if m < 0:
        raise ValueError(f"Jacobi degree must be >= 0, got {m}")
    if int(alpha) != alpha or int(beta) != beta:
        raise ValueError("jacobi_at_zero supports integer parameters only")
    alpha, beta = int(alpha), int(beta)
    total = Fraction(0)
    for s in range(m + 1):
        term = _gen_binomial(m + alpha, m - s) * _gen_binomial(m + beta, s)
        total += -term if s % 2 else term
    return total / 2**m


def jacobi_at_zero(m: int, alpha: int, beta: int) -> float:
    """Jacobi polynomial ``P_m^(alpha, beta)`` at ``x = 0`` as a float."""
    return float(jacobi_at_zero_exact(m, alpha, beta))

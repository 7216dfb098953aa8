"""Polynomial special functions and the Gaussian-weighted Hermite integral.

Everything here terminates: Hermite and associated Laguerre polynomials,
rising factorials, terminating 2F1 / 2F0 sums, and the closed form of
integral(exp(-lambda2 x^2) H_m(a x) H_n(b x) dx).  Degrees are capped at
MAX_DEGREE to keep silent overflow out of the library.

The closed form of the Gaussian-Hermite integral is evaluated through the
even/odd reduction of the degenerate-lower-parameter 2F1 (half-integer
lower parameter).  After that reduction the result is a finite polynomial
in (a^2 - lambda2), (b^2 - lambda2) and (a b)^2, so no square-root branch
ever enters the value; this also makes the a^2 = lambda2 limit exact.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

__all__ = [
    "MAX_DEGREE",
    "ParameterDegeneracyError",
    "hermite",
    "hermite_function",
    "hermite_function_table",
    "laguerre_assoc",
    "pochhammer",
    "hyp2f1_terminating",
    "hyp2f1_even_odd",
    "hyp2f0_terminating",
    "bailey_integral",
]

MAX_DEGREE = 512

Scalar = Union[float, complex]


class ParameterDegeneracyError(ValueError):
    """A lower Pochhammer factor vanished before the series terminated."""


def _check_degree(n, name="degree"):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"{name} must be an integer, got {n!r}")
    if n < 0:
        raise ValueError(f"{name} must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"{name} {n} exceeds MAX_DEGREE = {MAX_DEGREE}")
    return int(n)


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x), vectorized over x.

    Plain three-term recurrence; values overflow for large n and |x|,
    use `hermite_function` when a normalized, weighted value is wanted.
    """
    n = _check_degree(n)
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=x.dtype if x.dtype.kind == "c" else float)
    if n == 0:
        return h_prev if h_prev.shape else h_prev[()]
    h = 2.0 * x * h_prev
    for k in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h if h.shape else h[()]


def hermite_function(n: int, x):
    """Normalized Hermite function H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).

    Stable for any degree up to MAX_DEGREE (the recurrence works on the
    weighted, unit-norm functions so nothing overflows).
    """
    return hermite_function_table(n, x)[-1]


def hermite_function_table(nmax: int, x) -> np.ndarray:
    """All normalized Hermite functions 0..nmax at once, shape (nmax+1, ...)."""
    nmax = _check_degree(nmax)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, nmax):
        out[k + 1] = (x * math.sqrt(2.0 / (k + 1)) * out[k]
                      - math.sqrt(k / (k + 1.0)) * out[k - 1])
    return out


def laguerre_assoc(m: int, a: float, x):
    """Associated Laguerre polynomial L_m^a(x), vectorized over x."""
    m = _check_degree(m)
    return eval_genlaguerre(m, a, x)


def pochhammer(a: Scalar, k: int) -> Scalar:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1."""
    k = _check_degree(k, "k")
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def hyp2f1_terminating(m: int, n: int, c: Scalar, z: Scalar) -> Scalar:
    """Terminating 2F1(-m, -n; c; z) summed exactly to min(m, n) terms.

    Raises ParameterDegeneracyError when c + k = 0 is hit for some
    k < min(m, n), i.e. when a lower Pochhammer factor vanishes while the
    numerator is still alive.
    """
    m = _check_degree(m, "m")
    n = _check_degree(n, "n")
    kmax = min(m, n)
    total = 1.0 + 0.0 * z  # promotes to complex when z is complex
    term = total
    for k in range(kmax):
        den = c + k
        if den == 0:
            raise ParameterDegeneracyError(
                f"lower parameter c={c!r} hits zero at k={k + 1} "
                f"before termination at {kmax}")
        term = term * ((k - m) * (k - n) * z) / (den * (k + 1))
        total += term
    return total


def hyp2f1_even_odd(k: int, n: int, zeta: Scalar) -> complex:
    """2F1(-k, -n; (1-k-n)/2; (1 + i zeta)/2) via the even/odd reduction.

    Defined for k + n even only.  The reduction maps the half-integer
    lower parameter to a plain terminating sum with lower parameter 1/2
    (both degrees even) or 3/2 (both odd):

        k=2r, n=2s   ->  [(1/2)_r (1/2)_s / (1/2)_{r+s}] 2F1(-r,-s; 1/2; -zeta^2)
        k=2r+1,n=2s+1 -> -[(3/2)_r (3/2)_s / (3/2)_{r+s}] i zeta
                                                  2F1(-r,-s; 3/2; -zeta^2)
    """
    k = _check_degree(k, "k")
    n = _check_degree(n, "n")
    if (k + n) % 2:
        raise ValueError(f"k + n must be even, got k={k}, n={n}")
    if k % 2 == 0:
        r, s, c = k // 2, n // 2, 0.5
        front = 1.0 + 0j
    else:
        r, s, c = (k - 1) // 2, (n - 1) // 2, 1.5
        front = -1j * zeta
    ratio = math.exp(gammaln(c + r) + gammaln(c + s)
                     - gammaln(c + r + s) - gammaln(c))
    return front * ratio * hyp2f1_terminating(r, s, c, -(zeta * zeta))


def hyp2f0_terminating(n: int, m: int, z: Scalar) -> Scalar:
    """Terminating 2F0(-n, -m; ; z) = sum_k (-n)_k (-m)_k z^k / k!."""
    n = _check_degree(n, "n")
    m = _check_degree(m, "m")
    total = 1.0 + 0.0 * z
    term = total
    for k in range(min(m, n)):
        term = term * ((k - n) * (k - m) * z) / (k + 1)
        total += term
    return total


def _bailey_core(m: int, n: int, a: Scalar, b: Scalar, lam2: Scalar) -> complex:
    """integral(exp(-lam2 x^2) H_m(a x) H_n(b x) dx), lam2 in the right half plane.

    Uses the even/odd-reduced closed form multiplied through so the value
    is a polynomial in sa2 = a^2 - lam2, sb2 = b^2 - lam2 and (a b)^2; the
    only branched factor left is lam2^(-(m+n+1)/2) (principal).
    """
    if (m + n) % 2:
        return 0.0j
    sa2 = a * a - lam2
    sb2 = b * b - lam2
    ab2 = (a * b) * (a * b)
    if m % 2 == 0:
        r, s, c = m // 2, n // 2, 0.5
        front = 1.0 + 0j
    else:
        r, s, c = (m - 1) // 2, (n - 1) // 2, 1.5
        front = complex(a * b)
    # sum_k [(-r)_k (-s)_k / ((c)_k k!)] (ab)^(2k) sa2^(r-k) sb2^(s-k)
    kmax = min(r, s)
    terms = []
    coeff = 1.0
    for k in range(kmax + 1):
        terms.append(coeff * ab2**k * sa2 ** (r - k) * sb2 ** (s - k))
        coeff = coeff * ((k - r) * (k - s)) / ((c + k) * (k + 1))
    poly = sum(terms)
    log_ratio = (gammaln(c + r) + gammaln(c + s)
                 - gammaln(c + r + s) - gammaln(c))
    log_front = ((m + n) * math.log(2.0)
                 + gammaln(0.5 * (m + n + 1))
                 - 0.5 * (m + n + 1) * np.log(complex(lam2)))
    return front * poly * complex(np.exp(log_front + log_ratio))


def bailey_integral(m: int, n: int, a: float, b: float, lambda2: float) -> float:
    """Closed form of integral(exp(-lambda2 x^2) H_m(a x) H_n(b x) dx).

    Zero for odd m + n; requires lambda2 > 0.  Exact (not a limit) at the
    degenerate points a^2 = lambda2 or b^2 = lambda2, where orthogonality
    of the Hermite system reappears.
    """
    m = _check_degree(m, "m")
    n = _check_degree(n, "n")
    lambda2 = float(lambda2)
    if not lambda2 > 0.0:
        raise ValueError(f"lambda2 must be positive, got {lambda2!r}")
    value = _bailey_core(m, n, float(a), float(b), lambda2)
    scale = max(1.0, abs(value))
    if abs(value.imag) > 1e-10 * scale:
        raise ArithmeticError(f"unexpected imaginary residual {value.imag!r}")
    return value.real

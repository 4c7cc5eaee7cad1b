"""Jacobi polynomials and the Gauss hypergeometric values used for normalization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DegreeTooLarge, OutOfRegion

MAX_DEGREE = 64


@dataclass(frozen=True)
class JacobiParams:
    n: int
    alpha: float
    beta_j: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Jacobi degree must be >= 0")
        if self.n > MAX_DEGREE:
            raise DegreeTooLarge(f"degree {self.n} exceeds cap {MAX_DEGREE}")

    @property
    def admissible(self) -> bool:
        """Both exponents above -1, as required for an orthogonality weight."""
        return self.alpha > -1 and self.beta_j > -1


def jacobi_eval(jp: JacobiParams, x):
    """P_n^(alpha, beta)(x) by the three-term recurrence.

    Works for scalar or array ``x`` and any real ``alpha``, ``beta``.  When a
    recurrence denominator vanishes (only possible for ``alpha + beta`` a
    negative integer) the explicit sum is used instead.
    """
    n, a, b = jp.n, jp.alpha, jp.beta_j
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        denom = 2 * k * (k + a + b) * (s - 2)
        if denom == 0:
            return jacobi_sum(jp, x)
        c1 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c2 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p = p, (c1 * p - c2 * p_prev) / denom
    return p if p.ndim else float(p)


def _rising(q, k: int):
    out = 1
    for i in range(k):
        out *= q + i
    return out


def jacobi_sum(jp: JacobiParams, x, dps: int = 50):
    """P_n^(alpha, beta)(x) from the explicit gamma-ratio sum in powers of (x-1)/2.

    ``Gamma(n+a+1)/Gamma(m+a+1)`` and ``Gamma(n+a+b+m+1)/Gamma(n+a+b+1)`` are
    formed as rising factorials so poles of the individual gammas cancel.  The
    alternating terms cancel heavily near ``x = -1``, so the sum is carried
    out in ``dps``-digit arithmetic.
    """
    n = jp.n
    with mpmath.workdps(dps):
        a, b = mpmath.mpf(jp.alpha), mpmath.mpf(jp.beta_j)
        coefs = [
            math.comb(n, m) * _rising(m + a + 1, n - m) * _rising(n + a + b + 1, m)
            / math.factorial(n)
            for m in range(n + 1)
        ]

        def one(xv):
            t = (mpmath.mpf(float(xv)) - 1) / 2
            return float(mpmath.fsum(c * t**m for m, c in enumerate(coefs)))

        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return one(x)
        return np.array([one(v) for v in x.ravel()]).reshape(x.shape)


def jacobi_at_one(jp: JacobiParams) -> float:
    """Endpoint value ``Gamma(n+a+1) / (Gamma(a+1) n!)``."""
    return float(_rising(jp.alpha + 1, jp.n)) / math.factorial(jp.n)


def hyp2f1_series(a: float, b: float, c: float, z: float, tol: float = 1e-17,
                  max_terms: int = 10_000) -> float:
    """Direct power-series summation of 2F1(a, b; c; z) for ``|z| < 1``."""
    if abs(z) >= 1:
        raise OutOfRegion("series summation needs |z| < 1")
    term, total = 1.0, 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if term == 0.0 or abs(term) < tol * abs(total):
            return total
    raise ArithmeticError("2F1 series did not converge")


def hyp2f1_half(A: float, b: float) -> float:
    """2F1(1 - A, b; 1 + b; 1/2) in closed form, valid when ``b == A``.

    The value is ``sqrt(pi) / 2^A * Gamma(1 + A) / Gamma(1/2 + A)``: Pfaff's
    transformation sends the argument 1/2 to -1 and Kummer's theorem then
    applies, which needs ``b == A``.
    """
    if abs(A - b) > 1e-12 * max(1.0, abs(b)):
        raise OutOfRegion(f"gamma identity requires b == A, got A={A}, b={b}")
    return math.sqrt(math.pi) / 2.0**A * math.gamma(1 + A) / math.gamma(0.5 + A)

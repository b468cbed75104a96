"""Complex log-gamma, Hurwitz zeta and holomorphic differentiation.

Everything here is scalar, uses ``cmath`` and the principal branch of the
logarithm.  The Bernoulli table is built once at import time and never
mutated afterwards.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import ConsistencyError, DomainError, PoleError

HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Euler-Maclaurin / Stirling truncation: Bernoulli numbers B_2 .. B_20.
N_BERNOULLI_TERMS = 10
MIN_SHIFT = 15.0


def _bernoulli_numbers(n_max: int) -> list[Fraction]:
    # B_0..B_n_max with B_1 = -1/2, via sum_{k<m} C(m+1, k) B_k = -(m+1) B_m
    B = [Fraction(0)] * (n_max + 1)
    B[0] = Fraction(1)
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * B[k]
        B[m] = -acc / (m + 1)
    return B


_B = _bernoulli_numbers(2 * N_BERNOULLI_TERMS)
BERNOULLI_EVEN: tuple[float, ...] = tuple(float(_B[2 * j]) for j in range(1, N_BERNOULLI_TERMS + 1))
# B_{2j} / (2j)!  (Euler-Maclaurin)
_EM_COEFFS = tuple(float(_B[2 * j] / math.factorial(2 * j)) for j in range(1, N_BERNOULLI_TERMS + 1))
# B_{2j} / (2j (2j-1))  (Stirling)
_STIRLING_COEFFS = tuple(float(_B[2 * j] / (2 * j * (2 * j - 1))) for j in range(1, N_BERNOULLI_TERMS + 1))


def is_nonpositive_integer(q: complex) -> bool:
    return q.imag == 0.0 and q.real <= 0.0 and q.real == math.floor(q.real)


def log_gamma(q: complex) -> complex:
    """Principal branch of log Gamma(q).

    This is the analytic continuation from the positive reals with the cut
    along the negative real axis.  The argument is shifted upward with the
    recurrence until ``Re(q + N) >= 15`` and the Stirling series (through
    B_20) is evaluated there.
    """
    q = complex(q)
    if is_nonpositive_integer(q):
        raise PoleError(f"log_gamma has a pole at q = {q.real:g}")
    shift = 0
    while (q + shift).real < MIN_SHIFT or abs(q + shift) < MIN_SHIFT:
        shift += 1
    head = 0j
    for k in range(shift):
        head += cmath.log(q + k)
    w = q + shift
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for c in _STIRLING_COEFFS:
        series += c * power
        power *= inv2
    stirling = (w - 0.5) * cmath.log(w) - w + HALF_LOG_TWO_PI + series
    return stirling - head


def gamma(q: complex) -> complex:
    return cmath.exp(log_gamma(q))


def _cpow(base: complex, z: complex) -> complex:
    """Principal power base**(-z)."""
    return cmath.exp(-z * cmath.log(base))


def hurwitz_series(z: complex, q: complex) -> complex:
    """Continued sum_{nu>=0} (q + nu)^(-z) for q off the ray (-inf, 0].

    Powers are principal.  The first N terms are summed directly, the rest
    by Euler-Maclaurin at ``q + N``; N is large enough that the Bernoulli
    tail is below double precision for |z| <= 20.
    """
    z = complex(z)
    q = complex(q)
    if z == 1:
        raise PoleError("Hurwitz zeta has a pole at z = 1")
    if q.imag == 0.0 and q.real <= 0.0:
        raise DomainError(f"q = {q} lies on the branch cut (-inf, 0]")
    target = max(MIN_SHIFT, abs(z) + MIN_SHIFT)
    shift = 0
    while (q + shift).real < target:
        shift += 1
    total = 0j
    for k in range(shift):
        total += _cpow(q + k, z)
    a = q + shift
    log_a = cmath.log(a)
    a_mz = cmath.exp(-z * log_a)
    total += a * a_mz / (z - 1.0) + 0.5 * a_mz
    # sum_j B_2j/(2j)! * z(z+1)...(z+2j-2) * a^(-z-2j+1)
    rising = z
    term_pow = a_mz / a
    inv_a2 = 1.0 / (a * a)
    for j, c in enumerate(_EM_COEFFS, start=1):
        total += c * rising * term_pow
        rising *= (z + 2 * j - 1) * (z + 2 * j)
        term_pow *= inv_a2
    return total


def hurwitz_zeta(z: complex, q: complex) -> complex:
    """Hurwitz zeta function zeta(z, q) for Re(q) > 0, z != 1."""
    q = complex(q)
    if q.real <= 0.0:
        raise DomainError(f"hurwitz_zeta requires Re(q) > 0, got q = {q}")
    return hurwitz_series(z, q)


def holomorphic_derivative(f: Callable[[complex], complex], z0: complex,
                           radius: float = 0.25, n: int = 32) -> complex:
    """First derivative of a holomorphic function by the Cauchy integral formula.

    Trapezoidal rule on the circle |z - z0| = radius; the error decays like
    (radius / R)**n where R is the distance from z0 to the nearest
    singularity.  No subtraction of nearby values, so no step-size
    cancellation.
    """
    z0 = complex(z0)
    acc = 0j
    for j in range(n):
        u = cmath.exp(2j * math.pi * j / n)
        acc += f(z0 + radius * u) / u
    return acc / (n * radius)


def central_difference(f: Callable[[complex], complex], z0: complex, h: float = 1e-6) -> complex:
    return (f(z0 + h) - f(z0 - h)) / (2.0 * h)


def hurwitz_zeta_dz0_routes(q: complex) -> tuple[complex, complex]:
    """(numerical z-derivative of hurwitz_zeta at 0, Lerch closed form)."""
    q = complex(q)
    if q.real <= 0.0:
        raise DomainError(f"hurwitz_zeta_dz0 requires Re(q) > 0, got q = {q}")
    numeric = holomorphic_derivative(lambda z: hurwitz_series(z, q), 0.0)
    lerch = log_gamma(q) - HALF_LOG_TWO_PI
    return numeric, lerch


def hurwitz_zeta_dz0(q: complex, tol: float = 1e-8) -> complex:
    """d/dz zeta(z, q) at z = 0, i.e. log Gamma(q) - log(2 pi)/2.

    The Lerch value is returned after it has been checked against a
    numerical derivative of :func:`hurwitz_zeta`.
    """
    numeric, lerch = hurwitz_zeta_dz0_routes(q)
    if abs(numeric - lerch) >= tol:
        raise ConsistencyError(
            f"Lerch identity check failed at q = {q}: |{numeric} - {lerch}| >= {tol}")
    return lerch


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def composite_gauss_legendre(a: float, b: float, n_panels: int, order: int = 16
                             ) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = gauss_legendre(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights

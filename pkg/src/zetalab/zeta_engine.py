"""Euler products, log-derivatives and growth diagnostics of dynamical zeta functions.

Convention: zeta(s) = prod_gamma (1 - exp(-s l(gamma)))^(-eps_gamma).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError, InsufficientDataError, PoleError
from .orbit_models import (MorseModel, OrbitEnsemble, ToralModel, counting_function,
                           fit_growth_rate)

ZERO_TOL = 1e-14
VARIANTS = ("signed", "plus", "minus")


@dataclass
class EvalResult:
    value: complex
    error_bound: float
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.error_bound >= 0:
            raise ValueError(f"error_bound must be nonnegative, got {self.error_bound}")


@dataclass(frozen=True)
class ConvergenceRegion:
    r: float
    m: float

    @property
    def zeta_abscissa(self) -> float:
        return max(self.r, math.log(2.0) / self.m)

    @property
    def b(self) -> float:
        return max(1.0, self.r, math.log(2.0) / self.m)


def convergence_region(ensemble: OrbitEnsemble) -> ConvergenceRegion:
    return ConvergenceRegion(ensemble.abscissa, ensemble.min_length)


# ------------------------------------------------------------ tail bounds ---

def pair_count_bound(x: float, a: float, m: float) -> float:
    """Upper bound x e^{a x} / m + 1 on #{(gamma, k) : k l(gamma) <= x}."""
    return x * math.exp(a * x) / m + 1.0


def _sup_power_exp(p: float, sigma: float, x0: float, x1: float) -> float:
    """sup of x^p e^{-sigma x} over [x0, x1], x0 > 0."""
    def g(x):
        return math.exp(p * math.log(x) - sigma * x)
    best = max(g(x0), g(x1))
    if sigma > 0 and p > 0:
        peak = p / sigma
        if x0 < peak < x1:
            best = max(best, g(peak))
    return best


def orbit_tail_bound(ensemble: OrbitEnsemble, sigma: float, power: float = 0.0,
                     weight: float = 2.0, rel_stop: float = 1e-18) -> float:
    """Bound on sum over orbits beyond the cutoff of weight * l^power * e^{-sigma l}.

    Orbits with length in (X + j, X + j + 1] number at most the pair-count
    bound at X + j + 1 (the growth estimate is assumed to hold past the
    cutoff).  Returns inf when sigma does not exceed the bound abscissa.
    """
    if ensemble.complete:
        return 0.0
    a = ensemble.bound_abscissa
    if sigma <= a:
        return math.inf
    X = ensemble.cutoff
    m = ensemble.min_length
    total = 0.0
    j = 0
    while True:
        lo, hi = X + j, X + j + 1
        term = weight * pair_count_bound(hi, a, m) * _sup_power_exp(power, sigma, lo, hi)
        total += term
        j += 1
        if j > 20 and term <= rel_stop * total:
            break
        if j > 100000:
            return math.inf
    return total


# ------------------------------------------------------------- products ---

def log1m(w: np.ndarray) -> np.ndarray:
    """log(1 - w), accurate for small |w|."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < 1e-4
    ws = w[small]
    out[small] = -(ws + ws * ws / 2 + ws ** 3 / 3 + ws ** 4 / 4)
    out[~small] = np.log(1.0 - w[~small])
    return out


def _exponents(ensemble: OrbitEnsemble, variant: str) -> np.ndarray:
    # plus: every eps = +1 (exponent -1); minus: every eps = -1 (exponent +1)
    if variant == "signed":
        return -ensemble.indices * ensemble.counts
    if variant == "plus":
        return -ensemble.counts
    if variant == "minus":
        return ensemble.counts
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _check_region(ensemble: OrbitEnsemble, s: complex):
    if ensemble.complete:
        return
    region = convergence_region(ensemble)
    if s.real <= math.log(2.0) / ensemble.min_length:
        raise DomainError(
            f"Re(s) = {s.real:g} <= log 2 / m = {math.log(2.0) / ensemble.min_length:g}")
    if s.real <= region.zeta_abscissa:
        raise DomainError(f"Re(s) = {s.real:g} is not inside the convergence half-plane "
                          f"Re(s) > {region.zeta_abscissa:g}")


def euler_product(ensemble: OrbitEnsemble, s: complex, variant: str = "signed") -> EvalResult:
    """Truncated Euler product with a bound on the missing tail.

    For complete (finite) ensembles the product is exact and is evaluated
    for every s; a vanishing factor with negative exponent is a pole.
    """
    s = complex(s)
    _check_region(ensemble, s)
    expo = _exponents(ensemble, variant)
    w = np.exp(-s * ensemble.lengths)
    one_minus = np.abs(1.0 - w)
    vanishing = one_minus < ZERO_TOL
    if np.any(vanishing):
        # vanishing factors share the same e^{-s l} = 1; only their net exponent matters
        net = int(np.sum(expo[vanishing]))
        if net < 0:
            raise PoleError(f"zeta has a pole at s = {s}")
        if net > 0:
            return EvalResult(0j, 0.0, {"variant": variant, "zero": True, "cutoff": ensemble.cutoff})
        # removable: 1 - e^{-s l} ~ l (s - s0), so the limit keeps prod l^expo
        scale = float(np.prod(ensemble.lengths[vanishing] ** expo[vanishing]))
        expo, w = expo[~vanishing], w[~vanishing]
    else:
        scale = 1.0
    value = scale * complex(np.exp(np.sum(expo * log1m(w))))
    tail = orbit_tail_bound(ensemble, s.real)
    bound = abs(value) * math.expm1(tail) if math.isfinite(tail) else math.inf
    return EvalResult(value, bound, {"variant": variant, "cutoff": ensemble.cutoff,
                                     "tail_log_bound": tail, "bound_abscissa": ensemble.bound_abscissa})


def log_derivative_values(ensemble: OrbitEnsemble, s) -> np.ndarray:
    """zeta'/zeta at an array of s (records only, no tail bound)."""
    s = np.asarray(s, dtype=complex)
    L = ensemble.lengths
    coef = L * ensemble.indices * ensemble.counts
    w = np.exp(-np.multiply.outer(s, L))
    return -np.sum(coef * w / (1.0 - w), axis=-1)


def log_derivative_abs_sum(ensemble: OrbitEnsemble, sigma: float) -> float:
    """sum over records of l count e^{-sigma l} / (1 - e^{-sigma l}): dominates |zeta'/zeta| at Re >= sigma."""
    L = ensemble.lengths
    w = np.exp(-sigma * L)
    return float(np.sum(L * ensemble.counts * w / (1.0 - w)))


def log_derivative(ensemble: OrbitEnsemble, s: complex) -> EvalResult:
    """zeta'/zeta(s) = -sum l eps count e^{-s l}/(1 - e^{-s l}), per-record closed form."""
    s = complex(s)
    _check_region(ensemble, s)
    w = np.exp(-s * ensemble.lengths)
    if np.any(np.abs(1.0 - w) < ZERO_TOL):
        raise PoleError(f"log-derivative is singular at s = {s}")
    value = complex(log_derivative_values(ensemble, s))
    bound = orbit_tail_bound(ensemble, s.real, power=1.0)
    return EvalResult(value, bound, {"cutoff": ensemble.cutoff})


def log_zeta_series(ensemble: OrbitEnsemble, s: complex, rel_tol: float = 1e-18) -> complex:
    """log zeta(s) as the double series sum_records eps count sum_k e^{-s k l}/k."""
    s = complex(s)
    _check_region(ensemble, s)
    total = 0j
    for r in ensemble.records:
        w = cmath.exp(-s * r.length)
        aw = abs(w)
        if aw >= 1.0:
            raise DomainError(f"series diverges at s = {s} for length {r.length}")
        inner = 0j
        power = 1 + 0j
        k = 0
        while True:
            k += 1
            power *= w
            inner += power / k
            if aw ** k / k <= rel_tol * max(abs(inner), 1e-300) or k > 100000:
                break
        total += r.index * r.count * inner
    return total


# ---------------------------------------------------------- closed forms ---

def toral_zeta_closed(model: ToralModel, s):
    """det(I - e^{-s} A) / (1 - e^{-s})^2 for the suspension of A."""
    s_arr = np.asarray(s, dtype=complex)
    w = np.exp(-s_arr)
    den = (1.0 - w) ** 2
    if np.any(np.abs(1.0 - w) < ZERO_TOL):
        raise PoleError(f"toral zeta has a pole at s in 2 pi i Z (s = {s})")
    val = (1.0 - model.trace * w + model.det * w * w) / den
    return complex(val) if val.ndim == 0 else val


def morse_zeta_closed(model: MorseModel, s):
    """(1 - e^{-s})^{2g - 2}."""
    s_arr = np.asarray(s, dtype=complex)
    val = (1.0 - np.exp(-s_arr)) ** (2 * model.genus - 2)
    return complex(val) if val.ndim == 0 else val


# ------------------------------------------------------- counting data ---

def counting_nu(ensemble: OrbitEnsemble, x: float) -> int:
    """nu(x) = number of primitive closed orbits with length <= x."""
    if x > ensemble.cutoff:
        raise DomainError(f"x = {x} exceeds the completeness cutoff {ensemble.cutoff}")
    return sum(r.count for r in ensemble.records if r.length <= x)


def abscissa_estimate(ensemble: OrbitEnsemble) -> float:
    """Regression estimate of limsup log nu(x) / x.

    Complete (finite) ensembles have nu eventually constant, so 0.
    """
    if ensemble.complete:
        return 0.0
    x, nu = counting_function(ensemble.lengths, ensemble.counts)
    if len(x) < 3:
        raise InsufficientDataError(
            f"abscissa estimate needs >= 3 distinct lengths, ensemble has {len(x)}")
    return fit_growth_rate(x, nu)


def pair_count(ensemble: OrbitEnsemble, x: float) -> int:
    """#{(gamma, k) : k l(gamma) <= x} = sum count * floor(x / l)."""
    if x > ensemble.cutoff:
        raise DomainError(f"x = {x} exceeds the completeness cutoff {ensemble.cutoff}")
    return sum(r.count * int(math.floor(x / r.length + 1e-12)) for r in ensemble.records)


def orbit_count_bound_check(ensemble: OrbitEnsemble, x: float) -> bool:
    """Does the pair count at x satisfy x e^{a x}/m + 1 with the ensemble's a and m?"""
    return pair_count(ensemble, x) <= pair_count_bound(x, ensemble.abscissa, ensemble.min_length)


def orbit_count_bound_threshold(ensemble: OrbitEnsemble, x_max: float | None = None) -> float:
    """Smallest x0 with the pair-count bound holding on all of [x0, x_max].

    The pair count is a right-continuous step function and the bound is
    increasing, so violations start at jump points.  Returns inf when the
    bound fails at x_max itself.
    """
    if x_max is None:
        if ensemble.complete:
            raise ValueError("x_max is required for complete ensembles")
        x_max = ensemble.cutoff
    a, m = ensemble.abscissa, ensemble.min_length
    jumps = set()
    for r in ensemble.records:
        k = 1
        while k * r.length <= x_max:
            jumps.add(k * r.length)
            k += 1
    jumps = sorted(jumps)
    x0 = 0.0
    for i, p in enumerate(jumps):
        c = pair_count(ensemble, p)
        nxt = jumps[i + 1] if i + 1 < len(jumps) else x_max
        if c <= pair_count_bound(p, a, m):
            continue
        if pair_count_bound(nxt, a, m) < c or (i + 1 == len(jumps)):
            if i + 1 == len(jumps) and pair_count_bound(x_max, a, m) < c:
                return math.inf
            if i + 1 < len(jumps):
                x0 = nxt
                continue
        lo, hi = p, nxt
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if pair_count_bound(mid, a, m) >= c:
                hi = mid
            else:
                lo = mid
        x0 = hi
    return x0

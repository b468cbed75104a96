"""Orbit-side and spectral-side pairings of the distributional trace formula.

Two test-function families are supported: F(x) = x^{z-1} e^{-s x}, whose
pairing with e^{w x} is Gamma(z) (s - w)^{-z}, and normalized C^infinity
bumps, used for mollified Poisson-summation experiments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cohomology import induced_action
from .errors import DomainError
from .orbit_models import OrbitEnsemble, ToralModel, toral_ensemble
from .regdet import (TWO_PI, GradedSpectrum, SpectrumDescriptor,
                     spectrum_from_action, xi_graded)
from .special import composite_gauss_legendre, gamma, log_gamma
from .zeta_engine import EvalResult, convergence_region, orbit_tail_bound

EPS = 2.220446049250313e-16


# ------------------------------------------------------- test functions ---

@dataclass(frozen=True)
class TestFunctionF:
    """F(x) = x^{z-1} e^{-s x} on (0, inf)."""

    __test__ = False  # not a pytest class

    z: complex
    s: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "s", complex(self.s))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp((self.z - 1) * np.log(x) - self.s * x)

    def derivative(self, x, n: int = 4, growth: float = 0.0):
        """n-th derivative: e^{-sx} sum_j C(n,j) (z-1)_j^falling x^{z-1-j} (-s)^{n-j}.

        A nonzero ``growth`` returns the derivative times e^{growth x}.
        """
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x, dtype=complex)
        falling = 1 + 0j
        for j in range(n + 1):
            total += math.comb(n, j) * falling * np.exp((self.z - 1 - j) * np.log(x)) * (-self.s) ** (n - j)
            falling *= self.z - 1 - j
        return total * np.exp((growth - self.s) * x)

    def abs_derivative_moment(self, growth: float, n: int = 4) -> float:
        """int_0^inf |F^(n)(x)| e^{growth x} dx (needs Re z > n and Re s > growth)."""
        if self.z.real <= n or self.s.real <= growth:
            raise DomainError("moment diverges: need Re(z) > n and Re(s) > growth")
        f = lambda x: abs(complex(self.derivative(np.array([x]), n, growth)[0]))
        peak = max((self.z.real - 1) / (self.s.real - growth), 1.0)
        a, err_a = integrate.quad(f, 0, peak, limit=200, epsabs=0, epsrel=1e-10)
        b, err_b = integrate.quad(f, peak, np.inf, limit=200, epsabs=0, epsrel=1e-10)
        return (a + b) + 2 * (err_a + err_b)


def _bump_profile(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def _profile_mass() -> float:
    x, w = composite_gauss_legendre(-1.0, 1.0, 64, 32)
    return float(np.sum(w * _bump_profile(x)))


PROFILE_MASS = _profile_mass()


@dataclass(frozen=True)
class BumpFunction:
    """exp(-1/(1-u^2)) at u = (x - center)/halfwidth, scaled to unit integral."""

    center: float
    halfwidth: float

    def __post_init__(self):
        if not (self.halfwidth > 0 and self.center - self.halfwidth > 0):
            raise DomainError("bump support must be a nonempty interval inside (0, inf)")

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.halfwidth, self.center + self.halfwidth

    def __call__(self, x):
        u = (np.asarray(x, dtype=float) - self.center) / self.halfwidth
        return _bump_profile(u) / (self.halfwidth * PROFILE_MASS)


# ----------------------------------------------------- orbit pairing ---

def _record_k_sum(tf: TestFunctionF, length: float, rel: float = 1e-18) -> tuple[complex, float]:
    """sum_{k>=1} F(k l) and a bound on the part left out."""
    sigma, p = tf.s.real, tf.z.real - 1
    peak_k = max(1, math.ceil(p / (sigma * length))) if p > 0 else 1
    k_max = peak_k + 64
    while True:
        ks = np.arange(1, k_max + 1, dtype=float)
        vals = tf(ks * length)
        last = abs(vals[-1])
        # beyond k_max the ratio of successive moduli is at most r
        r = math.exp(-sigma * length) * ((k_max + 1) / k_max) ** max(p, 0)
        total = complex(np.sum(vals))
        if r < 1:
            tail = last * r / (1 - r)
            if tail <= rel * max(abs(total), 1e-300) or k_max > 10 ** 6:
                return total, tail
        k_max *= 2


def orbit_pairing(ensemble: OrbitEnsemble, f, weighted: bool = True) -> EvalResult:
    """sum over records of length * count * (index) * sum_{k>=1} f(k length).

    ``weighted=False`` drops the index, pairing with the unsigned measure.
    """
    signs = ensemble.indices if weighted else np.ones(len(ensemble.records))
    if isinstance(f, BumpFunction):
        lo, hi = f.support
        if hi > ensemble.cutoff:
            raise DomainError(f"bump support reaches {hi} beyond the cutoff {ensemble.cutoff}")
        total = 0.0
        for r, sgn in zip(ensemble.records, signs):
            ks = np.arange(max(1, math.ceil(lo / r.length)), math.floor(hi / r.length) + 1)
            if len(ks):
                total += r.length * r.count * sgn * float(np.sum(f(ks * r.length)))
        return EvalResult(complex(total), 0.0, {"kind": "bump", "weighted": weighted})
    if not isinstance(f, TestFunctionF):
        raise TypeError("f must be a TestFunctionF or BumpFunction")
    if f.z.real < 1:
        raise DomainError("F pairing needs Re(z) >= 1")
    if f.s.real <= ensemble.abscissa:
        raise DomainError(f"Re(s) = {f.s.real:g} must exceed the abscissa {ensemble.abscissa:g}")
    total = 0j
    bound = 0.0
    for r, sgn in zip(ensemble.records, signs):
        val, tail = _record_k_sum(f, r.length)
        w = r.length * r.count
        total += w * sgn * val
        bound += w * tail
    # orbits beyond the cutoff: pairs (gamma, k) with k l > X, weight l <= k l
    bound += orbit_tail_bound(ensemble, f.s.real, power=f.z.real, weight=1.0)
    return EvalResult(total, bound, {"kind": "F", "z": f.z, "s": f.s, "weighted": weighted})


# ----------------------------------------------------- spectral side ---

def mu_w_laplace(w: complex, tf: TestFunctionF) -> complex:
    """int_0^inf F(x) e^{w x} dx = Gamma(z) (s - w)^{-z}."""
    d = tf.s - complex(w)
    if d.real <= 0:
        raise DomainError("Re(s) must exceed Re(w)")
    return cmath.exp(log_gamma(tf.z) - tf.z * cmath.log(d))


def mu_w_quadrature(w: complex, tf: TestFunctionF) -> complex:
    """Adaptive-quadrature oracle for mu_w_laplace."""
    w = complex(w)
    d = tf.s - w
    if d.real <= 0:
        raise DomainError("Re(s) must exceed Re(w)")

    def part(fn):
        peak = max((tf.z.real - 1) / d.real, 1.0)
        pieces = [(0.0, peak), (peak, peak + 40.0 / d.real), (peak + 40.0 / d.real, np.inf)]
        return sum(integrate.quad(fn, a, b, limit=400, epsabs=0, epsrel=1e-13)[0] for a, b in pieces)

    g = lambda x: cmath.exp((tf.z - 1) * math.log(x) - d * x) if x > 0 else 0j
    return complex(part(lambda x: g(x).real), part(lambda x: g(x).imag))


def _ladder_tail_bound(c1: float, base: complex, N: int) -> float:
    """2 c1 sum_{nu > N} |rho_nu|^{-4} with |rho_nu| >= 2 pi nu - |Im base|."""
    gap = TWO_PI * N - abs(base.imag)
    if gap <= 0:
        return math.inf
    return 2 * c1 / (3 * TWO_PI * gap ** 3)


def spectral_pairing(spec: SpectrumDescriptor, tf: TestFunctionF, truncation: int,
                     mode: str = "isometric") -> EvalResult:
    """2 mu_0(F) - sum over the spectrum of mu_rho(F), ladders cut at |nu| <= truncation.

    Four integrations by parts give |mu_rho(F)| <= c1 |rho|^{-4} with
    c1 = int |F''''| e^{Re(rho) x} dx, which bounds the ladder tails.
    """
    if tf.z.real <= 5:
        raise DomainError("spectral pairing needs Re(z) > 5")
    if tf.s.real <= 1:
        raise DomainError("spectral pairing needs Re(s) > 1")
    if mode == "isometric":
        if not spec.is_isometric:
            raise DomainError("isometric mode needs purely imaginary spectrum")
    elif mode != "general":
        raise ValueError("mode must be 'isometric' or 'general'")
    if spec.real_part_max() >= tf.s.real:
        raise DomainError("Re(s) must exceed the real part of every spectral point")
    total = 2 * mu_w_laplace(0, tf)
    bound = 0.0
    c1_cache: dict[float, float] = {}
    for lad in spec.ladders:
        nus = np.arange(-truncation, truncation + 1)
        part = sum(mu_w_laplace(lad.base + 2j * math.pi * nu, tf) for nu in nus)
        total -= lad.multiplicity * part
        g = lad.base.real
        if g not in c1_cache:
            c1_cache[g] = tf.abs_derivative_moment(g)
        bound += lad.multiplicity * _ladder_tail_bound(c1_cache[g], lad.base, truncation)
    for rho, mult in spec.isolated:
        total -= mult * mu_w_laplace(rho, tf)
    return EvalResult(total, bound, {"truncation": truncation, "mode": mode})


def graded_spectral_pairing(graded: GradedSpectrum, tf: TestFunctionF, truncation: int) -> EvalResult:
    """sum_n (-1)^n sum_{rho in degree n} mu_rho(F), ladders cut at |nu| <= truncation."""
    total = 0j
    bound = 0.0
    for n in range(3):
        sign = (-1) ** n
        for lad in graded[n].ladders:
            for nu in range(-truncation, truncation + 1):
                total += sign * lad.multiplicity * mu_w_laplace(lad.base + 2j * math.pi * nu, tf)
            c1 = tf.abs_derivative_moment(lad.base.real)
            bound += lad.multiplicity * _ladder_tail_bound(c1, lad.base, truncation)
        for rho, mult in graded[n].isolated:
            total += sign * mult * mu_w_laplace(rho, tf)
    return EvalResult(total, bound, {"truncation": truncation})


def synthetic_imaginary_spectrum(n_points: int, scale: float = 1.0) -> SpectrumDescriptor:
    """rho = +/- i scale j^{1/3}, j = 1..n_points."""
    pts = []
    for j in range(1, n_points + 1):
        r = scale * j ** (1.0 / 3.0)
        pts += [1j * r, -1j * r]
    return SpectrumDescriptor((), tuple(pts))


def spectral_terms(spec: SpectrumDescriptor, tf: TestFunctionF) -> tuple[np.ndarray, np.ndarray]:
    """(|rho|, |mu_rho(F)|) over the isolated points, in stored order."""
    rhos = np.array([abs(rho) for rho, _ in spec.isolated])
    mus = np.array([abs(mu_w_laplace(rho, tf)) * m for rho, m in spec.isolated])
    return rhos, mus


def decay_exponent(radii: np.ndarray, values: np.ndarray, tail_fraction: float = 0.5) -> float:
    """Slope of log values against log radii over the largest radii."""
    order = np.argsort(radii)
    r, v = radii[order], values[order]
    start = int(len(r) * (1 - tail_fraction))
    slope, _ = np.polyfit(np.log(r[start:]), np.log(v[start:]), 1)
    return float(slope)


def imaginary_spectrum_decay(n_points: int, tf: TestFunctionF, scale: float = 1.0) -> dict:
    """Decay diagnostics for +/- i scale j^{1/3}: exponent in |rho| and in j, and Cauchy increments."""
    j = np.arange(1, n_points + 1)
    radii = scale * j ** (1.0 / 3.0)
    inc = np.array([abs(mu_w_laplace(1j * r, tf)) + abs(mu_w_laplace(-1j * r, tf)) for r in radii])
    exp_rho = decay_exponent(radii, inc)
    exp_j = decay_exponent(j.astype(float), inc)
    partial = np.cumsum(inc)
    return {"exponent_rho": exp_rho, "exponent_j": exp_j, "increments": inc,
            "partial_sums": partial, "last_increment": float(inc[-1])}


# -------------------------------------------------- xi-orbit identity ---

def _model_data(model, truncation: int) -> tuple[GradedSpectrum, OrbitEnsemble]:
    if isinstance(model, ToralModel):
        return spectrum_from_action(induced_action(model)), toral_ensemble(model, truncation)
    if isinstance(model, tuple) and len(model) == 2:
        graded, ensemble = model
        if isinstance(graded, GradedSpectrum) and isinstance(ensemble, OrbitEnsemble):
            return graded, ensemble
    raise TypeError("model must be a ToralModel or a (GradedSpectrum, OrbitEnsemble) pair; "
                    "the degree-1 spectrum of a Morse model is not known")


def verify_xi_orbit_identity(model, z: complex, s: complex, truncation: int = 60,
                             tol: float = 1e-6) -> dict:
    """Compare sum_n (-1)^n xi_n(z, s) with the orbit pairing of F divided by Gamma(z)."""
    z, s = complex(z), complex(s)
    if z.real <= 5:
        raise DomainError(f"Re(z) = {z.real:g}; the identity is asserted for Re(z) > 5")
    graded, ensemble = _model_data(model, truncation)
    b = convergence_region(ensemble).b
    if s.real <= b:
        raise DomainError(f"Re(s) = {s.real:g} must exceed b = {b:g}")
    lhs = xi_graded(graded, z, s)
    orbit = orbit_pairing(ensemble, TestFunctionF(z, s))
    g = gamma(z)
    rhs = orbit.value / g
    bound = orbit.error_bound / abs(g)
    rounding = 1e-12 * max(1.0, abs(lhs), abs(rhs))
    disc = abs(lhs - rhs)
    ok = disc <= bound + rounding and disc <= tol
    return {"lhs": lhs, "rhs": rhs, "discrepancy": disc, "bound": bound + rounding, "pass": bool(ok),
            "params": {"z": z, "s": s, "truncation": truncation, "tol": tol}}


# --------------------------------------------- mollified Poisson check ---

def _bump_ladder_integrals(bump: BumpFunction, base: complex, nu_max: int
                           ) -> tuple[complex, np.ndarray, np.ndarray]:
    """int bump(x) e^{(base + 2 pi i nu) x} dx for nu = 0, +-1, ..., +-nu_max.

    One composite Gauss-Legendre rule serves every nu: 16-node panels, one
    per wavelength of the highest frequency.  e^{2 pi i nu x} is
    advanced by repeated multiplication.
    """
    lo, hi = bump.support
    n_panels = max(8, math.ceil((hi - lo) * max(nu_max, 1)))
    x, w = composite_gauss_legendre(lo, hi, n_panels, 16)
    fw = w * bump(x) * np.exp(complex(base) * x)
    step = np.exp(2j * math.pi * x)
    cur = np.ones_like(step)
    pos = np.empty(nu_max, dtype=complex)
    neg = np.empty(nu_max, dtype=complex)
    zero = complex(np.sum(fw))
    for nu in range(1, nu_max + 1):
        cur *= step
        if nu % 64 == 0:
            cur = np.exp(2j * math.pi * nu * x)  # resynchronize to stop drift
        pos[nu - 1] = np.sum(fw * cur)
        neg[nu - 1] = np.sum(fw * np.conj(cur))
    return zero, pos, neg


def poisson_mollified_check(model: ToralModel, bump: BumpFunction, nu_max: int,
                            tol: float = 1e-6, checkpoints: int = 12) -> dict:
    """Spectral side sum_n (-1)^n sum_ladders sum_{|nu| <= nu_max} int bump e^{rho x}
    against the atomic orbit side."""
    lo, hi = bump.support
    graded = spectrum_from_action(induced_action(model))
    ensemble = toral_ensemble(model, max(1, math.ceil(hi)))
    orbit = orbit_pairing(ensemble, bump).value
    partial = np.zeros(nu_max + 1, dtype=complex)
    for n in range(3):
        for lad in graded[n].ladders:
            zero, pos, neg = _bump_ladder_integrals(bump, lad.base, nu_max)
            contrib = np.empty(nu_max + 1, dtype=complex)
            contrib[0] = zero
            contrib[1:] = pos + neg
            partial += (-1) ** n * lad.multiplicity * np.cumsum(contrib)
    marks = sorted(set(np.unique(np.geomspace(1, nu_max, checkpoints).astype(int)).tolist() + [nu_max]))
    trace = [(int(k), complex(partial[k])) for k in marks]
    final = complex(partial[nu_max])
    disc = abs(final - orbit)
    half = complex(partial[nu_max // 2])
    return {"lhs": final, "rhs": orbit, "discrepancy": disc, "bound": abs(final - half),
            "pass": bool(disc <= tol), "trace": trace,
            "params": {"center": bump.center, "halfwidth": bump.halfwidth, "nu_max": nu_max, "tol": tol}}

"""Hankel-contour quadrature and the contour form of the alternating xi-sum.

The contour runs in from -infinity below the negative real axis
(arg t = -pi), around the circle |t| = delta counterclockwise, and back out
above the axis (arg t = +pi).  On the two edges t^{-z} = r^{-z} e^{+-i pi z},
so their sum collapses to 2 i sin(pi z) int r^{-z} g(-r) dr.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .cohomology import induced_action
from .errors import DomainError
from .orbit_models import MorseModel, OrbitEnsemble, ToralModel, morse_ensemble, toral_ensemble
from .regdet import assemble_determinant_formula, spectrum_from_action, xi_graded
from .special import is_nonpositive_integer, composite_gauss_legendre, holomorphic_derivative, log_gamma
from .zeta_engine import (EvalResult, convergence_region, euler_product, log_derivative_abs_sum,
                          log_derivative_values, log_zeta_series, orbit_tail_bound)

PANEL = 16


@dataclass(frozen=True)
class HankelContour:
    delta: float = 0.5
    t_max: float = 40.0
    n_circle: int = 256
    n_edge: int = 400

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError("delta must be positive")
        if not self.t_max > self.delta:
            raise DomainError("t_max must exceed delta")
        if self.n_circle < 64 or self.n_edge < 200:
            raise DomainError("need n_circle >= 64 and n_edge >= 200")

    @classmethod
    def for_s(cls, s: complex, **kw) -> "HankelContour":
        """Default radius min(0.5, (Re s - 1)/2)."""
        return cls(delta=min(0.5, (complex(s).real - 1) / 2), **kw)

    def coarse(self) -> "HankelContour":
        return HankelContour(self.delta, self.t_max, max(64, self.n_circle // 2), max(200, self.n_edge // 2))

    def nodes(self) -> "ContourNodes":
        # edges: r = delta e^u, graded toward the junction with the circle
        n_edge_panels = max(1, self.n_edge // PANEL)
        u, wu = composite_gauss_legendre(0.0, math.log(self.t_max / self.delta), n_edge_panels, PANEL)
        r = self.delta * np.exp(u)
        wr = wu * r
        n_circ_panels = max(1, self.n_circle // PANEL)
        phi, wphi = composite_gauss_legendre(-math.pi, math.pi, n_circ_panels, PANEL)
        return ContourNodes(self.delta, r, wr, phi, wphi)


@dataclass(frozen=True)
class ContourNodes:
    delta: float
    r: np.ndarray
    wr: np.ndarray
    phi: np.ndarray
    wphi: np.ndarray

    @property
    def circle_points(self) -> np.ndarray:
        return self.delta * np.exp(1j * self.phi)

    def sample(self, g: Callable) -> tuple[np.ndarray, np.ndarray]:
        """g at -r (edges) and on the circle."""
        return np.asarray(g(-self.r.astype(complex)), dtype=complex), np.asarray(g(self.circle_points), dtype=complex)

    def integral(self, g_edge: np.ndarray, g_circ: np.ndarray, z: complex) -> complex:
        """(1/2 pi i) int_C t^{-z} g(t) dt with g frozen at the nodes."""
        z = complex(z)
        log_r = np.log(self.r)
        edges = 2j * cmath.sin(math.pi * z) * np.sum(self.wr * np.exp(-z * log_r) * g_edge)
        t = self.circle_points
        circ = np.sum(self.wphi * np.exp(-z * (math.log(self.delta) + 1j * self.phi)) * g_circ * 1j * t)
        return (edges + circ) / (2j * math.pi)

    def log_integral(self, g_edge: np.ndarray, g_circ: np.ndarray) -> complex:
        """(1/2 pi i) int_C log(t) g(t) dt, i.e. -d/dz at z = 0 of :meth:`integral`."""
        edges = -2j * math.pi * np.sum(self.wr * g_edge)
        t = self.circle_points
        circ = np.sum(self.wphi * (math.log(self.delta) + 1j * self.phi) * g_circ * 1j * t)
        return (edges + circ) / (2j * math.pi)


def _edge_tail(z: complex, T: float, K: float, c: float) -> float:
    """|1/(2 pi i) 2 i sin(pi z) int_T^inf r^{-z} g(-r) dr| for |g(-r)| <= K e^{-c r}."""
    p = -z.real
    if p <= 0:
        integral = T ** p * math.exp(-c * T) / c
    else:
        rate = c - p / T
        if rate <= 0:
            return math.inf
        integral = T ** p * math.exp(-c * T) / rate
    return 2 * math.cosh(math.pi * z.imag) * K * integral / (2 * math.pi)


def hankel_integral(g: Callable, z: complex, contour: HankelContour,
                    decay: tuple[float, float] | None = None) -> EvalResult:
    """(1/2 pi i) int_C t^{-z} g(t) dt.

    ``g`` must accept numpy arrays.  ``decay = (K, c)`` asserts
    |g(-r)| <= K e^{-c r} for r >= t_max and yields the truncation bound;
    without it the bound is infinite.  The quadrature part of the bound is
    the change against a rule with half the nodes.
    """
    z = complex(z)
    fine = contour.nodes()
    value = fine.integral(*fine.sample(g), z)
    coarse = contour.coarse().nodes()
    refine = abs(value - coarse.integral(*coarse.sample(g), z))
    if decay is None:
        tail = math.inf
    else:
        K, c = decay
        if c <= 0:
            raise DomainError("integrand does not decay along the edges; no truncation bound")
        tail = _edge_tail(z, contour.t_max, K, c)
    return EvalResult(value, tail + refine, {"delta": contour.delta, "t_max": contour.t_max,
                                             "n_circle": contour.n_circle, "n_edge": contour.n_edge,
                                             "edge_tail": tail, "refinement": refine})


def gamma_reciprocal_check(c: float, z: complex, contour: HankelContour | None = None) -> dict:
    """(1/2 pi i) int_C t^{-z} e^{c t} dt against c^{z-1}/Gamma(z)."""
    contour = contour or HankelContour()
    z = complex(z)
    res = hankel_integral(lambda t: np.exp(c * t), z, contour, decay=(1.0, c))
    if is_nonpositive_integer(z):
        exact = 0j
    else:
        exact = cmath.exp((z - 1) * math.log(c) - log_gamma(z))
    return {"value": res.value, "exact": exact, "discrepancy": abs(res.value - exact),
            "bound": res.error_bound}


# ----------------------------------------------------- zeta contour data ---

def _ensemble_for(model, cutoff: int) -> OrbitEnsemble:
    if isinstance(model, ToralModel):
        return toral_ensemble(model, cutoff)
    if isinstance(model, MorseModel):
        return morse_ensemble(model)
    if isinstance(model, OrbitEnsemble):
        return model
    raise TypeError("model must be a ToralModel, MorseModel or OrbitEnsemble")


class _LogDerivativeShifted:
    """t -> (zeta'/zeta)(s - t) from orbit data, with bounds."""

    def __init__(self, ensemble: OrbitEnsemble, s: complex):
        self.ensemble = ensemble
        self.s = complex(s)

    def __call__(self, t):
        return log_derivative_values(self.ensemble, self.s - np.asarray(t, dtype=complex))

    def decay(self, T: float) -> tuple[float, float]:
        # every term e^{-(sigma + r) l}/(1 - ...) shrinks at least like e^{-(r - T) m}
        sigma = self.s.real + T
        m = self.ensemble.min_length
        level = log_derivative_abs_sum(self.ensemble, sigma) + orbit_tail_bound(self.ensemble, sigma, power=1.0)
        return level * math.exp(m * T), m

    def truncation_error(self, sigma_min: float) -> float:
        """Sup over Re(s - t) >= sigma_min of the error from orbits past the cutoff."""
        return orbit_tail_bound(self.ensemble, sigma_min, power=1.0)


def _contour_truncation_effect(err: float, z: complex, contour: HankelContour) -> float:
    """Size of (1/2 pi) int_C |t^{-z}| |dt| times a uniform error in g."""
    if err == 0:
        return 0.0
    if z.real <= 1:
        return math.inf
    spread = math.exp(math.pi * abs(z.imag))
    circle = 2 * math.pi * contour.delta ** (1 - z.real)
    edges = 2 * contour.delta ** (1 - z.real) / (z.real - 1)
    return err * spread * (circle + edges) / (2 * math.pi)


def _check_contour(s: complex, contour: HankelContour, ensemble: OrbitEnsemble) -> float:
    b = convergence_region(ensemble).b
    if s.real <= b:
        raise DomainError(f"Re(s) = {s.real:g} must exceed b = {b:g}")
    if not contour.delta < s.real - 1:
        raise DomainError(f"delta = {contour.delta:g} must be below Re(s) - 1 = {s.real - 1:g}")
    return b


def verify_contour_identity(model: ToralModel, z: complex, s: complex, contour: HankelContour | None = None,
                            cutoff: int = 60, tol: float = 1e-4) -> dict:
    """sum_n (-1)^n xi_n(z, s) against -(1/2 pi i) int_C t^{-z} (zeta'/zeta)(s - t) dt."""
    z, s = complex(z), complex(s)
    if z.real <= 5:
        raise DomainError(f"Re(z) = {z.real:g}; the contour identity needs Re(z) > 5")
    contour = contour or HankelContour.for_s(s)
    ensemble = _ensemble_for(model, cutoff)
    _check_contour(s, contour, ensemble)
    lhs = xi_graded(spectrum_from_action(induced_action(model)), z, s)
    g = _LogDerivativeShifted(ensemble, s)
    res = hankel_integral(g, z, contour, decay=g.decay(contour.t_max))
    rhs = -res.value
    trunc = _contour_truncation_effect(g.truncation_error(s.real - contour.delta), z, contour)
    rounding = 1e-12 * max(1.0, abs(lhs))
    bound = res.error_bound + trunc + rounding
    disc = abs(lhs - rhs)
    return {"lhs": lhs, "rhs": rhs, "discrepancy": disc, "bound": bound,
            "pass": bool(disc <= tol), "within_bound": bool(disc <= bound),
            "params": {"z": z, "s": s, "delta": contour.delta, "t_max": contour.t_max,
                       "cutoff": cutoff, "tol": tol}}


def derivative_at_zero_logzeta(model, s: complex, contour: HankelContour | None = None,
                               cutoff: int = 60, tol: float = 1e-4) -> dict:
    """Three routes to log zeta(s).

    (a) minus the z-derivative at 0 of (1/2 pi i) int_C t^{-z} (zeta'/zeta)(s - t) dt,
        with the quadrature nodes frozen;
    (b) -int_0^inf (zeta'/zeta)(s + t) dt by adaptive quadrature;
    (c) the orbit double series sum eps count sum_k e^{-s k l}/k.
    """
    s = complex(s)
    contour = contour or HankelContour.for_s(s)
    ensemble = _ensemble_for(model, cutoff)
    _check_contour(s, contour, ensemble)
    g = _LogDerivativeShifted(ensemble, s)
    nodes = contour.nodes()
    g_edge, g_circ = nodes.sample(g)
    route_a = -holomorphic_derivative(lambda z: nodes.integral(g_edge, g_circ, z), 0.0)
    route_a_direct = nodes.log_integral(g_edge, g_circ)
    integral_at_zero = nodes.integral(g_edge, g_circ, 0.0)

    def real_part(t):
        return complex(log_derivative_values(ensemble, s + t)).real

    def imag_part(t):
        return complex(log_derivative_values(ensemble, s + t)).imag

    opts = dict(limit=400, epsabs=1e-14, epsrel=1e-12)
    route_b = -complex(integrate.quad(real_part, 0, np.inf, **opts)[0],
                       integrate.quad(imag_part, 0, np.inf, **opts)[0])
    route_c = log_zeta_series(ensemble, s)
    log_product = cmath.log(euler_product(ensemble, s).value)
    report = {
        "a": route_a, "b": route_b, "c": route_c,
        "a_log_integral": route_a_direct,
        "integral_at_zero": integral_at_zero,
        "ab": abs(route_a - route_b), "ac": abs(route_a - route_c), "bc": abs(route_b - route_c),
        "c_vs_log_product": abs(route_c - log_product),
        "params": {"s": s, "delta": contour.delta, "t_max": contour.t_max, "cutoff": cutoff, "tol": tol},
    }
    if isinstance(model, ToralModel):
        det = assemble_determinant_formula(spectrum_from_action(induced_action(model)), s)
        report["exp_a_vs_determinant"] = abs(cmath.exp(route_a) - det)
    report["pass"] = bool(max(report["ab"], report["ac"], report["bc"]) <= tol
                          and report["c_vs_log_product"] <= 1e-10)
    return report

"""Induced action on torus cohomology, Lefschetz numbers and the orbit exponential identity.

H^1(f) is represented by A itself.  Using the transpose instead changes
nothing computed here (only traces, determinants and eigenvalues enter).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ModelError
from .orbit_models import Matrix2, ToralModel, mat_pow, toral_fixed_points, toral_orbit_counts
from .zeta_engine import log1m


@dataclass(frozen=True)
class CohomologyAction:
    h0: tuple[tuple[int]]
    h1: Matrix2
    h2: tuple[tuple[int]]

    def __post_init__(self):
        if self.h0 != ((1,),):
            raise ModelError("h0 must be the identity [1] for a diffeomorphism of a connected surface")
        det = self.h1[0][0] * self.h1[1][1] - self.h1[0][1] * self.h1[1][0]
        if self.h2 != ((det,),):
            raise ModelError(f"h2 must be [det h1] = [{det}], got {self.h2}")

    def degree(self, n: int):
        return (self.h0, self.h1, self.h2)[n]


def induced_action(model: ToralModel) -> CohomologyAction:
    return CohomologyAction(((1,),), model.matrix, ((model.det,),))


def trace_power(action: CohomologyAction, k: int) -> int:
    """tr(h1^k) by exact matrix power."""
    (p, _), (_, t) = mat_pow(action.h1, k)
    return p + t


def trace_recurrence(action: CohomologyAction, k_max: int) -> list[int]:
    """t_0..t_kmax from t_k = tr * t_{k-1} - det * t_{k-2}."""
    h = action.h1
    tr = h[0][0] + h[1][1]
    det = h[0][0] * h[1][1] - h[0][1] * h[1][0]
    ts = [2, tr]
    for _ in range(2, k_max + 1):
        ts.append(tr * ts[-1] - det * ts[-2])
    return ts[:k_max + 1]


def lefschetz_number(action: CohomologyAction, k: int) -> int:
    """sum_n (-1)^n tr(H^n(f)^k), exact."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return action.h0[0][0] ** k - trace_power(action, k) + action.h2[0][0] ** k


def fixed_point_index_sum(model: ToralModel, k: int) -> int:
    """sum over Fix(f^k) of eps_p, eps_p = sign det(I - A^k).

    Every fixed point of a linear toral map has the same linearization, so
    the sum is #Fix times that common sign.
    """
    (p, q), (r, t) = mat_pow(model.matrix, k)
    det_i_minus = (1 - p) * (1 - t) - q * r
    sign = (det_i_minus > 0) - (det_i_minus < 0)
    return sign * toral_fixed_points(model, k)


def verify_lefschetz(model: ToralModel, k_max: int) -> list[dict]:
    action = induced_action(model)
    report = []
    for k in range(1, k_max + 1):
        lhs = fixed_point_index_sum(model, k)
        rhs = lefschetz_number(action, k)
        report.append({"k": k, "lhs": lhs, "rhs": rhs, "pass": lhs == rhs})
    return report


def orbit_exp_identity_check(model: ToralModel, s: complex, K: int, tol: float | None = None) -> dict:
    """Compare exp(-sum_{k<=K} N_k e^{-ks}/k) with prod_{m<=K} (1 - e^{-sm})^{P_m}.

    Both truncations converge to zeta(s).  With lambda the expanding
    eigenvalue, N_k < lambda^k and P_m <= lambda^m / m, so with
    q = lambda e^{-Re s} the log-tails are bounded by
        T1 = q^{K+1} / ((K+1)(1-q))               (fixed-point series)
        T2 = T1 / (1 - e^{-Re s})                   (orbit product, all iterates)
    and the two sides differ by at most |lhs| e^{T1} (expm1 T1 + expm1 T2).
    """
    s = complex(s)
    lam = model.expanding_eigenvalue
    if s.real <= math.log(lam):
        raise DomainError(f"Re(s) = {s.real:g} must exceed log lambda = {math.log(lam):g}")
    if K < 1:
        raise ValueError("K must be >= 1")
    log_lhs = 0j
    for k in range(1, K + 1):
        log_lhs += -toral_fixed_points(model, k) * cmath.exp(-k * s) / k
    lhs = cmath.exp(log_lhs)
    counts = toral_orbit_counts(model, K)
    ms = np.array(list(counts), dtype=float)
    Ps = np.array([float(P) for P in counts.values()])
    # P_m reaches ~lambda^m while 1 - e^{-sm} rounds to 1: work with log(1 - w)
    rhs = cmath.exp(complex(np.sum(Ps * log1m(np.exp(-s * ms)))))
    sigma = s.real
    q = lam * math.exp(-sigma)
    T1 = q ** (K + 1) / ((K + 1) * (1 - q))
    T2 = T1 / (1 - math.exp(-sigma))
    bound = abs(lhs) * math.exp(T1) * (math.expm1(T1) + math.expm1(T2))
    disc = abs(lhs - rhs)
    ok = disc <= bound + 4 * 2.2e-16 * K * max(abs(lhs), 1.0)
    if tol is not None:
        ok = ok and disc <= tol
    return {"s": s, "K": K, "lhs": lhs, "rhs": rhs, "discrepancy": disc, "bound": bound, "pass": ok}

"""Closed-orbit data for toral suspensions, Morse-gradient suspensions and synthetic fixtures.

Orbits are aggregated by (length, index): the zeta function and every
orbit-side measure only see ``count`` copies of an orbit with a given length
and index, never individual orbits.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientDataError, ModelError

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


# ---------------------------------------------------------------- models ---

@dataclass(frozen=True)
class ToralModel:
    """Hyperbolic toral automorphism A = [[a, b], [c, d]] with det 1 and trace > 2."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            try:
                object.__setattr__(self, name, operator.index(getattr(self, name)))
            except TypeError as exc:
                raise ModelError(f"matrix entry {name} must be an integer") from exc
        if self.det != 1:
            raise ModelError(f"det A = {self.det}, expected 1")
        if self.trace <= 2:
            raise ModelError(
                f"tr A = {self.trace}; only tr A > 2 (positive real eigenvalues, "
                "index -1 for every iterate) is supported")

    @classmethod
    def from_sequence(cls, entries: Sequence[int]) -> "ToralModel":
        if len(entries) != 4:
            raise ModelError("a toral model needs exactly four matrix entries a,b,c,d")
        return cls(*entries)

    @property
    def matrix(self) -> Matrix2:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def expanding_eigenvalue(self) -> float:
        t = self.trace
        return (t + math.sqrt(t * t - 4)) / 2.0

    @property
    def entropy(self) -> float:
        """log of the expanding eigenvalue; the growth rate of periodic orbits."""
        t = self.trace
        # log((t + sqrt(t^2-4))/2) = acosh(t/2), stable for large t
        return math.acosh(t / 2.0)


@dataclass(frozen=True)
class MorseModel:
    """Gradient flow of a Morse function on a closed surface of genus >= 2."""

    genus: int
    n0: int
    n1: int
    n2: int

    def __post_init__(self):
        for name in ("genus", "n0", "n1", "n2"):
            try:
                object.__setattr__(self, name, operator.index(getattr(self, name)))
            except TypeError as exc:
                raise ModelError(f"{name} must be an integer") from exc
        if self.genus < 2:
            raise ModelError("genus must be at least 2")
        if min(self.n0, self.n1, self.n2) < 0:
            raise ModelError("critical point counts must be nonnegative")
        if self.n0 < 1 or self.n2 < 1:
            raise ModelError("a Morse function on a closed surface has a minimum and a maximum "
                             "(n0 >= 1 and n2 >= 1)")
        chi = self.n0 - self.n1 + self.n2
        if chi != 2 - 2 * self.genus:
            raise ModelError(
                f"Euler characteristic violation: n0 - n1 + n2 = {chi} != 2 - 2g = {2 - 2 * self.genus}")


# --------------------------------------------------------------- records ---

@dataclass(frozen=True)
class ClosedOrbitRecord:
    length: float
    count: int
    index: int

    def __post_init__(self):
        length = float(self.length)
        if not length > 0 or not math.isfinite(length):
            raise ModelError(f"orbit length must be positive and finite, got {self.length}")
        object.__setattr__(self, "length", length)
        count = operator.index(self.count)
        if count < 1:
            raise ModelError(f"orbit count must be a positive integer, got {self.count}")
        object.__setattr__(self, "count", count)
        if self.index not in (-1, 1):
            raise ModelError(f"orbit index must be -1 or +1, got {self.index}")
        object.__setattr__(self, "index", int(self.index))


ABSCISSA_SOURCES = ("exact", "theoretical", "estimate")


@dataclass(frozen=True)
class OrbitEnsemble:
    """All closed orbits of length <= ``cutoff``, aggregated by (length, index).

    ``abscissa`` is the growth rate used in convergence regions and tail
    bounds.  ``abscissa_source`` records where it came from: ``exact`` for
    finite complete ensembles, ``theoretical`` when a closed-form entropy is
    known, ``estimate`` for a regression (inflated by 10% in tail bounds).
    """

    records: tuple[ClosedOrbitRecord, ...]
    min_length: float
    abscissa: float
    cutoff: float
    abscissa_source: str = "estimate"
    abscissa_fit: float | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        records = tuple(self.records)
        if not records:
            raise ModelError("an orbit ensemble needs at least one record")
        object.__setattr__(self, "records", records)
        m = min(r.length for r in records)
        if self.min_length != m:
            raise ModelError(f"min_length {self.min_length} does not match smallest record length {m}")
        if not self.min_length > 0:
            raise ModelError("min_length must be positive")
        if not (self.abscissa >= 0 and math.isfinite(self.abscissa)):
            raise ModelError(f"abscissa must be finite and nonnegative, got {self.abscissa}")
        if not self.cutoff > 0:
            raise ModelError("cutoff must be positive")
        if max(r.length for r in records) > self.cutoff:
            raise ModelError("a record lies beyond the completeness cutoff")
        if self.abscissa_source not in ABSCISSA_SOURCES:
            raise ModelError(f"abscissa_source must be one of {ABSCISSA_SOURCES}")

    @property
    def complete(self) -> bool:
        return math.isinf(self.cutoff)

    @property
    def bound_abscissa(self) -> float:
        """Abscissa used in tail bounds; regression estimates are inflated by 10%."""
        if self.abscissa_source == "estimate":
            return 1.1 * self.abscissa
        return self.abscissa

    @property
    def lengths(self) -> np.ndarray:
        return np.array([r.length for r in self.records])

    @property
    def counts(self) -> np.ndarray:
        return np.array([float(r.count) for r in self.records])

    @property
    def indices(self) -> np.ndarray:
        return np.array([float(r.index) for r in self.records])

    @property
    def total_count(self) -> int:
        return sum(r.count for r in self.records)

    def subensemble(self, index: int) -> "OrbitEnsemble":
        """Records with the given index, keeping cutoff and growth data."""
        recs = tuple(r for r in self.records if r.index == index)
        if not recs:
            raise ModelError(f"no records with index {index}")
        return OrbitEnsemble(recs, min(r.length for r in recs), self.abscissa, self.cutoff,
                             self.abscissa_source, self.abscissa_fit, self.label)


# ------------------------------------------------------- exact integers ---

def mat_mul(X: Matrix2, Y: Matrix2) -> Matrix2:
    return ((X[0][0] * Y[0][0] + X[0][1] * Y[1][0], X[0][0] * Y[0][1] + X[0][1] * Y[1][1]),
            (X[1][0] * Y[0][0] + X[1][1] * Y[1][0], X[1][0] * Y[0][1] + X[1][1] * Y[1][1]))


def mat_pow(X: Matrix2, k: int) -> Matrix2:
    """X**k in exact (arbitrary width) integer arithmetic."""
    if k < 0:
        raise ValueError("negative powers are not supported")
    result: Matrix2 = ((1, 0), (0, 1))
    base = X
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def _positive_int(k, name: str) -> int:
    k = operator.index(k)
    if k < 1:
        raise ValueError(f"{name} must be a positive integer, got {k}")
    return k


def toral_fixed_points(model: ToralModel, k: int) -> int:
    """#Fix(f^k) = |det(A^k - I)| on the 2-torus."""
    k = _positive_int(k, "k")
    (p, q), (r, t) = mat_pow(model.matrix, k)
    return abs((p - 1) * (t - 1) - q * r)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined on positive integers")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def toral_orbit_counts(model: ToralModel, max_period: int) -> dict[int, int]:
    """Number P_m of primitive periodic orbits of exact period m, for m <= max_period.

    Mobius inversion of sum_{d | k} d P_d = N_k.
    """
    max_period = _positive_int(max_period, "max_period")
    N = {k: toral_fixed_points(model, k) for k in range(1, max_period + 1)}
    counts = {}
    for m in range(1, max_period + 1):
        total = sum(mobius(m // d) * N[d] for d in divisors(m))
        if total % m:
            raise ArithmeticError(f"Mobius inversion produced a non-integer orbit count at m = {m}")
        counts[m] = total // m
        if counts[m] < 0:
            raise ArithmeticError(f"negative orbit count at m = {m}")
    return counts


# ----------------------------------------------------------- ensembles ---

def counting_function(lengths: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct lengths and nu at each of them (cumulative counts)."""
    order = np.argsort(lengths, kind="stable")
    ls = lengths[order]
    cs = counts[order]
    distinct, first = np.unique(ls, return_index=True)
    cum = np.cumsum(cs)
    last = np.append(first[1:], len(ls)) - 1
    return distinct, cum[last]


def fit_growth_rate(x: np.ndarray, nu: np.ndarray) -> float:
    """Least-squares growth rate a in log nu(x) ~ c0 + a x - theta log x.

    Only the upper half of the range enters the fit.  The log x column
    absorbs the 1/x factor of prime-orbit-theorem growth nu ~ e^{ax}/(ax),
    which otherwise biases a plain log-linear slope well below a.
    """
    x = np.asarray(x, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if len(np.unique(x)) < 3:
        raise InsufficientDataError("need at least 3 distinct lengths to estimate the abscissa")
    keep = x >= 0.5 * x.max()
    if keep.sum() < 3:
        keep = np.argsort(x)[-3:]
    xs, ys = x[keep], np.log(nu[keep])
    if len(np.unique(xs)) < 3:
        # too few points for the three-parameter model
        return float(max(np.polyfit(xs, ys, 1)[0], 0.0))
    A = np.column_stack([np.ones_like(xs), xs, np.log(xs)])
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(max(coef[1], 0.0))


def toral_ensemble(model: ToralModel, max_period: int) -> OrbitEnsemble:
    """Closed orbits of the suspension flow: period-m orbits have length m and index -1."""
    counts = toral_orbit_counts(model, max_period)
    records = tuple(ClosedOrbitRecord(float(m), P, -1) for m, P in counts.items() if P > 0)
    fit = None
    if len(records) >= 3:
        x, nu = counting_function(np.array([r.length for r in records]),
                                  np.array([float(r.count) for r in records]))
        fit = fit_growth_rate(x, nu)
    return OrbitEnsemble(records, 1.0, model.entropy, float(max_period),
                         abscissa_source="theoretical", abscissa_fit=fit,
                         label=f"toral{model.matrix}")


def morse_ensemble(model: MorseModel) -> OrbitEnsemble:
    """Closed orbits (all of length 1) over the critical points of a Morse function.

    Minima and maxima carry index +1, saddles index -1.
    """
    raw = [(1.0, model.n0, +1), (1.0, model.n1, -1), (1.0, model.n2, +1)]
    records = tuple(ClosedOrbitRecord(*r) for r in raw if r[1] > 0)
    return OrbitEnsemble(records, 1.0, 0.0, math.inf, abscissa_source="exact",
                         label=f"morse(g={model.genus})")


def synthetic_ensemble(spec: Iterable[tuple[float, int, int]], cutoff: float | None = None,
                       abscissa: float | None = None) -> OrbitEnsemble:
    """Ensemble from explicit (length, count, index) triples.

    Without a cutoff the list is taken as complete (finite orbit set,
    abscissa 0).  With a finite cutoff the abscissa is estimated from the
    counting function unless given explicitly.
    """
    records = tuple(ClosedOrbitRecord(*item) for item in spec)
    if not records:
        raise ModelError("synthetic ensemble needs at least one record")
    m = min(r.length for r in records)
    if cutoff is None:
        return OrbitEnsemble(records, m, 0.0 if abscissa is None else float(abscissa), math.inf,
                             abscissa_source="exact" if abscissa is None else "theoretical",
                             label="synthetic")
    cutoff = float(cutoff)
    if abscissa is not None:
        return OrbitEnsemble(records, m, float(abscissa), cutoff,
                             abscissa_source="theoretical", label="synthetic")
    x, nu = counting_function(np.array([r.length for r in records]),
                              np.array([float(r.count) for r in records]))
    if len(x) < 3:
        # no estimate possible; abscissa_estimate reports the shortage
        return OrbitEnsemble(records, m, 0.0, cutoff, abscissa_source="estimate", label="synthetic")
    fit = fit_growth_rate(x, nu)
    return OrbitEnsemble(records, m, fit, cutoff, abscissa_source="estimate",
                         abscissa_fit=fit, label="synthetic")


def exponential_growth_ensemble(rate: float, x_max: float, index: int = -1,
                                n_grid: int = 400, x_min: float = 0.5) -> OrbitEnsemble:
    """Incomplete ensemble whose counting function is floor(exp(rate * x)) on a grid."""
    xs = np.linspace(x_min, x_max, n_grid)
    nu = np.floor(np.exp(rate * xs)).astype(np.int64)
    records = []
    prev = 0
    for x, n in zip(xs, nu):
        if n > prev:
            records.append((float(x), int(n - prev), index))
            prev = int(n)
    return synthetic_ensemble(records, cutoff=float(x_max))


def check_assumptions(ensemble: OrbitEnsemble, delta: float = 1e-9) -> dict[str, bool]:
    """Validate (A1)-(A3) on the data an ensemble actually carries.

    A1: lengths positive, indices in {-1, +1}, positive minimal length and
        finitely many records (hence finitely many per compact interval).
    A2: the growth abscissa is finite, and nu(x) <= exp((a + delta) x) at
        every record length when a is theoretical or exact; complete
        ensembles must have a = 0.
    A3: one index per record, i.e. constant in the iterate k.
    """
    a1 = (all(r.length > 0 and r.index in (-1, 1) for r in ensemble.records)
          and ensemble.min_length > 0 and len(ensemble.records) < math.inf)
    x, nu = counting_function(ensemble.lengths, ensemble.counts)
    if ensemble.complete:
        a2 = ensemble.abscissa == 0.0
    elif ensemble.abscissa_source == "estimate":
        a2 = math.isfinite(ensemble.abscissa)
    else:
        a2 = bool(np.all(nu <= np.exp((ensemble.abscissa + delta) * x)))
    a3 = all(isinstance(r.index, int) for r in ensemble.records)
    return {"A1": bool(a1), "A2": bool(a2), "A3": bool(a3)}

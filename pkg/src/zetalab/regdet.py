"""Zeta-regularized products over ladder spectra, determinants and xi-functions.

A ladder is {b + 2 pi i nu : nu in Z}.  Spectra are finite unions of ladders
plus finite isolated multisets; for those every regularized quantity has a
closed form, and each closed form here is paired with an independent
definitional route (Dirichlet series continued through Hurwitz zeta,
differentiated numerically at 0).
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .cohomology import CohomologyAction
from .errors import BranchAmbiguityError, ConsistencyError, DomainError, PoleError
from .special import HALF_LOG_TWO_PI, holomorphic_derivative, hurwitz_series, log_gamma

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi


# ----------------------------------------------------------------- types ---

@dataclass(frozen=True)
class LadderSpectrum:
    base: complex
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "base", complex(self.base))
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise ValueError("ladder multiplicity must be a positive integer")
        object.__setattr__(self, "multiplicity", int(self.multiplicity))

    def points(self, truncation: int) -> list[complex]:
        return [self.base + TWO_PI_I * nu for nu in range(-truncation, truncation + 1)]


def _merge_isolated(items) -> tuple[tuple[complex, int], ...]:
    counter: Counter = Counter()
    for item in items:
        if isinstance(item, tuple):
            rho, mult = item
        else:
            rho, mult = item, 1
        if int(mult) != mult or mult < 1:
            raise ValueError("isolated multiplicities must be positive integers")
        counter[complex(rho)] += int(mult)
    return tuple(sorted(counter.items(), key=lambda kv: (kv[0].real, kv[0].imag)))


@dataclass(frozen=True)
class SpectrumDescriptor:
    """Finite union of ladders plus an isolated multiset.

    ``isolated`` accepts bare complex numbers (multiplicity 1 each) or
    (value, multiplicity) pairs; equal values are merged.
    """

    ladders: tuple[LadderSpectrum, ...] = ()
    isolated: tuple[tuple[complex, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ladders", tuple(self.ladders))
        object.__setattr__(self, "isolated", _merge_isolated(self.isolated))

    @property
    def is_isometric(self) -> bool:
        return (all(l.base.real == 0 for l in self.ladders)
                and all(rho.real == 0 for rho, _ in self.isolated))

    def real_part_max(self) -> float:
        vals = [l.base.real for l in self.ladders] + [rho.real for rho, _ in self.isolated]
        return max(vals) if vals else -math.inf

    def conjugate(self) -> "SpectrumDescriptor":
        return SpectrumDescriptor(
            tuple(LadderSpectrum(l.base.conjugate(), l.multiplicity) for l in self.ladders),
            tuple((rho.conjugate(), m) for rho, m in self.isolated))


@dataclass(frozen=True)
class GradedSpectrum:
    degrees: tuple[SpectrumDescriptor, SpectrumDescriptor, SpectrumDescriptor]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        degrees = tuple(self.degrees)
        if len(degrees) != 3:
            raise ValueError("a graded spectrum has degrees 0, 1 and 2")
        object.__setattr__(self, "degrees", degrees)

    def __getitem__(self, n: int) -> SpectrumDescriptor:
        return self.degrees[n]


# ------------------------------------------------- half-ladder products ---

def _principal_log(x: complex) -> complex:
    if x == 0:
        raise PoleError("zero factor in a regularized product")
    if x.imag == 0.0 and x.real < 0.0:
        raise BranchAmbiguityError(f"factor {x} lies on the negative real axis (Arg = pi)")
    return cmath.log(x)


@dataclass
class _HalfLadderSeries:
    """Z(w) = sum_{nu >= 0} (beta (q + nu))^{-w}, principal powers.

    The first K factors are summed directly.  Beyond K the principal log of
    beta (q + nu) splits as log_beta_eff + Log(q + nu) with one constant
    log_beta_eff, so the tail is exp(-w log_beta_eff) zeta_H(w, q + K).
    """

    beta: complex
    q: complex
    K: int
    head_logs: list[complex]
    log_beta_eff: complex

    @property
    def tail_wraps(self) -> bool:
        return abs(self.log_beta_eff - cmath.log(self.beta)) > 1e-12

    def __call__(self, w: complex) -> complex:
        total = sum(cmath.exp(-w * L) for L in self.head_logs)
        return total + cmath.exp(-w * self.log_beta_eff) * hurwitz_series(w, self.q + self.K)

    def derivative_at_zero(self) -> complex:
        return holomorphic_derivative(self, 0.0)


def _half_ladder_series(beta: complex, q: complex) -> _HalfLadderSeries:
    beta, q = complex(beta), complex(q)
    if beta == 0:
        raise DomainError("beta must be nonzero")
    arg_b = abs(cmath.phase(beta))
    margin = (math.pi - arg_b) / 2 if arg_b < math.pi else math.pi / 2
    K = 0
    while (q + K).real <= 0 or abs(cmath.phase(q + K)) >= margin:
        K += 1
        if K > 10_000_000:
            raise DomainError(f"cannot separate the ladder tail for beta = {beta}, q = {q}")
    heads = [_principal_log(beta * (q + nu)) for nu in range(K)]
    if arg_b == math.pi and q.imag == 0.0:
        raise BranchAmbiguityError(f"every factor of beta (q + nu) is negative real (beta = {beta})")
    # q + K is already inside the tail regime
    eff = _principal_log(beta * (q + K)) - cmath.log(q + K)
    return _HalfLadderSeries(beta, q, K, heads, eff)


def reg_prod_half_ladder_closed(beta: complex, z: complex) -> complex:
    """beta^{1/2 - z} sqrt(2 pi) / Gamma(z)."""
    beta, z = complex(beta), complex(z)
    if beta == 0:
        raise DomainError("beta must be nonzero")
    return cmath.exp((0.5 - z) * cmath.log(beta) + HALF_LOG_TWO_PI - log_gamma(z))


def reg_prod_half_ladder_definitional(beta: complex, z: complex) -> tuple[complex, bool]:
    """exp(-Z'(0)) from the continued Dirichlet series; also returns whether the tail wraps."""
    series = _half_ladder_series(beta, z)
    return cmath.exp(-series.derivative_at_zero()), series.tail_wraps


def reg_prod_half_ladder(beta: complex, z: complex, rtol: float = 1e-9) -> complex:
    """Regularized product of beta (z + nu), nu = 0, 1, 2, ...

    Returns the closed form after checking it against the definitional
    route.  When the tail of the factor sequence sits across the branch
    cut from beta itself, the principal-power closed form does not describe
    the regularized product and no agreement is asserted.
    """
    closed = reg_prod_half_ladder_closed(beta, z)
    definitional, wraps = reg_prod_half_ladder_definitional(beta, z)
    if not wraps and abs(closed - definitional) > rtol * max(abs(closed), 1e-300):
        raise ConsistencyError(f"half-ladder routes disagree at beta = {beta}, z = {z}: "
                               f"{closed} vs {definitional}")
    return closed


# ------------------------------------------------- full-ladder products ---

def reg_prod_full_ladder(beta: complex, z: complex) -> complex:
    """Regularized product of beta (z + nu) over all integers nu."""
    beta, z = complex(beta), complex(z)
    if beta.imag == 0:
        raise DomainError("full-ladder product is only given for Im(beta) != 0")
    if beta.imag > 0:
        return 1 - cmath.exp(-TWO_PI_I * z)
    return 1 - cmath.exp(TWO_PI_I * z)


def reg_prod_full_ladder_definitional(beta: complex, z: complex) -> complex:
    """Split nu >= 0 and nu < 0: beta (z - mu) = (-beta)(mu - z), mu >= 1."""
    beta, z = complex(beta), complex(z)
    if beta.imag == 0:
        raise DomainError("full-ladder product is only given for Im(beta) != 0")
    upper = _half_ladder_series(beta, z)
    lower = _half_ladder_series(-beta, 1 - z)
    return cmath.exp(-(upper.derivative_at_zero() + lower.derivative_at_zero()))


def det_inf_ladder(s: complex, alpha: complex) -> complex:
    """Regularized product of s - (log alpha + 2 pi i nu) over nu in Z: 1 - alpha e^{-s}."""
    alpha = complex(alpha)
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    return 1 - alpha * cmath.exp(-complex(s))


def det_inf_ladder_route(s: complex, alpha: complex) -> complex:
    """The same product through reg_prod_full_ladder with beta = 2 pi i."""
    z = (complex(s) - cmath.log(complex(alpha))) / TWO_PI_I
    return reg_prod_full_ladder(TWO_PI_I, z)


# --------------------------------------------------------- spectra ---

def _eigenvalues_2x2(h) -> list[complex]:
    (a, b), (c, d) = h
    tr = a + d
    det = a * d - b * c
    disc = tr * tr - 4 * det
    if disc == 0:
        return [complex(tr / 2), complex(tr / 2)]
    if disc > 0:
        root = math.sqrt(disc)
        if tr == 0:
            return [complex(root / 2), complex(-root / 2)]
        # larger root first, smaller one from det / big to avoid cancellation
        big = (tr + math.copysign(root, tr)) / 2
        return [complex(big), complex(det / big)]
    root = math.sqrt(-disc)
    return [complex(tr / 2, root / 2), complex(tr / 2, -root / 2)]


def _ladders_from_eigenvalues(eigs: Iterable[complex]) -> tuple[LadderSpectrum, ...]:
    counter: Counter = Counter()
    for alpha in eigs:
        if alpha == 0:
            raise DomainError("zero eigenvalue: log alpha undefined")
        counter[cmath.log(alpha)] += 1
    return tuple(LadderSpectrum(b, m) for b, m in sorted(counter.items(), key=lambda kv: (-kv[0].real, kv[0].imag)))


def spectrum_from_action(action: CohomologyAction) -> GradedSpectrum:
    """Degree n gets a ladder at log alpha for each eigenvalue alpha of h_n."""
    degrees = (
        SpectrumDescriptor(_ladders_from_eigenvalues([complex(action.h0[0][0])])),
        SpectrumDescriptor(_ladders_from_eigenvalues(_eigenvalues_2x2(action.h1))),
        SpectrumDescriptor(_ladders_from_eigenvalues([complex(action.h2[0][0])])),
    )
    return GradedSpectrum(degrees, label="toral")


def det_inf(spec: SpectrumDescriptor, s: complex) -> complex:
    """Regularized det(s - Theta) over the descriptor; exactly 0 when s is in the spectrum."""
    s = complex(s)
    value = 1 + 0j
    for lad in spec.ladders:
        value *= det_inf_ladder(s, cmath.exp(lad.base)) ** lad.multiplicity
    for rho, mult in spec.isolated:
        value *= (s - rho) ** mult
    return value


def in_spectrum(spec: SpectrumDescriptor, s: complex, tol: float = 1e-14) -> bool:
    s = complex(s)
    for lad in spec.ladders:
        k = (s - lad.base) / TWO_PI_I
        if abs(k - round(k.real)) < tol:
            return True
    return any(abs(s - rho) < tol for rho, _ in spec.isolated)


def assemble_determinant_formula(graded: GradedSpectrum, s: complex) -> complex:
    """prod_n det_inf(degree n, s)^{(-1)^{n+1}}."""
    s = complex(s)
    num = det_inf(graded[1], s)
    den = det_inf(graded[0], s) * det_inf(graded[2], s)
    if den == 0 or in_spectrum(graded[0], s) or in_spectrum(graded[2], s):
        raise PoleError(f"a denominator determinant vanishes at s = {s}")
    return num / den


def morse_degree1_prediction(genus: int, s: complex) -> complex:
    """det_inf over degree 1 that the determinant formula would require: s^2 (1 - e^{-s})^{2g-2}.

    Diagnostic only; the true degree-1 spectrum is not known.
    """
    s = complex(s)
    return s * s * (1 - cmath.exp(-s)) ** (2 * genus - 2)


def type_ii_skeleton(degree1: SpectrumDescriptor | None = None) -> GradedSpectrum:
    """Degrees 0 and 2 carry the single eigenvalue 0."""
    zero = SpectrumDescriptor((), (0j,))
    return GradedSpectrum((zero, degree1 or SpectrumDescriptor(), zero), label="type-ii")


# ------------------------------------------------------------- xi ---

def _check_z(z: complex):
    if z == 1:
        raise PoleError("xi has a pole at z = 1")


def xi_single_ladder(base: complex, z: complex, s: complex) -> complex:
    """sum_nu (s - base - 2 pi i nu)^{-z}, continued in z.

    With w = s - base and q = i w / (2 pi) the nu >= 0 terms are
    (2 pi)^{-z} e^{i pi z/2} (q + nu)^{-z} and the nu < 0 terms
    (2 pi)^{-z} e^{-i pi z/2} (1 - q + mu)^{-z}, mu >= 0.
    """
    z, s = complex(z), complex(s)
    _check_z(z)
    w = s - complex(base)
    if w.real <= 0:
        raise DomainError(f"Re(s - base) = {w.real:g} must be positive for the Arg convention")
    q = 1j * w / TWO_PI
    pref = cmath.exp(-z * math.log(TWO_PI))
    return pref * (cmath.exp(0.5j * math.pi * z) * hurwitz_series(z, q)
                   + cmath.exp(-0.5j * math.pi * z) * hurwitz_series(z, 1 - q))


def xi_ladder(spec: SpectrumDescriptor, z: complex, s: complex) -> complex:
    """xi(z, s) = sum over the spectrum of (s - rho)^{-z}."""
    z, s = complex(z), complex(s)
    _check_z(z)
    total = 0j
    for lad in spec.ladders:
        total += lad.multiplicity * xi_single_ladder(lad.base, z, s)
    for rho, mult in spec.isolated:
        d = s - rho
        if d.real <= 0:
            raise DomainError(f"Re(s - rho) = {d.real:g} must be positive for the Arg convention")
        total += mult * cmath.exp(-z * cmath.log(d))
    return total


def xi_graded(graded: GradedSpectrum, z: complex, s: complex) -> complex:
    """sum_n (-1)^n xi_n(z, s)."""
    return sum((-1) ** n * xi_ladder(graded[n], z, s) for n in range(3))


def xi_ladder_direct(spec: SpectrumDescriptor, z: complex, s: complex, truncation: int
                     ) -> tuple[complex, float]:
    """Truncated direct sum over |nu| <= truncation with a bound on the omitted terms (Re z > 1)."""
    z, s = complex(z), complex(s)
    if z.real <= 1:
        raise DomainError("direct summation needs Re(z) > 1")
    total = 0j
    bound = 0.0
    for lad in spec.ladders:
        w = s - lad.base
        nus = range(-truncation, truncation + 1)
        terms = [cmath.exp(-z * cmath.log(w - TWO_PI_I * nu)) for nu in nus]
        part = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
        total += lad.multiplicity * part
        # |w - 2 pi i nu| >= 2 pi |nu| - |Im w|, |x^{-z}| <= |x|^{-Re z} e^{pi |Im z| / 2}
        N0 = truncation + 1
        gap = TWO_PI * N0 - abs(w.imag)
        if gap <= 0:
            return total, math.inf
        sig = z.real
        tail = gap ** (-sig) + gap ** (1 - sig) / (TWO_PI * (sig - 1))
        bound += lad.multiplicity * 2 * tail * math.exp(math.pi * abs(z.imag) / 2)
    for rho, mult in spec.isolated:
        total += mult * cmath.exp(-z * cmath.log(s - rho))
    return total, bound


def log_det_from_xi(spec: SpectrumDescriptor, s: complex) -> complex:
    """-d/dz xi(z, s) at z = 0."""
    return -holomorphic_derivative(lambda z: xi_ladder(spec, z, s), 0.0)


def det_from_xi(spec: SpectrumDescriptor, s: complex) -> complex:
    return cmath.exp(log_det_from_xi(spec, s))

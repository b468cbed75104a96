"""Dynamical zeta functions of suspension flows: Euler products, regularized
determinants, xi-functions and trace-formula checks."""

from .errors import (BranchAmbiguityError, ConsistencyError, DomainError, InsufficientDataError,
                     ModelError, PoleError, ZetaLabError)
from .orbit_models import (ClosedOrbitRecord, MorseModel, OrbitEnsemble, ToralModel, morse_ensemble,
                           synthetic_ensemble, toral_ensemble, toral_fixed_points, toral_orbit_counts)
from .zeta_engine import (ConvergenceRegion, EvalResult, abscissa_estimate, counting_nu, euler_product,
                          log_derivative, morse_zeta_closed, orbit_count_bound_check, toral_zeta_closed)
from .cohomology import (CohomologyAction, induced_action, lefschetz_number, orbit_exp_identity_check,
                         verify_lefschetz)
from .special import hurwitz_zeta, hurwitz_zeta_dz0, log_gamma
from .regdet import (GradedSpectrum, LadderSpectrum, SpectrumDescriptor, assemble_determinant_formula,
                     det_inf, det_inf_ladder, reg_prod_full_ladder, reg_prod_half_ladder,
                     spectrum_from_action, xi_graded, xi_ladder)
from .trace_formula import (BumpFunction, TestFunctionF, mu_w_laplace, orbit_pairing,
                            poisson_mollified_check, spectral_pairing, verify_xi_orbit_identity)
from .contour import HankelContour, derivative_at_zero_logzeta, hankel_integral, verify_contour_identity

__version__ = "0.1.0"

__all__ = [
    "BranchAmbiguityError",
    "ConsistencyError",
    "DomainError",
    "InsufficientDataError",
    "ModelError",
    "PoleError",
    "ZetaLabError",
    "ClosedOrbitRecord",
    "MorseModel",
    "OrbitEnsemble",
    "ToralModel",
    "morse_ensemble",
    "synthetic_ensemble",
    "toral_ensemble",
    "toral_fixed_points",
    "toral_orbit_counts",
    "ConvergenceRegion",
    "EvalResult",
    "abscissa_estimate",
    "counting_nu",
    "euler_product",
    "log_derivative",
    "morse_zeta_closed",
    "orbit_count_bound_check",
    "toral_zeta_closed",
    "CohomologyAction",
    "induced_action",
    "lefschetz_number",
    "orbit_exp_identity_check",
    "verify_lefschetz",
    "hurwitz_zeta",
    "hurwitz_zeta_dz0",
    "log_gamma",
    "GradedSpectrum",
    "LadderSpectrum",
    "SpectrumDescriptor",
    "assemble_determinant_formula",
    "det_inf",
    "det_inf_ladder",
    "reg_prod_full_ladder",
    "reg_prod_half_ladder",
    "spectrum_from_action",
    "xi_graded",
    "xi_ladder",
    "BumpFunction",
    "TestFunctionF",
    "mu_w_laplace",
    "orbit_pairing",
    "poisson_mollified_check",
    "spectral_pairing",
    "verify_xi_orbit_identity",
    "HankelContour",
    "derivative_at_zero_logzeta",
    "hankel_integral",
    "verify_contour_identity",
]

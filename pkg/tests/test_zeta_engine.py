import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetalab.errors import DomainError, PoleError
from zetalab.orbit_models import MorseModel, ToralModel, morse_ensemble, synthetic_ensemble, toral_ensemble
from zetalab.zeta_engine import (ConvergenceRegion, EvalResult, abscissa_estimate,
                                 counting_nu, euler_product, log_derivative, log_zeta_series,
                                 morse_zeta_closed, orbit_count_bound_check, orbit_count_bound_threshold,
                                 pair_count, toral_zeta_closed)

CAT = ToralModel(2, 1, 1, 1)
LAM = (3 + math.sqrt(5)) / 2


def test_eval_result_rejects_negative_bound():
    with pytest.raises(ValueError):
        EvalResult(1.0, -1e-3)


def test_convergence_region():
    r = ConvergenceRegion(0.5, 0.5)
    assert r.zeta_abscissa == math.log(2) / 0.5
    assert r.b == max(1.0, math.log(2) / 0.5)
    assert ConvergenceRegion(0.0, 10.0).b == 1.0


def test_single_orbit_half():
    r = euler_product(synthetic_ensemble([(1, 1, -1)]), math.log(2))
    assert abs(r.value - 0.5) < 1e-15 and r.error_bound == 0


@pytest.mark.parametrize("s", [math.log(2) + 0.01, 2.0, 1.3 + 4j])
def test_morse_product_is_closed_form(s):
    e = morse_ensemble(MorseModel(2, 1, 4, 1))
    r = euler_product(e, s)
    assert r.error_bound == 0
    assert abs(r.value - (1 - cmath.exp(-s)) ** 2) < 1e-14


def test_toral_closed_form_values():
    assert abs(toral_zeta_closed(CAT, 2) - 0.8189845847584224) < 1e-15
    assert abs(toral_zeta_closed(CAT, 40.0) - 1) < 1e-15
    assert abs(toral_zeta_closed(CAT, math.log(LAM))) < 1e-14
    with pytest.raises(PoleError):
        toral_zeta_closed(CAT, 2j * math.pi)


def test_morse_closed_form_values():
    m = MorseModel(2, 1, 4, 1)
    assert abs(morse_zeta_closed(m, math.log(2)) - 0.25) < 1e-15
    assert abs(morse_zeta_closed(MorseModel(3, 2, 8, 2), 2j * math.pi)) < 1e-14


def test_euler_vs_closed_grid():
    e = toral_ensemble(CAT, 25)
    for re in np.linspace(2, 4, 5):
        for im in np.linspace(-5, 5, 5):
            s = complex(re, im)
            r = euler_product(e, s)
            assert abs(r.value - toral_zeta_closed(CAT, s)) <= r.error_bound + 1e-14


def test_domain_errors():
    e = toral_ensemble(CAT, 25)
    with pytest.raises(DomainError):
        euler_product(e, 0.9)
    with pytest.raises(DomainError):
        euler_product(e, math.log(LAM))
    short = synthetic_ensemble([(0.1, 1, 1), (0.2, 1, 1), (0.3, 2, 1)], cutoff=0.3, abscissa=0.0)
    with pytest.raises(DomainError):
        euler_product(short, 5.0)  # log 2 / m = 6.93


def test_pole_detection():
    with pytest.raises(PoleError):
        euler_product(synthetic_ensemble([(1, 1, 1)]), 2j * math.pi)
    r = euler_product(synthetic_ensemble([(1, 1, -1)]), 2j * math.pi)
    assert r.value == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0.5, 5), st.integers(1, 5), st.sampled_from([-1, 1])), min_size=2, max_size=12),
       st.floats(1.5, 4), st.floats(-3, 3))
def test_signed_factorization(spec, sr, si):
    spec = spec + [(1.0, 1, -1), (1.0, 1, 1)]
    e = synthetic_ensemble(spec)
    s = complex(sr, si)
    signed = euler_product(e, s).value
    plus = euler_product(e.subensemble(+1), s, "plus").value
    minus = euler_product(e.subensemble(-1), s, "minus").value
    assert abs(signed - plus * minus) <= 1e-12 * max(1.0, abs(signed))


def test_log_derivative_examples():
    r = log_derivative(synthetic_ensemble([(1, 1, -1)]), 2)
    assert abs(r.value - math.exp(-2) / (1 - math.exp(-2))) < 1e-15
    s = 1.7 + 0.4j
    r = log_derivative(morse_ensemble(MorseModel(2, 1, 4, 1)), s)
    assert abs(r.value - 2 * cmath.exp(-s) / (1 - cmath.exp(-s))) < 1e-14


@pytest.mark.parametrize("s", [2.0, 2.7 + 1j, 3.5])
def test_log_derivative_vs_finite_difference(s):
    e = toral_ensemble(CAT, 30)
    h = 1e-5
    fd = (cmath.log(euler_product(e, s + h).value) - cmath.log(euler_product(e, s - h).value)) / (2 * h)
    r = log_derivative(e, s)
    assert abs(fd - r.value) <= r.error_bound + 1e-8


def test_log_zeta_series_matches_log_product():
    e = toral_ensemble(CAT, 30)
    assert abs(log_zeta_series(e, 3.0) - cmath.log(euler_product(e, 3.0).value)) < 1e-13


def test_counting_nu():
    e = toral_ensemble(CAT, 4)
    assert counting_nu(e, 2.5) == 3
    assert counting_nu(e, 0.5) == 0
    assert counting_nu(e, 4) == e.total_count
    with pytest.raises(DomainError):
        counting_nu(e, 4.5)
    xs = np.linspace(0, 4, 40)
    assert np.all(np.diff([counting_nu(e, x) for x in xs]) >= 0)


def test_abscissa_estimates():
    assert abs(abscissa_estimate(toral_ensemble(CAT, 20)) - math.log(LAM)) < 0.05
    assert abscissa_estimate(morse_ensemble(MorseModel(2, 1, 4, 1))) == 0.0


def test_pair_count_bounds():
    morse = morse_ensemble(MorseModel(2, 1, 4, 1))
    assert pair_count(morse, 10) == 60
    assert not orbit_count_bound_check(morse, 10)
    assert orbit_count_bound_check(morse, 0.5)
    cat = toral_ensemble(CAT, 20)
    assert orbit_count_bound_check(cat, 10)
    assert orbit_count_bound_check(cat, 0.3)


def test_bound_threshold():
    cat = toral_ensemble(CAT, 20)
    x0 = orbit_count_bound_threshold(cat)
    assert x0 < 20
    for x in np.linspace(max(x0, 1e-9), 20, 200):
        assert orbit_count_bound_check(cat, x)
    # Morse with a = 0: count 6 floor(x) outruns x + 1 everywhere past 1
    assert math.isinf(orbit_count_bound_threshold(morse_ensemble(MorseModel(2, 1, 4, 1)), 10))
    # a threshold strictly inside the range
    e = synthetic_ensemble([(1.0, 3, 1), (5.0, 1, 1)], cutoff=30.0, abscissa=0.3)
    x0 = orbit_count_bound_threshold(e)
    assert 1 < x0 < 30
    assert orbit_count_bound_check(e, x0 + 1e-9)
    assert not orbit_count_bound_check(e, x0 - 1e-3)


def test_euler_product_net_order_at_shared_zero():
    from zetalab.orbit_models import synthetic_ensemble
    # Morse genus 2 pattern: exponents -1, +4, -1 at one length give a double zero
    ens = synthetic_ensemble([(1.0, 1, 1), (1.0, 4, -1), (1.0, 1, 1)])
    assert euler_product(ens, 0).value == 0
    # net order zero over different lengths: removable, limit prod l^expo
    ens = synthetic_ensemble([(1.0, 1, 1), (2.0, 1, -1), (0.7, 1, 1), (0.7, 1, -1)])
    assert abs(euler_product(ens, 0).value - 2) < 1e-15
    assert abs(euler_product(ens, 1e-6).value - 2) < 1e-5

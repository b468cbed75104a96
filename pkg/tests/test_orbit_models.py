import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetalab.errors import InsufficientDataError, ModelError
from zetalab.orbit_models import (ClosedOrbitRecord, MorseModel, OrbitEnsemble, ToralModel, check_assumptions,
                                  counting_function, divisors, exponential_growth_ensemble, mat_mul, mat_pow,
                                  mobius,
                                  morse_ensemble, synthetic_ensemble, toral_ensemble, toral_fixed_points,
                                  toral_orbit_counts)
from zetalab.zeta_engine import abscissa_estimate

CAT = ToralModel(2, 1, 1, 1)


@st.composite
def toral_models(draw):
    # products of [[1, p], [0, 1]] [[1, 0], [q, 1]] have det 1 and positive entries, so trace > 2
    M = ((1, 0), (0, 1))
    for _ in range(draw(st.integers(1, 3))):
        p, q = draw(st.integers(1, 3)), draw(st.integers(1, 3))
        M = mat_mul(M, ((1 + p * q, p), (q, 1)))
    return ToralModel(M[0][0], M[0][1], M[1][0], M[1][1])


def brute_force_fixed_points(A, k):
    # points x in (Z/N)^2 / N with (A^k - I) x = 0 mod 1, N = |det(A^k - I)|
    (p, q), (r, t) = mat_pow(A, k)
    N = abs((p - 1) * (t - 1) - q * r)
    count = 0
    for i in range(N):
        for j in range(N):
            if ((p - 1) * i + q * j) % N == 0 and (r * i + (t - 1) * j) % N == 0:
                count += 1
    return count


def test_fixed_points_examples():
    assert toral_fixed_points(CAT, 1) == 1
    assert toral_fixed_points(CAT, 2) == 5
    assert [toral_fixed_points(CAT, k) for k in (1, 2, 3, 4)] == [1, 5, 16, 45]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_fixed_points_brute_force(k):
    assert brute_force_fixed_points(CAT.matrix, k) == toral_fixed_points(CAT, k)


def test_fixed_points_exact_for_large_k():
    n = toral_fixed_points(CAT, 200)
    (p, _), (_, t) = mat_pow(CAT.matrix, 200)
    assert n == p + t - 2
    assert n.bit_length() > 64


@settings(max_examples=25, deadline=None)
@given(toral_models(), st.integers(1, 30))
def test_fixed_points_trace_identity(model, k):
    (p, _), (_, t) = mat_pow(model.matrix, k)
    assert toral_fixed_points(model, k) == p + t - 2
    assert toral_fixed_points(model, k + 1) > toral_fixed_points(model, k)


def test_orbit_counts_cat_map():
    assert toral_orbit_counts(CAT, 4) == {1: 1, 2: 2, 3: 5, 4: 10}


@settings(max_examples=25, deadline=None)
@given(toral_models(), st.integers(1, 24))
def test_mobius_consistency(model, K):
    P = toral_orbit_counts(model, K)
    for k in range(1, K + 1):
        assert sum(d * P[d] for d in divisors(k)) == toral_fixed_points(model, k)
    assert P[1] == toral_fixed_points(model, 1)
    for p in (2, 3, 5, 7, 11, 13):
        if p <= K:
            assert P[p] == (toral_fixed_points(model, p) - toral_fixed_points(model, 1)) // p


def test_mobius_function():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_toral_model_validation():
    with pytest.raises(ModelError):
        ToralModel(1, 1, 0, 1)  # trace 2
    with pytest.raises(ModelError):
        ToralModel(2, 1, 1, 2)  # det 3
    with pytest.raises(ModelError):
        ToralModel(-2, 1, 1, -1)  # trace -3, index alternates
    with pytest.raises(ModelError):
        ToralModel(2.5, 1, 1, 1)


def test_toral_ensemble():
    e = toral_ensemble(CAT, 2)
    assert [(r.length, r.count, r.index) for r in e.records] == [(1.0, 1, -1), (2.0, 2, -1)]
    assert e.min_length == 1.0
    assert e.cutoff == 2.0
    assert abs(e.abscissa - math.log((3 + math.sqrt(5)) / 2)) < 1e-14
    e20 = toral_ensemble(CAT, 20)
    assert all(r.index == -1 for r in e20.records)
    assert abs(e20.abscissa_fit - e20.abscissa) < 0.05


def test_morse_ensemble():
    e = morse_ensemble(MorseModel(2, 1, 4, 1))
    assert [(r.length, r.count, r.index) for r in e.records] == [(1.0, 1, 1), (1.0, 4, -1), (1.0, 1, 1)]
    assert e.complete and e.abscissa == 0.0 and e.min_length == 1.0
    e3 = morse_ensemble(MorseModel(3, 2, 8, 2))
    assert sum(-r.index * r.count for r in e3.records) == 4


@pytest.mark.parametrize("args", [(2, 1, 3, 0), (2, 1, 3, 1), (1, 1, 0, 1), (2, -1, 2, 1), (2, 0, 2, 0)])
def test_morse_rejects(args):
    with pytest.raises(ModelError):
        MorseModel(*args)


def test_synthetic_ensembles():
    e = synthetic_ensemble([(1.0, 1, -1)])
    assert e.min_length == 1.0 and len(e.records) == 1
    e = synthetic_ensemble([(math.log(2), 3, +1)])
    assert abs(e.min_length - 0.6931471805599453) < 1e-15
    e = synthetic_ensemble([(1, 1, -1), (1, 1, +1)])
    assert len(e.records) == 2
    with pytest.raises(ModelError):
        synthetic_ensemble([(0.0, 1, 1)])
    with pytest.raises(ModelError):
        synthetic_ensemble([(-1.0, 1, 1)])
    with pytest.raises(ModelError):
        synthetic_ensemble([(1.0, 1, 0)])


def test_ensemble_invariants():
    with pytest.raises(ModelError):
        OrbitEnsemble((ClosedOrbitRecord(1.0, 1, 1),), 0.5, 0.0, 2.0)
    with pytest.raises(ModelError):
        OrbitEnsemble((ClosedOrbitRecord(3.0, 1, 1),), 3.0, 0.0, 2.0)
    with pytest.raises(ModelError):
        OrbitEnsemble((ClosedOrbitRecord(1.0, 1, 1),), 1.0, -0.1, 2.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0.1, 20), st.integers(1, 50), st.sampled_from([-1, 1])), min_size=1, max_size=30))
def test_counting_function_properties(spec):
    e = synthetic_ensemble(spec)
    x, nu = counting_function(e.lengths, e.counts)
    assert np.all(np.diff(x) > 0)
    assert np.all(np.diff(nu) >= 0)
    assert nu[-1] == e.total_count
    assert np.all(nu == np.round(nu))


def test_assumptions():
    for e in (toral_ensemble(CAT, 15), morse_ensemble(MorseModel(2, 1, 4, 1)), synthetic_ensemble([(1, 2, 1)])):
        assert check_assumptions(e) == {"A1": True, "A2": True, "A3": True}


@pytest.mark.parametrize("c", [0.7, 1.0, 1.5])
def test_growth_fit_recovers_rate(c):
    e = exponential_growth_ensemble(c, 25.0)
    assert abs(abscissa_estimate(e) - c) <= 0.05 * c


def test_insufficient_data():
    with pytest.raises(InsufficientDataError):
        abscissa_estimate(synthetic_ensemble([(1.0, 3, -1)], cutoff=1.0))

import math

import numpy as np
from hypothesis import given, strategies as st

from spectra_corpus import CORPUS
from zetalab import serialization as ser
from zetalab.cohomology import induced_action
from zetalab.orbit_models import MorseModel, ToralModel, morse_ensemble, synthetic_ensemble, toral_ensemble
from zetalab.regdet import spectrum_from_action

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(finite)
def test_float_roundtrip_exact(x):
    assert float(ser.fmt_float(x)) == x


def test_nonfinite_floats():
    assert ser.fmt_float(math.inf) == "Infinity"
    assert ser.fmt_float(-math.inf) == "-Infinity"
    assert ser.fmt_float(math.nan) == "NaN"
    assert math.isinf(ser.loads(ser.dumps({"x": math.inf}))["x"])


@given(st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False), max_size=8))
def test_complex_and_numpy_values(values):
    doc = ser.loads(ser.dumps({"v": np.array(values, dtype=complex), "n": np.int64(3), "b": np.bool_(True)}))
    assert [complex(d["re"], d["im"]) for d in doc["v"]] == values
    assert doc["n"] == 3 and doc["b"] is True


def _same_ensemble(a, b):
    assert a.records == b.records
    assert (a.min_length, a.abscissa, a.cutoff, a.abscissa_source, a.abscissa_fit, a.label) == \
           (b.min_length, b.abscissa, b.cutoff, b.abscissa_source, b.abscissa_fit, b.label)


def test_ensemble_roundtrip():
    for ens in (toral_ensemble(ToralModel(2, 1, 1, 1), 20), morse_ensemble(MorseModel(3, 2, 8, 2)),
                synthetic_ensemble([(0.5, 1, 1), (0.9, 3, -1), (1.7, 6, 1), (2.2, 11, 1)], cutoff=2.5)):
        back = ser.ensemble_from_dict(ser.loads(ser.dumps(ser.ensemble_to_dict(ens))))
        _same_ensemble(ens, back)


def test_complete_ensemble_cutoff_is_null():
    d = ser.loads(ser.dumps(ser.ensemble_to_dict(morse_ensemble(MorseModel(2, 1, 4, 1)))))
    assert d["cutoff"] is None


def test_spectrum_roundtrip():
    for spec in CORPUS.values():
        assert ser.spectrum_from_dict(ser.loads(ser.dumps(ser.spectrum_to_dict(spec)))) == spec
    g = spectrum_from_action(induced_action(ToralModel(5, 2, 2, 1)))
    assert ser.graded_from_dict(ser.loads(ser.dumps(ser.graded_to_dict(g)))) == g


def test_csv_rows():
    text = ser.rows_to_csv([{"a": 0.1, "b": "ok"}, {"a": np.float64(1 / 3)}], ["a", "b"])
    lines = text.splitlines()
    assert lines[0] == "a,b"
    assert float(lines[2].split(",")[0]) == 1 / 3
    assert lines[1].endswith(",ok")

"""JSON and CSV output.

Floats are written with 17 significant digits so that every emitted value
parses back to the identical double.  Complex numbers become {"re", "im"}
objects; an infinite cutoff is written as null.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable

import numpy as np

from .orbit_models import ClosedOrbitRecord, OrbitEnsemble
from .regdet import GradedSpectrum, LadderSpectrum, SpectrumDescriptor


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def to_plain(obj: Any) -> Any:
    """Recursively convert numpy scalars, complex numbers and tuples to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def _dump(obj: Any, indent: int, level: int, out: list[str]):
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _dump(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end_pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + json.dumps(k) + ": ")
            _dump(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end_pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    out: list[str] = []
    _dump(to_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


# ------------------------------------------------------------- ensembles ---

def ensemble_to_dict(ens: OrbitEnsemble) -> dict:
    return {
        "records": [{"length": r.length, "count": r.count, "index": r.index} for r in ens.records],
        "min_length": ens.min_length,
        "abscissa": ens.abscissa,
        "cutoff": None if ens.complete else ens.cutoff,
        "abscissa_source": ens.abscissa_source,
        "abscissa_fit": ens.abscissa_fit,
        "label": ens.label,
    }


def ensemble_from_dict(d: dict) -> OrbitEnsemble:
    records = tuple(ClosedOrbitRecord(float(r["length"]), int(r["count"]), int(r["index"]))
                    for r in d["records"])
    cutoff = math.inf if d.get("cutoff") is None else float(d["cutoff"])
    fit = d.get("abscissa_fit")
    return OrbitEnsemble(records, float(d["min_length"]), float(d["abscissa"]), cutoff,
                         abscissa_source=d.get("abscissa_source", "estimate"),
                         abscissa_fit=None if fit is None else float(fit),
                         label=d.get("label", ""))


# ------------------------------------------------------------- spectra ---

def spectrum_to_dict(spec: SpectrumDescriptor) -> dict:
    return {
        "ladders": [{"base_re": l.base.real, "base_im": l.base.imag, "mult": l.multiplicity}
                    for l in spec.ladders],
        "isolated": [{"re": rho.real, "im": rho.imag, "mult": m} for rho, m in spec.isolated],
    }


def spectrum_from_dict(d: dict) -> SpectrumDescriptor:
    ladders = tuple(LadderSpectrum(complex(l["base_re"], l["base_im"]), int(l.get("mult", 1)))
                    for l in d.get("ladders", []))
    isolated = tuple((complex(p["re"], p["im"]), int(p.get("mult", 1))) for p in d.get("isolated", []))
    return SpectrumDescriptor(ladders, isolated)


def graded_to_dict(g: GradedSpectrum) -> dict:
    return {"degrees": [spectrum_to_dict(g[n]) for n in range(3)], "label": g.label}


def graded_from_dict(d: dict) -> GradedSpectrum:
    return GradedSpectrum(tuple(spectrum_from_dict(x) for x in d["degrees"]), label=d.get("label", ""))


# ----------------------------------------------------------------- csv ---

def rows_to_csv(rows: Iterable[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        cells = []
        for c in columns:
            v = row.get(c, "")
            cells.append(fmt_float(float(v)) if isinstance(v, (float, np.floating)) else v)
        writer.writerow(cells)
    return buf.getvalue()

"""Command-line entry point.

Exit codes: 0 success or all checks passed, 1 a verification failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import serialization as ser
from .cohomology import induced_action, orbit_exp_identity_check, verify_lefschetz
from .contour import HankelContour, derivative_at_zero_logzeta, gamma_reciprocal_check, verify_contour_identity
from .errors import DomainError, PoleError, ZetaLabError
from .orbit_models import (MorseModel, OrbitEnsemble, ToralModel, morse_ensemble, synthetic_ensemble,
                           toral_ensemble)
from .regdet import (assemble_determinant_formula, det_from_xi, det_inf, morse_degree1_prediction,
                     spectrum_from_action, type_ii_skeleton)
from .trace_formula import (BumpFunction, TestFunctionF, imaginary_spectrum_decay,
                            poisson_mollified_check, verify_xi_orbit_identity)
from .zeta_engine import convergence_region, euler_product, morse_zeta_closed, toral_zeta_closed

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SUITES = ("lefschetz", "detformula", "xiorbit", "contour", "traceformula")
CSV_COLUMNS = ["s_re", "s_im", "value_re", "value_im", "error_bound", "closed_re", "closed_im", "flag"]


class ConfigError(Exception):
    pass


# --------------------------------------------------------------- parsing ---

def _int_list(text: str, n: int, what: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"{what} must be {n} comma-separated integers") from exc
    if len(vals) != n:
        raise ConfigError(f"{what} must be {n} comma-separated integers")
    return vals


def _axis(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid axis {spec!r} must look like start:stop:count")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise ConfigError("grid axes need at least one point")
    return np.linspace(lo, hi, n)


def parse_s_grid(text: str) -> list[complex]:
    """re0:re1:n[,im0:im1:m] -> row-major list of s values."""
    re_part, _, im_part = text.partition(",")
    re_axis = _axis(re_part)
    im_axis = _axis(im_part) if im_part else np.array([0.0])
    return [complex(r, i) for r in re_axis for i in im_axis]


def parse_records(text: str) -> list[tuple[float, int, int]]:
    """'length:count:index,...'"""
    out = []
    for item in text.split(","):
        bits = item.split(":")
        if len(bits) != 3:
            raise ConfigError(f"record {item!r} must look like length:count:index")
        out.append((float(bits[0]), int(bits[1]), int(bits[2])))
    return out


def _threads() -> int:
    raw = os.environ.get("ZETALAB_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError("ZETALAB_THREADS must be a positive integer") from exc
    if n < 1:
        raise ConfigError("ZETALAB_THREADS must be a positive integer")
    return n


def _pmap(fn: Callable, items: Sequence) -> list:
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))  # map keeps input order


def build_model(args):
    """ToralModel, MorseModel or None from --matrix / --genus --critical."""
    if getattr(args, "matrix", None) and getattr(args, "genus", None) is not None:
        raise ConfigError("give either --matrix or --genus/--critical, not both")
    if getattr(args, "matrix", None):
        return ToralModel.from_sequence(_int_list(args.matrix, 4, "--matrix"))
    if getattr(args, "genus", None) is not None:
        if not args.critical:
            raise ConfigError("--genus needs --critical n0,n1,n2")
        return MorseModel(args.genus, *_int_list(args.critical, 3, "--critical"))
    return None


def ensemble_for(model, max_period: int) -> OrbitEnsemble:
    if isinstance(model, ToralModel):
        return toral_ensemble(model, max_period)
    return morse_ensemble(model)


def emit(args, payload, text: str | None = None, csv_text: str | None = None):
    fmt = getattr(args, "format", "text")
    if fmt == "csv" and csv_text is not None:
        body = csv_text
    elif fmt == "json" or text is None:
        body = ser.dumps(payload)
    else:
        body = text
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(body if fmt != "text" else ser.dumps(payload))
        if text is not None:
            print(text)
    else:
        sys.stdout.write(body if body.endswith("\n") else body + "\n")


# -------------------------------------------------------------- commands ---

def _summary(ens: OrbitEnsemble) -> str:
    region = convergence_region(ens)
    lines = [f"{'length':>10} {'count':>20} {'index':>6}"]
    lines += [f"{r.length:>10g} {r.count:>20d} {r.index:>+6d}" for r in ens.records]
    cutoff = "inf (complete)" if ens.complete else f"{ens.cutoff:g}"
    lines.append(f"m = {ens.min_length:g}  a = {ens.abscissa:.10g} ({ens.abscissa_source})  "
                 f"b = {region.b:.10g}  cutoff = {cutoff}")
    if ens.abscissa_fit is not None:
        lines.append(f"fitted growth rate = {ens.abscissa_fit:.6g}")
    return "\n".join(lines)


def cmd_model(args) -> int:
    if args.kind == "toral":
        if not args.matrix:
            raise ConfigError("model toral needs --matrix a,b,c,d")
        model = ToralModel.from_sequence(_int_list(args.matrix, 4, "--matrix"))
        ens = toral_ensemble(model, args.max_period)
        payload = {"ensemble": ser.ensemble_to_dict(ens),
                   "spectrum": ser.graded_to_dict(spectrum_from_action(induced_action(model)))}
    elif args.kind == "morse":
        if args.genus is None or not args.critical:
            raise ConfigError("model morse needs --genus and --critical")
        ens = morse_ensemble(MorseModel(args.genus, *_int_list(args.critical, 3, "--critical")))
        payload = {"ensemble": ser.ensemble_to_dict(ens)}
    else:
        if not args.records:
            raise ConfigError("model synthetic needs --records length:count:index,...")
        ens = synthetic_ensemble(parse_records(args.records), cutoff=args.cutoff)
        payload = {"ensemble": ser.ensemble_to_dict(ens)}
    emit(args, payload, _summary(ens))
    return EXIT_OK


def _zeta_row(ens: OrbitEnsemble, closed: Callable | None, s: complex) -> dict:
    row = {"s_re": s.real, "s_im": s.imag, "value_re": math.nan, "value_im": math.nan,
           "error_bound": math.inf, "closed_re": math.nan, "closed_im": math.nan, "flag": "ok"}
    if closed is not None:
        try:
            c = closed(s)
            row["closed_re"], row["closed_im"] = c.real, c.imag
        except PoleError:
            row["flag"] = "pole"
    if not ens.complete and s.real <= convergence_region(ens).b:
        row["flag"] = "out-of-region"
        return row
    try:
        res = euler_product(ens, s)
    except PoleError:
        row["flag"] = "pole"
        return row
    except DomainError:
        row["flag"] = "out-of-region"
        return row
    row["value_re"], row["value_im"], row["error_bound"] = res.value.real, res.value.imag, res.error_bound
    if closed is not None and row["flag"] == "ok":
        diff = abs(res.value - complex(row["closed_re"], row["closed_im"]))
        if diff > res.error_bound + 1e-12 * max(1.0, abs(res.value)):
            row["flag"] = "mismatch"
    return row


def cmd_zeta(args) -> int:
    model = build_model(args)
    if args.ensemble:
        with open(args.ensemble) as fh:
            doc = ser.loads(fh.read())
        ens = ser.ensemble_from_dict(doc.get("ensemble", doc))
        closed = None
    elif model is None:
        raise ConfigError("zeta needs --matrix, --genus/--critical or --ensemble")
    else:
        ens = ensemble_for(model, args.max_period)
        closed = ((lambda s: toral_zeta_closed(model, s)) if isinstance(model, ToralModel)
                  else (lambda s: morse_zeta_closed(model, s)))
    grid = parse_s_grid(args.s_grid)
    rows = _pmap(lambda s: _zeta_row(ens, closed, s), grid)
    text = "\n".join(f"s = {r['s_re']:+.6g}{r['s_im']:+.6g}i  zeta = {r['value_re']:+.15g}{r['value_im']:+.15g}i"
                     f"  bound = {r['error_bound']:.3g}  closed = {r['closed_re']:+.15g}{r['closed_im']:+.15g}i"
                     f"  [{r['flag']}]" for r in rows)
    emit(args, {"rows": rows}, text, ser.rows_to_csv(rows, CSV_COLUMNS))
    return EXIT_OK


def cmd_regdet(args) -> int:
    grid = parse_s_grid(args.s_grid)
    if args.spectrum:
        with open(args.spectrum) as fh:
            doc = ser.loads(fh.read())
        spec = ser.spectrum_from_dict(doc)
        rows = [{"s_re": s.real, "s_im": s.imag, "det": det_inf(spec, s), "det_from_xi": det_from_xi(spec, s)}
                for s in grid]
        emit(args, {"rows": rows})
        return EXIT_OK
    model = build_model(args)
    if not isinstance(model, ToralModel):
        raise ConfigError("regdet needs --matrix or --spectrum")
    graded = spectrum_from_action(induced_action(model))
    rows = []
    for s in grid:
        a = assemble_determinant_formula(graded, s)
        c = toral_zeta_closed(model, s)
        rows.append({"s_re": s.real, "s_im": s.imag, "determinant": a, "closed": c,
                     "rel_diff": abs(a - c) / abs(c)})
    emit(args, {"spectrum": ser.graded_to_dict(graded), "rows": rows})
    return EXIT_OK


# ---------------------------------------------------------------- verify ---

def _suite_lefschetz(model, args) -> dict:
    if not isinstance(model, ToralModel):
        raise ConfigError("the lefschetz suite needs a toral model (--matrix)")
    rows = verify_lefschetz(model, args.max_period or 15)
    exp_check = orbit_exp_identity_check(model, 2.0, 25)
    return {"pass": all(r["pass"] for r in rows) and exp_check["pass"], "lefschetz": rows,
            "orbit_exp_identity": exp_check}


def _suite_detformula(model, args) -> dict:
    grid = parse_s_grid(args.s_grid or "2:4:5,-1:1:4")
    rows = []
    if isinstance(model, ToralModel):
        graded = spectrum_from_action(induced_action(model))
        ens = toral_ensemble(model, max(args.max_period or 25, 25))
        for s in grid:
            a = assemble_determinant_formula(graded, s)
            c = toral_zeta_closed(model, s)
            e = euler_product(ens, s)
            ok = abs(a - c) <= args.tol_det * abs(c) and abs(e.value - c) <= e.error_bound + 1e-12
            rows.append({"s": s, "determinant": a, "closed": c, "euler": e.value,
                         "euler_bound": e.error_bound, "pass": ok})
    else:
        ens = morse_ensemble(model)
        skeleton = type_ii_skeleton()
        for s in grid:
            e = euler_product(ens, s).value
            c = morse_zeta_closed(model, s)
            pred = morse_degree1_prediction(model.genus, s)
            den = 1.0
            for n in (0, 2):
                den *= det_inf(skeleton[n], s)
            normalized = pred / den
            ok = abs(e - c) <= 1e-13 * max(1.0, abs(c)) and abs(normalized - c) <= 1e-13 * max(1.0, abs(c))
            rows.append({"s": s, "euler": e, "closed": c, "degree1_prediction": pred,
                         "prediction_over_s2": normalized, "pass": ok})
    return {"pass": all(r["pass"] for r in rows), "rows": rows}


def _require_z(args) -> complex:
    z = complex(args.z)
    if z.real <= 5:
        raise ConfigError(f"--z {args.z}: Re(z) > 5 is required")
    return z


def _suite_xiorbit(model, args) -> dict:
    if not isinstance(model, ToralModel):
        raise ConfigError("the xiorbit suite needs a toral model; the degree-1 spectrum of "
                          "the Morse example is not known")
    z = _require_z(args)
    s_values = [complex(v) for v in (args.s or [2.5, 3.0, 3.5, 3 + 0.7j])]
    rows = [verify_xi_orbit_identity(model, z, s, truncation=args.truncation or 60, tol=args.tol)
            for s in s_values]
    return {"pass": all(r["pass"] for r in rows), "rows": rows}


def _suite_contour(model, args) -> dict:
    s = complex(args.s[0]) if args.s else 3.0
    out = {}
    if isinstance(model, ToralModel):
        z = _require_z(args)
        out["contour_identity"] = verify_contour_identity(model, z, s, HankelContour.for_s(s))
    out["gamma_reciprocal"] = [dict(c=c, z=z0, **gamma_reciprocal_check(c, z0))
                               for c in (1.0, 2.0, 5.0) for z0 in (0.5, 1.0, 3.0, 6.0)]
    s_log = s if isinstance(model, ToralModel) else (complex(args.s[0]) if args.s else 2.0)
    out["log_zeta_routes"] = derivative_at_zero_logzeta(model, s_log, HankelContour.for_s(s_log))
    ok = all(r["discrepancy"] <= 1e-6 for r in out["gamma_reciprocal"]) and out["log_zeta_routes"]["pass"]
    if "contour_identity" in out:
        ok = ok and out["contour_identity"]["pass"]
    out["pass"] = ok
    return out


def _suite_traceformula(model, args) -> dict:
    if not isinstance(model, ToralModel):
        raise ConfigError("the traceformula suite needs a toral model (--matrix)")
    nu_max = args.nu_max or 2000
    on = poisson_mollified_check(model, BumpFunction(1.0, 0.3), nu_max, tol=1e-6)
    off = poisson_mollified_check(model, BumpFunction(1.5, 0.3), nu_max, tol=1e-6)
    decay = imaginary_spectrum_decay(10 ** 4, TestFunctionF(12.0, 2.0))
    decay_ok = decay["exponent_rho"] <= -3.8 and decay["last_increment"] < 1e-8
    return {"pass": on["pass"] and off["pass"] and decay_ok, "bump_on_orbit": on, "bump_off_orbit": off,
            "imaginary_decay": {"exponent_rho": decay["exponent_rho"], "exponent_j": decay["exponent_j"],
                                "last_increment": decay["last_increment"], "pass": decay_ok}}


SUITE_FUNCS = {"lefschetz": _suite_lefschetz, "detformula": _suite_detformula, "xiorbit": _suite_xiorbit,
               "contour": _suite_contour, "traceformula": _suite_traceformula}


def cmd_verify(args) -> int:
    model = build_model(args) or ToralModel(2, 1, 1, 1)
    if args.suite == "all":
        names = SUITES if isinstance(model, ToralModel) else ("detformula", "contour")
    else:
        names = (args.suite,)
    if "xiorbit" in names or "contour" in names:
        if isinstance(model, ToralModel):
            _require_z(args)
    report = {}
    for name in names:
        report[name] = SUITE_FUNCS[name](model, args)
    passed = all(r["pass"] for r in report.values())
    text = "\n".join(f"{name:<13} {'PASS' if r['pass'] else 'FAIL'}" for name, r in report.items())
    emit(args, {"pass": passed, "suites": report}, text)
    return EXIT_OK if passed else EXIT_FAIL


# ------------------------------------------------------------------ main ---

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zetalab", description="Dynamical zeta functions from closed-orbit data")
    sub = p.add_subparsers(dest="command", required=True)

    def model_flags(sp):
        sp.add_argument("--matrix", help="toral matrix a,b,c,d")
        sp.add_argument("--genus", type=int)
        sp.add_argument("--critical", help="Morse critical point counts n0,n1,n2")

    def out_flags(sp, formats=("json", "text")):
        sp.add_argument("--out", help="output path")
        sp.add_argument("--format", choices=formats, default="text")

    m = sub.add_parser("model", help="build an orbit ensemble")
    m.add_argument("kind", choices=["toral", "morse", "synthetic"])
    model_flags(m)
    m.add_argument("--max-period", type=int, default=10)
    m.add_argument("--records", help="synthetic records length:count:index,...")
    m.add_argument("--cutoff", type=float)
    out_flags(m)

    z = sub.add_parser("zeta", help="evaluate zeta on an s-grid")
    model_flags(z)
    z.add_argument("--ensemble", help="ensemble JSON written by 'model'")
    z.add_argument("--max-period", type=int, default=25)
    z.add_argument("--s-grid", default="2:4:5")
    out_flags(z, ("json", "csv", "text"))

    r = sub.add_parser("regdet", help="regularized determinants on an s-grid")
    model_flags(r)
    r.add_argument("--spectrum", help="SpectrumDescriptor JSON")
    r.add_argument("--s-grid", default="2:4:5")
    out_flags(r)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    model_flags(v)
    v.add_argument("--z", type=complex, default=6.0)
    v.add_argument("--s", type=complex, action="append", help="s value (repeatable)")
    v.add_argument("--s-grid")
    v.add_argument("--max-period", type=int)
    v.add_argument("--truncation", type=int)
    v.add_argument("--nu-max", type=int)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--tol-det", type=float, default=1e-12)
    out_flags(v)
    return p


def _validate(args):
    for name in ("max_period", "truncation", "nu_max"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise ConfigError(f"--{name.replace('_', '-')} must be >= 1")
    for name in ("tol", "tol_det"):
        v = getattr(args, name, None)
        if v is not None and not v > 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be positive")


COMMANDS = {"model": cmd_model, "zeta": cmd_zeta, "regdet": cmd_regdet, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        return COMMANDS[args.command](args)
    except ArithmeticError as exc:
        # two numerical routes disagreed; checked first since ConsistencyError is a ZetaLabError
        print(f"zetalab: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ConfigError, ZetaLabError, ValueError, OSError) as exc:
        print(f"zetalab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

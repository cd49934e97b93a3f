"""voronoi-lab: batch entry point emitting JSON reports.

Every subcommand takes its parameters from flags, from a strict JSON file
(--config; unknown keys are a usage error), or both, with flags winning.
Exit status: 0 pass, 1 a check failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

THREADS_ENV = "VORONOI_LAB_THREADS"
SIG_DIGITS = 17


class UsageError(Exception):
    pass


# number formatting -------------------------------------------------------------

def _fmt(x: float) -> str:
    if x != x:
        return "nan"
    if x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{SIG_DIGITS - 1}e")


def to_decimal(obj: Any) -> Any:
    """Floats become fixed-precision decimal strings, complex numbers {"re", "im"} pairs."""
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return bool(obj) if obj is not None else None
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _fmt(float(obj.real)), "im": _fmt(float(obj.imag))}
    if isinstance(obj, dict):
        return {str(k): to_decimal(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_decimal(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_decimal(v) for v in obj.tolist()]
    return str(obj)


# parameter handling --------------------------------------------------------------

def _load_config(path: Optional[str], allowed: Dict[str, Any]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _params(args: argparse.Namespace, defaults: Dict[str, Any]) -> Dict[str, Any]:
    params = dict(defaults)
    params.update(_load_config(args.config, defaults))
    for key in defaults:
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    for key, default in defaults.items():
        v = params[key]
        if default is not None and v is not None and not isinstance(v, type(default)):
            if isinstance(default, float) and isinstance(v, int) and not isinstance(v, bool):
                params[key] = float(v)
            elif not (isinstance(default, list) and isinstance(v, list)):
                raise UsageError(f"{key} must be of type {type(default).__name__}")
    return params


# subcommands -------------------------------------------------------------------
# each returns (result, discrepancies, truncation, passed)

VERIFY_DEFAULTS = {"form": "delta", "a": 1, "b": 7, "l": 5, "M": 50.0, "beta": 10.0,
                   "n_max": 70000, "w_level": 1, "tolerance": 1e-6, "path": "auto",
                   "c_variant": "table", "perturb": "none"}


def cmd_verify_voronoi(p: Dict[str, Any]):
    from .hankel import SmoothWindow
    from .mellin import UnitBruhatFunction
    from .newforms import catalog
    from .voronoi import VoronoiInstance, verify
    try:
        inst = VoronoiInstance(catalog(p["form"], p["n_max"]), p["a"], p["b"], p["l"],
                               SmoothWindow.dyadic(p["M"], p["beta"]),
                               UnitBruhatFunction.unit_indicator(p["l"], p["w_level"]),
                               tolerance=p["tolerance"], c_variant=p["c_variant"],
                               perturb=None if p["perturb"] == "none" else p["perturb"])
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc))
    try:
        rep = verify(inst, None if p["path"] == "auto" else p["path"])
    except IndexError:
        raise UsageError(f"n_max = {p['n_max']} is too short for this window and modulus")
    d = rep.dual
    result = {"lhs": rep.lhs, "rhs": rep.rhs, "abs_error": rep.abs_error,
              "rel_error": rep.rel_error, "tolerance": rep.tolerance, "passed": rep.passed,
              "path": rep.path, "branches": rep.branches, "eta": rep.eta,
              "guard_scan_max": rep.guard}
    truncation = {"terms": d.terms, "cut_index": d.cut_index, "tail": d.tail,
                  "max_term": d.max_term, "quadrature_error": d.quadrature_error,
                  "c_range": list(d.c_range), "policy": vars(rep.policy)}
    disc = [] if rep.passed else [{"check": "lhs == rhs", "rel_error": rep.rel_error,
                                   "tail": d.tail, "guard": rep.guard}]
    return result, disc, truncation, rep.passed


GAUSS_DEFAULTS = {"prime": 5, "exponent": 2, "log_image": 1}


def cmd_gauss_sum(p):
    from .characters import MultiplicativeCharacter, epsilon_factor, gauss_sum_spec_form
    try:
        mu = MultiplicativeCharacter(p["prime"], p["exponent"], p["log_image"])
    except ValueError as exc:
        raise UsageError(str(exc))
    if mu.conductor_exponent == 0:
        raise UsageError("the trivial character has no Gauss sum here")
    eps = epsilon_factor(mu)
    result = {"conductor_exponent": mu.conductor_exponent, "epsilon": eps,
              "gauss_sum": gauss_sum_spec_form(mu), "abs_epsilon": abs(eps),
              "epsilon_times_conjugate": eps * epsilon_factor(mu.inverse()), "mu_minus_one": mu(-1)}
    return result, [], {}, True


MELLIN_DEFAULTS = {"prime": 5, "level": 2, "trials": 20, "seed": 0}


def cmd_mellin_roundtrip(p):
    from .mellin import UnitBruhatFunction, mellin_inverse, mellin_spectrum
    rng = np.random.default_rng(p["seed"])
    worst = 0.0
    for _ in range(p["trials"]):
        W = UnitBruhatFunction.random(p["prime"], p["level"], rng)
        worst = max(worst, float(np.abs(mellin_inverse(mellin_spectrum(W)).values - W.values).max()))
    ok = worst < 1e-12
    disc = [] if ok else [{"check": "roundtrip", "max_error": worst}]
    return {"max_error": worst, "threshold": 1e-12}, disc, {}, ok


BESSEL_DEFAULTS = {"weight": 12, "M": 50.0, "beta": 10.0, "y": [0.1, 1.0, 5.0], "sign": 1}


def cmd_bessel_transform(p):
    from .hankel import ArchimedeanType, SmoothWindow, hankel_transform
    win = SmoothWindow.dyadic(p["M"], p["beta"])
    arch = ArchimedeanType.holomorphic(p["weight"])
    rows = []
    for y in p["y"]:
        r = hankel_transform(win, arch, float(y), p["sign"])
        rows.append({"y": float(y), "value": r.value, "error": r.error, "nodes": r.nodes})
    return {"values": rows}, [], {"max_quadrature_error": max(r["error"] for r in rows)}, True


CTABLE_DEFAULTS = {"family": "steinberg-twist", "prime": 5, "l": 2, "t": 0, "variant": "table"}


def _family_rep(family: str, p: int):
    from .acceptance import family_grid
    grid = family_grid(p)
    if family not in grid:
        raise UsageError(f"family must be one of {sorted(grid)}")
    return grid[family][0]


def cmd_c_table(p):
    from .characters import characters_upto
    from .localdata import NotAddressableError, c_bound, c_constant
    rep = _family_rep(p["family"], p["prime"])
    relaxed, literal = c_bound(rep, p["t"])
    rows = []
    disc = []
    for mu in characters_upto(p["prime"], p["l"]):
        entry = {"mu": [mu.modulus_exponent, mu.log_image], "conductor": mu.conductor_exponent}
        try:
            c = c_constant(rep, p["l"], p["t"], mu, p["variant"])
            entry.update(value=c.value, row=c.row, modulus=abs(c.value))
            if abs(c.value) > relaxed * (1 + 1e-12):
                disc.append({"check": "relaxed bound", "mu": entry["mu"], "modulus": abs(c.value)})
        except NotAddressableError as exc:
            entry.update(value=None, row="-", note=str(exc))
        except ZeroDivisionError as exc:
            entry.update(value=None, row="undefined", note=str(exc))
        rows.append(entry)
    result = {"representation": repr(rep), "relaxed_bound": relaxed, "literal_bound": literal,
              "entries": rows}
    return result, disc, {}, not disc


NEWFORM_DEFAULTS = {"name": "delta", "n": 20}


def cmd_newform(p):
    from .newforms import catalog
    try:
        f = catalog(p["name"], p["n"])
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc))
    n = p["n"]
    coeffs = [f.expansion.a(k) for k in range(1, n + 1)]
    lam = f.lambdas(n)[1:]
    result = {"name": f.name, "level": f.level, "weight": f.weight,
              "a": [int(c) if float(c).is_integer() else c for c in coeffs], "lambda": lam}
    return result, [], {}, True


FAREY_DEFAULTS = {"l": 3, "n_l": 16, "log_image": 1, "q": 1, "r": 0}


def _depth_instance(p):
    from .characters import MultiplicativeCharacter
    from .depthlab import DepthInstance
    try:
        chi = MultiplicativeCharacter(p["l"], p["n_l"] // 2, p["log_image"])
        return DepthInstance(p["l"], p["n_l"], chi, p["q"], p["r"], p.get("M", 100.0))
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_farey_dissect(p):
    from .depthlab import DissectionError, farey_dissect
    inst = _depth_instance(p)
    try:
        cells = farey_dissect(inst)
    except DissectionError as exc:
        return {"cells": []}, [{"check": "partition", "message": str(exc)}], {}, False
    return {"alpha": inst.alpha, "cells": [[s.k, s.a, s.b] for s in cells],
            "count": len(cells)}, [], {}, True


LSC_DEFAULTS = {"l": 5, "n_l": 8, "log_image": 1, "q": 1, "r": 0, "c": [2, 3]}


def cmd_lsc_check(p):
    from . import depthlab as dl
    inst = _depth_instance(p)
    gamma = dl.quadratic_gauss_sign(inst.l, inst.n)
    ms = [m for m in range(1, inst.l ** 3) if m % inst.l]
    rows = []
    worst = 0.0
    for s in dl.farey_dissect(inst):
        for c in p["c"]:
            if not dl.closed_form_valid(s, inst, c):
                continue
            diff = float(np.abs(dl.l_sc_closed_form(s, inst, c, ms, gamma)
                                - dl.l_sc_bruteforce(s, inst, c, ms)).max())
            worst = max(worst, diff)
            rows.append({"cell": [s.k, s.a, s.b], "c": c, "max_abs_diff": diff})
    ok = worst < 1e-10
    disc = [] if ok else [{"check": "closed form", "max_abs_diff": worst}]
    return {"gamma": gamma, "max_abs_diff": worst, "cells": rows}, disc, {}, ok


SUITE_DEFAULTS = {"only": []}


def cmd_suite(p):
    from .acceptance import CRITERIA
    numbers = p["only"] or sorted(CRITERIA)
    bad = [k for k in numbers if k not in CRITERIA]
    if bad:
        raise UsageError(f"no criteria numbered {bad}")
    results = []
    for k in numbers:
        r = CRITERIA[k]()
        print(r.line(), file=sys.stderr)
        results.append(r)
    rows = [{"number": r.number, "name": r.name, "passed": r.ok, "metric": r.metric,
             "threshold": r.threshold, "detail": r.detail} for r in results]
    disc = [{"criterion": r.number, "name": r.name, "metric": r.metric} for r in results if not r.ok]
    summary = {"passed": sum(r.ok for r in results), "total": len(results), "criteria": rows}
    return summary, disc, {}, not disc


COMMANDS: Dict[str, tuple] = {
    "verify-voronoi": (cmd_verify_voronoi, VERIFY_DEFAULTS),
    "gauss-sum": (cmd_gauss_sum, GAUSS_DEFAULTS),
    "mellin-roundtrip": (cmd_mellin_roundtrip, MELLIN_DEFAULTS),
    "bessel-transform": (cmd_bessel_transform, BESSEL_DEFAULTS),
    "c-table": (cmd_c_table, CTABLE_DEFAULTS),
    "newform": (cmd_newform, NEWFORM_DEFAULTS),
    "farey-dissect": (cmd_farey_dissect, FAREY_DEFAULTS),
    "lsc-check": (cmd_lsc_check, LSC_DEFAULTS),
    "suite": (cmd_suite, SUITE_DEFAULTS),
}


def _add_flags(sp: argparse.ArgumentParser, defaults: Dict[str, Any]) -> None:
    for key, default in defaults.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(default, list):
            elem = type(default[0]) if default else int
            sp.add_argument(flag, dest=key, type=elem, nargs="+", default=None)
        else:
            sp.add_argument(flag, dest=key, type=type(default), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voronoi-lab", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)
    for name, (_, defaults) in COMMANDS.items():
        sp = subs.add_parser(name)
        sp.add_argument("--config", help="JSON file with parameters; unknown keys are rejected")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--threads", type=int, default=None,
                        help=f"worker count (default ${THREADS_ENV} or 1)")
        sp.add_argument("--timing", action="store_true",
                        help="include wall-clock timings (reports are then not reproducible byte for byte)")
        _add_flags(sp, defaults)
    return parser


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError("thread count must be positive")
    return n


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, defaults = COMMANDS[args.command]
    try:
        threads = _threads(args)
        params = _params(args, defaults)
        t0 = time.perf_counter()
        result, disc, trunc, passed = fn(params)
        elapsed = 1e3 * (time.perf_counter() - t0)
    except UsageError as exc:
        print(f"voronoi-lab {args.command}: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "precision": {"significant_digits": SIG_DIGITS},
              "config": dict(params, threads=threads), "result": result,
              "discrepancies": disc, "truncation": trunc,
              "timing_ms": elapsed if args.timing else None}
    text = json.dumps(to_decimal(report), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

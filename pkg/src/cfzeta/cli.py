"""Command-line entry point: ``cfzeta <command> ...`` or ``python -m cfzeta``."""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, io, tables
from .cache import TableCache
from .errors import CFZetaError, DomainError
from .io import CSVWriter, fmt
from .mobius import ConditionalConvergenceWarning, SeriesTruncation, analytic_zeta_12
from .spectral import peak_periods, spectrum_fit
from .sums import GridSpec, SumSpec, evaluate, phase_trace, scan_rows
from .zeros import DEFAULT_SEED, DEFAULT_TOL, iter_zero_series, refine_zero

log = logging.getLogger("cfzeta")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("I", "j").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def default_threads() -> int:
    env = os.environ.get("CFZETA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"CFZETA_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def fmt_complex(z: complex) -> str:
    return f"{fmt(z.real)}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{fmt(abs(z.imag))}i"


def _sum_spec(a) -> SumSpec:
    return SumSpec(a.N, a.kind, a.p, a.q)


def _sum_config(a) -> dict:
    cfg = {"kind": a.kind, "N": a.N}
    if a.kind == "permuted":
        cfg.update(p=a.p, q=a.q)
    return cfg


def _out(a):
    return open(a.out, "w") if a.out else sys.stdout


def _emit_json(a, payload: dict) -> None:
    fh = _out(a)
    try:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_eval(a) -> int:
    spec = _sum_spec(a)
    z = evaluate(spec, a.s, a.threads)
    if a.json:
        _emit_json(a, {"version": __version__, "config": {**_sum_config(a), "s": fmt_complex(a.s)},
                       "re": z.real, "im": z.imag, "abs": abs(z)})
    else:
        print(fmt_complex(z))
    return 0


def _grid(a) -> GridSpec:
    return GridSpec(a.re_lo, a.re_hi, a.im_lo, a.im_hi, a.re_step, a.im_step)


def cmd_scan(a) -> int:
    spec, grid = _sum_spec(a), _grid(a)
    re_axis = grid.re_axis()
    config = {**_sum_config(a), "grid": [a.re_lo, a.re_hi, a.im_lo, a.im_hi, a.re_step, a.im_step],
              "order": "row-major, im outer, re inner", "flag": "nan marks pole/overflow"}
    if not a.out:
        raise UsageError("scan needs --out")
    with CSVWriter(a.out, "scan", config, ["re_s", "im_s", "abs_zeta"], a.resume, group=len(re_axis)) as w:
        start = len(w.existing) // len(re_axis)
        flagged = 0
        for _, im, row in scan_rows(spec, grid, range(start, grid.shape[0]), a.threads):
            for re_, v in zip(re_axis, row):
                w.write((re_, im, v))
            w.flush()
            flagged += int(np.isnan(row).sum())
    if flagged:
        log.warning("%d grid cells hit a pole or overflow (written as nan)", flagged)
    return 0


def cmd_phase(a) -> int:
    spec = _sum_spec(a)
    pts = phase_trace(spec, a.t_lo, a.t_hi, a.steps)
    ts = [a.t_lo] if a.steps == 1 else np.linspace(a.t_lo, a.t_hi, a.steps)
    config = {**_sum_config(a), "re_s": 0.5, "t": [a.t_lo, a.t_hi, a.steps]}
    with CSVWriter(a.out or "/dev/stdout", "phase", config, ["re_s", "im_s", "re_zeta", "im_zeta"]) as w:
        for t, (zr, zi) in zip(ts, pts):
            w.write((0.5, t, zr, zi))
    return 0


def _record_dict(rec) -> dict:
    return {"N": rec.N, "kind": rec.kind, "re_s": rec.s_re, "im_s": rec.s_im,
            "residual": rec.residual, "iterations": rec.iterations, "converged": rec.converged}


def cmd_find_zero(a) -> int:
    spec = _sum_spec(a)
    rec = refine_zero(spec, a.seed, a.tol, a.max_iter, a.method, workers=a.threads)
    _emit_json(a, {"version": __version__,
                   "config": {**_sum_config(a), "seed": fmt_complex(a.seed), "tol": a.tol,
                              "max_iter": a.max_iter, "method": a.method},
                   "zero": _record_dict(rec), "admitted": rec.admitted(a.threshold)})
    return 0 if rec.converged else 1


def cmd_zero_series(a) -> int:
    if a.N_lo > a.N_hi or a.N_step < 1:
        raise UsageError("need N_lo <= N_hi and N_step >= 1")
    if not a.out:
        raise UsageError("zero-series needs --out")
    config = {"p": a.p, "q": a.q, "N": [a.N_lo, a.N_hi, a.N_step], "seed": fmt_complex(a.seed),
              "tol": a.tol, "max_iter": a.max_iter, "warm_start": True}
    Ns = list(range(a.N_lo, a.N_hi + 1, a.N_step))
    failures = 0
    with CSVWriter(a.out, "zero-series", config, ["N", "re_s", "im_s", "residual", "converged"], a.resume) as w:
        seed = a.seed
        for row in w.existing:
            if row[4] == "1":
                seed = complex(float(row[1]), float(row[2]))
            else:
                failures += 1
        done = len(w.existing)
        for rec in iter_zero_series(a.p, a.q, Ns[done:], seed, a.tol, a.max_iter, workers=a.threads):
            w.write((rec.N, rec.s_re, rec.s_im, rec.residual, rec.converged))
            w.flush()
            failures += not rec.converged
    if failures:
        log.warning("%d refinements did not converge (flagged converged=0)", failures)
    return 0


def cmd_spectrum(a) -> int:
    _, rows = io.read_csv(a.input)
    col = {"re": "re_s", "im": "im_s"}[a.component]
    series = [float(r[col]) for r in rows]
    fit = spectrum_fit(series, tuple(a.band) if a.band else None, a.window)
    if a.out:
        with CSVWriter(a.out, "spectrum", {"input": Path(a.input).name, "component": a.component,
                                           "window": a.window or "rectangular"}, ["freq", "power"]) as w:
            for f, p in zip(fit.freqs, fit.power):
                w.write((f, p))
    summary = {**fit.summary(), "component": a.component, "samples": len(series),
               "peaks": [{"period": per, "power": pw} for per, pw in peak_periods(fit.freqs, fit.power)]}
    if a.window:
        summary["window"] = a.window
    text = json.dumps(summary, indent=2, sort_keys=True)
    if a.summary:
        Path(a.summary).write_text(text + "\n")
    print(text)
    return 0


def cmd_analytic(a) -> int:
    trunc = SeriesTruncation(a.kmax, a.a1max, a.a2max)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionalConvergenceWarning)
        res = analytic_zeta_12(a.s, trunc, a.threads)
    _emit_json(a, {"version": __version__,
                   "config": {"s": fmt_complex(a.s), "kmax": a.kmax, "a1max": a.a1max, "a2max": a.a2max},
                   "note": "double sum over cells is only conditionally convergent",
                   "re": res.value.real, "im": res.value.imag, "integral_re": res.integral.real,
                   "integral_im": res.integral.imag, "tail": res.tail, "covered_width": res.covered_width})
    return 0


def cmd_selftest(a) -> int:
    from .selftest import run

    results = run(a.max_a)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfzeta", description=__doc__)
    ap.add_argument("--version", action="version", version=f"cfzeta {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker count (default: $CFZETA_THREADS or cpu count)")
    common.add_argument("--cache-dir", default=None, help="directory for cached abscissa tables")
    common.add_argument("--out", default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    def sum_args(p, kind="permuted"):
        p.add_argument("--kind", choices=["permuted", "baseline", "shadow", "partial-zeta"], default=kind)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--p", type=int, default=1)
        p.add_argument("--q", type=int, default=2)

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate one sum at one s")
    sum_args(p)
    p.add_argument("--s", type=parse_complex, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", parents=[common], help="|sum| over a rectangle, as CSV")
    sum_args(p)
    for name, val in (("re-lo", 0.0), ("re-hi", 1.0), ("im-lo", 13.0), ("im-hi", 34.0)):
        p.add_argument(f"--{name}", type=float, default=val)
    p.add_argument("--re-step", type=float, default=0.05)
    p.add_argument("--im-step", type=float, default=0.05)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("phase", parents=[common], help="(Re, Im) of the sum along Re s = 1/2")
    sum_args(p, "baseline")
    p.add_argument("--t-lo", type=float, default=13.0)
    p.add_argument("--t-hi", type=float, default=34.0)
    p.add_argument("--steps", type=int, default=2101)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("find-zero", parents=[common], help="refine one zero from a seed")
    sum_args(p)
    p.add_argument("--seed", type=parse_complex, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--method", choices=["nelder-mead", "powell"], default="nelder-mead")
    p.set_defaults(func=cmd_find_zero)

    p = sub.add_parser("zero-series", parents=[common], help="first-zero track over a range of N")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--N-lo", dest="N_lo", type=int, required=True)
    p.add_argument("--N-hi", dest="N_hi", type=int, required=True)
    p.add_argument("--N-step", dest="N_step", type=int, default=1)
    p.add_argument("--seed", type=parse_complex, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_zero_series)

    p = sub.add_parser("spectrum", parents=[common], help="power spectrum and 1/f fit of a zero series")
    p.add_argument("--input", required=True)
    p.add_argument("--component", choices=["re", "im"], default="im")
    p.add_argument("--band", type=float, nargs=2, metavar=("F_LO", "F_HI"))
    p.add_argument("--window", choices=["hann"], default=None)
    p.add_argument("--summary", default=None, help="write the fit summary JSON here")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("analytic", parents=[common], help="S_{1,2} zeta from the cell double sum")
    p.add_argument("--s", type=parse_complex, required=True)
    p.add_argument("--a1max", type=int, default=200)
    p.add_argument("--a2max", type=int, default=200)
    p.add_argument("--kmax", type=int, default=64)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("selftest", parents=[common], help="run the exact-identity checks")
    p.add_argument("--max-a", type=int, default=100)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if a.threads is None:
            a.threads = default_threads()
        if a.threads < 1:
            raise UsageError("--threads must be >= 1")
        tables.set_disk_cache(TableCache(a.cache_dir) if a.cache_dir else None)
        return a.func(a)
    except (UsageError, DomainError) as exc:
        print(f"cfzeta: usage error: {exc}", file=sys.stderr)
        return 2
    except (CFZetaError, OSError) as exc:
        print(f"cfzeta: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:  # e.g. resuming onto a file with another config
        print(f"cfzeta: usage error: {exc}", file=sys.stderr)
        return 2

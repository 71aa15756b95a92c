"""Command-line front end.

Subcommands cover the two models (square barrier, de Sitter-
Schwarzschild) and the inverse problem, emitting CSV tables or JSON
records for offline use.  Numbers are printed with 12 significant
digits and no locale dependence, so identical invocations produce
byte-identical output.  Complex values are `re,im` pairs on the command
line, {"re": ..., "im": ...} objects in JSON, and re/im column pairs in
CSV.  The environment variable QNM_THREADS caps the worker count used
by window scans.

Exit codes: 0 success, 1 usage error, 2 domain/solver error (printed as
the error name plus a one-line remedy).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import barrier, recovery, spectrum
from .errors import QnmError
from .geometry import BlackHoleParams, horizons, lattice_scale
from .zscan import ComplexRect


def _fmt(x):
    return f"{x:.12g}"


def _jnum(x):
    return float(f"{float(x):.12g}")


def _jcomplex(z):
    return {"re": _jnum(z.real), "im": _jnum(z.imag)}


def _parse_complex(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex pair {text!r}")


def _parse_window(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"expected 'remin,remax,immin,immax', got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}")
    return vals


def _parse_sign(text):
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError("sign must be '+' or '-'")


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2) + "\n"


def _shooting_config(args):
    kw = {}
    if getattr(args, "xmax_tol", None) is not None:
        kw["xmax_tol"] = args.xmax_tol
    if getattr(args, "rtol", None) is not None:
        kw["rtol"] = args.rtol
        kw["atol"] = 0.01 * args.rtol
    if getattr(args, "match_point", None) is not None:
        kw["match_point"] = args.match_point
    if getattr(args, "damping_cap", None) is not None:
        kw["damping_cap"] = args.damping_cap
    return spectrum.ShootingConfig(**kw)


def _add_shooting_flags(p):
    p.add_argument("--xmax-tol", type=float, dest="xmax_tol",
                   help="truncate where |V| < this fraction of |lambda|^2")
    p.add_argument("--rtol", type=float,
                   help="integrator relative tolerance")
    p.add_argument("--match-point", type=float, dest="match_point",
                   help="tortoise coordinate where the two solutions meet")
    p.add_argument("--damping-cap", type=float, dest="damping_cap",
                   help="largest |Im lambda| the integrator will accept")


def _add_output_flags(p, default_format):
    p.add_argument("--format", choices=("csv", "json"),
                   default=default_format, help="output format")
    p.add_argument("--output", help="write to this path instead of stdout")


# ---- barrier ----------------------------------------------------------------

def _run_barrier_resonances(args):
    model = barrier.BarrierModel(args.L)
    window = None
    if args.window is not None:
        window = ComplexRect(*args.window)
    zeros = barrier.barrier_resonances(model, window, tol=args.tol)
    if args.format == "json":
        return _json_text([{"lambda": _jcomplex(z.location),
                            "residual": _jnum(z.residual),
                            "multiplicity": z.multiplicity}
                           for z in zeros])
    return _csv_text(("re", "im", "residual", "multiplicity"),
                     [(_fmt(z.location.real), _fmt(z.location.imag),
                       _fmt(z.residual), z.multiplicity) for z in zeros])


def _run_barrier_recover(args):
    L = barrier.recover_length(args.sigma)
    if args.format == "csv":
        return _csv_text(("L",), [(_fmt(L),)])
    return _json_text({"L": _jnum(L)})


# ---- de Sitter-Schwarzschild -------------------------------------------------

def _run_sds_horizons(args):
    params = BlackHoleParams(args.m, args.Lambda)
    hd = horizons(params)
    pairs = [("r_bH", hd.r_bH), ("r_sI", hd.r_sI), ("r_0", hd.r_0),
             ("beta_bH", hd.beta_bH), ("beta_sI", hd.beta_sI),
             ("lattice_scale", lattice_scale(params))]
    if args.format == "json":
        return _json_text({k: _jnum(v) for k, v in pairs})
    return _csv_text(("quantity", "value"),
                     [(k, _fmt(v)) for k, v in pairs])


def _run_sds_lattice(args):
    params = BlackHoleParams(args.m, args.Lambda)
    pts = spectrum.pseudo_poles(params, args.l_max, args.k_max)
    if args.format == "json":
        return _json_text([{"l": p.l, "k": p.k, "sign": p.re_sign,
                            "mu": _jcomplex(p.mu)} for p in pts])
    return _csv_text(("l", "k", "sign", "re", "im"),
                     [(p.l, p.k, p.re_sign, _fmt(p.mu.real),
                       _fmt(p.mu.imag)) for p in pts])


def _run_sds_qnm(args):
    params = BlackHoleParams(args.m, args.Lambda)
    window = spectrum.QnmWindow(ComplexRect(*args.window), args.l)
    cfg = _shooting_config(args)
    zeros = spectrum.qnm_shooting(params, window, cfg, tol=args.tol)
    if args.format == "json":
        return _json_text([{"lambda": _jcomplex(z.location),
                            "residual": _jnum(z.residual),
                            "multiplicity": z.multiplicity}
                           for z in zeros])
    return _csv_text(("re", "im", "residual", "multiplicity"),
                     [(_fmt(z.location.real), _fmt(z.location.imag),
                       _fmt(z.residual), z.multiplicity) for z in zeros])


def _recovery_record(lam, Lambda, l, k, sign, result):
    return {"lambda": _jcomplex(lam), "Lambda": _jnum(Lambda),
            "l": l, "k": k, "sign": sign,
            "m_hat": _jnum(result.m_hat),
            "residual": _jnum(result.residual),
            "condition": _jnum(result.condition),
            "holder_N": _jnum(result.holder_N),
            "class": recovery.classify_resonance(lam).kind}


def _record_text(record, fmt):
    if fmt == "csv":
        keys = list(record)
        flat = []
        for key in keys:
            val = record[key]
            flat.append(_fmt(val["re"]) + "+" + _fmt(val["im"]) + "j"
                        if isinstance(val, dict) else
                        val if isinstance(val, str) else _fmt(val))
        return _csv_text(keys, [flat])
    return _json_text(record)


def _run_sds_recover_lattice(args):
    result = recovery.recover_mass_lattice(args.lam, args.Lambda, args.l,
                                           args.k, args.sign,
                                           gate=args.gate)
    return _record_text(_recovery_record(args.lam, args.Lambda, args.l,
                                         args.k, args.sign, result),
                        args.format)


def _run_sds_recover_numeric(args):
    cfg = _shooting_config(args)
    result = recovery.recover_mass_numeric(args.lam, args.Lambda, args.l,
                                           args.m_init, tol=args.tol,
                                           config=cfg)
    params = BlackHoleParams(result.m_hat, args.Lambda)
    k_hat = recovery._damping_index(args.lam, params, cfg)
    sign = 1 if args.lam.real > 0 else -1
    return _record_text(_recovery_record(args.lam, args.Lambda, args.l,
                                         k_hat, sign, result),
                        args.format)


def _run_sds_stability(args):
    cond, holder = recovery.stability_probe(args.m_hat, args.Lambda,
                                            args.l, args.k, mode=args.mode,
                                            re_sign=args.sign)
    record = {"m_hat": _jnum(args.m_hat), "Lambda": _jnum(args.Lambda),
              "l": args.l, "k": args.k, "sign": args.sign,
              "mode": args.mode, "condition": _jnum(cond),
              "holder_N": _jnum(holder)}
    if args.format == "csv":
        return _csv_text(("condition", "holder_N"),
                         [(_fmt(cond), _fmt(holder))])
    return _json_text(record)


# ---- resonance map -----------------------------------------------------------

def _tiles(rect, step):
    if step is None or step >= max(rect.width, rect.height):
        return [rect]
    nx = max(1, math.ceil(rect.width / step))
    ny = max(1, math.ceil(rect.height / step))
    dx, dy = rect.width / nx, rect.height / ny
    out = []
    for i in range(nx):
        for j in range(ny):
            out.append(ComplexRect(rect.re_min + i * dx,
                                   rect.re_min + (i + 1) * dx,
                                   rect.im_min + j * dy,
                                   rect.im_min + (j + 1) * dy))
    return out


def emit_resonance_map(params, l_max=5, k_max=2,
                       sources=("lattice", "shooting"), window=None,
                       step=None, shooting_l=(), config=None, tol=1e-10):
    """Rows (re, im, source, l, k, confidence) in deterministic order.

    Lattice rows carry confidence "model" (they are an asymptotic
    model, not a computation); shooting rows are "high" for l >= 4 and
    "low" below, where the asymptotic regime is not trusted.  A window
    filters lattice rows only when given; shooting scans require one.
    step, when set, tiles the shooting window so each cell is scanned
    independently.
    """
    rows = []
    c = lattice_scale(params)
    if "lattice" in sources:
        for p in spectrum.pseudo_poles(params, l_max, k_max):
            if window is not None and not window.contains(p.mu):
                continue
            rows.append((p.mu.real, p.mu.imag, "lattice", p.l, p.k, "model"))
    if "shooting" in sources:
        if window is None:
            raise ValueError("a shooting map needs --window")
        if not shooting_l:
            raise ValueError("a shooting map needs at least one --l")
        for l in sorted(set(shooting_l)):
            seen = []
            for tile in _tiles(window, step):
                qw = spectrum.QnmWindow(tile, l)
                for z in spectrum.qnm_shooting(params, qw, config, tol=tol):
                    if any(abs(z.location - s) < 1e-8 for s in seen):
                        continue
                    seen.append(z.location)
                    k_hat = max(int(round(-z.location.imag / c - 0.5)), 0)
                    conf = "high" if l >= 4 else "low"
                    rows.append((z.location.real, z.location.imag,
                                 "shooting", l, k_hat, conf))
    rows.sort(key=lambda r: (r[2], r[3], r[4], r[0]))
    return rows


def _run_map(args):
    params = BlackHoleParams(args.m, args.Lambda)
    window = ComplexRect(*args.window) if args.window is not None else None
    sources = ("lattice", "shooting") if args.source == "both" \
        else (args.source,)
    cfg = _shooting_config(args)
    rows = emit_resonance_map(params, args.l_max, args.k_max, sources,
                              window, args.step, tuple(args.l or ()),
                              cfg, tol=args.tol)
    if args.format == "json":
        return _json_text([{"re": _jnum(re), "im": _jnum(im),
                            "source": src, "l": l, "k": k,
                            "confidence": conf}
                           for re, im, src, l, k, conf in rows])
    return _csv_text(("re", "im", "source", "l", "k", "confidence"),
                     [(_fmt(re), _fmt(im), src, l, k, conf)
                      for re, im, src, l, k, conf in rows])


# ---- parser and dispatch -----------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _build_parser():
    top = _Parser(prog="qnmrecover",
                  description="Scattering resonances and single-mode "
                              "parameter recovery for a square barrier "
                              "and de Sitter-Schwarzschild black holes.")
    sub = top.add_subparsers(dest="command", required=True,
                             parser_class=_Parser)

    bar = sub.add_parser("barrier", help="square-barrier model")
    bsub = bar.add_subparsers(dest="subcommand", required=True,
                              parser_class=_Parser)

    p = bsub.add_parser("resonances",
                        help="resonances of the square barrier",
                        description="Locate resonances (S-matrix poles, "
                                    "zeros of the matching determinant K) "
                                    "of the barrier of half-width L.")
    p.add_argument("--L", type=float, required=True,
                   help="barrier half-width")
    p.add_argument("--window", type=_parse_window,
                   help="search window remin,remax,immin,immax "
                        "(default 0.01,5,-2,-0.01)")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="refinement tolerance")
    _add_output_flags(p, "csv")
    p.set_defaults(run=_run_barrier_resonances)

    p = bsub.add_parser("recover",
                        help="barrier half-width from one resonance",
                        description="Recover the barrier half-width L "
                                    "from a single resonance frequency "
                                    "via the modulus identity at zeros "
                                    "of K.")
    p.add_argument("--sigma", type=_parse_complex, required=True,
                   help="resonance frequency as re,im")
    _add_output_flags(p, "json")
    p.set_defaults(run=_run_barrier_recover)

    sds = sub.add_parser("sds", help="de Sitter-Schwarzschild model")
    ssub = sds.add_subparsers(dest="subcommand", required=True,
                              parser_class=_Parser)

    p = ssub.add_parser("horizons",
                        help="horizon radii and surface gravities",
                        description="Horizon radii r_bH < r_sI (and the "
                                    "cubic's negative root r_0), surface "
                                    "gravities beta, and the lattice "
                                    "scale c.")
    p.add_argument("--m", type=float, required=True, help="black hole mass")
    p.add_argument("--Lambda", type=float, required=True,
                   help="cosmological constant")
    _add_output_flags(p, "csv")
    p.set_defaults(run=_run_sds_horizons)

    p = ssub.add_parser("lattice",
                        help="asymptotic pseudo-pole lattice",
                        description="Enumerate the pseudo-pole lattice "
                                    "mu = (sign (l+1/2) - (i/2)(k+1/2)) c "
                                    "approximating the resonances.")
    p.add_argument("--m", type=float, required=True, help="black hole mass")
    p.add_argument("--Lambda", type=float, required=True,
                   help="cosmological constant")
    p.add_argument("--l-max", type=int, default=5, dest="l_max",
                   help="largest angular momentum")
    p.add_argument("--k-max", type=int, default=2, dest="k_max",
                   help="largest damping index")
    _add_output_flags(p, "csv")
    p.set_defaults(run=_run_sds_lattice)

    p = ssub.add_parser("qnm",
                        help="quasinormal frequencies by shooting",
                        description="Quasinormal frequencies: zeros of "
                                    "the two-sided shooting Wronskian in "
                                    "a lower-half-plane window.")
    p.add_argument("--m", type=float, required=True, help="black hole mass")
    p.add_argument("--Lambda", type=float, required=True,
                   help="cosmological constant")
    p.add_argument("--l", type=int, required=True, help="angular momentum")
    p.add_argument("--window", type=_parse_window, required=True,
                   help="search window remin,remax,immin,immax")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="refinement tolerance")
    _add_shooting_flags(p)
    _add_output_flags(p, "csv")
    p.set_defaults(run=_run_sds_qnm)

    p = ssub.add_parser("recover-lattice",
                        help="closed-form mass from one resonance",
                        description="Mass from a single resonance under "
                                    "an (l, k, sign) hypothesis by "
                                    "inverting the pseudo-pole lattice.")
    p.add_argument("--lambda", type=_parse_complex, required=True,
                   dest="lam", help="resonance frequency as re,im")
    p.add_argument("--Lambda", type=float, required=True,
                   help="cosmological constant")
    p.add_argument("--l", type=int, required=True, help="angular momentum")
    p.add_argument("--k", type=int, required=True, help="damping index")
    p.add_argument("--sign", type=_parse_sign, default=1,
                   help="sign of Re lambda, '+' or '-'")
    p.add_argument("--gate", type=float, default=1e-3,
                   help="largest accepted quotient phase defect, radians")
    _add_output_flags(p, "json")
    p.set_defaults(run=_run_sds_recover_lattice)

    p = ssub.add_parser("recover-numeric",
                        help="mass by matching the shooting zero",
                        description="Mass recovery: secant iteration "
                                    "matches the tracked shooting zero "
                                    "to the input frequency.")
    p.add_argument("--lambda", type=_parse_complex, required=True,
                   dest="lam", help="target frequency as re,im")
    p.add_argument("--Lambda", type=float, required=True,
                   help="cosmological constant")
    p.add_argument("--l", type=int, required=True, help="angular momentum")
    p.add_argument("--m-init", type=float, required=True, dest="m_init",
                   help="starting mass guess")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="acceptance gate on |zero - lambda|")
    _add_shooting_flags(p)
    _add_output_flags(p, "json")
    p.set_defaults(run=_run_sds_recover_numeric)

    p = ssub.add_parser("stability",
                        help="condition and Holder exponent",
                        description="Stability probe at m_hat: condition "
                                    "number |dm/dlambda| and empirical "
                                    "Holder exponent of the recovery.")
    p.add_argument("--m-hat", type=float, required=True, dest="m_hat",
                   help="mass to probe at")
    p.add_argument("--Lambda", type=float, required=True,
                   help="cosmological constant")
    p.add_argument("--l", type=int, required=True, help="angular momentum")
    p.add_argument("--k", type=int, required=True, help="damping index")
    p.add_argument("--mode", choices=("lattice", "shooting"),
                   default="lattice", help="which model to differentiate")
    p.add_argument("--sign", type=_parse_sign, default=1,
                   help="sign of Re lambda, '+' or '-'")
    _add_output_flags(p, "json")
    p.set_defaults(run=_run_sds_stability)

    p = sub.add_parser("map",
                       help="resonance map for offline plotting",
                       description="Resonance map: lattice points and/or "
                                   "computed shooting zeros as rows "
                                   "(re, im, source, l, k, confidence).")
    p.add_argument("--m", type=float, required=True, help="black hole mass")
    p.add_argument("--Lambda", type=float, required=True,
                   help="cosmological constant")
    p.add_argument("--source", choices=("lattice", "shooting", "both"),
                   default="lattice", help="which rows to emit")
    p.add_argument("--l-max", type=int, default=5, dest="l_max",
                   help="largest lattice angular momentum")
    p.add_argument("--k-max", type=int, default=2, dest="k_max",
                   help="largest lattice damping index")
    p.add_argument("--l", type=int, action="append",
                   help="angular momentum to scan (repeatable; "
                        "shooting rows only)")
    p.add_argument("--window", type=_parse_window,
                   help="window remin,remax,immin,immax (required for "
                        "shooting rows; filters lattice rows)")
    p.add_argument("--step", type=float,
                   help="tile the shooting window into cells of this size")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="refinement tolerance")
    _add_shooting_flags(p)
    _add_output_flags(p, "csv")
    p.set_defaults(run=_run_map)

    return top


def dispatch(argv=None):
    """Parse argv, run the subcommand, return the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        text = args.run(args)
    except QnmError as err:
        sys.stderr.write(
            f"{type(err).__name__}: {err}. Remedy: {err.remedy}\n")
        return 2
    except ValueError as err:
        sys.stderr.write(
            f"InvalidInput: {err}. Remedy: check the flag values against "
            "the documented domains\n")
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())

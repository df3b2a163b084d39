"""Command-line interface: ``phi4waves <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 speed outside the admissible regime,
3 verification failure, 4 acceptance-suite failure.
"""
import argparse
import csv
import json
import math
import re
import sys

import numpy as np

from . import acceptance, evolve, spectral, stability
from .errors import ConvergenceError, DomainError, RegimeError, VerificationError
from .fourier import grid
from .wave_families import Family, profile, solve_family

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REGIME = 2
EXIT_VERIFY = 3
EXIT_ACCEPT = 4

_NUMBER = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(pi|π)?\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_number(text):
    """Float from decimal text or a multiple of pi ("4pi", "0.5*pi", "pi")."""
    m = _NUMBER.match(str(text))
    if not m or (m.group(1) is None and m.group(2) is None):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    value = float(m.group(1)) if m.group(1) is not None else 1.0
    if m.group(2):
        value *= math.pi
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def parse_family(text):
    try:
        return Family.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_grid(text):
    """``lo:hi:n`` to a list of n speeds (inclusive endpoints)."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected lo:hi:n")
    lo, hi = parse_number(parts[0]), parse_number(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point count {parts[2]!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("point count must be non-negative")
    if n == 1:
        return [lo]
    return [float(v) for v in np.linspace(lo, hi, n)]


def parse_perturbation(text):
    """``parity:mode:amplitude``, e.g. ``odd:1:1e-3``."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected parity:mode:amplitude")
    try:
        return evolve.Perturbation(mode=int(parts[1]), amplitude=parse_number(parts[2]), parity=parts[0])
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _regime_message(exc, family, L, c):
    msg = str(exc)
    if family is Family.SN_SUBLUMINAL and c == 0.0 and L <= 2.0 * math.pi:
        msg += "; the sub-luminal speed range is (0, 1) only when L > 2 pi, so c = 0 needs L > 2 pi"
    return msg


def cmd_families(args):
    try:
        params = solve_family(args.family, args.L, args.c)
    except RegimeError as exc:
        print(f"regime error: {_regime_message(exc, args.family, args.L, args.c)}", file=sys.stderr)
        return EXIT_REGIME
    print(params.to_json())
    if args.samples:
        if args.samples < 2:
            raise UsageError("--samples must be at least 2")
        x = grid(args.samples, params.L)
        u = profile(params, x)
        out = args.out or f"{params.family.value}_profile.csv"
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("x", "re_phi", "im_phi"))
            for xi, ui in zip(x, u):
                w.writerow((f"{xi:.17g}", f"{ui.real:.17g}", f"{ui.imag:.17g}"))
        print(f"profile written to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_spectrum(args):
    if args.flat is not None:
        _, mat = spectral.flat_hill(args.L, args.N, args.flat)
        rep = spectral.eigensolve(mat, args.modes, label="flat", vectors=False)
        exact = spectral.flat_spectrum(args.L, args.N, args.flat)[: args.modes]
        out = rep.to_dict()
        out["analytic"] = [float(v) for v in exact]
        out["max_abs_error"] = float(np.max(np.abs(rep.eigenvalues - exact)))
        _emit(out)
        return EXIT_OK
    if args.family is None or args.c is None:
        raise UsageError("--family and --c are required unless --flat is given")
    try:
        params = solve_family(args.family, args.L, args.c)
    except RegimeError as exc:
        print(f"regime error: {_regime_message(exc, args.family, args.L, args.c)}", file=sys.stderr)
        return EXIT_REGIME
    try:
        if params.family is Family.SN_SUBLUMINAL:
            _emit(spectral.verify_sn_real_spectrum(params, args.N, args.modes).to_dict())
        elif params.family is Family.SN_COMPLEX_STANDING:
            rr, ri = spectral.verify_complex_spectra(params, args.N, args.modes)
            _emit({"L_sn_R": rr.to_dict(), "L_sn_I": ri.to_dict()})
        else:
            label = "L_dn" if params.family is Family.DN_SUPERLUMINAL else "L_cn"
            _emit(spectral.compute_spectrum(params, label, args.N, args.modes).to_dict())
    except VerificationError as exc:
        reports = exc.report if isinstance(exc.report, tuple) else (exc.report,)
        _emit([r.to_dict() for r in reports if r is not None])
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_stability(args):
    speeds = args.c_grid
    if not speeds:
        raise UsageError("the speed grid is empty")
    rows = stability.sweep(args.family, args.L, speeds, args.N)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            stability.write_sweep_csv(rows, fh, args.family, args.L)
    else:
        stability.write_sweep_csv(rows, sys.stdout, args.family, args.L)
    ok = [r for r in rows if not isinstance(r, tuple)]
    for c, exc in (r for r in rows if isinstance(r, tuple)):
        print(f"c={c!r}: {exc}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_REGIME


def cmd_evolve(args):
    if not args.dt > 0.0:
        raise UsageError("--dt must be positive")
    if args.t_end < 0.0:
        raise UsageError("--t-end must be non-negative")
    try:
        params = solve_family(args.family, args.L, args.c)
    except RegimeError as exc:
        print(f"regime error: {_regime_message(exc, args.family, args.L, args.c)}", file=sys.stderr)
        return EXIT_REGIME
    limit = evolve.dt_max(args.N, params.L)
    if args.dt > limit:
        raise UsageError(f"--dt {args.dt} exceeds the accuracy limit {limit} for N={args.N}")
    pert = args.perturb
    if args.target != pert.target:
        pert = evolve.Perturbation(pert.mode, pert.amplitude, pert.parity, args.target)
    cfg = evolve.EvolveConfig(dt=args.dt, t_end=args.t_end, record_every=args.record_every, perturbation=pert, N=args.N)
    trace = evolve.run_experiment(params, cfg)
    with open(args.out, "w", newline="") as fh:
        evolve.write_trace_csv(trace, fh)
    d = trace.orbital_distance
    summary = {
        "out": args.out,
        "records": len(d),
        "initial_distance": d[0],
        "max_distance": max(d),
        "final_distance": d[-1],
        "energy_drift": trace.relative_drift("energy"),
    }
    if not all(math.isnan(v) for v in trace.parity_defect):
        summary["max_parity_defect"] = max(trace.parity_defect)
    _emit(summary)
    return EXIT_OK


def cmd_verify_all(args):
    print(f"running acceptance criteria ({'quick' if args.quick else 'full'})")
    results = acceptance.run_all(quick=args.quick, report=lambda r: print(r.line(), flush=True))
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_ACCEPT if failed else EXIT_OK


def build_parser():
    p = _Parser(prog="phi4waves", description="Periodic elliptic waves of the phi^4 equation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def wave_args(sp, need_c=True):
        sp.add_argument("--family", type=parse_family, required=need_c, help="dn, cn, sn-subluminal or sn-complex")
        sp.add_argument("--L", type=parse_number, required=True, help="period (accepts e.g. 4pi)")
        if need_c:
            sp.add_argument("--c", type=parse_number, required=True, help="wave speed")

    sp = sub.add_parser("families", help="solve for one wave and print its parameters")
    wave_args(sp)
    sp.add_argument("--samples", type=int, default=0, help="also write the profile on this many grid points")
    sp.add_argument("--out", help="CSV path for --samples")
    sp.set_defaults(func=cmd_families)

    sp = sub.add_parser("spectrum", help="linearized spectrum with analytic checks")
    wave_args(sp, need_c=False)
    sp.add_argument("--c", type=parse_number)
    sp.add_argument("--N", type=int, default=256)
    sp.add_argument("--modes", type=int, default=8)
    sp.add_argument("--flat", type=parse_number, metavar="V0", help="debug: constant potential V0 instead of a wave")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("stability", help="stability index over a speed grid (CSV)")
    wave_args(sp, need_c=False)
    sp.add_argument("--c-grid", type=parse_grid, required=True, metavar="LO:HI:N")
    sp.add_argument("--N", type=int, default=stability.CLASSIFY_N)
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("evolve", help="evolve a perturbed wave and write an orbital trace")
    wave_args(sp)
    sp.add_argument("--dt", type=parse_number, default=0.01)
    sp.add_argument("--t-end", type=parse_number, default=100.0)
    sp.add_argument("--perturb", type=parse_perturbation, default=evolve.Perturbation(), metavar="PARITY:MODE:AMP")
    sp.add_argument("--target", choices=("phi1", "phi2", "both"), default="both")
    sp.add_argument("--N", type=int, default=256)
    sp.add_argument("--record-every", type=int, default=10)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("verify-all", help="run the acceptance suite")
    sp.add_argument("--quick", action="store_true", help="skip the time-evolution criteria")
    sp.set_defaults(func=cmd_verify_all)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (VerificationError, ConvergenceError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``sle-raman {fsrs,tasp,populations,validate}``.

Exit status 0 on success, 1 for unreadable or invalid input, 2 for numeric
failures.
"""

import argparse
import sys

import numpy as np

from .errors import (NoConvergence, NonFiniteResult, ParseError, SingularMatrix,
                     ToleranceNotMet, ValidationError)
from .kinetics import propagate
from .scenario import emit_csv, load, parse_delays
from .signals import PATHS, fsrs_spectra, static_limit_spectrum, tasp_spectra
from .units import s_to_fs


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _open_sink(out):
    return sys.stdout.buffer if out == "-" else out


def _scenario(args):
    sc = load(args.scenario)
    delays = parse_delays(args.delays) if getattr(args, "delays", None) else sc.delay_values()
    return sc, delays


def cmd_fsrs(args):
    sc, delays = _scenario(args)
    model = sc.model()
    shifts = sc.grid.shifts()
    path = args.path or sc.evaluation.path
    spectra = fsrs_spectra(model, shifts, delays, path=path, workers=args.threads,
                           rtol=sc.evaluation.rtol)
    static = [static_limit_spectrum(model, shifts, T) for T in delays] if args.static_limit else None
    emit_csv(spectra, _open_sink(args.out), static=static)
    return 0


def cmd_tasp(args):
    sc, delays = _scenario(args)
    spectra = tasp_spectra(sc.model(), sc.grid.shifts(), delays)
    emit_csv(spectra, _open_sink(args.out))
    return 0


def cmd_populations(args):
    sc = load(args.scenario)
    times = parse_delays(args.times)
    order = np.argsort(times, kind="stable")
    times = times[order]
    model = sc.model()
    p = propagate(model.rates, model.p0, times).populations
    lines = ["time_fs," + ",".join(f"p{s + 1}" for s in range(model.N))]
    for j, t in enumerate(times):
        lines.append(",".join([f"{s_to_fs(t) + 0.0:.9g}"] + [f"{v + 0.0:.9g}" for v in p[:, j]]))
    data = ("\n".join(lines) + "\n").encode("ascii")
    if args.out == "-":
        sys.stdout.buffer.write(data)
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
    return 0


def cmd_validate(args):
    from .validation import run_all

    results = run_all(quick=args.quick)
    width = max(len(r[0]) for r in results)
    ok = True
    print(f"{'check':<{width}}  {'measured':>10}  {'tolerance':>9}  result")
    for name, value, tol in results:
        passed = bool(value <= tol)
        ok &= passed
        print(f"{name:<{width}}  {value:10.2e}  {tol:9.0e}  {'PASS' if passed else 'FAIL'}")
    return 0 if ok else 2


def build_parser():
    parser = _Parser(prog="sle-raman", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fsrs", help="stimulated Raman spectra")
    p.add_argument("--scenario", required=True, help="preset name or scenario file")
    p.add_argument("--delays", help="e.g. 2fs,500fs:10ps:500fs (default: scenario delays)")
    p.add_argument("--out", required=True, help="CSV path, or - for stdout")
    p.add_argument("--path", choices=PATHS)
    p.add_argument("--static-limit", action="store_true", help="add snapshot-average column")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: SLE_RAMAN_THREADS, 0 = auto)")
    p.set_defaults(func=cmd_fsrs)

    p = sub.add_parser("tasp", help="transient absorption spectra")
    p.add_argument("--scenario", required=True)
    p.add_argument("--delays")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tasp)

    p = sub.add_parser("populations", help="bath population traces")
    p.add_argument("--scenario", required=True)
    p.add_argument("--times", required=True, help="same grammar as --delays")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_populations)

    p = sub.add_parser("validate", help="run the oracle self-checks")
    p.add_argument("--quick", action="store_true", help="coarse grids, well under a minute")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"sle-raman: {exc}", file=sys.stderr)
        return 1
    except NonFiniteResult as exc:
        print(f"sle-raman: numeric failure at shift {exc.shift_cm} cm^-1, "
              f"delay {s_to_fs(exc.delay):g} fs: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, ToleranceNotMet, SingularMatrix, ArithmeticError) as exc:
        print(f"sle-raman: numeric failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"sle-raman: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

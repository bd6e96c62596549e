"""Command line: ``diracinv forward|recover|roundtrip``."""

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import forward
from .dataset import read_spectral_file, write_spectral_file
from .estimators import GelfandLevitanInverter, StageError
from .potentials import make_potential


class CliError(RuntimeError):
    def __init__(self, stage, msg):
        self.stage = stage
        super().__init__(f"[{stage}] {msg}")


def _angle(text):
    """Radians, also accepting ``pi`` expressions such as ``-pi/2`` or ``pi/4``."""
    t = text.strip().replace(" ", "")
    try:
        return float(t)
    except ValueError:
        pass
    sign = -1.0 if t.startswith("-") else 1.0
    t = t.lstrip("+-")
    num, _, den = t.partition("/")
    if num.endswith("pi"):
        coef = num[:-2].rstrip("*") or "1"
        try:
            return sign * float(coef) * math.pi / (float(den) if den else 1.0)
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}")


def write_potential_csv(path, pot):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "p", "q"])
        for row in zip(pot.x, pot.p, pot.q):
            w.writerow([repr(float(v)) for v in row])


def write_report(path, report):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_forward(potential, alpha, beta, M, out=None, n_steps=None):
    try:
        pot = make_potential(potential)
    except (ValueError, OSError) as exc:
        raise CliError("potential", exc) from exc
    t0 = time.perf_counter()
    try:
        data = forward.spectral_data(pot, alpha, beta, M, n_steps=n_steps)
    except forward.BracketError as exc:
        raise CliError("forward", exc) from exc
    elapsed = time.perf_counter() - t0
    resid = np.abs(forward.char_value(pot, alpha, beta, data.lam, n_steps=n_steps))
    if out is not None:
        write_spectral_file(out, data)
    return data, {"max_char_residual": float(resid.max()), "forward_seconds": elapsed}


def make_inverter(args, beta=None):
    return GelfandLevitanInverter(
        N=args.n, mesh=args.mesh, variant=args.variant, route=args.route,
        m_total=args.m_total, k_max=args.k_max, beta=beta,
    )


def run_recover(data, args, beta=None):
    inv = make_inverter(args, beta=beta)
    try:
        inv.fit(data)
    except StageError as exc:
        raise CliError(exc.stage, exc.cause) from exc
    return inv


def _recover_flags(p):
    p.add_argument("--mesh", type=int, default=100, help="number of uniform mesh points (default 100)")
    p.add_argument("--n", type=int, default=10, help="truncation order N (default 10)")
    p.add_argument("--m-total", type=int, default=None, help="extend with asymptotic pairs to indices -Mt..Mt")
    p.add_argument("--k-max", type=int, default=12, help="largest expansion order tried (default 12)")
    p.add_argument("--beta-known", type=_angle, default=None, help="right angle, overriding the input")
    p.add_argument("--route", choices=["first", "goursat"], default="first")
    p.add_argument("--variant", choices=["c", "alpha"], default="c")


def build_parser():
    parser = argparse.ArgumentParser(prog="diracinv", description="Inverse spectral problem for 1-D Dirac systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    pf = sub.add_parser("forward", help="compute spectral data of a potential")
    pf.add_argument("--potential", required=True, help="zero, constant(p0,q0), example1..example4 or a CSV file")
    pf.add_argument("--alpha", type=_angle, required=True)
    pf.add_argument("--beta", type=_angle, required=True)
    pf.add_argument("--m", type=int, required=True, help="indices -M..M")
    pf.add_argument("--out", required=True)
    pf.add_argument("--steps", type=int, default=None, help="integrator steps (default: automatic)")

    pr = sub.add_parser("recover", help="recover a potential from spectral data")
    pr.add_argument("--in", dest="inp", required=True)
    pr.add_argument("--out", required=True, help="CSV table x,p,q")
    pr.add_argument("--report", required=True, help="JSON run report")
    _recover_flags(pr)

    pt = sub.add_parser("roundtrip", help="forward then recover, reporting errors against the truth")
    pt.add_argument("--potential", required=True)
    pt.add_argument("--alpha", type=_angle, default=-math.pi / 2)
    pt.add_argument("--beta", type=_angle, default=0.0)
    pt.add_argument("--m", type=int, required=True)
    pt.add_argument("--hide-beta", action="store_true", help="recover beta instead of passing it on")
    pt.add_argument("--out", default=None)
    pt.add_argument("--report", default=None)
    _recover_flags(pt)
    return parser


def cmd_forward(args):
    _, info = run_forward(args.potential, args.alpha, args.beta, args.m, args.out, args.steps)
    print(f"wrote {2 * args.m + 1} pairs to {args.out}; max |char residual| = {info['max_char_residual']:.3e}")


def cmd_recover(args):
    try:
        data = read_spectral_file(args.inp)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError("read", exc) from exc
    inv = run_recover(data, args, beta=args.beta_known)
    write_potential_csv(args.out, inv.potential_)
    write_report(args.report, inv.report_)
    _summary(inv.report_)


def cmd_roundtrip(args):
    pot = make_potential(args.potential)
    data, info = run_forward(pot, args.alpha, args.beta, args.m)
    if args.hide_beta:
        data = data.with_beta(None)
    inv = run_recover(data, args, beta=args.beta_known)
    report = dict(inv.report_)
    report["errors"] = inv.potential_.errors(pot)
    report["timings"] = {"forward": info["forward_seconds"], **report["timings"]}
    report["beta_true"] = args.beta
    if args.out:
        write_potential_csv(args.out, inv.potential_)
    if args.report:
        write_report(args.report, report)
    _summary(report)
    err = report["errors"]
    print(f"sup|p err| = {err['sup_p']:.3e}  sup|q err| = {err['sup_q']:.3e}  "
          f"L2 p = {err['l2_p']:.3e}  L2 q = {err['l2_q']:.3e}")


def _summary(report):
    beta = report["beta_recovered"]
    bt = "" if beta is None else f"  beta_rec = {beta:.10f}"
    print(f"K = {report['K']}  pairs = {report['n_exact']} exact / {report['n_total']} total  "
          f"max cond = {report['condition_max']:.3f}{bt}")
    d = report["a1_diagnostic"]
    print(f"a1 = {d['a1']:.6e}  vs  -p(0)/pi = {d['minus_p0_over_pi']:.6e}")


COMMANDS = {"forward": cmd_forward, "recover": cmd_recover, "roundtrip": cmd_roundtrip}


_ANGLE_FLAGS = ("--alpha", "--beta", "--beta-known")


def _join_angles(argv):
    # argparse would take "-pi/2" for an option; glue it to its flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _ANGLE_FLAGS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_angles(argv))
    try:
        COMMANDS[args.command](args)
    except CliError as exc:
        print(f"diracinv: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, OSError) as exc:
        print(f"diracinv: error: [{args.command}] {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

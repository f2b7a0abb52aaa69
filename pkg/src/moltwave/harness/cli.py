"""Command line entry point.

    moltwave solve --config run.toml --out results/
    moltwave study convergence --config run.toml --dts 0.4,0.2,0.1 --out results/
    moltwave study stability --config run.toml --steps 10000 --out results/
    moltwave study anisotropy --config run.toml --out results/
"""

from __future__ import annotations

import argparse
import math
import sys

from ..errors import MoltError
from .config import load_config
from .runner import run_simulation
from .studies import anisotropy_study, convergence_study, stability_study


def _dts(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--dts expects a comma-separated list of numbers: {exc}") from exc
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise argparse.ArgumentTypeError("--dts needs positive time steps")
    return vals


def build_parser():
    parser = argparse.ArgumentParser(prog="moltwave", description="A-stable high-order wave solver")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out", default=None, help="output directory (overrides output_dir)")

    common(sub.add_parser("solve", help="run one simulation"))
    study = sub.add_parser("study", help="run a study pipeline")
    kinds = study.add_subparsers(dest="study", required=True)
    conv = kinds.add_parser("convergence", help="time-step refinement table")
    common(conv)
    conv.add_argument("--dts", required=True, type=_dts, help="comma-separated time steps")
    stab = kinds.add_parser("stability", help="long-run boundedness")
    common(stab)
    stab.add_argument("--steps", required=True, type=int)
    common(kinds.add_parser("anisotropy", help="point-source wavefront anisotropy"))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        out = args.out if args.out is not None else config.output_dir
        if args.command == "solve":
            res = run_simulation(config, out_dir=out)
            s = res.summary
            print(f"steps={s['steps']} t={s['final_time']:.6g} max|u|={s['max_abs_u']:.6g} "
                  f"L2err={s['l2_error_max']:.6g} wall={s['wall_seconds']:.3f}s")
        elif args.study == "convergence":
            for r in convergence_study(config, args.dts, out_dir=out):
                print(f"dt={r.dt:<10.6g} err={r.l2_error:.6e} rate={r.rate:.3f} wall={r.wall_seconds:.3f}s")
        elif args.study == "stability":
            r = stability_study(config, args.steps, out_dir=out)
            print(f"P={r.order_P} steps={r.steps} max|u|/max|u0|={r.growth:.6f}")
        else:
            r = anisotropy_study(config, out_dir=out)
            a, b = r.orders[:2]
            print(f"t={r.chosen_time:.6g} metric(P={a})={r.at_chosen(a):.6g} "
                  f"metric(P={b})={r.at_chosen(b):.6g} ratio={r.ratio:.4f}")
    except MoltError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

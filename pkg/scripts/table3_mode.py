"""Errors, rates and per-step cost for the 2D box mode sin(pi x) sin(pi y), P = 1, 2, 3."""

import argparse
from pathlib import Path

from moltwave.harness import convergence_study, load_config

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "mode_2d.toml"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(CONFIG))
    ap.add_argument("--dts", default="0.4,0.2,0.1,0.05")
    ap.add_argument("--orders", default="1,2,3")
    args = ap.parse_args()
    cfg = load_config(args.config)
    dts = [float(v) for v in args.dts.split(",")]
    print(f"{'P':>2} {'dt':>7} {'L2 error':>12} {'rate':>6} {'ms/step':>8}")
    for P in (int(v) for v in args.orders.split(",")):
        for r in convergence_study(cfg.replace(order_P=P, beta=None), dts, out_dir=None):
            steps = cfg.replace(dt=r.dt).num_steps
            print(f"{P:>2} {r.dt:>7g} {r.l2_error:>12.4e} {r.rate:>6.2f} {1e3 * r.wall_seconds / max(1, steps - 1):>8.2f}")


if __name__ == "__main__":
    main()

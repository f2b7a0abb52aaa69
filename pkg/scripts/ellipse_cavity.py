"""Gaussian pulse in the elliptical cavity: energy history, boundary residual, snapshots."""

import argparse
from pathlib import Path

import numpy as np

from moltwave.harness import load_config, run_simulation

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "ellipse_gaussian.toml"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(CONFIG))
    ap.add_argument("--out", default=None)
    ap.add_argument("--width", type=float, default=None, help="override the Gaussian width")
    ap.add_argument("--no-symmetrize", action="store_true")
    args = ap.parse_args()
    cfg = load_config(args.config)
    if args.width is not None:
        cfg = cfg.replace(ic_params=dict(cfg.ic_params, width=args.width))
    if args.no_symmetrize:
        cfg = cfg.replace(symmetrize=False)
    res = run_simulation(cfg, out_dir=args.out)
    e = np.asarray(res.energies)
    print(f"steps {res.state.n}, max|u| {res.summary['max_abs_u']:.4f}, "
          f"boundary residual {res.summary['boundary_residual']:.1e}")
    print(f"energy / step-1 energy: max {e.max() / e[0]:.3f}, final {e[-1] / e[0]:.3f}")
    for n in range(0, e.size, max(1, e.size // 10)):
        print(f"  n={n + 1:<4} E/E1={e[n] / e[0]:.4f}")


if __name__ == "__main__":
    main()

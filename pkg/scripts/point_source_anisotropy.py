"""Wavefront anisotropy of a centred point source for P = 1 and P = 2."""

import argparse
from pathlib import Path

from moltwave.harness import anisotropy_study, load_config

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "point_source.toml"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(CONFIG))
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    res = anisotropy_study(load_config(args.config), out_dir=args.out)
    a, b = res.orders[:2]
    print(f"{'step':>5} {'t':>7} " + " ".join(f"{'metric P' + str(p):>11} {'radius P' + str(p):>11}" for p in res.orders))
    for i, n in enumerate(res.steps):
        cols = " ".join(f"{res.metrics[p][i]:>11.4f} {res.radii[p][i]:>11.4f}" for p in res.orders)
        print(f"{n:>5} {res.times[i]:>7.3f} {cols}")
    print(f"chosen t={res.chosen_time:.3f}: metric P={a} {res.at_chosen(a):.4f}, P={b} {res.at_chosen(b):.4f}, "
          f"ratio {res.ratio:.3f}")


if __name__ == "__main__":
    main()

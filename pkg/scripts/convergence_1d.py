"""Temporal convergence of the 1D standing wave sin(2 pi x) cos(2 pi t), zero Dirichlet data."""

import argparse

from moltwave.harness import RunConfig, convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", default="1,2,3")
    ap.add_argument("--dts", default="0.1,0.05,0.025,0.0125")
    ap.add_argument("--nx", type=int, default=4001)
    ap.add_argument("--quadrature", default="cubic")
    ap.add_argument("--out", default=None, help="directory for errors_P<k>.csv")
    args = ap.parse_args()
    dts = [float(v) for v in args.dts.split(",")]
    base = RunConfig(dimension=1, dt=dts[0], T=1.0, nx=args.nx, bounds=(0.0, 1.0), ic="standing_wave",
                     quadrature=args.quadrature)
    for P in (int(v) for v in args.orders.split(",")):
        out = None if args.out is None else f"{args.out}/P{P}"
        print(f"P = {P}")
        for r in convergence_study(base.replace(order_P=P), dts, out_dir=out):
            print(f"  dt={r.dt:<8g} err={r.l2_error:.4e} rate={r.rate:.2f}")


if __name__ == "__main__":
    main()

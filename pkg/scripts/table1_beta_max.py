"""beta_max(P) for P = 1..10 and the largest |rho| over the stability window."""

import argparse

import numpy as np

from moltwave.params import amplification_factor, beta_max


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmax", type=int, default=10)
    ap.add_argument("--samples", type=int, default=256)
    args = ap.parse_args()
    d = np.linspace(0.0, 1.0, args.samples)
    print(f"{'P':>3} {'beta_max':>10} {'max|rho|':>20} {'max|rho| at 1.05x':>20}")
    for P in range(1, args.pmax + 1):
        b = beta_max(P)
        r = max(np.abs(np.asarray(v)).max() for v in amplification_factor(P, b, d))
        q = max(np.abs(np.asarray(v)).max() for v in amplification_factor(P, 1.05 * b, d))
        print(f"{P:>3} {b:>10.4f} {r:>20.15f} {q:>20.6f}")


if __name__ == "__main__":
    main()

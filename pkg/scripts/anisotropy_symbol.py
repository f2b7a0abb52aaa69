"""Direction dependence of the numerical phase speed from the continuum ADI symbols.

With L_g = 1 / (1 + (k_g / alpha)^2), the split operators have symbols
C = |k|^2 / alpha^2 L_x L_y and D = 1 - L_x L_y; one step advances the phase by
arccos(1 - S / 2) with S = -sum c_pm C^m D^(p-m). The spread of the phase speed
over propagation angle is the anisotropy that survives any spatial refinement.
"""

import argparse
import math

import numpy as np

from moltwave.params import SchemeCoefficients, beta_max


def phase_speed(P, cfl, h, k, theta, c=1.0):
    dt = cfl * h / c
    beta = beta_max(P)
    alpha = beta / (c * dt)
    kx, ky = k * np.cos(theta), k * np.sin(theta)
    lx, ly = 1 / (1 + (kx / alpha) ** 2), 1 / (1 + (ky / alpha) ** 2)
    chat = k**2 / alpha**2 * lx * ly
    dhat = 1 - lx * ly
    co = SchemeCoefficients(P, beta)
    s = -sum(co.c_pm[(p, m)] * chat**m * dhat ** (p - m) for p in range(1, P + 1) for m in range(1, p + 1))
    return np.arccos(np.clip(1 - s / 2, -1, 1)) / (k * c * dt)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cfl", type=float, default=2.0)
    ap.add_argument("--h", type=float, default=2.0 / 79, help="grid spacing of the point-source run")
    ap.add_argument("--orders", default="1,2,3")
    args = ap.parse_args()
    theta = np.linspace(0, math.pi / 4, 181)
    print(f"CFL {args.cfl}, h {args.h:.4g}: phase-speed spread (max - min) / mean over angle")
    print(f"{'k':>8} " + " ".join(f"{'P=' + p:>10}" for p in args.orders.split(",")))
    for k in (2 * math.pi, 4 * math.pi, 8 * math.pi, 12 * math.pi):
        cols = []
        for P in (int(p) for p in args.orders.split(",")):
            v = phase_speed(P, args.cfl, args.h, k, theta)
            cols.append(f"{np.ptp(v) / v.mean():>10.4f}")
        print(f"{k / math.pi:>6.0f}pi " + " ".join(cols))


if __name__ == "__main__":
    main()

"""Eigenvalues of the one-step operator on an embedded domain.

The three-level update is written as the companion map
(u^n, u^{n-1}) -> (2u^n - u^{n-1} + M u^n, u^n) with M the increment
operator assembled column by column; the script reports the largest |rho| and
the largest imaginary part of the spectrum of M for each option set.
"""

import argparse

import numpy as np

from moltwave.geometry import Domain2D, Grid2D, ImplicitCurve
from moltwave.params import SolverParams
from moltwave.scheme2d import Wave2D


def increment_matrix(solver):
    idx = np.flatnonzero(solver.domain.mask.ravel())
    cols = []
    for j in idx:
        e = np.zeros(solver.domain.grid.shape)
        e.flat[j] = 1.0
        cols.append(solver.increment(e).ravel()[idx])
    return np.array(cols).T


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--cfl", type=float, default=2.0)
    args = ap.parse_args()
    grid = Grid2D.uniform(-2.2, 2.2, args.n, -2.2, 2.2, args.n)
    dom = Domain2D.from_curve(ImplicitCurve.ellipse(), grid)
    dt = args.cfl * grid.hx
    print(f"{dom.mask.sum()} interior nodes, dt {dt:.4f}")
    print(f"{'P':>2} {'quadrature':>10} {'symmetrize':>10} {'max|rho|':>12} {'max Im eig(M)':>14}")
    for P in (1, 2, 3):
        for quad in ("linear", "cubic"):
            for sym in (False, True):
                solver = Wave2D(dom, SolverParams(1.0, dt, P), quad, sym)
                M = increment_matrix(solver)
                n = M.shape[0]
                comp = np.block([[2 * np.eye(n) + M, -np.eye(n)], [np.eye(n), np.zeros((n, n))]])
                rho = np.abs(np.linalg.eigvals(comp)).max()
                im = np.abs(np.linalg.eigvals(M).imag).max()
                print(f"{P:>2} {quad:>10} {str(sym):>10} {rho:>12.6f} {im:>14.2e}")


if __name__ == "__main__":
    main()

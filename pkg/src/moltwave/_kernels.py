"""numba kernels for the recursive exponential sweeps over packed lines."""

import numba
import numpy as np


@numba.njit(cache=True)
def sweep_lines(vals, offsets, decay, sten, wl, wr, il, ir):
    """Left and right exponential recurrences on every packed line.

    Interval ``i`` joins points ``i`` and ``i + 1``. Its local integral feeding
    the left sweep at ``i + 1`` is ``0.5 * sum(wl[i] * vals[sten[i]])`` and the
    one feeding the right sweep at ``i`` uses ``wr``.
    """
    nlines = offsets.shape[0] - 1
    width = sten.shape[1]
    for k in range(nlines):
        s = offsets[k]
        e = offsets[k + 1]
        il[s] = 0.0
        for j in range(s + 1, e):
            i = j - 1
            acc = 0.0
            for q in range(width):
                acc += wl[i, q] * vals[sten[i, q]]
            il[j] = decay[i] * il[j - 1] + 0.5 * acc
        ir[e - 1] = 0.0
        for j in range(e - 2, s - 1, -1):
            acc = 0.0
            for q in range(width):
                acc += wr[j, q] * vals[sten[j, q]]
            ir[j] = decay[j] * ir[j + 1] + 0.5 * acc


@numba.njit(cache=True)
def correct_lines(il, ir, offsets, el, er, inv_det, mu, periodic, left, right, out):
    """Add the homogeneous solutions A e^{-alpha(x-a)} + B e^{-alpha(b-x)}.

    Dirichlet lines hit ``left[k]``/``right[k]`` at the end points to round-off;
    periodic lines (last point is the wrapped copy of the first) match value
    and slope across the period.
    """
    nlines = offsets.shape[0] - 1
    for k in range(nlines):
        s = offsets[k]
        e = offsets[k + 1]
        ia = ir[s]  # il[s] == 0
        ib = il[e - 1]  # ir[e-1] == 0
        if periodic[k]:
            A = ib * inv_det[k]
            B = ia * inv_det[k]
        else:
            ra = left[k] - ia
            rb = right[k] - ib
            A = (ra - mu[k] * rb) * inv_det[k]
            B = (rb - mu[k] * ra) * inv_det[k]
        for j in range(s, e):
            out[j] = il[j] + ir[j] + A * el[j] + B * er[j]


def warmup():
    """Compile the kernels on a tiny problem."""
    vals = np.ones(3)
    offsets = np.array([0, 3], dtype=np.int64)
    decay = np.full(3, 0.5)
    sten = np.array([[0, 1], [1, 2], [2, 2]], dtype=np.int64)
    w = np.full((3, 2), 0.25)
    il = np.empty(3)
    ir = np.empty(3)
    sweep_lines(vals, offsets, decay, sten, w, w, il, ir)
    out = np.empty(3)
    correct_lines(il, ir, offsets, np.ones(3), np.ones(3), np.ones(1), np.zeros(1),
                  np.zeros(1, dtype=np.bool_), np.zeros(1), np.zeros(1), out)

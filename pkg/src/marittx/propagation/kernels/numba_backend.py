"""numba @njit kernels; the default backend for the hot step loops.

Semantics mirror numpy_backend exactly (same parameter layout, same counter
RNG, same status codes). fastmath stays off: the clamp/renormalize logic and
the sampling thresholds rely on IEEE comparisons.
"""

import numpy as np
from numba import njit

from ..._rng import GOLDEN, MIX1, MIX2
from ..compartments import NEG_TOL, SUM_TOL

_G = np.uint64(GOLDEN)
_M1 = np.uint64(MIX1)
_M2 = np.uint64(MIX2)
_INV_2_53 = 2.0**-53


@njit(cache=True)
def _uniform(seed, counter):
    z = seed + (counter + np.uint64(1)) * _G
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)) * _INV_2_53


@njit(cache=True)
def _derivative(y, W, r, out):
    n = y.shape[0]
    for i in range(n):
        acc = 0.0
        for j in range(n):
            w = W[i, j]
            if w != 0.0:
                acc += w * (r[1] * y[j, 1] + y[j, 3])
        lam = r[0] * acc
        s = y[i, 0]
        e = y[i, 1]
        rr = y[i, 2]
        d = y[i, 3]
        u = y[i, 4]
        x = y[i, 5]
        out[i, 0] = -(lam + r[9]) * s + r[10] * rr + r[8] * x
        out[i, 1] = lam * s - (r[2] + r[3]) * e
        out[i, 2] = r[9] * s + r[3] * e + r[5] * d + r[7] * u - r[10] * rr
        out[i, 3] = r[2] * e - (r[4] + r[5]) * d
        out[i, 4] = r[4] * d - (r[6] + r[7]) * u
        out[i, 5] = r[6] * u - r[8] * x


@njit(cache=True)
def _fix_step(y):
    n = y.shape[0]
    for i in range(n):
        total = 0.0
        for c in range(6):
            v = y[i, c]
            if not np.isfinite(v):
                return 1
            if v < 0.0:
                if v < -NEG_TOL:
                    return 2
                y[i, c] = 0.0
                v = 0.0
            total += v
        if abs(total - 1.0) > SUM_TOL:
            return 3
        for c in range(6):
            y[i, c] /= total
    return 0


@njit(cache=True)
def meanfield_run(y0, W, r, dts):
    m = dts.shape[0]
    n = y0.shape[0]
    out = np.empty((m + 1, n, 6), dtype=np.float64)
    out[0] = y0
    y = y0.copy()
    yt = np.empty((n, 6), dtype=np.float64)
    k1 = np.empty((n, 6), dtype=np.float64)
    k2 = np.empty((n, 6), dtype=np.float64)
    k3 = np.empty((n, 6), dtype=np.float64)
    k4 = np.empty((n, 6), dtype=np.float64)
    for step in range(m):
        dt = dts[step]
        _derivative(y, W, r, k1)
        for i in range(n):
            for c in range(6):
                yt[i, c] = y[i, c] + (0.5 * dt) * k1[i, c]
        _derivative(yt, W, r, k2)
        for i in range(n):
            for c in range(6):
                yt[i, c] = y[i, c] + (0.5 * dt) * k2[i, c]
        _derivative(yt, W, r, k3)
        for i in range(n):
            for c in range(6):
                yt[i, c] = y[i, c] + dt * k3[i, c]
        _derivative(yt, W, r, k4)
        for i in range(n):
            for c in range(6):
                y[i, c] = y[i, c] + (dt / 6.0) * (
                    k1[i, c] + 2.0 * k2[i, c] + 2.0 * k3[i, c] + k4[i, c]
                )
        status = _fix_step(y)
        if status != 0:
            return out, status, step
        out[step + 1] = y
    return out, 0, -1


@njit(cache=True)
def agent_run_ensemble(labels0, W, r, dts, seeds, step0, record_steps):
    n_runs = seeds.shape[0]
    n = labels0.shape[0]
    m = dts.shape[0]
    k = record_steps.shape[0]
    out = np.empty((n_runs, k, n), dtype=np.int8)
    un = np.uint64(n)
    u_step0 = np.uint64(step0)
    for run in range(n_runs):
        seed = seeds[run]
        labels = labels0.copy()
        fresh = np.empty(n, dtype=np.int8)
        rec = 0
        if rec < k and record_steps[rec] == 0:
            for i in range(n):
                out[run, rec, i] = labels[i]
            rec += 1
        for step in range(m):
            dt = dts[step]
            cbase = (u_step0 + np.uint64(step)) * un
            for i in range(n):
                c = labels[i]
                if c == 0:
                    acc = 0.0
                    for j in range(n):
                        w = W[i, j]
                        if w != 0.0:
                            lc = labels[j]
                            if lc == 1:
                                acc += w * r[1]
                            elif lc == 3:
                                acc += w
                    ra = r[0] * acc
                    rb = r[9]
                    ta = 1
                    tb = 2
                elif c == 1:
                    ra = r[2]
                    rb = r[3]
                    ta = 3
                    tb = 2
                elif c == 2:
                    ra = r[10]
                    rb = 0.0
                    ta = 0
                    tb = 0
                elif c == 3:
                    ra = r[4]
                    rb = r[5]
                    ta = 4
                    tb = 2
                elif c == 4:
                    ra = r[6]
                    rb = r[7]
                    ta = 5
                    tb = 2
                else:
                    ra = r[8]
                    rb = 0.0
                    ta = 0
                    tb = 0
                wa = -np.expm1(-ra * dt)
                wb = -np.expm1(-rb * dt)
                total = wa + wb
                u = _uniform(seed, cbase + np.uint64(i))
                if total > 1.0:
                    if u < wa / total:
                        fresh[i] = ta
                    else:
                        fresh[i] = tb
                elif u < wa:
                    fresh[i] = ta
                elif u < total:
                    fresh[i] = tb
                else:
                    fresh[i] = c
            for i in range(n):
                labels[i] = fresh[i]
            if rec < k and record_steps[rec] == step + 1:
                for i in range(n):
                    out[run, rec, i] = labels[i]
                rec += 1
    return out


def warm_up():
    """Trigger JIT compilation on tiny inputs (cached across processes)."""
    y0 = np.full((1, 6), 1.0 / 6.0)
    W = np.zeros((1, 1))
    r = np.zeros(12)
    meanfield_run(y0, W, r, np.array([0.01]))
    agent_run_ensemble(
        np.zeros(1, dtype=np.int8), W, r, np.array([0.01]),
        np.array([1], dtype=np.uint64), 0, np.array([1], dtype=np.int64),
    )

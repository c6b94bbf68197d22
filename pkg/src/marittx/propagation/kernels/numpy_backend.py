"""Pure-numpy fallback kernels, vectorized over nodes and ensemble runs.

Parameter vector layout (KERNEL_ORDER): beta, kappa_e, sigma, alpha, upsilon,
rho, xi, gamma, nu, eta, omega, threat_level.
"""

import numpy as np

from ..._rng import uniform_grid
from ..compartments import NEG_TOL, SUM_TOL

# Competing transitions per compartment (S, E, R, D, U, X): slot a and slot b.
# S's slot-a rate is the force of infection, substituted per step.
_TARGET_A = np.array([1, 3, 0, 4, 5, 0], dtype=np.int8)
_TARGET_B = np.array([2, 2, 0, 2, 2, 0], dtype=np.int8)


def _derivative(y, W, r, lam_buf=None):
    lam = r[0] * (W @ (r[1] * y[:, 1] + y[:, 3]))
    s, e, rr, d, u, x = y[:, 0], y[:, 1], y[:, 2], y[:, 3], y[:, 4], y[:, 5]
    out = np.empty_like(y)
    out[:, 0] = -(lam + r[9]) * s + r[10] * rr + r[8] * x
    out[:, 1] = lam * s - (r[2] + r[3]) * e
    out[:, 2] = r[9] * s + r[3] * e + r[5] * d + r[7] * u - r[10] * rr
    out[:, 3] = r[2] * e - (r[4] + r[5]) * d
    out[:, 4] = r[4] * d - (r[6] + r[7]) * u
    out[:, 5] = r[6] * u - r[8] * x
    return out


def _fix_step(y):
    """Clamp tolerable negatives, renormalize rows; returns a status code."""
    if not np.all(np.isfinite(y)):
        return 1
    lowest = y.min(initial=0.0)
    if lowest < 0.0:
        if lowest < -NEG_TOL:
            return 2
        np.clip(y, 0.0, None, out=y)
    sums = y.sum(axis=1)
    if np.abs(sums - 1.0).max(initial=0.0) > SUM_TOL:
        return 3
    y /= sums[:, None]
    return 0


def meanfield_run(y0, W, r, dts):
    m = dts.shape[0]
    n = y0.shape[0]
    out = np.empty((m + 1, n, 6), dtype=np.float64)
    out[0] = y0
    y = y0.copy()
    for step in range(m):
        dt = dts[step]
        k1 = _derivative(y, W, r)
        k2 = _derivative(y + (0.5 * dt) * k1, W, r)
        k3 = _derivative(y + (0.5 * dt) * k2, W, r)
        k4 = _derivative(y + dt * k3, W, r)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        status = _fix_step(y)
        if status != 0:
            return out, status, step
        out[step + 1] = y
    return out, 0, -1


def agent_run_ensemble(labels0, W, r, dts, seeds, step0, record_steps):
    m = dts.shape[0]
    n = labels0.shape[0]
    n_runs = seeds.shape[0]
    k = record_steps.shape[0]
    out = np.empty((n_runs, k, n), dtype=np.int8)

    labels = np.broadcast_to(labels0, (n_runs, n)).copy()
    rate_a = np.array([0.0, r[2], r[10], r[4], r[6], r[8]])  # S slot replaced by lambda
    rate_b = np.array([r[9], r[3], 0.0, r[5], r[7], 0.0])
    Wt = W.T.copy()
    node_ids = np.arange(n, dtype=np.int64)
    seeds = seeds.astype(np.uint64)

    rec = 0
    if rec < k and record_steps[rec] == 0:
        out[:, rec, :] = labels
        rec += 1
    for step in range(m):
        dt = dts[step]
        load = r[1] * (labels == 1) + (labels == 3)
        lam = r[0] * (load @ Wt)
        ra = np.where(labels == 0, lam, rate_a[labels])
        rb = rate_b[labels]
        wa = -np.expm1(-ra * dt)
        wb = -np.expm1(-rb * dt)
        total = wa + wb
        over = total > 1.0
        thr_a = np.where(over, wa / np.where(over, total, 1.0), wa)
        thr_b = np.where(over, 1.0, total)
        u = uniform_grid(seeds, (step0 + step) * n + node_ids)
        labels = np.where(
            u < thr_a, _TARGET_A[labels], np.where(u < thr_b, _TARGET_B[labels], labels)
        )
        if rec < k and record_steps[rec] == step + 1:
            out[:, rec, :] = labels
            rec += 1
    return out

"""Pure-numpy path loops: all live paths advance in lock step.

Same signatures, status codes and per-path draw order as the compiled
kernels, so both backends agree up to last-bit differences in ``log``,
``cos`` and friends.
"""

import numpy as np

from hypk.sim import rng


def _adaptive_h(d, h_min, h_max, kappa):
    return np.clip((d / kappa) ** 2, h_min, h_max)


def run_hbm_paths(n, x0, y0, q_inner, q_outer, eta_inner, eta_outer,
                  h_min, h_max, kappa, max_steps, max_halvings, seeds):
    N = seeds.shape[0]
    m = n - 1
    drift = 0.5 * (n - 2)
    adaptive = h_max > h_min
    x = np.tile(np.asarray(x0, dtype=float), (N, 1))
    y = np.full(N, float(y0))
    state = seeds.astype(np.uint64).copy()
    steps = np.zeros(N, np.int64)
    status = np.full(N, -1, np.int8)
    live = np.arange(N)

    while live.size:
        xa, ya = x[live], y[live]
        if adaptive:
            r2 = np.sum(xa * xa, axis=1)
            eta = 2.0 * np.arcsinh(np.sqrt((r2 + (ya - 1.0) ** 2) / (4.0 * ya)))
            d = eta_outer - eta
            if eta_inner >= 0.0:
                d = np.minimum(d, eta - eta_inner)
            h = _adaptive_h(d, h_min, h_max, kappa)
        else:
            h = np.full(live.size, float(h_min))

        sa = state[live]
        ok = np.zeros(live.size, bool)
        ynew = np.empty(live.size)
        zx = np.empty((live.size, m))
        pending = np.arange(live.size)
        for _ in range(max_halvings + 1):
            s, z = rng.normals(sa[pending], n)
            sa[pending] = s
            hp = h[pending]
            yn = ya[pending] * (1.0 - drift * hp + np.sqrt(hp) * z[:, m])
            good = yn > 0.0
            g = pending[good]
            ok[g] = True
            ynew[g] = yn[good]
            zx[g] = z[good, :m]
            pending = pending[~good]
            if pending.size == 0:
                break
            h[pending] *= 0.5
        state[live] = sa

        status[live[~ok]] = -2
        idx = live[ok]
        sh = np.sqrt(h[ok])
        x[idx] = xa[ok] + (ya[ok] * sh)[:, None] * zx[ok]
        y[idx] = ynew[ok]
        steps[idx] += 1

        r2 = np.sum(x[idx] * x[idx], axis=1)
        q = (r2 + (y[idx] - 1.0) ** 2) / (2.0 * y[idx])
        out = q >= q_outer
        inn = ~out & (q <= q_inner)
        status[idx[out]] = 0
        status[idx[inn]] = 1
        keep = ~out & ~inn & (steps[idx] < max_steps)
        live = idx[keep]
    return x, y, steps, status


def fold_colatitude(theta, phi):
    """Reflect colatitudes outside ``[0, pi]`` back over the poles.

    Each pass over a pole turns the longitude by ``pi``; ``phi`` is returned
    reduced to ``[0, 2 pi)``.
    """
    flip = theta < 0.0
    t = np.abs(theta)
    big = t > np.pi
    t = np.where(big, np.mod(t, 2.0 * np.pi), t)
    over = t > np.pi
    t = np.where(over, 2.0 * np.pi - t, t)
    flip = flip ^ over
    return t, np.mod(np.where(flip, phi + np.pi, phi), 2.0 * np.pi)


def run_sbm_paths(theta0, phi0, lo, hi, h_min, h_max, kappa, kappa_pole, max_steps, seeds):
    N = seeds.shape[0]
    adaptive = h_max > h_min
    th = np.full(N, float(theta0))
    ph = np.full(N, float(phi0))
    state = seeds.astype(np.uint64).copy()
    steps = np.zeros(N, np.int64)
    status = np.full(N, -1, np.int8)
    live = np.arange(N)

    while live.size:
        t = th[live]
        if adaptive:
            d = hi - t
            if lo >= 0.0:
                d = np.minimum(d, t - lo)
            h = _adaptive_h(d, h_min, h_max, kappa)
        else:
            h = np.full(live.size, float(h_min))
        dp = np.minimum(t, np.pi - t)
        h = np.minimum(h, np.maximum((dp / kappa_pole) ** 2, h_min))

        s_new, a, b = rng.normal_pair(state[live])
        state[live] = s_new
        sh = np.sqrt(h)
        s = np.sin(t)
        tn = t + 0.5 * h * np.cos(t) / s + sh * a
        pn = ph[live] + sh * b / s
        tn, pn = fold_colatitude(tn, pn)
        th[live] = tn
        ph[live] = pn
        steps[live] += 1

        out = tn >= hi
        inn = ~out & (tn <= lo)
        status[live[out]] = 0
        status[live[inn]] = 1
        keep = ~out & ~inn & (steps[live] < max_steps)
        live = live[keep]
    return th, ph, steps, status

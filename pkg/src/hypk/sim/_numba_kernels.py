"""Compiled path loops.  One path per ``prange`` iteration.

Status codes: 0 reached the outer (or target) boundary, 1 reached the inner
boundary, -1 ran out of steps, -2 exhausted step halvings.
"""

import numpy as np
from numba import njit, prange

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 2.0 ** -53
_TWO_PI = 2.0 * np.pi


@njit(cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _normal_pair(state):
    state = state + _GOLDEN
    z1 = _mix(state)
    state = state + _GOLDEN
    z2 = _mix(state)
    u1 = (float(z1 >> _S11) + 1.0) * _INV53
    u2 = float(z2 >> _S11) * _INV53
    r = np.sqrt(-2.0 * np.log(u1))
    return state, r * np.cos(_TWO_PI * u2), r * np.sin(_TWO_PI * u2)


@njit(cache=True)
def normals(seeds, k):
    """``k`` normals for each stream (test hook mirroring ``rng.normals``)."""
    npairs = (k + 1) // 2
    out = np.empty((seeds.shape[0], k))
    for p in range(seeds.shape[0]):
        s = seeds[p]
        for j in range(npairs):
            s, a, b = _normal_pair(s)
            out[p, 2 * j] = a
            if 2 * j + 1 < k:
                out[p, 2 * j + 1] = b
    return out


@njit(cache=True, inline="always")
def _adaptive_h(d, h_min, h_max, kappa):
    h = (d / kappa) ** 2
    if h < h_min:
        h = h_min
    if h > h_max:
        h = h_max
    return h


@njit(cache=True, parallel=True)
def run_hbm_paths(n, x0, y0, q_inner, q_outer, eta_inner, eta_outer,
                  h_min, h_max, kappa, max_steps, max_halvings, seeds):
    N = seeds.shape[0]
    m = n - 1
    npairs = (n + 1) // 2
    drift = 0.5 * (n - 2)
    adaptive = h_max > h_min
    xf = np.empty((N, m))
    yf = np.empty(N)
    steps = np.zeros(N, np.int64)
    status = np.full(N, -1, np.int8)
    for p in prange(N):
        state = seeds[p]
        x = x0.copy()
        y = y0
        z = np.empty(2 * npairs)
        st = -1
        k = 0
        while k < max_steps:
            if adaptive:
                r2 = 0.0
                for i in range(m):
                    r2 += x[i] * x[i]
                eta = 2.0 * np.arcsinh(np.sqrt((r2 + (y - 1.0) ** 2) / (4.0 * y)))
                d = eta_outer - eta
                if eta_inner >= 0.0 and eta - eta_inner < d:
                    d = eta - eta_inner
                h = _adaptive_h(d, h_min, h_max, kappa)
            else:
                h = h_min
            accepted = False
            sh = 0.0
            ynew = 0.0
            for attempt in range(max_halvings + 1):
                for j in range(npairs):
                    state, a, b = _normal_pair(state)
                    z[2 * j] = a
                    z[2 * j + 1] = b
                sh = np.sqrt(h)
                ynew = y * (1.0 - drift * h + sh * z[m])
                if ynew > 0.0:
                    accepted = True
                    break
                h = 0.5 * h
            if not accepted:
                st = -2
                break
            for i in range(m):
                x[i] += y * sh * z[i]
            y = ynew
            k += 1
            r2 = 0.0
            for i in range(m):
                r2 += x[i] * x[i]
            q = (r2 + (y - 1.0) ** 2) / (2.0 * y)
            if q >= q_outer:
                st = 0
                break
            if q <= q_inner:
                st = 1
                break
        for i in range(m):
            xf[p, i] = x[i]
        yf[p] = y
        steps[p] = k
        status[p] = st
    return xf, yf, steps, status


@njit(cache=True, parallel=True)
def run_sbm_paths(theta0, phi0, lo, hi, h_min, h_max, kappa, kappa_pole, max_steps, seeds):
    N = seeds.shape[0]
    adaptive = h_max > h_min
    theta_f = np.empty(N)
    phi_f = np.empty(N)
    steps = np.zeros(N, np.int64)
    status = np.full(N, -1, np.int8)
    for p in prange(N):
        state = seeds[p]
        th = theta0
        ph = phi0
        st = -1
        k = 0
        while k < max_steps:
            if adaptive:
                d = hi - th
                if lo >= 0.0 and th - lo < d:
                    d = th - lo
                h = _adaptive_h(d, h_min, h_max, kappa)
            else:
                h = h_min
            # pole cap, floored at h_min: an unfloored cap makes log(theta)
            # a driftless walk with heavy-tailed excursions toward the pole
            dp = th if th < np.pi - th else np.pi - th
            hp = (dp / kappa_pole) ** 2
            if hp < h:
                h = hp if hp > h_min else h_min
            state, a, b = _normal_pair(state)
            sh = np.sqrt(h)
            s = np.sin(th)
            tn = th + 0.5 * h * np.cos(th) / s + sh * a
            ph = ph + sh * b / s
            flips = 0
            if tn < 0.0:
                tn = -tn
                flips += 1
            if tn > np.pi:
                tn = tn % _TWO_PI
                if tn > np.pi:
                    tn = _TWO_PI - tn
                    flips += 1
            if flips == 1:
                ph += np.pi
            th = tn
            ph = ph % _TWO_PI
            k += 1
            if th >= hi:
                st = 0
                break
            if th <= lo:
                st = 1
                break
        theta_f[p] = th
        phi_f[p] = ph
        steps[p] = k
        status[p] = st
    return theta_f, phi_f, steps, status

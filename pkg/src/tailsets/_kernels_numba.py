"""Numba kernel backend.

Jitted scalar-loop implementations of the hot numeric paths; interface
mirrors ``_kernels_numpy``.  Compilation results are cached on disk so
worker processes and repeat runs do not pay the JIT cost again.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._constants import (
    CONE_TOL,
    DISC_TOL,
    GAMMA_EPS,
    GAMMA_ITMAX,
    LINEAR_TOL,
    ROOT_TOL,
    SURVIVOR_FLOOR,
)

BACKEND_NAME = "numba"


@njit(cache=True)
def control_points(theta):
    out = np.empty((7, 2))
    out[0, 0] = 0.0
    out[0, 1] = theta[0]
    out[1, 0] = theta[1]
    out[1, 1] = theta[2]
    out[2, 0] = theta[3]
    out[2, 1] = 1.0
    out[3, 0] = theta[4]
    out[3, 1] = theta[4]
    out[4, 0] = 1.0
    out[4, 1] = theta[5]
    out[5, 0] = theta[6]
    out[5, 1] = theta[7]
    out[6, 0] = theta[8]
    out[6, 1] = 0.0
    return out


@njit(cache=True)
def segment_coeffs(theta):
    pts = control_points(theta)
    out = np.empty((3, 2, 3))
    for s in range(3):
        i0 = 2 * s
        for axis in range(2):
            a = pts[i0, axis]
            b = pts[i0 + 1, axis]
            c = pts[i0 + 2, axis]
            out[s, axis, 0] = a
            out[s, axis, 1] = 2.0 * (b - a)
            out[s, axis, 2] = a - 2.0 * b + c
    return out


@njit(cache=True)
def _best_hit(coeffs, w):
    """Maximal-radius ray intersection; returns (radius, seg, t, x, y)."""
    best_rad = -np.inf
    best_seg = -1
    best_t = np.nan
    best_x = np.nan
    best_y = np.nan
    for s in range(3):
        c0x = coeffs[s, 0, 0]
        c1x = coeffs[s, 0, 1]
        c2x = coeffs[s, 0, 2]
        c0y = coeffs[s, 1, 0]
        c1y = coeffs[s, 1, 1]
        c2y = coeffs[s, 1, 2]
        A = c2y * w - c2x * (1.0 - w)
        B = c1y * w - c1x * (1.0 - w)
        C = c0y * w - c0x * (1.0 - w)

        t1 = np.nan
        t2 = np.nan
        if abs(A) < LINEAR_TOL:
            if abs(B) >= LINEAR_TOL:
                t1 = -C / B
        else:
            D = B * B - 4.0 * A * C
            if D < 0.0:
                lim = B * B
                alt = abs(4.0 * A * C)
                if alt > lim:
                    lim = alt
                if D > -DISC_TOL * lim:
                    D = 0.0
            if D >= 0.0:
                sq = math.sqrt(D)
                if B >= 0.0:
                    q = -0.5 * (B + sq)
                else:
                    q = -0.5 * (B - sq)
                t1 = q / A
                if q != 0.0:
                    t2 = C / q
                else:
                    t2 = 0.0
        for t in (t1, t2):
            if not np.isnan(t) and -ROOT_TOL <= t <= 1.0 + ROOT_TOL:
                tc = t
                if tc < 0.0:
                    tc = 0.0
                elif tc > 1.0:
                    tc = 1.0
                x = (c2x * tc + c1x) * tc + c0x
                y = (c2y * tc + c1y) * tc + c0y
                rad = x + y
                if rad > best_rad:
                    best_rad = rad
                    best_seg = s
                    best_t = tc
                    best_x = x
                    best_y = y
    return best_rad, best_seg, best_t, best_x, best_y


@njit(cache=True)
def _radii_into(coeffs, w, out):
    for i in range(w.shape[0]):
        rad, _, _, _, _ = _best_hit(coeffs, w[i])
        out[i] = rad


@njit(cache=True)
def boundary_radii(theta, w):
    coeffs = segment_coeffs(theta)
    out = np.empty(w.shape[0])
    _radii_into(coeffs, w, out)
    return out


@njit(cache=True)
def ray_hit(theta, w):
    coeffs = segment_coeffs(theta)
    rad, seg, t, x, y = _best_hit(coeffs, w)
    if not np.isfinite(rad):
        return np.nan, np.nan, -1, np.nan
    return x, y, seg, t


@njit(cache=True)
def _candidates_into(theta, buf):
    """Knots plus interior coordinate extrema; returns the count."""
    pts = control_points(theta)
    coeffs = segment_coeffs(theta)
    n = 0
    for k in (0, 2, 4, 6):
        buf[n, 0] = pts[k, 0]
        buf[n, 1] = pts[k, 1]
        n += 1
    for s in range(3):
        for axis in range(2):
            c1 = coeffs[s, axis, 1]
            c2 = coeffs[s, axis, 2]
            if abs(c2) >= LINEAR_TOL:
                t = -c1 / (2.0 * c2)
                if 0.0 < t < 1.0:
                    buf[n, 0] = (coeffs[s, 0, 2] * t + coeffs[s, 0, 1]) * t + coeffs[s, 0, 0]
                    buf[n, 1] = (coeffs[s, 1, 2] * t + coeffs[s, 1, 1]) * t + coeffs[s, 1, 0]
                    n += 1
    return n


@njit(cache=True)
def candidate_points(theta):
    buf = np.empty((10, 2))
    n = _candidates_into(theta, buf)
    return buf[:n].copy()


@njit(cache=True)
def eta_exact(theta):
    coeffs = segment_coeffs(theta)
    rad, _, _, _, _ = _best_hit(coeffs, 0.5)
    best = 0.5 * rad
    buf = np.empty((10, 2))
    n = _candidates_into(theta, buf)
    for i in range(n):
        v = buf[i, 0] if buf[i, 0] < buf[i, 1] else buf[i, 1]
        if v > best:
            best = v
    if best > 1.0:
        best = 1.0
    return best


@njit(cache=True)
def lambda_grid(theta, omegas):
    coeffs = segment_coeffs(theta)
    buf = np.empty((10, 2))
    n = _candidates_into(theta, buf)
    out = np.empty(omegas.shape[0])
    for j in range(omegas.shape[0]):
        om = omegas[j]
        if om <= 0.0 or om >= 1.0:
            out[j] = 1.0
            continue
        rc, _, _, _, _ = _best_hit(coeffs, om)
        for i in range(n):
            v1 = buf[i, 0] / om
            v2 = buf[i, 1] / (1.0 - om)
            v = v1 if v1 < v2 else v2
            if v > rc:
                rc = v
        out[j] = 1.0 / rc
    return out


@njit(cache=True)
def tau_grid(theta, deltas, first):
    coeffs = segment_coeffs(theta)
    buf = np.empty((10, 2))
    n = _candidates_into(theta, buf)
    out = np.empty(deltas.shape[0])
    for j in range(deltas.shape[0]):
        d = deltas[j]
        if first:
            wstar = 1.0 / (1.0 + d)
        else:
            wstar = d / (1.0 + d)
        rad, _, _, _, _ = _best_hit(coeffs, wstar)
        if np.isfinite(rad):
            best = rad * wstar if first else rad * (1.0 - wstar)
        else:
            best = 0.0
        for i in range(n):
            if first:
                if buf[i, 1] <= d * buf[i, 0] + CONE_TOL and buf[i, 0] > best:
                    best = buf[i, 0]
            else:
                if buf[i, 0] <= d * buf[i, 1] + CONE_TOL and buf[i, 1] > best:
                    best = buf[i, 1]
        if best > 1.0:
            best = 1.0
        elif best < 0.0:
            best = 0.0
        out[j] = best
    return out


@njit(cache=True)
def measures_batch(thetas, omegas, deltas):
    k = thetas.shape[0]
    m = omegas.shape[0]
    md = deltas.shape[0]
    eta = np.empty(k)
    lam = np.empty((k, m))
    tau1 = np.empty((k, md))
    tau2 = np.empty((k, md))
    radius = np.empty((k, m))
    for i in range(k):
        th = thetas[i]
        eta[i] = eta_exact(th)
        lam[i] = lambda_grid(th, omegas)
        tau1[i] = tau_grid(th, deltas, True)
        tau2[i] = tau_grid(th, deltas, False)
        coeffs = segment_coeffs(th)
        _radii_into(coeffs, omegas, radius[i])
    return eta, lam, tau1, tau2, radius


# ---------------------------------------------------------------------------
# Regularized incomplete gamma (series + continued fraction) and the
# truncated-Gamma log likelihood.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _gser(a, x):
    ap = a
    s = 1.0 / a
    d = s
    for _ in range(GAMMA_ITMAX):
        ap += 1.0
        d *= x / ap
        s += d
        if abs(d) < abs(s) * GAMMA_EPS:
            break
    return s * math.exp(-x + a * math.log(x) - math.lgamma(a))


@njit(cache=True)
def _gcf(a, x):
    fpmin = 1e-300
    b = x + 1.0 - a
    c = 1.0 / fpmin
    d = 1.0 / b
    h = d
    for i in range(1, GAMMA_ITMAX):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < fpmin:
            d = fpmin
        c = b + an / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < GAMMA_EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


@njit(cache=True)
def gammainc_lower(a, x):
    if x <= 0.0:
        return 0.0
    if x < a + 1.0:
        return _gser(a, x)
    return 1.0 - _gcf(a, x)


@njit(cache=True)
def gammainc_upper(a, x):
    if x <= 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gser(a, x)
    return _gcf(a, x)


@njit(cache=True)
def trunc_loglik(alpha, rates, r, r0):
    n = r.shape[0]
    lg = math.lgamma(alpha)
    total = 0.0
    for i in range(n):
        g = rates[i]
        if not np.isfinite(g) or g <= 0.0:
            return -np.inf
        q = gammainc_upper(alpha, g * r0[i])
        if q < SURVIVOR_FLOOR:
            return -np.inf
        total += alpha * math.log(g) + (alpha - 1.0) * math.log(r[i]) - r[i] * g - math.log(q) - lg
    if not np.isfinite(total):
        return -np.inf
    return total


@njit(cache=True)
def loglik_from_theta(theta, w, r, r0, alpha, rates_out):
    coeffs = segment_coeffs(theta)
    for i in range(w.shape[0]):
        rad, _, _, _, _ = _best_hit(coeffs, w[i])
        rates_out[i] = 1.0 / rad
    return trunc_loglik(alpha, rates_out, r, r0)

"""Pure-numpy kernel backend.

Vectorized fallback for the hot numeric paths (ray intersection of the
boundary spline, truncated-Gamma log likelihood, exact dependence-measure
extraction).  Selected by ``TAILSETS_BACKEND=numpy``; the numba backend in
``_kernels_numba`` implements the same interface with scalar jitted loops.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from ._constants import (
    CONE_TOL,
    DISC_TOL,
    GAMMA_EPS,
    GAMMA_ITMAX,
    LINEAR_TOL,
    ROOT_TOL,
    SURVIVOR_FLOOR,
)

BACKEND_NAME = "numpy"


def control_points(theta):
    """Assemble the seven control points from the nine free coordinates.

    Parameter order is (p02, p11, p12, p21, p31, p42, p51, p52, p61); the
    fixed coordinates are p0x = p6y = 0 and p2y = p4x = 1, with the middle
    knot pinned to the diagonal.
    """
    p02, p11, p12, p21, p31, p42, p51, p52, p61 = theta
    return np.array(
        [
            [0.0, p02],
            [p11, p12],
            [p21, 1.0],
            [p31, p31],
            [1.0, p42],
            [p51, p52],
            [p61, 0.0],
        ]
    )


def segment_coeffs(theta):
    """Power-basis coefficients of the three quadratic segments.

    Returns shape (3, 2, 3): segment, coordinate, (c0, c1, c2) with
    B(t) = c0 + c1*t + c2*t**2.
    """
    pts = control_points(theta)
    out = np.empty((3, 2, 3))
    for s, (i0, i1, i2) in enumerate(((0, 1, 2), (2, 3, 4), (4, 5, 6))):
        a, b, c = pts[i0], pts[i1], pts[i2]
        out[s, :, 0] = a
        out[s, :, 1] = 2.0 * (b - a)
        out[s, :, 2] = a - 2.0 * b + c
    return out


def _ray_candidates(coeffs, w):
    """Roots of the per-segment ray equations for an array of angles.

    For direction (w, 1-w) the intersection parameter solves
    A*t^2 + B*t + C = 0 with A, B, C built from the two power-basis
    components.  Returns (t, radius) arrays of shape (6, len(w)) with
    non-roots marked by radius -inf.
    """
    w = np.asarray(w, dtype=float)
    m = w.shape[0]
    ts = np.full((6, m), np.nan)
    rad = np.full((6, m), -np.inf)
    for s in range(3):
        c0x, c1x, c2x = coeffs[s, 0]
        c0y, c1y, c2y = coeffs[s, 1]
        A = c2y * w - c2x * (1.0 - w)
        B = c1y * w - c1x * (1.0 - w)
        C = c0y * w - c0x * (1.0 - w)

        lin = np.abs(A) < LINEAR_TOL
        with np.errstate(divide="ignore", invalid="ignore"):
            t_lin = np.where(np.abs(B) >= LINEAR_TOL, -C / B, np.nan)

            D = B * B - 4.0 * A * C
            D = np.where((D < 0.0) & (D > -DISC_TOL * np.maximum(B * B, np.abs(4.0 * A * C))), 0.0, D)
            sq = np.sqrt(np.where(D >= 0.0, D, np.nan))
            q = -0.5 * (B + np.where(B >= 0.0, sq, -sq))
            t1 = np.where(lin, t_lin, q / A)
            t2 = np.where(lin, np.nan, np.where(q != 0.0, C / q, 0.0))

        for j, t in enumerate((t1, t2)):
            ok = np.isfinite(t) & (t >= -ROOT_TOL) & (t <= 1.0 + ROOT_TOL)
            tc = np.clip(t, 0.0, 1.0)
            x = (c2x * tc + c1x) * tc + c0x
            y = (c2y * tc + c1y) * tc + c0y
            row = 2 * s + j
            ts[row] = tc
            rad[row] = np.where(ok, x + y, -np.inf)
    return ts, rad


def boundary_radii(theta, w):
    """Sum-norm radius of the boundary along each ray direction (w, 1-w).

    Where several segments intersect a ray the maximal radius is kept;
    rays with no intersection yield -inf.
    """
    coeffs = segment_coeffs(theta)
    _, rad = _ray_candidates(coeffs, np.atleast_1d(np.asarray(w, dtype=float)))
    return rad.max(axis=0)


def ray_hit(theta, w):
    """Scalar ray intersection returning (x, y, segment index 0..2, t)."""
    coeffs = segment_coeffs(theta)
    ts, rad = _ray_candidates(coeffs, np.array([float(w)]))
    k = int(np.argmax(rad[:, 0]))
    if not np.isfinite(rad[k, 0]):
        return np.nan, np.nan, -1, np.nan
    seg = k // 2
    t = ts[k, 0]
    c = coeffs[seg]
    x = (c[0, 2] * t + c[0, 1]) * t + c[0, 0]
    y = (c[1, 2] * t + c[1, 1]) * t + c[1, 0]
    return x, y, seg, t


def candidate_points(theta):
    """Knots plus interior coordinate-stationary points of every segment.

    These are the only places a coordinate of the boundary can attain a
    local extremum, so they seed the closed-form measure searches.
    """
    pts = control_points(theta)
    coeffs = segment_coeffs(theta)
    cands = [pts[0], pts[2], pts[4], pts[6]]
    for s in range(3):
        for axis in range(2):
            c0, c1, c2 = coeffs[s, axis]
            if abs(c2) >= LINEAR_TOL:
                t = -c1 / (2.0 * c2)
                if 0.0 < t < 1.0:
                    x = (coeffs[s, 0, 2] * t + coeffs[s, 0, 1]) * t + coeffs[s, 0, 0]
                    y = (coeffs[s, 1, 2] * t + coeffs[s, 1, 1]) * t + coeffs[s, 1, 0]
                    cands.append(np.array([x, y]))
    return np.array(cands)


def eta_exact(theta):
    """Residual tail dependence coefficient of the spline boundary.

    eta = max over boundary points q of min(q1, q2); the maximum is
    attained at a diagonal crossing, a coordinate extremum, or a knot.
    """
    best = 0.5 * boundary_radii(theta, np.array([0.5]))[0]
    cands = candidate_points(theta)
    best = max(best, np.minimum(cands[:, 0], cands[:, 1]).max())
    return min(best, 1.0)


def lambda_grid(theta, omegas):
    """Angular dependence function on a grid of omega values in [0, 1]."""
    omegas = np.asarray(omegas, dtype=float)
    out = np.ones_like(omegas)
    interior = (omegas > 0.0) & (omegas < 1.0)
    if not np.any(interior):
        return out
    om = omegas[interior]
    rc = boundary_radii(theta, om)
    cands = candidate_points(theta)
    with np.errstate(divide="ignore"):
        vals = np.minimum(cands[:, 0][:, None] / om[None, :], cands[:, 1][:, None] / (1.0 - om)[None, :])
    rc = np.maximum(rc, vals.max(axis=0))
    out[interior] = 1.0 / rc
    return out


def tau_grid(theta, deltas, first):
    """tau1 (first=True) or tau2 on a grid of delta values in [0, 1].

    tau1(delta) = max{q1 : q on the boundary, q2 <= delta*q1}, attained at
    the crossing of the cone edge with the boundary or at an extremum/knot
    inside the cone.  tau2 swaps coordinates.
    """
    deltas = np.asarray(deltas, dtype=float)
    if first:
        wstar = 1.0 / (1.0 + deltas)
        cross = boundary_radii(theta, wstar) * wstar
    else:
        wstar = deltas / (1.0 + deltas)
        cross = boundary_radii(theta, wstar) * (1.0 - wstar)
    cross = np.where(np.isfinite(cross), cross, 0.0)
    cands = candidate_points(theta)
    if first:
        feas = cands[:, 1][:, None] <= deltas[None, :] * cands[:, 0][:, None] + CONE_TOL
        vals = np.where(feas, cands[:, 0][:, None], -np.inf)
    else:
        feas = cands[:, 0][:, None] <= deltas[None, :] * cands[:, 1][:, None] + CONE_TOL
        vals = np.where(feas, cands[:, 1][:, None], -np.inf)
    out = np.maximum(cross, vals.max(axis=0))
    return np.clip(out, 0.0, 1.0)


def measures_batch(thetas, omegas, deltas):
    """Per-draw measures for a matrix of parameter vectors.

    Returns (eta, lambda, tau1, tau2, radius-at-omega) with leading
    dimension the number of draws.
    """
    thetas = np.asarray(thetas, dtype=float)
    k = thetas.shape[0]
    m, md = len(omegas), len(deltas)
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
        radius[i] = boundary_radii(th, np.asarray(omegas, dtype=float))
    return eta, lam, tau1, tau2, radius


# ---------------------------------------------------------------------------
# Regularized incomplete gamma and the truncated-Gamma log likelihood.
# ---------------------------------------------------------------------------

def gammainc_lower(a, x):
    """Regularized lower incomplete gamma P(a, x)."""
    return special.gammainc(a, x)


def gammainc_upper(a, x):
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    return special.gammaincc(a, x)


def trunc_loglik(alpha, rates, r, r0):
    """Log likelihood of radii r above thresholds r0 under truncGamma.

    rates holds the gauge values at the sample angles.  Returns -inf when
    any term is non-finite or a survivor probability underflows.
    """
    rates = np.asarray(rates, dtype=float)
    if not np.all(np.isfinite(rates)) or np.any(rates <= 0.0):
        return -np.inf
    q = special.gammaincc(alpha, rates * r0)
    if np.any(q < SURVIVOR_FLOOR):
        return -np.inf
    n = r.shape[0]
    total = (
        alpha * np.log(rates).sum()
        + (alpha - 1.0) * np.log(r).sum()
        - (r * rates).sum()
        - np.log(q).sum()
        - n * special.gammaln(alpha)
    )
    return total if np.isfinite(total) else -np.inf


def loglik_from_theta(theta, w, r, r0, alpha, rates_out):
    """Fused hot path: boundary radii -> gauge rates -> log likelihood.

    Fills rates_out with the per-point gauge values and returns the log
    likelihood (or -inf for degenerate geometry).
    """
    rad = boundary_radii(theta, w)
    with np.errstate(divide="ignore"):
        rates_out[:] = 1.0 / rad
    return trunc_loglik(alpha, rates_out, r, r0)


# Scalar series/continued-fraction evaluation, kept for parity checks with
# the numba backend (scipy is the production path above).
def gammainc_lower_scalar(a, x):
    if x <= 0.0:
        return 0.0
    if x < a + 1.0:
        return _gser(a, x)
    return 1.0 - _gcf(a, x)


def gammainc_upper_scalar(a, x):
    if x <= 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gser(a, x)
    return _gcf(a, x)


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
    return s * np.exp(-x + a * np.log(x) - special.gammaln(a))


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
    return np.exp(-x + a * np.log(x) - special.gammaln(a)) * h

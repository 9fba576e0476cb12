"""Constrained quadratic Bezier splines representing limit-set boundaries.

The boundary of the limiting scaled point cloud is modeled as a spline of
three quadratic Bezier curves with seven control points, nine of whose
coordinates are free.  Forcing the spline to touch all four edges of the
unit square and imposing the star-shape constraints makes every valid
parameter vector a legitimate gauge-function unit level set, so the gauge
can be evaluated anywhere by intersecting rays through the origin with the
boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Iterable, NamedTuple

import numpy as np

from .backend import kernels

PARAM_NAMES = ("p02", "p11", "p12", "p21", "p31", "p42", "p51", "p52", "p61")

# Constraint identifiers, reported by name on validation failure.
C_RANGE = "params in [0,1]"
C_ORDER = "p11 <= p21"
C_SLOPE1 = "slope(0,p1) >= slope(0,p2)"
C_SLOPE3 = "slope(0,p4) >= slope(0,p5)"
C_VORDER = "p42 >= p52"
C_MIDDLE = "p31 >= min(p21, p42)"


class InvalidSplineError(ValueError):
    """Raised when spline parameters violate a shape constraint."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid spline parameters: " + "; ".join(violations))


class GeometryError(RuntimeError):
    """A ray failed to intersect the boundary (degenerate geometry)."""

    def __init__(self, w: float):
        self.w = w
        super().__init__(f"no boundary intersection along direction w={w!r}")


@dataclass(frozen=True)
class SplineParams:
    """The nine free coordinates, in the order of PARAM_NAMES."""

    p02: float
    p11: float
    p12: float
    p21: float
    p31: float
    p42: float
    p51: float
    p52: float
    p61: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in PARAM_NAMES], dtype=float)

    @classmethod
    def from_array(cls, arr: Iterable[float]) -> "SplineParams":
        vals = [float(v) for v in arr]
        if len(vals) != 9:
            raise ValueError("expected exactly 9 parameter values")
        return cls(*vals)

    def to_json(self) -> str:
        return json.dumps({n: getattr(self, n) for n in PARAM_NAMES})

    @classmethod
    def from_json(cls, text: str) -> "SplineParams":
        obj = json.loads(text)
        return cls(**{n: float(obj[n]) for n in PARAM_NAMES})

    def csv_row(self) -> str:
        return ",".join(repr(getattr(self, n)) for n in PARAM_NAMES)


def check_constraints(params) -> list[str]:
    """Names of violated constraints; empty for a valid parameter vector.

    The star-shape conditions use cross-multiplied slope comparisons so
    that control points on the axes are handled without division.
    """
    th = params.as_array() if isinstance(params, SplineParams) else np.asarray(params, dtype=float)
    p02, p11, p12, p21, p31, p42, p51, p52, p61 = th
    bad = []
    if not np.all(np.isfinite(th)) or np.any(th < 0.0) or np.any(th > 1.0):
        bad.append(C_RANGE)
    if p11 > p21:
        bad.append(C_ORDER)
    if p12 * p21 < p11:
        bad.append(C_SLOPE1)
    if p42 * p51 < p52:
        bad.append(C_SLOPE3)
    if p42 < p52:
        bad.append(C_VORDER)
    if p31 < min(p21, p42):
        bad.append(C_MIDDLE)
    return bad


@dataclass(frozen=True)
class GaugeSpline:
    """A validated boundary spline.

    Use build_spline to construct; instances are immutable and safe to
    share across workers.
    """

    params: SplineParams
    points: np.ndarray  # (7, 2) control points, fixed coordinates filled in

    def __post_init__(self):
        self.points.setflags(write=False)

    @property
    def theta(self) -> np.ndarray:
        return self.params.as_array()


class BoundaryPoint(NamedTuple):
    x: float
    y: float
    segment: int  # 1, 2 or 3
    t: float


def build_spline(params) -> GaugeSpline:
    """Assemble and validate a GaugeSpline.

    Raises InvalidSplineError carrying the violated constraint names; the
    same name list drives zero-prior rejection inside the sampler.
    """
    if not isinstance(params, SplineParams):
        params = SplineParams.from_array(params)
    violations = check_constraints(params)
    if violations:
        raise InvalidSplineError(violations)
    pts = kernels.control_points(params.as_array())
    return GaugeSpline(params=params, points=pts)


def eval_curve(p0, p1, p2, t):
    """Evaluate the Bernstein-form quadratic through three control points.

    t may be a scalar in [0, 1] or an array; endpoints are reproduced
    exactly at t = 0 and t = 1.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError("curve parameter t must lie in [0, 1]")
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    u = 1.0 - t
    if t.ndim == 0:
        return u * u * p0 + 2.0 * t * u * p1 + t * t * p2
    return (
        np.outer(u * u, p0) + np.outer(2.0 * t * u, p1) + np.outer(t * t, p2)
    )


def segment_points(spline: GaugeSpline, segment: int):
    """Control points (p0, p1, p2) of segment 1, 2 or 3."""
    i = 2 * (segment - 1)
    return spline.points[i], spline.points[i + 1], spline.points[i + 2]


def ray_boundary_point(spline: GaugeSpline, w: float) -> BoundaryPoint:
    """Intersection of the boundary with the ray of direction (w, 1-w).

    Star-shapedness makes the intersection unique up to tangential
    touching; when several segments produce a root the maximal-radius hit
    is returned, which is the boundary by definition.
    """
    if not 0.0 <= w <= 1.0:
        raise ValueError("angular coordinate w must lie in [0, 1]")
    x, y, seg, t = kernels.ray_hit(spline.theta, float(w))
    if seg < 0 or not np.isfinite(x + y) or x + y <= 0.0:
        raise GeometryError(w)
    return BoundaryPoint(float(x), float(y), int(seg) + 1, float(t))


def boundary_radius(spline: GaugeSpline, w) -> np.ndarray:
    """Sum-norm radius of the boundary at each angle of an array w."""
    return kernels.boundary_radii(spline.theta, np.atleast_1d(np.asarray(w, dtype=float)))


def gauge_value(spline: GaugeSpline, x) -> float:
    """Gauge function at a point with nonnegative coordinates.

    g(x) is the sum-norm radius of x relative to the radius of the
    boundary point on the same ray, hence homogeneous of order one.
    """
    x = np.asarray(x, dtype=float)
    r = x[0] + x[1]
    if x[0] < 0.0 or x[1] < 0.0 or r <= 0.0:
        raise ValueError("gauge is defined for nonnegative x away from the origin")
    q = ray_boundary_point(spline, x[0] / r)
    return float(r / (q.x + q.y))


def coordinate_extrema(spline: GaugeSpline) -> list[BoundaryPoint]:
    """Knots plus interior stationary points of each coordinate.

    The derivative of a quadratic segment component is linear in t, so
    each coordinate contributes at most one interior stationary point per
    segment.
    """
    out = [
        BoundaryPoint(float(spline.points[0, 0]), float(spline.points[0, 1]), 1, 0.0),
        BoundaryPoint(float(spline.points[2, 0]), float(spline.points[2, 1]), 2, 0.0),
        BoundaryPoint(float(spline.points[4, 0]), float(spline.points[4, 1]), 3, 0.0),
        BoundaryPoint(float(spline.points[6, 0]), float(spline.points[6, 1]), 3, 1.0),
    ]
    for seg in (1, 2, 3):
        p0, p1, p2 = segment_points(spline, seg)
        for t in segment_stationary_ts(p0, p1, p2):
            pt = eval_curve(p0, p1, p2, t)
            out.append(BoundaryPoint(float(pt[0]), float(pt[1]), seg, float(t)))
    return out


def segment_stationary_ts(p0, p1, p2) -> list[float]:
    """Interior parameters where a coordinate of one segment is stationary.

    Solves t* = (p0 - p1) / (p0 - 2 p1 + p2) per coordinate and keeps
    strictly interior roots.
    """
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    ts = []
    for axis in range(2):
        den = p0[axis] - 2.0 * p1[axis] + p2[axis]
        if abs(den) >= 1e-14:
            t = (p0[axis] - p1[axis]) / den
            if 0.0 < t < 1.0:
                ts.append(float(t))
    return ts


# Serialization: flat record of the nine parameters.

def spline_to_dict(spline: GaugeSpline) -> dict:
    return {n: getattr(spline.params, n) for n in PARAM_NAMES}


def spline_from_dict(obj: dict) -> GaugeSpline:
    return build_spline(SplineParams(**{n: float(obj[n]) for n in PARAM_NAMES}))


CSV_HEADER = ",".join(PARAM_NAMES)


def _field_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(SplineParams))

"""Curvature parabola, adapted frame and asymptotic directions.

For a corank-1 germ in Monge form the unit circle of the first fundamental
form is the line u = 1, parametrized by the slope ``y``; its image under the
second fundamental form is the plane curve

    eta(y) = eta0 + 2 eta1 y + eta2 y^2

in the normal plane, with eta0 = (a20, b20), eta1 = (a11, b11),
eta2 = (a02, b02).  Depending on the 2-jet class this is a nondegenerate
parabola, a half-line, a line or a single point.  The axial vector v_a spans
the axis of symmetry (nondegenerate case) or the carrying line (degenerate
cases); the frame {v_a, nu2} is orthonormal and positively oriented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .normalize import (
    HALF_LINE,
    LINE,
    NONDEGENERATE_PARABOLA,
    POINT,
    POINT_CLASSES,
    POINT_ORIGIN,
    classify_2jet,
)

# Point types by number of asymptotic directions: 0, 2, 1, infinitely many.
ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"
PARABOLIC = "parabolic"
INFLECTION = "inflection"

ASY_FINITE = "finite"
ASY_INCLUDES_INFINITY = "includes-infinity"
ASY_ALL = "all"


@dataclass(frozen=True, eq=False)
class CurvatureParabola:
    eta0: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    cls: str

    def evaluate(self, y):
        """eta(y); broadcasts over arrays, returning shape (..., 2)."""
        y = np.asarray(y, dtype=float)
        return (
            self.eta0
            + 2.0 * np.multiply.outer(y, self.eta1)
            + np.multiply.outer(y * y, self.eta2)
        )

    def scale(self):
        return max(float(np.max(np.abs(v))) for v in (self.eta0, self.eta1, self.eta2))


@dataclass(frozen=True, eq=False)
class AxialFrame:
    v_a: np.ndarray | None
    nu2: np.ndarray | None
    defined: bool


@dataclass(frozen=True)
class AsymptoticSet:
    kind: str
    values: tuple = field(default_factory=tuple)

    def count(self):
        if self.kind == ASY_ALL:
            return math.inf
        extra = 1 if self.kind == ASY_INCLUDES_INFINITY else 0
        return len(self.values) + extra


def curvature_parabola(m, tol=None):
    return CurvatureParabola(
        eta0=np.array([m.a20, m.b20]),
        eta1=np.array([m.a11, m.b11]),
        eta2=np.array([m.a02, m.b02]),
        cls=classify_2jet(m, tol),
    )


def _cross2(a, b):
    return float(a[0] * b[1] - a[1] * b[0])


def _rot90(v):
    return np.array([-v[1], v[0]])


def axial_frame(cp, tol=None):
    """Axial vector and completing normal, by parabola class.

    Nondegenerate or half-line: v_a = eta2 / |eta2| (axis of symmetry,
    pointing into the parabola).  Line: v_a = eta1 / |eta1|.  Point away
    from the origin: v_a is eta(y) rotated by +90 degrees and normalized.
    Point at the origin: every frame is adapted, none is singled out.
    """
    if tol is None:
        tol = 1e-9 * (1.0 + cp.scale())
    if cp.cls == POINT_ORIGIN:
        return AxialFrame(v_a=None, nu2=None, defined=False)
    if cp.cls in (NONDEGENERATE_PARABOLA, HALF_LINE):
        direction = cp.eta2
    elif cp.cls == LINE:
        direction = cp.eta1
    else:  # POINT
        direction = _rot90(cp.eta0)
    norm = float(np.linalg.norm(direction))
    if norm <= tol:
        raise PreconditionError(f"degenerate axial direction for class {cp.cls!r}")
    v_a = direction / norm
    return AxialFrame(v_a=v_a, nu2=_rot90(v_a), defined=True)


def _through_origin(cp, tol):
    """Distance test: does the line carrying a degenerate parabola pass
    through the origin of the normal plane?"""
    direction = cp.eta2 if np.linalg.norm(cp.eta2) > tol else cp.eta1
    norm = float(np.linalg.norm(direction))
    if norm <= tol:
        return True  # a point: carried by every line through itself
    return abs(_cross2(cp.eta0, direction)) / norm <= tol


def asymptotic_directions(cp, tol=None):
    """Slopes y with eta(y) and eta'(y) collinear, plus the null direction.

    The collinearity condition is the quadratic
        q0 + q1 y + q2 y^2 = 0,
    q0 = eta0 x eta1, q1 = eta0 x eta2, q2 = eta1 x eta2 (planar cross
    products).  For degenerate classes the null direction (y = infinity) is
    always asymptotic; when the carrying line passes through the origin, or
    the parabola is a point, every direction is.
    """
    if tol is None:
        tol = 1e-9 * (1.0 + cp.scale())
    if cp.cls in POINT_CLASSES:
        return AsymptoticSet(ASY_ALL)
    if cp.cls in (HALF_LINE, LINE):
        if _through_origin(cp, tol):
            return AsymptoticSet(ASY_ALL)
        q0 = _cross2(cp.eta0, cp.eta1)
        q1 = _cross2(cp.eta0, cp.eta2)
        roots = ()
        if abs(q1) > tol:
            roots = (-q0 / q1,)
        return AsymptoticSet(ASY_INCLUDES_INFINITY, roots)
    # Nondegenerate parabola: plain quadratic root count with a discriminant
    # cutoff separating the tangent (single root) case.
    q0 = _cross2(cp.eta0, cp.eta1)
    q1 = _cross2(cp.eta0, cp.eta2)
    q2 = _cross2(cp.eta1, cp.eta2)
    disc = q1 * q1 - 4.0 * q2 * q0
    if disc < -tol * tol:
        return AsymptoticSet(ASY_FINITE, ())
    if disc <= tol * tol:
        return AsymptoticSet(ASY_FINITE, (-q1 / (2.0 * q2),))
    r = math.sqrt(disc)
    y1 = (-q1 - r) / (2.0 * q2)
    y2 = (-q1 + r) / (2.0 * q2)
    return AsymptoticSet(ASY_FINITE, tuple(sorted((y1, y2))))


def point_type(asy):
    """Elliptic, hyperbolic, parabolic or inflection for 0, 2, 1, infinitely
    many asymptotic directions."""
    n = asy.count()
    if n == math.inf:
        return INFLECTION
    return {0: ELLIPTIC, 1: PARABOLIC, 2: HYPERBOLIC}[n]

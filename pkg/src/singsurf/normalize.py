"""Normal forms for corank-1 germs.

A corank-1 germ can be brought, by a coordinate change in the source and a
linear isometry of the target, to Monge form

    f(u, v) = (u, f2(u, v), f3(u, v)),    f2, f3 with zero 1-jet,

whose quadratic coefficients

    f2 = (a20 u^2 + 2 a11 u v + a02 v^2)/2 + ...,
    f3 = (b20 u^2 + 2 b11 u v + b02 v^2)/2 + ...

carry all the second-order geometry.  The type of the curvature parabola is
read off these six numbers, and fold-type germs (half-line class) are pushed
further into the normal form

    (u, u^2/2 a0(u) + u^k v/2 a1(u) + v^2/2 a2(u,v),
        u^2/2 b0(u) + u^2 v/2 b1(u) + u v^2/2 b3(u) + v^3/6 b4(u,v)),

normalized so that a2(0,0) = 1 and the plain uv term of the middle component
vanishes.  The scalars a0(0), b0(0), b1(0) extracted here feed the curvature
and blow-up computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .jets import MapGerm, SourceChange, TruncatedPoly2

# Curvature parabola classes (orbits of the 2-jet).
NONDEGENERATE_PARABOLA = "nondegenerate-parabola"
HALF_LINE = "half-line"
LINE = "line"
POINT = "point"  # a single point away from the origin of the normal plane
POINT_ORIGIN = "point-origin"

DEGENERATE_CLASSES = frozenset({HALF_LINE, LINE, POINT, POINT_ORIGIN})
POINT_CLASSES = frozenset({POINT, POINT_ORIGIN})


def degeneracy_tolerance(scale):
    """Working tolerance, scaled so large germs do not misclassify."""
    return 1e-9 * (1.0 + abs(scale))


@dataclass(frozen=True, eq=False)
class MongeData:
    """Quadratic coefficients of a germ in Monge form, plus the full germ."""

    a20: float
    a11: float
    a02: float
    b20: float
    b11: float
    b02: float
    germ: MapGerm

    @property
    def coefficients(self):
        return (self.a20, self.a11, self.a02, self.b20, self.b11, self.b02)

    def tolerance(self):
        return degeneracy_tolerance(max(abs(c) for c in self.coefficients))


@dataclass(frozen=True, eq=False)
class FoldNormalForm:
    """Leading data of the fold normal form (a2(0,0) rescaled to 1)."""

    a0_0: float
    b0_0: float
    b1_0: float
    a2_00: float
    germ: MapGerm


def corank_at_origin(f, tol=None):
    """Corank of the differential at the origin (0 = immersion, 2 = flat)."""
    jac = f.jacobian_at_origin()
    sigma = np.linalg.svd(jac, compute_uv=False)
    if tol is None:
        tol = degeneracy_tolerance(sigma[0])
    rank = int(np.sum(sigma > tol))
    return 2 - rank


def _deterministic_sign(vec):
    """Flip ``vec`` so its largest-magnitude entry is positive."""
    k = int(np.argmax(np.abs(vec)))
    return vec if vec[k] > 0 else -vec


def _frame_from_first_axis(w):
    """Rotation matrix with first row ``w`` (unit), completed deterministically."""
    cand = np.zeros(3)
    cand[int(np.argmin(np.abs(w)))] = 1.0
    r2 = cand - np.dot(cand, w) * w
    r2 /= np.linalg.norm(r2)
    r3 = np.cross(w, r2)
    return np.vstack([w, r2, r3])


def _invert_flattening(p, order):
    """Invert ``(u, v) -> (p(u, v), v)`` on jets (``p_u(0) != 0``).

    Fixed-point iteration: each pass raises the valuation of the defect by at
    least one, so ``order + 1`` passes suffice.
    """
    alpha = p.coeffs[1, 0]
    x = TruncatedPoly2.variable(order, "u")
    y = TruncatedPoly2.variable(order, "v")
    q = x * (1.0 / alpha)
    for _ in range(order + 1):
        r = p.compose((q, y)) - x
        q = q - r * (1.0 / alpha)
    return SourceChange(q, y)


def _snap(coeffs, entries):
    for i, j in entries:
        coeffs[i, j] = 0.0


def to_monge_form(f, tol=None):
    """Normalize a corank-1 germ to Monge form and read its 2-jet.

    The source change is a rotation sending the kernel of the differential
    to the v-axis followed by the jet-level inversion that makes the first
    component literally ``u``; the target isometry sends the image of the
    first axis to the positive x-axis and is completed to a positively
    oriented orthonormal frame.
    """
    if corank_at_origin(f, tol) != 1:
        raise PreconditionError(f"Monge form requires corank 1, got corank {corank_at_origin(f, tol)}")
    jac = f.jacobian_at_origin()
    _, _, vt = np.linalg.svd(jac)
    kernel = _deterministic_sign(vt[1])
    tangent = np.array([kernel[1], -kernel[0]])  # rotate kernel by -90 degrees
    lin = SourceChange.linear(f.order, np.column_stack([tangent, kernel]))
    w = jac @ tangent
    rot = _frame_from_first_axis(w / np.linalg.norm(w))
    g = f.compose(lin).transformed(rot)
    g = g.compose(_invert_flattening(g.components[0], f.order))

    scale = g.max_abs()
    snap_tol = 1e-10 * (1.0 + scale)
    c1, c2, c3 = (c.coeffs.copy() for c in g.components)
    # Structural zeros of the normal form: first component is exactly u,
    # the other two have no linear part.  Anything here is rounding dust.
    residual = max(
        np.max(np.abs(c1 - TruncatedPoly2.variable(f.order, "u").coeffs)),
        abs(c2[1, 0]), abs(c2[0, 1]), abs(c3[1, 0]), abs(c3[0, 1]),
    )
    if residual > snap_tol:
        raise PreconditionError(f"normalization failed to converge (residual {residual:.3e})")
    c1[:] = TruncatedPoly2.variable(f.order, "u").coeffs
    _snap(c2, [(1, 0), (0, 1)])
    _snap(c3, [(1, 0), (0, 1)])
    g = MapGerm(tuple(TruncatedPoly2(f.order, c) for c in (c1, c2, c3)))
    return MongeData(
        a20=2.0 * c2[2, 0], a11=c2[1, 1], a02=2.0 * c2[0, 2],
        b20=2.0 * c3[2, 0], b11=c3[1, 1], b02=2.0 * c3[0, 2],
        germ=g,
    )


def classify_2jet(m, tol=None):
    """Type of the curvature parabola from the Monge 2-jet coefficients."""
    if tol is None:
        tol = m.tolerance()
    a20, a11, a02, b20, b11, b02 = m.coefficients
    if abs(a11 * b02 - a02 * b11) > tol:
        return NONDEGENERATE_PARABOLA
    if a02 * a02 + b02 * b02 > tol * tol:
        return HALF_LINE
    if a11 * a11 + b11 * b11 > tol * tol:
        return LINE
    if a20 * a20 + b20 * b20 <= tol * tol:
        return POINT_ORIGIN
    return POINT


def to_special_coordinates(m):
    """Rescale ``v`` so that |f_vv| = 1 at the origin.

    In Monge form this produces coordinates with |f_u| = |f_vv| = 1,
    f_v = 0 and <f_u, f_vv> = 0 at the base point, the setting in which the
    axial curvature reduces to <f_uu, f_vv> - <f_uv, f_vv>^2 and the height
    Hessian has unit lower-right entry.
    """
    norm2 = m.a02 * m.a02 + m.b02 * m.b02
    if norm2 <= m.tolerance() ** 2:
        raise PreconditionError("special coordinates need a nondegenerate or half-line class")
    mu = norm2 ** -0.25
    order = m.germ.order
    u = TruncatedPoly2.variable(order, "u")
    v = TruncatedPoly2.variable(order, "v")
    return m.germ.compose(SourceChange(u, v * mu))


def _ensure_monge(f, tol=None):
    return f if isinstance(f, MongeData) else to_monge_form(f, tol)


def fold_normal_form(f, tol=None):
    """Normalize a half-line-class (fold) germ and extract its leading data.

    On top of Monge form: rotate the normal plane so the v^2 coefficient
    vector points along the second axis, shear away the uv term of the
    middle component, rescale the null direction so a2(0,0) = 1.  Then

        a0(0) = axial curvature, b0(0) = signed umbilic curvature,
        b1(0) = first obstruction to frontality.
    """
    m = _ensure_monge(f, tol)
    if tol is None:
        tol = m.tolerance()
    if classify_2jet(m, tol) != HALF_LINE:
        raise PreconditionError("fold normal form requires the half-line class")
    order = m.germ.order
    if order < 3:
        raise PreconditionError("under-resolved jet: fold normal form needs order >= 3")

    theta = math.atan2(m.b02, m.a02)
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])
    g = m.germ.transformed(rot)

    u = TruncatedPoly2.variable(order, "u")
    v = TruncatedPoly2.variable(order, "v")
    n = math.hypot(m.a02, m.b02)
    a11r = g.components[1].coefficient(1, 1)
    g = g.compose(SourceChange(u, v - u * (a11r / n)))
    g = g.compose(SourceChange(u, v * (n ** -0.5)))

    c1, c2, c3 = (comp.coeffs.copy() for comp in g.components)
    # Structural zeros: no uv term and unit v^2/2 in the middle component,
    # no pure quadratic v-terms in the last one.
    _snap(c2, [(1, 1)])
    c2[0, 2] = 0.5
    _snap(c3, [(0, 2), (1, 1)])
    g = MapGerm(tuple(TruncatedPoly2(order, cc) for cc in (c1, c2, c3)))
    return FoldNormalForm(
        a0_0=2.0 * c2[2, 0],
        b0_0=2.0 * c3[2, 0],
        b1_0=2.0 * c3[2, 1],
        a2_00=1.0,
        germ=g,
    )

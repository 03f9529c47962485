"""Contact of the surface with the plane orthogonal to the axial vector.

The contact is measured by the singularity type of the height function
h(u, v) = <f(u, v), v_a>: a Morse point of index given by the sign of the
axial curvature, a cusp when kappa_a = 0 with nonzero third-order data, or
worse.  When kappa_a < 0 the zero set of h consists of two transversal
branches through the origin; their images are the curves in which the
surface meets the axial plane, and their mutual position (same or opposite
half-planes, one of them a straight line, tangential extrema or inflection
contact) classifies the singular point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, PreconditionError
from .jets import (
    lincomb_polys,
    series_reverse,
    series_valuation,
    tangent_branch_series,
)
from .normalize import (
    HALF_LINE,
    LINE,
    NONDEGENERATE_PARABOLA,
    POINT_CLASSES,
    MongeData,
    classify_2jet,
    to_monge_form,
    to_special_coordinates,
)
from .curvature import kappa_a_monge
from .parabola import axial_frame, curvature_parabola

# Height function singularity types.
A1_PLUS = "A1+"
A1_MINUS = "A1-"
A2 = "A2"
A_AT_LEAST_3 = "A>=3"
CORANK_2 = "corank-2"

# Cross-cap types (sign of <f_uu, f_vv> in unit-|f_vv| coordinates).
CC_ELLIPTIC = "elliptic-cross-cap"
CC_HYPERBOLIC = "hyperbolic-cross-cap"
CC_PARABOLIC = "parabolic-cross-cap"

# Mutual position of the two intersection branches.
REL_SAME = "same-half-plane"
REL_OPPOSITE = "opposite-half-planes"
REL_CONTAINS_LINE = "contains-line"
REL_TANGENT_EXTREMA = "tangent-extrema"
REL_INFLECTION = "inflection-contact"

SIDE_SAME = "same"
SIDE_OPPOSITE = "opposite"
SIDE_MIXED = "mixed"
SIDE_LINE = "line"

# Cuspidal-edge (fold frontal) contact kinds.
CE_HYPERBOLIC = "hyperbolic"
CE_INFLECTION = "inflection"


def _ensure_monge(f, tol=None):
    return f if isinstance(f, MongeData) else to_monge_form(f, tol)


def height_jet(f, frame):
    """Height function <f, v_a> as a jet (v_a lifted into the normal plane)."""
    if isinstance(f, MongeData):
        f = f.germ
    if not frame.defined:
        raise PreconditionError("axial frame undefined (parabola is the origin)")
    direction = np.array([0.0, frame.v_a[0], frame.v_a[1]])
    return lincomb_polys(f.components, direction)


def height_hessian(h):
    """Hessian matrix of a jet at the origin."""
    return np.array(
        [
            [2.0 * h.coefficient(2, 0), h.coefficient(1, 1)],
            [h.coefficient(1, 1), 2.0 * h.coefficient(0, 2)],
        ]
    )


def height_type(f, tol=None):
    """Singularity type of the axial height function.

    Nondegenerate parabola or half-line: A1 with the sign of kappa_a; at
    kappa_a = 0 the third-order test (in unit-|f_vv| coordinates, with
    s = <f_uv, f_vv>)

        -<f_uuu,f_vv> + 3<f_uuv,f_vv> s - 3<f_uvv,f_vv> s^2 + <f_vvv,f_vv> s^3

    separates A2 from higher types.  Point classes project to zero along
    every slope, so the height Hessian vanishes: corank 2.  Line class: the
    axial projection is unbounded and no height type is assigned.
    """
    m = _ensure_monge(f, tol)
    if tol is None:
        tol = m.tolerance()
    cls = classify_2jet(m, tol)
    if cls == LINE:
        raise PreconditionError("height typing undefined for the line class (axial curvature unbounded)")
    if cls in POINT_CLASSES:
        return CORANK_2
    ka = kappa_a_monge(m, tol).number
    if ka > tol:
        return A1_PLUS
    if ka < -tol:
        return A1_MINUS
    if m.germ.order < 3:
        raise PreconditionError("under-resolved jet: the A2 test needs order >= 3")
    g = to_special_coordinates(m)
    fvv = g.derivative_at_origin(0, 2)
    s = float(g.derivative_at_origin(1, 1) @ fvv)
    t3 = (
        -float(g.derivative_at_origin(3, 0) @ fvv)
        + 3.0 * float(g.derivative_at_origin(2, 1) @ fvv) * s
        - 3.0 * float(g.derivative_at_origin(1, 2) @ fvv) * s * s
        + float(g.derivative_at_origin(0, 3) @ fvv) * s ** 3
    )
    return A2 if abs(t3) > tol else A_AT_LEAST_3


def one_side_test(height_tag):
    """The surface lies locally on one side of the axial plane iff A1+."""
    return height_tag == A1_PLUS


def binormal_check(cp, frame, tol=None):
    """Is the axial vector a binormal direction?

    v_a is binormal when some tangent direction (a finite slope or the null
    direction) is annihilated by the second fundamental form paired with
    v_a; for point classes every direction qualifies.  Equivalent to the
    vanishing of the axial curvature.
    """
    if cp.cls == LINE:
        raise PreconditionError("binormal test undefined for the line class")
    if tol is None:
        tol = 1e-9 * (1.0 + cp.scale())
    if cp.cls in POINT_CLASSES:
        return True
    va = frame.v_a
    la = float(cp.eta0 @ va)
    ma = float(cp.eta1 @ va)
    na = float(cp.eta2 @ va)
    if abs(ma) <= tol and abs(na) <= tol:
        return True  # the null direction is annihilated
    if abs(na) > tol:
        y = -ma / na
        return abs(la + ma * y) <= tol * (1.0 + y * y)
    return False


@dataclass(frozen=True, eq=False)
class BranchCurve:
    mode: str  # "v-of-u" or "u-of-v"
    series: np.ndarray  # c(t) with the other variable equal to t
    height_residual: float  # max |coefficient| of h along the branch
    image_x: np.ndarray  # tangent component of the image, series in t
    image_va: np.ndarray  # v_a component (vanishes along the branch)
    image_nu2: np.ndarray  # nu2 component
    graph: np.ndarray  # nu2 component as a series in the tangent coordinate
    samples: np.ndarray  # rows (t, x, va-comp, nu2-comp)


@dataclass(frozen=True, eq=False)
class IntersectionBranches:
    slopes: tuple
    relation: str
    side: str
    extremum: str | None
    a_ppp: tuple | None  # third derivatives of the side functions (fold case)
    branches: tuple


def _leading(series, tol):
    k = series_valuation(series, tol)
    return (None, 0.0) if k is None else (k, float(series[k]))


def _side_of(z_plus, z_minus, tol):
    jp, cp_ = _leading(z_plus, tol)
    jm, cm = _leading(z_minus, tol)
    if jp is None or jm is None:
        return SIDE_LINE
    if (jp + jm) % 2:
        return SIDE_MIXED
    return SIDE_SAME if cp_ * cm > 0 else SIDE_OPPOSITE


def intersection_branches(f, n=33, t_max=0.05, tol=None):
    """Solve h = 0 for its two branches and classify their images.

    Requires kappa_a < 0, so the zero set of the height function is a pair
    of transversal curves.  Branches are parameterized as graphs v = c(u)
    when |h_vv| >= |h_uu| and as u = c(v) otherwise; branch 1 carries the
    '+' root.  Half-plane decisions come from the closed-form signs
    (h_uu h_vv for a nondegenerate parabola, det(f_u, f_uu, f_vv) for the
    fold case); sampled points are exported for plotting and cross-checks.
    """
    m = _ensure_monge(f, tol)
    if tol is None:
        tol = m.tolerance()
    cls = classify_2jet(m, tol)
    ka = kappa_a_monge(m, tol)
    if not ka.is_finite or ka.number >= -tol:
        raise PreconditionError("no transversal zero set (requires kappa_a < 0)")
    g = m.germ
    order = g.order
    frame = axial_frame(curvature_parabola(m, tol), tol)
    va3 = np.array([0.0, frame.v_a[0], frame.v_a[1]])
    nu23 = np.array([0.0, frame.nu2[0], frame.nu2[1]])
    h = height_jet(g, frame)
    huu = 2.0 * h.coefficient(2, 0)
    huv = h.coefficient(1, 1)
    hvv = 2.0 * h.coefficient(0, 2)
    disc = huv * huv - huu * hvv
    root = math.sqrt(disc)

    # Reported slopes solve h_uu a^2 + 2 h_uv a + h_vv = 0 (u = a v).
    if abs(huu) > tol:
        slopes = ((-huv + root) / huu, (-huv - root) / huu)
    else:
        slopes = (-hvv / (2.0 * huv),)

    if abs(hvv) >= abs(huu):
        mode = "v-of-u"
        cprimes = ((-huv + root) / hvv, (-huv - root) / hvv)
        hsolve = h
    else:
        mode = "u-of-v"
        cprimes = ((-huv + root) / huu, (-huv - root) / huu)
        hsolve = _transpose_jet(h)

    ts = np.linspace(-t_max, t_max, n)
    branches = []
    for cp_ in cprimes:
        c = tangent_branch_series(hsolve, cp_, order)
        resid = float(np.max(np.abs(hsolve.on_series(_unit_series(order), c))))
        if mode == "v-of-u":
            su, sv = _unit_series(order), c
            pts_uv = np.stack([ts, np.polynomial.polynomial.polyval(ts, c)])
        else:
            su, sv = c, _unit_series(order)
            pts_uv = np.stack([np.polynomial.polynomial.polyval(ts, c), ts])
        image = [comp.on_series(su, sv) for comp in g.components]
        ix = image[0]
        iva = image[0] * va3[0] + image[1] * va3[1] + image[2] * va3[2]
        inu = image[0] * nu23[0] + image[1] * nu23[1] + image[2] * nu23[2]
        if mode == "v-of-u":
            graph = inu
        else:
            # Reparameterize by the tangent coordinate x = c(t) (c'(0) != 0).
            rev = series_reverse(ix, order)
            graph = _series_compose_arr(inu, rev, order)
        p = g.eval(pts_uv[0], pts_uv[1])
        rows = np.column_stack([ts, p[0], va3 @ p, nu23 @ p])
        branches.append(
            BranchCurve(
                mode=mode,
                series=c,
                height_residual=resid,
                image_x=ix,
                image_va=iva,
                image_nu2=inu,
                graph=graph,
                samples=rows,
            )
        )

    scale = 1.0 + m.germ.max_abs()
    side = _side_of(branches[0].graph, branches[1].graph, tol * scale)
    extremum = None
    a_ppp = None
    if cls == NONDEGENERATE_PARABOLA:
        if abs(huu * hvv) <= tol * scale:
            relation = REL_CONTAINS_LINE
        elif huu * hvv > 0:
            relation = REL_SAME
        else:
            relation = REL_OPPOSITE
    elif cls == HALF_LINE:
        fu = g.derivative_at_origin(1, 0)
        fuu = g.derivative_at_origin(2, 0)
        fvv = g.derivative_at_origin(0, 2)
        det = float(np.linalg.det(np.column_stack([fu, fuu, fvv])))
        if abs(det) > tol * scale:
            relation = REL_TANGENT_EXTREMA
            zpp = 2.0 * branches[0].graph[2] if len(branches[0].graph) > 2 else 0.0
            extremum = "minima" if zpp > 0 else "maxima"
        else:
            relation = REL_INFLECTION
        # Third derivatives of the side functions a(u) = det(f_u, image(u), f_vv),
        # from the v = c(u) slopes regardless of the sampling mode.
        cps = ((-huv + root) / hvv, (-huv - root) / hvv)
        vals = []
        for cp_ in cps:
            vec = (
                g.derivative_at_origin(3, 0)
                + 3.0 * cp_ * g.derivative_at_origin(2, 1)
                + 3.0 * cp_ ** 2 * g.derivative_at_origin(1, 2)
                + cp_ ** 3 * g.derivative_at_origin(0, 3)
            )
            vals.append(float(np.linalg.det(np.column_stack([fu, vec, fvv]))))
        a_ppp = tuple(vals)
    else:
        raise PreconditionError(f"branch analysis undefined for class {cls!r}")

    return IntersectionBranches(
        slopes=slopes,
        relation=relation,
        side=side,
        extremum=extremum,
        a_ppp=a_ppp,
        branches=tuple(branches),
    )


def _unit_series(order):
    t = np.zeros(order + 1)
    t[1] = 1.0
    return t


def _series_compose_arr(a, b, order):
    from .jets import series_compose

    return series_compose(a, b, order)


def _transpose_jet(h):
    from .jets import TruncatedPoly2

    return TruncatedPoly2(h.order, h.coeffs.T.copy())


def crosscap_type(f, tol=None):
    """Elliptic, hyperbolic or parabolic cross-cap.

    Decided by the sign of <f_uu, f_vv> at the origin in unit-|f_vv|
    coordinates (positive: elliptic; negative: hyperbolic; zero within
    tolerance: parabolic).
    """
    m = _ensure_monge(f, tol)
    if tol is None:
        tol = m.tolerance()
    if classify_2jet(m, tol) != NONDEGENERATE_PARABOLA:
        raise PreconditionError("cross-cap typing requires a nondegenerate curvature parabola")
    g = to_special_coordinates(m)
    c = float(g.derivative_at_origin(2, 0) @ g.derivative_at_origin(0, 2))
    if c > tol:
        return CC_ELLIPTIC
    if c < -tol:
        return CC_HYPERBOLIC
    return CC_PARABOLIC


@dataclass(frozen=True, eq=False)
class CuspidalEdgeContact:
    kind: str  # hyperbolic point or inflection point
    a_ppp: tuple
    branches: IntersectionBranches


def cuspidal_edge_contact(f, tol=None, n=33, t_max=0.05):
    """Contact type of a frontal fold germ with the axial plane.

    Hyperbolic exactly when det(f_u, f_uu, f_vv)(0) != 0 (the two image
    curves meet tangentially at a pair of extrema); inflection when the
    determinant vanishes, in which case the third derivatives of the side
    functions are reported rather than classified further.
    """
    from .curvature import frontality

    m = _ensure_monge(f, tol)
    if tol is None:
        tol = m.tolerance()
    if classify_2jet(m, tol) != HALF_LINE:
        raise PreconditionError("cuspidal-edge contact requires the half-line (fold) class")
    if not frontality(m, tol).is_frontal:
        raise PreconditionError("germ is not a frontal to the retained jet order")
    ka = kappa_a_monge(m, tol)
    if ka.number >= -tol:
        raise PreconditionError("contact classification requires kappa_a < 0")
    br = intersection_branches(m, n=n, t_max=t_max, tol=tol)
    kind = CE_HYPERBOLIC if br.relation == REL_TANGENT_EXTREMA else CE_INFLECTION
    return CuspidalEdgeContact(kind=kind, a_ppp=br.a_ppp, branches=br)

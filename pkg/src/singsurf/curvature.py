"""Curvature invariants of corank-1 germs.

The axial curvature kappa_a is the minimum over the curvature parabola of
its projection onto the axial vector.  It is computed here by four
independent routes:

* ``kappa_a_monge``     closed form in the Monge 2-jet coefficients,
* ``kappa_a_general``   coordinate-free inner-product formula, needing only
                        f_v = 0 at the base point,
* ``kappa_a_intrinsic`` in terms of the first fundamental form E, F, G and
                        its partials (so the invariant is intrinsic),
* ``kappa_a_oracle``    direct numeric minimization of <eta(y), v_a>.

The umbilic curvature kappa_u is the (constant) absolute projection of a
degenerate parabola onto nu2.  For frontals with a nondegenerate singular
point of the first kind the singular curvature kappa_s of the singular
curve agrees with kappa_a up to the sign of lambda_v, and the frontality of
a fold germ is decided by the vanishing of (f3)_v along the critical curve
of f2, with first obstruction kappa_f = b1(0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateDataError, PreconditionError
from .jets import (
    MapGerm,
    SourceChange,
    TruncatedPoly2,
    implicit_curve_series,
)
from .normalize import (
    HALF_LINE,
    LINE,
    NONDEGENERATE_PARABOLA,
    POINT_ORIGIN,
    MongeData,
    classify_2jet,
    degeneracy_tolerance,
    fold_normal_form,
    to_monge_form,
)
from .parabola import axial_frame, curvature_parabola

FINITE = "finite"
UNBOUNDED = "unbounded"
ZERO_BY_DEFINITION = "zero-by-definition"
UNDEFINED = "undefined"


@dataclass(frozen=True)
class CurvatureValue:
    kind: str
    value: float | None = None

    @property
    def number(self):
        if self.kind == FINITE:
            return self.value
        if self.kind == ZERO_BY_DEFINITION:
            return 0.0
        raise ValueError(f"curvature has no numeric value (kind={self.kind!r})")

    @property
    def is_finite(self):
        return self.kind in (FINITE, ZERO_BY_DEFINITION)


def _finite(x):
    return CurvatureValue(FINITE, float(x))


def _ensure_monge(f, tol=None):
    return f if isinstance(f, MongeData) else to_monge_form(f, tol)


# ---------------------------------------------------------------------------
# Axial curvature
# ---------------------------------------------------------------------------


def kappa_a_monge(m, tol=None):
    """Axial curvature from the Monge 2-jet.

    For a nondegenerate parabola or half-line,

        kappa_a = ((a20 a02 + b20 b02) - (a11 a02 + b11 b02)^2 / n^2) / n,
        n^2 = a02^2 + b02^2.

    A line class projects onto the whole axis (unbounded); point classes
    give 0 by definition.
    """
    m = _ensure_monge(m, tol)
    cls = classify_2jet(m, tol)
    if cls == LINE:
        return CurvatureValue(UNBOUNDED)
    if cls not in (NONDEGENERATE_PARABOLA, HALF_LINE):
        return CurvatureValue(ZERO_BY_DEFINITION)
    n2 = m.a02 * m.a02 + m.b02 * m.b02
    lin = m.a20 * m.a02 + m.b20 * m.b02
    mix = m.a11 * m.a02 + m.b11 * m.b02
    return _finite((lin - mix * mix / n2) / np.sqrt(n2))


def kappa_a_general(f, tol=None):
    """Coordinate-free axial curvature at the origin.

    Valid in any coordinates with f_u != 0 and f_v = 0 at the base point
    (class nondegenerate or half-line).  Writing <,> for the Euclidean
    inner product of the jet derivatives at the origin:

        P  = <f_u,f_u><f_vv,f_vv> - <f_u,f_vv>^2,
        A  = <f_u,f_uu><f_u,f_vv> - <f_u,f_u><f_uu,f_vv>,
        C  = <f_u,f_uv><f_u,f_vv> - <f_u,f_u><f_uv,f_vv>,
        kappa_a = (A (-P) - C^2) / (<f_u,f_u> P)^(3/2).
    """
    if isinstance(f, MongeData):
        f = f.germ
    if tol is None:
        tol = degeneracy_tolerance(f.max_abs())
    fu = f.derivative_at_origin(1, 0)
    fv = f.derivative_at_origin(0, 1)
    if np.linalg.norm(fv) > tol * (1.0 + np.linalg.norm(fu)):
        raise PreconditionError("kernel not aligned with the v-axis (f_v(0) != 0)")
    if np.linalg.norm(fu) <= tol:
        raise PreconditionError("f_u vanishes at the origin")
    fuu = f.derivative_at_origin(2, 0)
    fuv = f.derivative_at_origin(1, 1)
    fvv = f.derivative_at_origin(0, 2)
    e = float(fu @ fu)
    p = e * float(fvv @ fvv) - float(fu @ fvv) ** 2
    if p <= tol * tol:
        raise DegenerateDataError("degenerate second-order data (f_u, f_vv collinear)")
    a = float(fu @ fuu) * float(fu @ fvv) - e * float(fuu @ fvv)
    c = float(fu @ fuv) * float(fu @ fvv) - e * float(fuv @ fvv)
    return _finite((a * (-p) - c * c) * (e * p) ** -1.5)


def kappa_a_intrinsic(f, tol=None):
    """Axial curvature from the first fundamental form alone.

    With E = <f_u,f_u>, F = <f_u,f_v>, G = <f_v,f_v> as jets and their
    partials taken at the origin (where f_v = 0):

                  (E_u/2 F_v - E (F_uv - E_vv/2)) (F_v^2 - E G_vv/2)
                      - (E_v/2 F_v - E G_uv/2)^2
        kappa_a = ---------------------------------------------------
                          (E (E G_vv/2 - F_v^2))^(3/2)
    """
    if isinstance(f, MongeData):
        f = f.germ
    if tol is None:
        tol = degeneracy_tolerance(f.max_abs())
    fv0 = f.derivative_at_origin(0, 1)
    if np.linalg.norm(fv0) > tol * (1.0 + np.linalg.norm(f.derivative_at_origin(1, 0))):
        raise PreconditionError("kernel not aligned with the v-axis (f_v(0) != 0)")
    from .jets import dot_polys

    fu = f.partial("u")
    fv = f.partial("v")
    E = dot_polys(fu, fu)
    F = dot_polys(fu, fv)
    G = dot_polys(fv, fv)

    e0 = E.coefficient(0, 0)
    e_u = E.diff("u").coefficient(0, 0)
    e_v = E.diff("v").coefficient(0, 0)
    e_vv = E.diff("v").diff("v").coefficient(0, 0)
    f_v = F.diff("v").coefficient(0, 0)
    f_uv = F.diff("u").diff("v").coefficient(0, 0)
    g_uv = G.diff("u").diff("v").coefficient(0, 0)
    g_vv = G.diff("v").diff("v").coefficient(0, 0)

    den_core = e0 * (e0 * g_vv / 2.0 - f_v * f_v)
    if den_core <= tol * tol:
        raise DegenerateDataError("degenerate second-order data")
    num = (e_u / 2.0 * f_v - e0 * (f_uv - e_vv / 2.0)) * (f_v * f_v - e0 * g_vv / 2.0)
    num -= (e_v / 2.0 * f_v - e0 * g_uv / 2.0) ** 2
    return _finite(num / den_core ** 1.5)


def kappa_a_oracle(cp, frame, tol=None):
    """Direct minimization of y -> <eta(y), v_a>.

    Dense scan over a window that is guaranteed to contain the vertex,
    refined by golden-section search.  Returns unbounded when the
    projection is linear non-constant or concave.
    """
    if not frame.defined:
        raise PreconditionError("axial frame undefined (parabola is the origin)")
    if tol is None:
        tol = 1e-9 * (1.0 + cp.scale())
    va = frame.v_a
    c2 = float(cp.eta2 @ va)
    c1 = 2.0 * float(cp.eta1 @ va)
    if c2 < -tol:
        return CurvatureValue(UNBOUNDED)
    if abs(c2) <= tol:
        if abs(c1) > tol:
            return CurvatureValue(UNBOUNDED)
        return _finite(float(cp.eta0 @ va))
    half = 1000.0
    vertex = -c1 / (2.0 * c2)
    if abs(vertex) > 100.0:
        half = 10.0 * abs(vertex)
    ys = np.linspace(-half, half, 4001)
    vals = cp.evaluate(ys) @ va
    i = int(np.argmin(vals))
    i = min(max(i, 1), len(ys) - 2)
    res = minimize_scalar(
        lambda y: float(cp.evaluate(y) @ va),
        bracket=(ys[i - 1], ys[i], ys[i + 1]),
        method="golden",
        options={"xtol": 1e-10},
    )
    return _finite(float(cp.evaluate(res.x) @ va))


# ---------------------------------------------------------------------------
# Umbilic curvature
# ---------------------------------------------------------------------------


def kappa_u(cp, frame, tol=None):
    """Absolute projection of a degenerate parabola onto nu2.

    Constant along the parabola (asserted on sampled slopes).  Undefined for
    a nondegenerate parabola; zero when the parabola is the origin itself.
    """
    if tol is None:
        tol = 1e-9 * (1.0 + cp.scale())
    if cp.cls == NONDEGENERATE_PARABOLA:
        return CurvatureValue(UNDEFINED)
    if cp.cls == POINT_ORIGIN:
        return _finite(0.0)
    vals = cp.evaluate(np.linspace(-3.0, 3.0, 7)) @ frame.nu2
    if float(np.max(vals) - np.min(vals)) > tol:
        raise DegenerateDataError("projection onto nu2 is not constant along the parabola")
    return _finite(abs(float(vals[0])))


# ---------------------------------------------------------------------------
# Frontals: singular curvature and the frontality obstruction
# ---------------------------------------------------------------------------


def _check_adapted(f, tol):
    """Adapted coordinates: f_v vanishes identically on the u-axis."""
    for comp in f.components:
        dv = comp.diff("v")
        if np.max(np.abs(dv.coeffs[:, 0])) > tol:
            raise PreconditionError("expects adapted coordinates (f_v(u, 0) = 0 on the jet)")


def kappa_s_frontal(f, tol=None):
    """Singular curvature of the singular curve of an adapted frontal.

    In adapted coordinates (singular set = u-axis, null direction = d/dv)
    with unit normal nu = f_u x f_vv / |f_u x f_vv|:

        kappa_s = sgn(lambda_v) det(f_u, f_uu, nu) / |f_u|^3   at the origin,

    lambda = det(f_u, f_v, nu).  A vanishing lambda_v (degenerate singular
    point) is an error rather than a guessed sign.
    """
    if tol is None:
        tol = degeneracy_tolerance(f.max_abs())
    _check_adapted(f, tol)
    fu = f.derivative_at_origin(1, 0)
    fuu = f.derivative_at_origin(2, 0)
    fvv = f.derivative_at_origin(0, 2)
    cr = np.cross(fu, fvv)
    ncr = float(np.linalg.norm(cr))
    if ncr <= tol:
        raise DegenerateDataError("degenerate singular point (f_u x f_vv = 0)")
    nu = cr / ncr
    lam_v = float(np.linalg.det(np.column_stack([fu, fvv, nu])))
    if abs(lam_v) <= tol:
        raise DegenerateDataError("degenerate singular point (lambda_v = 0)")
    sign = 1.0 if lam_v > 0 else -1.0
    det = float(np.linalg.det(np.column_stack([fu, fuu, nu])))
    return _finite(sign * det / float(np.linalg.norm(fu)) ** 3)


@dataclass(frozen=True, eq=False)
class FrontalityReport:
    is_frontal: bool
    obstruction: TruncatedPoly2  # series in u only: (f3)_v along the critical curve
    kappa_f: float
    jet_order: int
    critical_series: np.ndarray  # v(u) with (f2)_v(u, v(u)) = 0


def _aligned_fold_germ(m, tol):
    """Rotate the normal plane so the middle component carries the v^2 term."""
    n = np.hypot(m.a02, m.b02)
    if n <= tol:
        raise PreconditionError("swap components or not a fold ((f2)_vv(0,0) = 0)")
    c, s = m.a02 / n, m.b02 / n
    rot = np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])
    return m.germ.transformed(rot)


def frontality(f, tol=None):
    """Decide frontality of a fold-class germ, to the retained jet order.

    Solves (f2)_v(u, v(u)) = 0 for the critical curve v(u) and substitutes
    into (f3)_v.  The germ is a frontal (to order N) exactly when the
    resulting series vanishes; its first obstruction is kappa_f = b1(0) of
    the fold normal form.
    """
    m = _ensure_monge(f, tol)
    if tol is None:
        tol = m.tolerance()
    if classify_2jet(m, tol) != HALF_LINE:
        raise PreconditionError("frontality test requires the half-line (fold) class")
    g = _aligned_fold_germ(m, tol)
    g2v = g.components[1].diff("v")
    if abs(g2v.diff("v").coefficient(0, 0)) <= tol:
        raise PreconditionError("swap components or not a fold ((f2)_vv(0,0) = 0)")
    order = g.order
    vs = implicit_curve_series(g2v, order - 1)
    obst = g.components[2].diff("v").on_series(np.eye(order + 1)[1], vs)
    obst[order:] = 0.0  # top band of the differentiated jet is not trustworthy
    scale = 1.0 + g.max_abs()
    is_frontal = bool(np.max(np.abs(obst)) <= tol * scale)
    obst_poly = TruncatedPoly2.from_terms(order, {(k, 0): float(c) for k, c in enumerate(obst)})
    fnf = fold_normal_form(m, tol)
    return FrontalityReport(
        is_frontal=is_frontal,
        obstruction=obst_poly,
        kappa_f=fnf.b1_0,
        jet_order=order,
        critical_series=vs,
    )


def adapted_coordinates(f, tol=None):
    """Bring a frontal fold germ to adapted coordinates.

    Rotates the normal plane, then shifts v by the critical curve v(u), so
    the singular set becomes the u-axis with null direction d/dv.
    """
    m = _ensure_monge(f, tol)
    if tol is None:
        tol = m.tolerance()
    report = frontality(m, tol)
    if not report.is_frontal:
        raise PreconditionError("germ is not a frontal to the retained jet order")
    g = _aligned_fold_germ(m, tol)
    order = g.order
    shift = TruncatedPoly2.from_terms(order, {(k, 0): float(c) for k, c in enumerate(report.critical_series)})
    v = TruncatedPoly2.variable(order, "v")
    u = TruncatedPoly2.variable(order, "u")
    return g.compose(SourceChange(u, v + shift))

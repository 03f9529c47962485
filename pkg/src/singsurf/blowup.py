"""Gaussian curvature of fold germs through a polar blow-up.

A fold germ (half-line class) with nonzero frontality obstruction b1(0) has
no normal field along the singular curve, but the substitution

    (u, v) = Pi(r, theta) = (r cos(theta), r^2 cos(theta) sin(theta) / 2)

resolves the unit normal: (f_u x f_v) / (r^2 cos(theta)) extends smoothly,
and the pulled-back Gaussian curvature K = (LN - M^2)/(EG - F^2) diverges
like r^-4 with angular profile controlled by

    Ktilde(theta) = b1(0) (kappa_a b1(0) cos(theta) - kappa_u sin(theta)),

where kappa_a = a0(0) and kappa_u = b0(0) of the fold normal form.  The
normalized quantity K r^4 cos(theta) (b1^2 cos^2 + a2^2 sin^2)^2 / 4
converges to Ktilde * a2(0,0) at first order in r.

The projection contour in a normal direction (0, cos(phi), sin(phi)) gives
the profile curvature kappa_1 = -kappa_u cos(phi) + kappa_a sin(phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, PreconditionError
from .jets import implicit_curve_series, lincomb_polys, cross_polys, series_eval
from .normalize import FoldNormalForm, fold_normal_form

DEFAULT_COS_MARGIN = 0.1
DEFAULT_R_MAX = 0.1


@dataclass(frozen=True)
class BlowupSample:
    r: float
    theta: float
    K: float


@dataclass(frozen=True)
class KTildeValue:
    theta: float
    value: float


def _ensure_fold(f, tol=None):
    return f if isinstance(f, FoldNormalForm) else fold_normal_form(f, tol)


def _check_blowup_domain(fnf, r, theta, cos_margin, r_max, tol):
    if abs(fnf.b1_0) <= tol:
        raise PreconditionError("blow-up requires a nonzero frontality obstruction b1(0)")
    if fnf.germ.order < 4:
        raise PreconditionError("under-resolved jet: blow-up evaluation needs order >= 4")
    if abs(math.cos(theta)) < cos_margin:
        raise PreconditionError(f"theta within the exclusion band (|cos theta| < {cos_margin})")
    if not 0.0 < r <= r_max:
        raise PreconditionError(f"r must lie in (0, {r_max}] for jet validity")


def blowup_gauss(f, r, theta, cos_margin=DEFAULT_COS_MARGIN, r_max=DEFAULT_R_MAX, tol=1e-9):
    """Gaussian curvature at the blown-up point Pi(r, theta).

    All fundamental-form quantities are evaluated from the jet derivatives
    at the source point; EG - F^2 is computed as |f_u x f_v|^2 to avoid
    cancellation near the singular set.
    """
    fnf = _ensure_fold(f, tol)
    _check_blowup_domain(fnf, r, theta, cos_margin, r_max, tol)
    g = fnf.germ
    u0 = r * math.cos(theta)
    v0 = r * r * math.cos(theta) * math.sin(theta) / 2.0

    fu = np.array([c.eval(u0, v0) for c in _partials(g, "u")])
    fv = np.array([c.eval(u0, v0) for c in _partials(g, "v")])
    fuu = np.array([c.eval(u0, v0) for c in _partials(g, "uu")])
    fuv = np.array([c.eval(u0, v0) for c in _partials(g, "uv")])
    fvv = np.array([c.eval(u0, v0) for c in _partials(g, "vv")])

    cross = np.cross(fu, fv)
    denom = float(cross @ cross)  # = EG - F^2
    if denom <= 0.0:
        raise DegenerateDataError("degenerate metric at the blow-up point")
    nu_tilde = cross / (r * r * math.cos(theta))
    nu = nu_tilde / np.linalg.norm(nu_tilde)
    L = float(fuu @ nu)
    M = float(fuv @ nu)
    N = float(fvv @ nu)
    return BlowupSample(r=r, theta=theta, K=(L * N - M * M) / denom)


def _partials(g, which):
    comps = g.components
    for var in which:
        comps = tuple(c.diff(var) for c in comps)
    return comps


def ktilde(fnf, kappa_a, kappa_u, theta):
    """Leading angular coefficient of the blown-up Gaussian curvature."""
    value = fnf.b1_0 * (kappa_a * fnf.b1_0 * math.cos(theta) - kappa_u * math.sin(theta))
    return KTildeValue(theta=theta, value=value)


def normalized_gauss(f, r, theta, **kwargs):
    """K scaled by its leading divergence: converges to Ktilde * a2(0,0)."""
    fnf = _ensure_fold(f)
    sample = blowup_gauss(fnf, r, theta, **kwargs)
    c = math.cos(theta)
    s = math.sin(theta)
    w = fnf.b1_0 ** 2 * c * c + fnf.a2_00 ** 2 * s * s
    return sample.K * r ** 4 * c * w * w / 4.0


def fit_ktilde_limit(f, theta, rs=(1e-1, 1e-2, 1e-3), **kwargs):
    """Richardson-style r -> 0 limit of the normalized curvature.

    Fits the first-order model N(r) = N0 + c r through the two smallest
    radii; the third value feeds the convergence-rate diagnostics.
    Returns (limit, values) with values the normalized samples per radius.
    """
    fnf = _ensure_fold(f)
    rs = sorted(rs, reverse=True)
    values = [normalized_gauss(fnf, r, theta, **kwargs) for r in rs]
    r1, r2 = rs[-2], rs[-1]
    n1, n2 = values[-2], values[-1]
    limit = n2 - (n1 - n2) * r2 / (r1 - r2)
    return limit, values


@dataclass(frozen=True, eq=False)
class KoenderinkProfile:
    phi: float
    samples: np.ndarray  # rows (u, p1, p2): contour in the projection plane
    kappa1: float  # finite-difference curvature of the contour at 0
    v1_series: np.ndarray  # critical curve v1(u) of the projection
    v1pp: float  # v1''(0)


def koenderink_profile(f, phi, n=41, u_max=0.05, fd_step=1e-3, tol=1e-9):
    """Apparent contour of the projection along xi = (0, cos phi, sin phi).

    The contour points solve det(f_u, f_v, xi) = 0; the critical curve
    v1(u) exists because the v-derivative of that determinant is
    a2(0,0) sin(phi) != 0 at the origin.  The contour is flattened into the
    plane orthogonal to xi, spanned by (1,0,0) and (0, sin phi, -cos phi),
    and its curvature at 0 is returned together with the sampled points.
    """
    fnf = _ensure_fold(f, tol)
    s, c = math.sin(phi), math.cos(phi)
    if abs(s) <= tol:
        raise PreconditionError("projection direction must have sin(phi) != 0")
    g = fnf.germ
    order = g.order
    xi = np.array([0.0, c, s])
    w = np.array([0.0, s, -c])  # completes (e1, w, xi) to an orthonormal frame
    cross = cross_polys(g.partial("u"), g.partial("v"))
    a_jet = lincomb_polys(cross, xi)
    v1 = implicit_curve_series(a_jet, order - 1)
    v1pp = 2.0 * float(v1[2])

    def contour(us):
        us = np.asarray(us, dtype=float)
        vs = series_eval(v1, us)
        pts = g.eval(us, vs)
        p1 = pts[0]
        p2 = w @ pts
        return p1, p2

    us = np.linspace(-u_max, u_max, n)
    p1s, p2s = contour(us)
    samples = np.column_stack([us, p1s, p2s])

    def fd_kappa(step):
        (x_m, y_m), (x_0, y_0), (x_p, y_p) = (
            np.array(contour(t)) for t in (-step, 0.0, step)
        )
        d1 = np.array([x_p - x_m, y_p - y_m]) / (2.0 * step)
        d2 = np.array([x_p - 2.0 * x_0 + x_m, y_p - 2.0 * y_0 + y_m]) / (step * step)
        return float((d1[0] * d2[1] - d1[1] * d2[0]) / (d1 @ d1) ** 1.5)

    k_h = fd_kappa(fd_step)
    k_h2 = fd_kappa(fd_step / 2.0)
    kappa1 = (4.0 * k_h2 - k_h) / 3.0  # eliminate the O(step^2) error term
    return KoenderinkProfile(phi=phi, samples=samples, kappa1=kappa1, v1_series=v1, v1pp=v1pp)

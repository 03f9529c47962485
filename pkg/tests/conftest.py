"""Shared generators for randomized tests.

All randomness is seeded per test, so the suite is deterministic.  The
generators produce germs with well-conditioned leading data (norms bounded
away from zero) so that closed-form/oracle comparisons run at full float
accuracy.
"""

import numpy as np

from singsurf import (
    MapGerm,
    SourceChange,
    TargetIsometry,
    TruncatedPoly2,
    classify_2jet,
    kappa_a_monge,
    to_monge_form,
)

DEFAULT_ORDER = 5


def rng_for(seed):
    return np.random.default_rng(seed)


def random_band_coeffs(rng, order, scale, min_total_degree=0):
    c = rng.uniform(-scale, scale, size=(order + 1, order + 1))
    idx = np.arange(order + 1)
    total = idx[:, None] + idx[None, :]
    c[(total > order) | (total < min_total_degree)] = 0.0
    return c


def random_poly(rng, order, scale=1.0, min_total_degree=0):
    return TruncatedPoly2(order, random_band_coeffs(rng, order, scale, min_total_degree))


def random_orthogonal(rng, reflect=None):
    """Haar-ish random orthogonal 3x3 matrix; reflect=True/False pins det."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if reflect is True and np.linalg.det(q) > 0:
        q[:, 0] = -q[:, 0]
    if reflect is False and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return TargetIsometry(q)


def random_source_change(rng, order, linear_scale=(0.6, 1.6), higher_scale=0.2,
                         identity_linear=False):
    """Invertible source change with controlled conditioning."""
    if identity_linear:
        lin = np.eye(2)
    else:
        ang1, ang2 = rng.uniform(0, 2 * np.pi, size=2)
        r1 = np.array([[np.cos(ang1), -np.sin(ang1)], [np.sin(ang1), np.cos(ang1)]])
        r2 = np.array([[np.cos(ang2), -np.sin(ang2)], [np.sin(ang2), np.cos(ang2)]])
        scales = rng.uniform(*linear_scale, size=2) * rng.choice([-1.0, 1.0], size=2)
        lin = r1 @ np.diag(scales) @ r2
    x = random_band_coeffs(rng, order, higher_scale, min_total_degree=2)
    y = random_band_coeffs(rng, order, higher_scale, min_total_degree=2)
    x[1, 0], x[0, 1] = lin[0]
    y[1, 0], y[0, 1] = lin[1]
    return SourceChange(TruncatedPoly2(order, x), TruncatedPoly2(order, y))


def monge_germ(a, b, higher2=None, higher3=None, order=DEFAULT_ORDER):
    """Build (u, (a20 u^2 + 2 a11 uv + a02 v^2)/2 + h2, ... + h3)."""
    a20, a11, a02 = a
    b20, b11, b02 = b
    c1 = np.zeros((order + 1, order + 1))
    c1[1, 0] = 1.0
    c2 = np.zeros((order + 1, order + 1))
    c2[2, 0], c2[1, 1], c2[0, 2] = a20 / 2.0, a11, a02 / 2.0
    c3 = np.zeros((order + 1, order + 1))
    c3[2, 0], c3[1, 1], c3[0, 2] = b20 / 2.0, b11, b02 / 2.0
    if higher2 is not None:
        c2 += higher2
    if higher3 is not None:
        c3 += higher3
    return MapGerm(tuple(TruncatedPoly2(order, c) for c in (c1, c2, c3)))


def random_monge_germ(rng, klass="nondegenerate", order=DEFAULT_ORDER,
                      coeff_scale=2.0, higher_scale=0.5, n_min=0.5):
    """Random Monge-form germ of a requested parabola class.

    klass: 'nondegenerate' | 'half-line' | 'line' | 'point' | 'point-origin'
    """
    while True:
        a20, b20 = rng.uniform(-coeff_scale, coeff_scale, size=2)
        if klass == "nondegenerate":
            a11, a02, b11, b02 = rng.uniform(-coeff_scale, coeff_scale, size=4)
            if abs(a11 * b02 - a02 * b11) < 0.1 or np.hypot(a02, b02) < n_min:
                continue
        elif klass == "half-line":
            a02, b02 = rng.uniform(-coeff_scale, coeff_scale, size=2)
            if np.hypot(a02, b02) < n_min:
                continue
            lam = rng.uniform(-1.0, 1.0) * rng.choice([0.0, 1.0], p=[0.3, 0.7])
            a11, b11 = lam * a02, lam * b02
        elif klass == "line":
            a02 = b02 = 0.0
            a11, b11 = rng.uniform(-coeff_scale, coeff_scale, size=2)
            if np.hypot(a11, b11) < n_min:
                continue
        elif klass == "point":
            a11 = a02 = b11 = b02 = 0.0
            if np.hypot(a20, b20) < n_min:
                continue
        elif klass == "point-origin":
            a20 = a11 = a02 = b20 = b11 = b02 = 0.0
        else:
            raise ValueError(klass)
        h2 = random_band_coeffs(rng, order, higher_scale, min_total_degree=3)
        h3 = random_band_coeffs(rng, order, higher_scale, min_total_degree=3)
        germ = monge_germ((a20, a11, a02), (b20, b11, b02), h2, h3, order)
        m = to_monge_form(germ)
        if classify_2jet(m) == klass or (klass == "point-origin" and classify_2jet(m) == "point-origin"):
            return germ


def random_negative_crosscap(rng, order=DEFAULT_ORDER, ka_max=-0.2):
    """Nondegenerate-class germ with kappa_a below ka_max."""
    while True:
        germ = random_monge_germ(rng, "nondegenerate", order)
        if kappa_a_monge(to_monge_form(germ)).number < ka_max:
            return germ


def _no_linear_v_coeffs(rng, order, scale, min_total_degree=3):
    """Higher-order coefficients with no u^k v (j = 1) monomials."""
    c = random_band_coeffs(rng, order, scale, min_total_degree)
    c[:, 1] = 0.0
    return c


def random_frontal_edge(rng, order=DEFAULT_ORDER, coeff_scale=2.0, higher_scale=0.4,
                        ka_min=0.0):
    """Frontal fold germ in adapted coordinates (singular set = u-axis).

    Components carry no u^k v monomials, so the critical curve of the middle
    component is v = 0 and the v-derivative of the third component vanishes
    along it: the germ is a frontal with a first-kind singular point.
    """
    while True:
        a20, b20 = rng.uniform(-coeff_scale, coeff_scale, size=2)
        if abs(a20) <= ka_min:
            continue
        b02 = rng.uniform(-1.0, 1.0) * rng.choice([0.0, 1.0])
        h2 = _no_linear_v_coeffs(rng, order, higher_scale)
        h3 = _no_linear_v_coeffs(rng, order, higher_scale)
        h3[0, 3] += rng.uniform(0.3, 1.0) * rng.choice([-1.0, 1.0])  # cuspidal v^3 term
        return monge_germ((a20, 0.0, 2.0), (b20, 0.0, b02), h2, h3, order)


def random_fold_germ(rng, order=DEFAULT_ORDER, b1_min=0.5, coeff_scale=1.5,
                     higher_scale=0.4):
    """Fold germ already in normal-form shape with a2(0,0) = 1, |b1(0)| >= b1_min."""
    c2 = _no_linear_v_coeffs(rng, order, higher_scale)
    c2[:, 1] = random_band_coeffs(rng, order, higher_scale)[:, 1]
    c2[0, 1] = 0.0
    c2[1, 1] = 0.0  # plain uv term stays zero (normal-form shape)
    c2[2, 0] = rng.uniform(-coeff_scale, coeff_scale) / 2.0
    c2[0, 2] = 0.5
    c3 = random_band_coeffs(rng, order, higher_scale, min_total_degree=3)
    c3[:, 1] = 0.0
    c3[2, 0] = rng.uniform(-coeff_scale, coeff_scale) / 2.0
    c3[1, 1] = 0.0
    c3[0, 2] = 0.0
    b1 = rng.uniform(b1_min, 3.0 * b1_min) * rng.choice([-1.0, 1.0])
    c3[2, 1] = b1 / 2.0
    if order >= 4:
        c3[3, 1] = rng.uniform(-higher_scale, higher_scale)
    c1 = np.zeros((order + 1, order + 1))
    c1[1, 0] = 1.0
    germ = MapGerm(tuple(TruncatedPoly2(order, c) for c in (c1, c2, c3)))
    return germ

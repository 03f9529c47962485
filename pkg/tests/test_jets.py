"""Jet arithmetic: ring axioms, calculus rules, coordinate changes."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from singsurf import MapGerm, SourceChange, TargetIsometry, TruncatedPoly2, germ_transform
from singsurf.jets import (
    implicit_curve_series,
    series_compose,
    series_eval,
    series_reverse,
    tangent_branch_series,
)

from conftest import random_poly, random_source_change, rng_for


def P(order, terms):
    return TruncatedPoly2.from_terms(order, terms)


def assert_poly_close(p, q, rtol=1e-12, atol=1e-12):
    assert p.order == q.order
    np.testing.assert_allclose(p.coeffs, q.coeffs, rtol=rtol, atol=atol)


class TestAdd:
    def test_linearity(self):
        p = P(3, {(0, 0): 1.0, (1, 0): 1.0})  # 1 + u
        q = P(3, {(0, 1): 1.0})  # v
        assert p + q == P(3, {(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0})

    def test_identity(self):
        p = random_poly(rng_for(1), 4, 2.0)
        assert p + TruncatedPoly2.zero(4) == p

    def test_cancellation(self):
        p = P(3, {(2, 0): 1.0, (1, 1): 1.0})
        q = P(3, {(1, 1): -1.0})
        assert p + q == P(3, {(2, 0): 1.0})

    def test_order_mismatch(self):
        with pytest.raises(ValueError, match="order mismatch"):
            P(3, {}) + P(4, {})


class TestMul:
    def test_uv(self):
        u, v = TruncatedPoly2.variable(3, "u"), TruncatedPoly2.variable(3, "v")
        assert u * v == P(3, {(1, 1): 1.0})

    def test_square_at_order_2(self):
        s = P(2, {(1, 0): 1.0, (0, 1): 1.0})
        assert s * s == P(2, {(2, 0): 1.0, (1, 1): 2.0, (0, 2): 1.0})

    def test_truncation(self):
        u2 = P(2, {(2, 0): 1.0})
        v2 = P(2, {(0, 2): 1.0})
        assert (u2 * v2).is_zero()

    def test_order_mismatch(self):
        with pytest.raises(ValueError, match="order mismatch"):
            P(2, {}) * P(3, {})


class TestDiff:
    def test_dv_uv2(self):
        assert P(4, {(1, 2): 1.0}).diff("v") == P(4, {(1, 1): 2.0})

    def test_du_v3(self):
        assert P(4, {(0, 3): 1.0}).diff("u").is_zero()

    def test_du_quadratic(self):
        a20 = 1.7
        assert P(4, {(2, 0): a20 / 2}).diff("u") == P(4, {(1, 0): a20})


class TestCompose:
    def test_shear(self):
        p = P(3, {(0, 2): 1.0})  # v^2
        s = SourceChange(TruncatedPoly2.variable(3, "u"),
                         TruncatedPoly2.variable(3, "v") + TruncatedPoly2.variable(3, "u"))
        assert p.compose(s) == P(3, {(0, 2): 1.0, (1, 1): 2.0, (2, 0): 1.0})

    def test_identity(self):
        p = random_poly(rng_for(2), 5, 3.0)
        assert_poly_close(p.compose(SourceChange.identity(5)), p, rtol=0, atol=0)

    def test_swap(self):
        p = P(3, {(1, 1): 1.0})
        s = SourceChange(TruncatedPoly2.variable(3, "v"), TruncatedPoly2.variable(3, "u"))
        assert p.compose(s) == p

    def test_nonzero_constant_rejected(self):
        p = random_poly(rng_for(3), 3, 1.0)
        bad = TruncatedPoly2.from_terms(3, {(0, 0): 1.0, (1, 0): 1.0})
        with pytest.raises(ValueError, match="constant term"):
            p.compose((bad, TruncatedPoly2.variable(3, "v")))


@st.composite
def poly_triples(draw):
    order = draw(st.integers(min_value=1, max_value=6))
    coeff = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
    size = (order + 1) ** 2
    arrays = [draw(st.lists(coeff, min_size=size, max_size=size)) for _ in range(3)]
    polys = []
    for arr in arrays:
        c = np.array(arr).reshape(order + 1, order + 1)
        idx = np.arange(order + 1)
        c[(idx[:, None] + idx[None, :]) > order] = 0.0
        polys.append(TruncatedPoly2(order, c))
    return polys


@settings(max_examples=80, deadline=None)
@given(poly_triples())
def test_ring_axioms(polys):
    p, q, r = polys
    assert_poly_close((p + q) + r, p + (q + r))
    assert_poly_close(p * q, q * p, rtol=0, atol=0)
    assert_poly_close(p * (q + r), p * q + p * r, rtol=1e-12, atol=1e-10)


def test_chain_rule():
    # d/du (p o s) = (p_x o s) x_u + (p_y o s) y_u on the degrees the
    # composition retains (one below the truncation order).
    rng = rng_for(10)
    for _ in range(40):
        order = int(rng.integers(2, 7))
        p = random_poly(rng, order, 2.0)
        s = random_source_change(rng, order)
        lhs = p.compose(s).diff("u")
        rhs = p.diff("u").compose(s) * s.x.diff("u") + p.diff("v").compose(s) * s.y.diff("u")
        band = lhs.coeffs.copy()
        idx = np.arange(order + 1)
        keep = (idx[:, None] + idx[None, :]) <= order - 1
        np.testing.assert_allclose(lhs.coeffs[keep], rhs.coeffs[keep], rtol=1e-10, atol=1e-10)


def test_composition_associativity():
    rng = rng_for(11)
    for _ in range(40):
        order = int(rng.integers(2, 7))
        p = random_poly(rng, order, 2.0)
        s1 = random_source_change(rng, order)
        s2 = random_source_change(rng, order)
        left = p.compose(s1).compose(s2)
        right = p.compose(s1.compose(s2))
        assert_poly_close(left, right, rtol=1e-9, atol=1e-9)


class TestGermTransform:
    def test_identity(self):
        germ = MapGerm.from_terms(4, {(1, 0): 1.0}, {(0, 2): 1.0}, {(1, 1): 1.0})
        out = germ_transform(germ, SourceChange.identity(4), TargetIsometry.identity())
        assert out == germ

    def test_quarter_turn(self):
        # (u, v^2, 0) rotated a quarter turn in the (y, z)-plane -> (u, 0, v^2)
        germ = MapGerm.from_terms(4, {(1, 0): 1.0}, {(0, 2): 1.0}, {})
        rot = TargetIsometry.rotation_yz(np.pi / 2)
        out = rot.apply(germ)
        expected = MapGerm.from_terms(4, {(1, 0): 1.0}, {}, {(0, 2): 1.0})
        for got, want in zip(out.components, expected.components):
            assert_poly_close(got, want, rtol=0, atol=1e-16)

    def test_axial_curvature_invariant_under_transform(self):
        # Source changes with identity linear part fix the kernel direction;
        # together with target rotations they leave kappa_a unchanged.
        from singsurf import kappa_a_monge, to_monge_form

        germ = MapGerm.from_terms(5, {(1, 0): 1.0}, {(2, 0): 1.0, (0, 2): 1.0}, {(1, 1): 1.0})
        base = kappa_a_monge(to_monge_form(germ)).number
        assert base == pytest.approx(2.0, abs=1e-12)
        rng = rng_for(12)
        for _ in range(20):
            s = random_source_change(rng, 5, identity_linear=True)
            rot = TargetIsometry(np.linalg.qr(rng.normal(size=(3, 3)))[0])
            moved = germ_transform(germ, s, rot)
            ka = kappa_a_monge(to_monge_form(moved)).number
            assert ka == pytest.approx(base, abs=1e-9)


class TestSeriesSolvers:
    def test_implicit_polynomial_curve(self):
        g = P(5, {(0, 1): 1.0, (2, 0): -1.0, (3, 0): -1.0})  # v - u^2 - u^3
        v = implicit_curve_series(g)
        np.testing.assert_allclose(v, [0, 0, 1, 1, 0, 0], atol=1e-14)

    def test_implicit_catalan(self):
        # v + v^2 = u  =>  v = u - u^2 + 2u^3 - 5u^4 + 14u^5 (signed Catalans)
        g = P(5, {(0, 1): 1.0, (0, 2): 1.0, (1, 0): -1.0})
        v = implicit_curve_series(g)
        np.testing.assert_allclose(v, [0, 1, -1, 2, -5, 14], atol=1e-12)

    def test_reversion_catalan(self):
        a = np.array([0.0, 1.0, 1.0, 0.0, 0.0, 0.0])  # t + t^2
        t = series_reverse(a, 5)
        np.testing.assert_allclose(t, [0, 1, -1, 2, -5, 14], atol=1e-12)
        np.testing.assert_allclose(series_compose(a, t, 5), [0, 1, 0, 0, 0, 0], atol=1e-12)

    def test_branch_lines(self):
        h = P(5, {(0, 2): 1.0, (2, 0): -1.0})  # v^2 - u^2
        for slope in (1.0, -1.0):
            c = tangent_branch_series(h, slope)
            expected = np.zeros(6)
            expected[1] = slope
            np.testing.assert_allclose(c, expected, atol=1e-14)

    def test_branch_sqrt_series(self):
        # v^2 = u^2 (1 + u): v = +- u sqrt(1+u), sqrt(1+u) = 1 + u/2 - u^2/8 + u^3/16 - 5u^4/128
        h = P(5, {(0, 2): 1.0, (2, 0): -1.0, (3, 0): -1.0})
        c = tangent_branch_series(h, 1.0)
        np.testing.assert_allclose(c, [0, 1, 0.5, -0.125, 0.0625, -5.0 / 128], atol=1e-12)
        resid = h.on_series(np.eye(6)[1], c)
        assert np.max(np.abs(resid)) < 1e-12

    def test_series_eval_matches_poly(self):
        rng = rng_for(13)
        p = random_poly(rng, 5, 1.5)
        v = implicit_curve_series(P(5, {(0, 1): 1.0, (2, 0): 0.5}))
        ts = np.linspace(-0.1, 0.1, 7)
        direct = p.eval(ts, series_eval(v, ts))
        composed = p.on_series(np.eye(6)[1], v)
        np.testing.assert_allclose(direct, series_eval(composed, ts), atol=1e-10)

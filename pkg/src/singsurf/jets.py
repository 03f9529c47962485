"""Exact arithmetic on truncated bivariate Taylor polynomials (jets).

Everything downstream is computed from finite jets: polynomials in the source
variables ``(u, v)`` kept exactly up to a fixed total degree ``order``.  Sums,
products, compositions and formal derivatives are exact on the retained
degree band (up to float rounding), which is what makes the curvature
formulas evaluated later reproducible.

Conventions:

* ``coeffs[i, j]`` is the coefficient of ``u**i * v**j``; entries with
  ``i + j > order`` are kept at exactly zero.
* Truncation is silent, as usual for jet arithmetic.  A formal derivative is
  stored at the same order; its top degree band is no longer trustworthy and
  callers that need degree-``order`` information must start one order higher.
* All values are immutable plain data and every operation is a pure
  function, so instances can be shared freely across threads.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.polynomial import polyval, polyval2d

_BAND_CACHE: dict[int, np.ndarray] = {}


def _band(order):
    """Boolean mask selecting the entries with total degree <= order."""
    mask = _BAND_CACHE.get(order)
    if mask is None:
        idx = np.arange(order + 1)
        mask = (idx[:, None] + idx[None, :]) <= order
        mask.setflags(write=False)
        _BAND_CACHE[order] = mask
    return mask


def _check_same_order(a, b):
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}")


class TruncatedPoly2:
    """Polynomial in (u, v) truncated at a fixed total degree.

    A missing monomial has coefficient exactly 0; looking one up never
    raises.  Arithmetic between polynomials requires equal orders.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs=None):
        if order < 0:
            raise ValueError("order must be non-negative")
        if coeffs is None:
            c = np.zeros((order + 1, order + 1))
        else:
            c = np.array(coeffs, dtype=float)
            if c.shape != (order + 1, order + 1):
                raise ValueError(f"coefficient array must be {(order + 1, order + 1)}")
            if np.any(c[~_band(order)] != 0.0):
                raise ValueError("nonzero coefficient beyond the truncation band")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedPoly2 is immutable")

    @classmethod
    def _wrap(cls, order, coeffs):
        """Internal fast constructor: clips the out-of-band block."""
        coeffs[~_band(order)] = 0.0
        obj = cls.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def zero(cls, order):
        return cls(order)

    @classmethod
    def constant(cls, order, value):
        c = np.zeros((order + 1, order + 1))
        c[0, 0] = value
        return cls._wrap(order, c)

    @classmethod
    def variable(cls, order, name):
        c = np.zeros((order + 1, order + 1))
        if name == "u":
            c[1, 0] = 1.0
        elif name == "v":
            c[0, 1] = 1.0
        else:
            raise ValueError("variable must be 'u' or 'v'")
        return cls._wrap(order, c)

    @classmethod
    def from_terms(cls, order, terms):
        """Build from ``{(i, j): c}`` or an iterable of ``(i, j, c)``."""
        c = np.zeros((order + 1, order + 1))
        if isinstance(terms, dict):
            it = ((i, j, v) for (i, j), v in terms.items())
        else:
            it = iter(terms)
        for i, j, v in it:
            if i < 0 or j < 0 or i + j > order:
                raise ValueError(f"monomial u^{i}v^{j} exceeds order {order}")
            c[i, j] += v
        return cls._wrap(order, c)

    def coefficient(self, i, j):
        if i < 0 or j < 0 or i + j > self.order:
            return 0.0
        return float(self.coeffs[i, j])

    def __getitem__(self, key):
        return self.coefficient(*key)

    def terms(self):
        """Yield (i, j, c) for every nonzero coefficient."""
        for i, j in np.argwhere(self.coeffs != 0.0):
            yield int(i), int(j), float(self.coeffs[i, j])

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedPoly2):
            _check_same_order(self, other)
            return TruncatedPoly2._wrap(self.order, self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[0, 0] += other
        return TruncatedPoly2._wrap(self.order, c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly2._wrap(self.order, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, TruncatedPoly2):
            _check_same_order(self, other)
            return TruncatedPoly2._wrap(self.order, self.coeffs - other.coeffs)
        c = self.coeffs.copy()
        c[0, 0] -= other
        return TruncatedPoly2._wrap(self.order, c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedPoly2):
            return TruncatedPoly2._wrap(self.order, self.coeffs * float(other))
        _check_same_order(self, other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = np.zeros_like(a)
        for i, j in np.argwhere(a != 0.0):
            out[i:, j:] += a[i, j] * b[: n + 1 - i, : n + 1 - j]
        return TruncatedPoly2._wrap(n, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly2):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    # -- calculus ----------------------------------------------------------

    def diff(self, var):
        """Formal partial derivative with respect to 'u' or 'v'."""
        n = self.order
        out = np.zeros_like(self.coeffs)
        if var == "u":
            out[:n, :] = self.coeffs[1:, :] * np.arange(1, n + 1)[:, None]
        elif var == "v":
            out[:, :n] = self.coeffs[:, 1:] * np.arange(1, n + 1)[None, :]
        else:
            raise ValueError("variable must be 'u' or 'v'")
        return TruncatedPoly2._wrap(n, out)

    def compose(self, sub):
        """Substitute ``(u, v) -> (x(u, v), y(u, v))``.

        ``sub`` is a :class:`SourceChange` or a pair of polynomials with zero
        constant term.  Exact on the retained jet because the substituted
        series have positive valuation.
        """
        if isinstance(sub, SourceChange):
            x, y = sub.x, sub.y
        else:
            x, y = sub
        _check_same_order(self, x)
        _check_same_order(self, y)
        if x.coeffs[0, 0] != 0.0 or y.coeffs[0, 0] != 0.0:
            raise ValueError("substitution must have zero constant term")
        n = self.order
        one = TruncatedPoly2.constant(n, 1.0)
        xp = [one]
        yp = [one]
        for _ in range(n):
            xp.append(xp[-1] * x)
            yp.append(yp[-1] * y)
        out = TruncatedPoly2.zero(n)
        for i, j, c in self.terms():
            out = out + (xp[i] * yp[j]) * c
        return out

    # -- evaluation --------------------------------------------------------

    def eval(self, u, v):
        """Numeric evaluation; broadcasts over array arguments."""
        return polyval2d(u, v, self.coeffs)

    def on_series(self, su, sv):
        """Evaluate on univariate series ``u = su(t)``, ``v = sv(t)``.

        Both series are coefficient arrays of length ``order + 1`` with zero
        constant term.  Returns the composed series, truncated at ``order``.
        """
        n = self.order
        if su[0] != 0.0 or sv[0] != 0.0:
            raise ValueError("series substitution must have zero constant term")
        one = np.zeros(n + 1)
        one[0] = 1.0
        up = [one]
        vp = [one]
        for _ in range(n):
            up.append(series_mul(up[-1], su, n))
            vp.append(series_mul(vp[-1], sv, n))
        out = np.zeros(n + 1)
        for i, j, c in self.terms():
            out += c * series_mul(up[i], vp[j], n)
        return out

    # -- queries -----------------------------------------------------------

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))

    def is_zero(self, tol=0.0):
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def valuation(self, tol=0.0):
        """Smallest total degree with a coefficient above ``tol`` (None if none)."""
        best = None
        for i, j, c in self.terms():
            if abs(c) > tol and (best is None or i + j < best):
                best = i + j
        return best

    def __repr__(self):
        parts = []
        for i, j, c in sorted(self.terms(), key=lambda t: (t[0] + t[1], t[1])):
            mono = ("u" if i == 1 else f"u^{i}" if i else "") + ("v" if j == 1 else f"v^{j}" if j else "")
            parts.append(f"{c:g}{mono}" if mono else f"{c:g}")
        body = " + ".join(parts) if parts else "0"
        return f"TruncatedPoly2(order={self.order}: {body})"


# ---------------------------------------------------------------------------
# Univariate truncated series helpers (used by implicit/branch solvers).
# Series are 1-D float arrays of length order + 1, index = power of t.
# ---------------------------------------------------------------------------


def series_mul(a, b, order):
    return np.convolve(a, b)[: order + 1]


def series_eval(a, t):
    return polyval(t, a)


def series_valuation(a, tol=0.0):
    idx = np.nonzero(np.abs(a) > tol)[0]
    return int(idx[0]) if idx.size else None


def series_div(num, den, order):
    """Truncated quotient; requires a unit (nonzero constant) denominator."""
    if den[0] == 0.0:
        raise ZeroDivisionError("series division by a series with zero constant term")
    q = np.zeros(order + 1)
    inv0 = 1.0 / den[0]
    for k in range(order + 1):
        acc = num[k] if k < len(num) else 0.0
        if k:
            acc = acc - np.dot(q[:k], den[k:0:-1])
        q[k] = acc * inv0
    return q


def series_shifted_div(num, den, order, tol=0.0):
    """Quotient when numerator and denominator share a common valuation.

    Divides out ``t**m`` where ``m`` is the valuation of ``den``; the leading
    ``m`` numerator coefficients must be negligible (they are residual dust
    in the Newton iterations below) and are dropped.
    """
    m = series_valuation(den, tol)
    if m is None:
        raise ZeroDivisionError("series division by zero series")
    if m == 0:
        return series_div(num, den, order)
    nn = np.zeros(order + 1)
    nn[: order + 1 - m] = num[m:]
    dd = np.zeros(order + 1)
    dd[: order + 1 - m] = den[m:]
    return series_div(nn, dd, order)


def series_compose(a, b, order):
    """a(b(t)) truncated; b must have zero constant term."""
    if b[0] != 0.0:
        raise ValueError("inner series must have zero constant term")
    out = np.zeros(order + 1)
    out[0] = a[0]
    bp = np.zeros(order + 1)
    bp[0] = 1.0
    for k in range(1, order + 1):
        bp = series_mul(bp, b, order)
        if k < len(a):
            out += a[k] * bp
    return out


def series_reverse(a, order):
    """Compositional inverse of ``a`` (``a[0] = 0``, ``a[1] != 0``)."""
    if a[0] != 0.0 or a[1] == 0.0:
        raise ValueError("series reversion needs valuation exactly 1")
    da = np.zeros(order + 1)
    da[:order] = a[1:] * np.arange(1, order + 1)
    t = np.zeros(order + 1)
    t[1] = 1.0 / a[1]
    x = np.zeros(order + 1)
    x[1] = 1.0
    for _ in range(order + 2):
        r = series_compose(a, t, order) - x
        d = series_compose(da, t, order)
        t = t - series_div(r, d, order)
    t[0] = 0.0
    return t


def implicit_curve_series(g, order=None):
    """Solve ``g(u, v(u)) = 0`` for the series of ``v(u)`` with ``v(0) = 0``.

    Requires ``g(0,0) = 0`` and ``g_v(0,0) != 0`` (the implicit function
    setting).  Newton iteration on jets; each step at least doubles the
    number of correct coefficients.
    """
    n = g.order if order is None else order
    if abs(g.coeffs[0, 0]) != 0.0:
        raise ValueError("implicit solve needs g(0,0) = 0")
    gv = g.diff("v")
    if gv.coeffs[0, 0] == 0.0:
        raise ZeroDivisionError("implicit solve needs g_v(0,0) != 0")
    t = np.zeros(g.order + 1)
    t[1] = 1.0
    v = np.zeros(g.order + 1)
    for _ in range(max(2, math.ceil(math.log2(n + 1)) + 2)):
        r = g.on_series(t, v)
        d = gv.on_series(t, v)
        v = v - series_div(r, d, g.order)
        v[0] = 0.0
    v[n + 1 :] = 0.0
    return v[: g.order + 1]


def tangent_branch_series(h, slope, order=None):
    """Branch ``v = c(u)`` of ``h = 0`` through a Morse double point.

    ``h`` vanishes to second order at the origin with a nondegenerate,
    indefinite Hessian; ``slope`` is a simple root of
    ``h_vv s^2 + 2 h_uv s + h_uu = 0``.  The Newton correction divides by
    ``h_v(u, c(u))``, whose leading coefficient is the square root of the
    Hessian discriminant, hence nonzero for simple roots.
    """
    n = h.order if order is None else order
    hv = h.diff("v")
    t = np.zeros(h.order + 1)
    t[1] = 1.0
    c = np.zeros(h.order + 1)
    c[1] = slope
    for _ in range(2 * n + 2):
        r = h.on_series(t, c)
        d = hv.on_series(t, c)
        if series_valuation(d, 0.0) is None:
            break
        c = c - series_shifted_div(r, d, h.order)
        c[0] = 0.0
    c[n + 1 :] = 0.0
    return c[: h.order + 1]


# ---------------------------------------------------------------------------
# Coordinate changes
# ---------------------------------------------------------------------------


class SourceChange:
    """Coordinate change ``(u, v) -> (x(u, v), y(u, v))`` of the source.

    Both components are :class:`TruncatedPoly2` with zero constant term and
    the linear part must be invertible.
    """

    __slots__ = ("x", "y", "order")

    def __init__(self, x, y, tol=1e-12):
        _check_same_order(x, y)
        if x.coeffs[0, 0] != 0.0 or y.coeffs[0, 0] != 0.0:
            raise ValueError("source change must fix the origin")
        jac = np.array([[x.coeffs[1, 0], x.coeffs[0, 1]], [y.coeffs[1, 0], y.coeffs[0, 1]]])
        scale = max(1.0, np.max(np.abs(jac)))
        if abs(np.linalg.det(jac)) <= tol * scale * scale:
            raise ValueError("source change must be invertible at the origin")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "order", x.order)

    def __setattr__(self, name, value):
        raise AttributeError("SourceChange is immutable")

    @classmethod
    def identity(cls, order):
        return cls(TruncatedPoly2.variable(order, "u"), TruncatedPoly2.variable(order, "v"))

    @classmethod
    def linear(cls, order, matrix):
        m = np.asarray(matrix, dtype=float)
        u = TruncatedPoly2.variable(order, "u")
        v = TruncatedPoly2.variable(order, "v")
        return cls(u * m[0, 0] + v * m[0, 1], u * m[1, 0] + v * m[1, 1])

    @property
    def jacobian(self):
        return np.array(
            [
                [self.x.coeffs[1, 0], self.x.coeffs[0, 1]],
                [self.y.coeffs[1, 0], self.y.coeffs[0, 1]],
            ]
        )

    def compose(self, other):
        """The change 'first apply ``other``, then ``self``'."""
        return SourceChange(self.x.compose(other), self.y.compose(other))

    def __repr__(self):
        return f"SourceChange(order={self.order})"


class TargetIsometry:
    """Linear isometry of the ambient 3-space (rotation or reflection)."""

    __slots__ = ("rotation",)

    def __init__(self, rotation, tol=1e-12):
        r = np.array(rotation, dtype=float)
        if r.shape != (3, 3):
            raise ValueError("rotation must be a 3x3 matrix")
        if np.max(np.abs(r.T @ r - np.eye(3))) > tol:
            raise ValueError("matrix is not orthogonal within tolerance")
        object.__setattr__(self, "rotation", r)

    def __setattr__(self, name, value):
        raise AttributeError("TargetIsometry is immutable")

    @classmethod
    def identity(cls):
        return cls(np.eye(3))

    @classmethod
    def rotation_yz(cls, theta):
        """Rotation of the (y, z) coordinate plane by ``theta``."""
        c, s = math.cos(theta), math.sin(theta)
        return cls(np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]))

    @property
    def determinant(self):
        return float(np.linalg.det(self.rotation))

    def apply(self, germ):
        return germ.transformed(self.rotation)

    def __repr__(self):
        return f"TargetIsometry(det={self.determinant:+.0f})"


# ---------------------------------------------------------------------------
# Map germs (R^2, 0) -> (R^3, 0)
# ---------------------------------------------------------------------------


class MapGerm:
    """Jet of a map germ from the plane to 3-space, based at the origin."""

    __slots__ = ("components", "order")

    def __init__(self, components):
        comps = tuple(components)
        if len(comps) != 3:
            raise ValueError("a map germ has exactly three components")
        order = comps[0].order
        for c in comps[1:]:
            if c.order != order:
                raise ValueError(f"order mismatch: {c.order} vs {order}")
        for c in comps:
            if c.coeffs[0, 0] != 0.0:
                raise ValueError("germ must be based at the origin (zero constant terms)")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("MapGerm is immutable")

    @classmethod
    def from_terms(cls, order, t1, t2, t3):
        return cls(tuple(TruncatedPoly2.from_terms(order, t) for t in (t1, t2, t3)))

    def partial(self, var):
        return tuple(c.diff(var) for c in self.components)

    def derivative_at_origin(self, i, j):
        """The vector ``d^{i+j} f / du^i dv^j`` at the origin."""
        fac = math.factorial(i) * math.factorial(j)
        return np.array([c.coefficient(i, j) * fac for c in self.components])

    def jacobian_at_origin(self):
        return np.column_stack([self.derivative_at_origin(1, 0), self.derivative_at_origin(0, 1)])

    def compose(self, sub):
        return MapGerm(tuple(c.compose(sub) for c in self.components))

    def transformed(self, rotation):
        r = rotation.rotation if isinstance(rotation, TargetIsometry) else np.asarray(rotation, dtype=float)
        comps = []
        for k in range(3):
            acc = self.components[0] * r[k, 0]
            acc = acc + self.components[1] * r[k, 1]
            acc = acc + self.components[2] * r[k, 2]
            comps.append(acc)
        return MapGerm(tuple(comps))

    def eval(self, u, v):
        return np.stack([c.eval(u, v) for c in self.components])

    def max_abs(self):
        return max(c.max_abs() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, MapGerm):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None

    def __repr__(self):
        return f"MapGerm(order={self.order})"


def germ_transform(f, source_change, isometry):
    """Apply a source coordinate change and a target isometry: ``R (f o s)``."""
    return f.compose(source_change).transformed(isometry)


# Small vector-of-polynomials helpers used by the geometry modules.


def dot_polys(fs, gs):
    acc = fs[0] * gs[0]
    acc = acc + fs[1] * gs[1]
    acc = acc + fs[2] * gs[2]
    return acc


def cross_polys(fs, gs):
    return (
        fs[1] * gs[2] - fs[2] * gs[1],
        fs[2] * gs[0] - fs[0] * gs[2],
        fs[0] * gs[1] - fs[1] * gs[0],
    )


def lincomb_polys(fs, vec):
    acc = fs[0] * float(vec[0])
    acc = acc + fs[1] * float(vec[1])
    acc = acc + fs[2] * float(vec[2])
    return acc

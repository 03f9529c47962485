"""Full analysis pipeline: germ in, machine-readable report out.

The report aggregates the parabola class, Monge coefficients, adapted
frame, the curvature invariants, height and point types, contact
classifications and the frontality data.  Fields whose preconditions are
not met are marked ``"not applicable: <reason>"`` so a report is always
complete.  Identical inputs produce byte-identical serialized reports: the
provenance block carries the input hash, jet order and tolerance but no
timestamps.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

from .blowup import ktilde, blowup_gauss, koenderink_profile
from .contact import (
    REL_TANGENT_EXTREMA,
    crosscap_type,
    cuspidal_edge_contact,
    height_type,
    intersection_branches,
    one_side_test,
)
from .curvature import (
    CurvatureValue,
    adapted_coordinates,
    frontality,
    kappa_a_monge,
    kappa_s_frontal,
    kappa_u,
)
from .errors import DegenerateDataError, PreconditionError, SingSurfError
from .germio import input_hash, parse_germ
from .jets import MapGerm
from .normalize import (
    HALF_LINE,
    NONDEGENERATE_PARABOLA,
    classify_2jet,
    corank_at_origin,
    fold_normal_form,
    to_monge_form,
)
from .parabola import asymptotic_directions, axial_frame, curvature_parabola, point_type


@dataclass(frozen=True)
class AnalysisOptions:
    order: int = 5
    tolerance: float | None = None  # override the scaled default
    branch_samples: int = 33
    branch_t_max: float = 0.05


def _na(reason):
    return f"not applicable: {reason}"


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    data: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.data[key]

    def to_dict(self):
        return self.data

    def to_json(self, indent=None):
        return json.dumps(self.data, sort_keys=True, indent=indent,
                          separators=(",", ":") if indent is None else None)


def _curvature_field(value: CurvatureValue):
    return {"kind": value.kind, "value": value.value}


def analyze(source, options=AnalysisOptions()):
    """Run the full pipeline on a germ (text, document, or MapGerm)."""
    germ = source if isinstance(source, MapGerm) else parse_germ(source, options.order)
    tol = options.tolerance
    corank = corank_at_origin(germ, tol)
    if corank == 0:
        raise PreconditionError("regular point (corank 0): nothing to analyze")
    if corank == 2:
        raise PreconditionError("corank 2 singularities are outside the supported classes")

    m = to_monge_form(germ, tol)
    tol = m.tolerance() if tol is None else tol
    cls = classify_2jet(m, tol)
    cp = curvature_parabola(m, tol)
    frame = axial_frame(cp, tol)
    asy = asymptotic_directions(cp, tol)

    data = {
        "provenance": {
            "input_hash": input_hash(germ),
            "jet_order": germ.order,
            "tolerance": tol,
        },
        "corank": 1,
        "parabola_class": cls,
        "monge": {
            "a20": m.a20, "a11": m.a11, "a02": m.a02,
            "b20": m.b20, "b11": m.b11, "b02": m.b02,
        },
        "v_a": list(frame.v_a) if frame.defined else _na("frame arbitrary: parabola is the origin"),
        "nu2": list(frame.nu2) if frame.defined else _na("frame arbitrary: parabola is the origin"),
        "asymptotic_directions": {"kind": asy.kind, "values": list(asy.values)},
        "point_type": point_type(asy),
        "kappa_a": _curvature_field(kappa_a_monge(m, tol)),
        "kappa_u": _curvature_field(kappa_u(cp, frame, tol)),
    }

    try:
        data["height_type"] = height_type(m, tol)
        data["one_sided"] = one_side_test(data["height_type"])
    except (PreconditionError, DegenerateDataError) as exc:
        data["height_type"] = _na(str(exc))
        data["one_sided"] = _na(str(exc))

    if cls == NONDEGENERATE_PARABOLA:
        data["crosscap_type"] = crosscap_type(m, tol)
    else:
        data["crosscap_type"] = _na(f"parabola class is {cls}")

    if cls == HALF_LINE:
        fr = frontality(m, tol)
        data["frontal"] = {
            "is_frontal": fr.is_frontal,
            "certified_to_order": fr.jet_order,
            "kappa_f": fr.kappa_f,
        }
        if fr.is_frontal:
            try:
                data["kappa_s"] = _curvature_field(kappa_s_frontal(adapted_coordinates(m, tol), tol))
            except (PreconditionError, DegenerateDataError) as exc:
                data["kappa_s"] = _na(str(exc))
        else:
            data["kappa_s"] = _na("germ is not a frontal")
        try:
            ce = cuspidal_edge_contact(m, tol)
            data["cuspidal_edge_contact"] = {
                "kind": ce.kind,
                "a_ppp": list(ce.a_ppp),
                "side": ce.branches.side,
            }
        except (PreconditionError, DegenerateDataError) as exc:
            data["cuspidal_edge_contact"] = _na(str(exc))
    else:
        reason = f"parabola class is {cls}"
        data["frontal"] = _na(reason)
        data["kappa_s"] = _na(reason)
        data["cuspidal_edge_contact"] = _na(reason)

    return CurvatureReport(data=data)


# ---------------------------------------------------------------------------
# Tabular exports (CSV with a single header row, 17 significant digits)
# ---------------------------------------------------------------------------

EXPORT_KINDS = ("branches", "parabola", "mesh", "blowup-grid", "contour")


def _fmt(x):
    return format(float(x), ".17g")


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(x) if not isinstance(x, (int, np.integer)) else str(x) for x in row))
        buf.write("\n")
    return buf.getvalue()


def export_curves(source, kind, options=AnalysisOptions(), **params):
    """Emit plot data for one aspect of the analysis.

    Column contracts:
        branches    -> branch, t, x, y, z   (frame {tangent, v_a, nu2})
        parabola    -> y, n1, n2
        mesh        -> u, v, x, y, z
        blowup-grid -> r, theta, K, Ktilde
        contour     -> u, p1, p2
    """
    germ = source if isinstance(source, MapGerm) else parse_germ(source, options.order)
    if kind not in EXPORT_KINDS:
        raise SingSurfError(f"unknown export kind {kind!r} (expected one of {EXPORT_KINDS})")
    tol = options.tolerance

    if kind == "mesh":
        if corank_at_origin(germ, tol) == 0:
            raise PreconditionError("regular point (corank 0): mesh export is for singular germs")
        extent = params.get("extent", 0.5)
        n = params.get("samples", 25)
        axis = np.linspace(-extent, extent, n)
        rows = []
        for u in axis:
            pts = germ.eval(np.full_like(axis, u), axis)
            for v, x, y, z in zip(axis, *pts):
                rows.append((u, v, x, y, z))
        return _csv(("u", "v", "x", "y", "z"), rows)

    m = to_monge_form(germ, tol)

    if kind == "parabola":
        cp = curvature_parabola(m, tol)
        y0, y1 = params.get("y_range", (-3.0, 3.0))
        n = params.get("samples", 61)
        ys = np.linspace(y0, y1, n)
        eta = cp.evaluate(ys)
        return _csv(("y", "n1", "n2"), np.column_stack([ys, eta]))

    if kind == "branches":
        br = intersection_branches(
            m, n=params.get("samples", options.branch_samples),
            t_max=params.get("t_max", options.branch_t_max), tol=tol,
        )
        rows = []
        for idx, branch in enumerate(br.branches, start=1):
            for t, x, y, z in branch.samples:
                rows.append((idx, t, x, y, z))
        return _csv(("branch", "t", "x", "y", "z"), rows)

    if kind == "blowup-grid":
        fnf = fold_normal_form(m, tol)
        rs = params.get("rs", (1e-1, 1e-2, 1e-3))
        n = params.get("samples", 13)
        margin = params.get("cos_margin", 0.1)
        thetas = [t for t in np.linspace(-np.pi, np.pi, n) if abs(np.cos(t)) >= margin]
        rows = []
        for r in rs:
            for theta in thetas:
                sample = blowup_gauss(fnf, r, theta, cos_margin=margin)
                kt = ktilde(fnf, fnf.a0_0, fnf.b0_0, theta)
                rows.append((r, theta, sample.K, kt.value))
        return _csv(("r", "theta", "K", "Ktilde"), rows)

    # contour
    fnf = fold_normal_form(m, tol)
    profile = koenderink_profile(
        fnf, params.get("phi", np.pi / 2),
        n=params.get("samples", 41), u_max=params.get("u_max", 0.05),
    )
    return _csv(("u", "p1", "p2"), profile.samples)

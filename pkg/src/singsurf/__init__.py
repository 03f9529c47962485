"""Second-order geometry of corank-1 singular surface germs in R^3.

Computes the curvature parabola and its class, the axial vector and axial
curvature (by four independent routes), umbilic and singular curvatures,
contact of the surface with the axial plane, frontality and its first
obstruction, and the blow-up Gaussian curvature of fold singularities.
"""

from .blowup import (
    BlowupSample,
    KoenderinkProfile,
    KTildeValue,
    blowup_gauss,
    fit_ktilde_limit,
    koenderink_profile,
    ktilde,
    normalized_gauss,
)
from .contact import (
    A1_MINUS,
    A1_PLUS,
    A2,
    A_AT_LEAST_3,
    CC_ELLIPTIC,
    CC_HYPERBOLIC,
    CC_PARABOLIC,
    CE_HYPERBOLIC,
    CE_INFLECTION,
    CORANK_2,
    REL_CONTAINS_LINE,
    REL_INFLECTION,
    REL_OPPOSITE,
    REL_SAME,
    REL_TANGENT_EXTREMA,
    IntersectionBranches,
    binormal_check,
    crosscap_type,
    cuspidal_edge_contact,
    height_hessian,
    height_jet,
    height_type,
    intersection_branches,
    one_side_test,
)
from .curvature import (
    FINITE,
    UNBOUNDED,
    UNDEFINED,
    ZERO_BY_DEFINITION,
    CurvatureValue,
    FrontalityReport,
    adapted_coordinates,
    frontality,
    kappa_a_general,
    kappa_a_intrinsic,
    kappa_a_monge,
    kappa_a_oracle,
    kappa_s_frontal,
    kappa_u,
)
from .errors import (
    DegenerateDataError,
    GermParseError,
    PreconditionError,
    SingSurfError,
)
from .germio import (
    canonical_json,
    germ_to_doc,
    input_hash,
    parse_germ,
    serialize_germ,
)
from .jets import (
    MapGerm,
    SourceChange,
    TargetIsometry,
    TruncatedPoly2,
    germ_transform,
)
from .normalize import (
    DEGENERATE_CLASSES,
    HALF_LINE,
    LINE,
    NONDEGENERATE_PARABOLA,
    POINT,
    POINT_ORIGIN,
    FoldNormalForm,
    MongeData,
    classify_2jet,
    corank_at_origin,
    fold_normal_form,
    to_monge_form,
    to_special_coordinates,
)
from .parabola import (
    ELLIPTIC,
    HYPERBOLIC,
    INFLECTION,
    PARABOLIC,
    AsymptoticSet,
    AxialFrame,
    CurvatureParabola,
    asymptotic_directions,
    axial_frame,
    curvature_parabola,
    point_type,
)
from .report import AnalysisOptions, CurvatureReport, analyze, export_curves

__version__ = "0.1.0"

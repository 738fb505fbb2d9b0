"""Exact computations on generalized Fermat curves F_{k,n}.

The curve is the complete intersection of the n-1 diagonal forms
``lamhat_i x_1^k + x_2^k + x_{3+i}^k`` in P^n over an exact field.
"""

from .aut import (
    AutReport,
    MoebiusMap,
    MonomialAut,
    QFormCertificate,
    full_linear_group,
    h0_elements,
    h0_generators,
    induced_moebius,
    is_linear_automorphism,
    lift_moebius,
    monomial_search,
    moebius_stabilizer,
    normality_check,
    qform_check,
)
from .curve import (
    CurveSpec,
    ProjectivePoint,
    all_fixed_points,
    base_map,
    canonical_degree,
    contains,
    fixed_points,
    genus,
    genus_kn,
    new_curve,
    riemann_hurwitz_genus,
)
from .errors import (
    BudgetExceeded,
    GFermatError,
    MissingRootsError,
    PropertyViolation,
    ValidationError,
)
from .fields import FieldElement, FieldHandle, extend_for_roots, kth_roots, make_field
from .osculation import (
    HermiteData,
    LocalChart,
    PlueckerReport,
    hermite_invariants,
    hyperosc_survey,
    local_expansion,
    pluecker_solve,
    ramification_indices,
)
from .points import PointCensus, census, enumerate_points, orbit_decomposition
from .series import TruncatedSeries, kth_root_series

__version__ = "0.1.0"

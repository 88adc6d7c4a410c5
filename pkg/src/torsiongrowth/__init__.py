"""Torsion of elliptic curves over quadratic cyclotomic fields and its growth
in quadratic extensions."""

from .curves import (
    INFINITY,
    BadReductionError,
    Point,
    ShortCurve,
    SingularCurveError,
    WeierstrassCurve,
    count_points_fq,
    curve_from_long,
    kubert_curve_7,
    order_of_point,
    quadratic_twist,
    reduce_at_prime,
    to_short,
    twist_transfer,
)
from .factorize import (
    Factorization,
    factor_over_quad,
    factor_over_rationals,
    low_degree_factors,
    roots_in_field,
)
from .fields import (
    QI,
    QQ,
    QSQRT_MINUS3,
    FactorBudgetError,
    QuadElem,
    QuadField,
    Rational,
    RelQuadElem,
    RelQuadField,
    quad_conj,
    rel_conj,
    same_square_class,
    sqrt_in_quad,
    sqrt_in_relquad,
    square_class_rep,
)
from .growth import (
    ClassificationTables,
    DetectionPlan,
    GrowthRecord,
    allowed_growth,
    classification_tables,
    detection_plan,
    growth_extensions,
    summand_count,
    restriction_audit,
)
from .polys import Fp2Field, FpField, Poly, poly_gcd, quadratic_discriminant, resultant, squarefree_part
from .torsion import (
    GaloisSplit,
    TorsionGroup,
    galois_split,
    torsion_order_bound,
    torsion_over_quad,
    torsion_over_relquad,
    twist_torsion,
)

__version__ = "0.1.0"

"""Exact smoothness analysis of finitely presented algebras over QQ and GF(p).

Decides smoothness of Spec(S) -> Spec(k) for S = k[x1..xn]/(f1..fc),
computes the smooth locus as an explicit finite union of pieces, extracts
standard-smooth charts, presents the module of differentials, and solves
square-zero lifting problems constructively.
"""

from ._kernel import BACKEND as kernel_backend
from .groebner import (
    GroebnerBasis,
    IdealBasis,
    buchberger,
    colon,
    eliminate,
    ideal_membership,
    intersect,
    is_unit_ideal,
    is_unit_in_quotient,
    normal_form,
    unit_certificate,
)
from .kaehler import conormal_check, omega_fiber_dim, omega_presentation, universal_d
from .lifting import (
    AlgebraHom,
    NilpotentAlgebra,
    SquareZeroData,
    check_square_zero,
    invert_unit,
    lift_hom,
    make_algebra,
    verify_hom,
)
from .poly import GF, GREVLEX, LEX, QQ, Ambient, FieldSpec, MonomialOrder, Polynomial, block_order
from .smoothness import (
    Chart,
    Choice,
    LocusPiece,
    PointSmoothness,
    Presentation,
    SmoothLocusReport,
    enumerate_choices,
    is_smooth,
    is_standard_smooth,
    jacobian,
    locus_piece,
    minor_det,
    smooth_at_point,
    smooth_locus,
    standard_smooth_charts,
)

__version__ = "0.1.0"

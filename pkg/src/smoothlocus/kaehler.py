"""The module of differentials of a presentation, as a finite cokernel.

Omega_{S/k} for S = k[x1..xn]/(f1..fc) is S^n on the symbols dx_j modulo
the gradient rows of the relators; the universal derivation sends a class
to its gradient vector.  Nothing more than this presentation is stored:
every question asked here reduces to exact linear algebra at a rational
point of the variety.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ._linalg import rank_and_pivots
from .poly import AmbientMismatch, Polynomial
from .smoothness import (
    NotSmoothAtPoint,
    PointNotOnVariety,
    Presentation,
    jacobian,
    on_variety,
    smooth_at_point,
)


@dataclass(frozen=True)
class DifferentialModulePresentation:
    """Cokernel presentation of Omega: S^rank modulo the relation rows."""

    source: Presentation
    rank: int
    relation_rows: tuple  # tuple[tuple[Polynomial, ...], ...], row i = grad f_i


@dataclass(frozen=True)
class ConormalReport:
    rank_r: int
    fiber_dim: int
    split_ok: bool


def omega_presentation(pres: Presentation) -> DifferentialModulePresentation:
    """The relation matrix is exactly the Jacobian."""
    return DifferentialModulePresentation(pres, pres.n, jacobian(pres))


def universal_d(pres: Presentation, f: Polynomial):
    """Gradient vector of f, representing d(f mod I1) in the presentation."""
    if f.ambient != pres.ambient:
        raise AmbientMismatch("polynomial outside the presentation ring")
    return tuple(f.partial_derivative(j) for j in range(pres.n))


def _jacobian_rank_at(pres: Presentation, point: Sequence) -> int:
    values = [[entry.evaluate(point) for entry in row] for row in jacobian(pres)]
    rank, _, _ = rank_and_pivots(values, pres.field)
    return rank


def omega_fiber_dim(pres: Presentation, point: Sequence) -> int:
    """dim of Omega tensor kappa(point) = n - rank of the Jacobian there."""
    point = [pres.field.coeff(v) for v in point]
    if not on_variety(pres, point):
        raise PointNotOnVariety("point does not satisfy the relators")
    return pres.n - _jacobian_rank_at(pres, point)


def conormal_check(pres: Presentation, point: Sequence) -> ConormalReport:
    """Fiber-level shadow of the split conormal sequence at a smooth point.

    With r the Jacobian rank at the point, the relator gradients span an
    r-dimensional subspace whose dimension is complementary to the fiber
    of Omega; split_ok records r + fiber_dim = n.  Only asserted where the
    smoothness hypothesis holds, so a non-smooth point is an error.
    """
    point = [pres.field.coeff(v) for v in point]
    if not on_variety(pres, point):
        raise PointNotOnVariety("point does not satisfy the relators")
    if not smooth_at_point(pres, point).smooth:
        raise NotSmoothAtPoint("conormal check requires a smooth point")
    r = _jacobian_rank_at(pres, point)
    fiber = omega_fiber_dim(pres, point)
    return ConormalReport(r, fiber, r + fiber == pres.n)

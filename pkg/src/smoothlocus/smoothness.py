"""Smoothness of Spec(S) -> Spec(k) for S = k[x1..xn]/(f1..fc).

The smooth locus is covered by one piece per square submatrix of the
Jacobian (including the empty one): choosing c0 relators and c0 variables
gives a minor Delta and a redundancy ideal (I0 : I1), and the piece is
D(Delta) minus V((I0 : I1)).  There are C(n+c, c) such choices.  The
complement of the union is cut out by the single ideal

    N = I1 + (Delta * g : all choices, all colon generators g),

so the morphism is smooth everywhere iff N is the unit ideal; smoothness
at a rational point needs only the one maximal-rank choice picked by
Gaussian elimination of the Jacobian evaluated there.  Nonempty pieces
localize, via the Rabinowitsch relator w*(Delta*g) - 1, to presentations
that are standard smooth after moving the chosen relators and variables to
the front.

Everything is exact; all colon ideals are computed in the polynomial ring
and read on V(I1).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from ._linalg import rank_and_pivots
from .groebner import (
    GroebnerBasis,
    IdealBasis,
    buchberger,
    colon,
    exact_divide,
    is_unit_in_quotient,
    normal_form,
    unit_certificate,
)
from .poly import Ambient, AmbientMismatch, FieldSpec, Polynomial


class PointNotOnVariety(ValueError):
    """A point-wise query was asked at a point where some relator is nonzero."""


class NotSmoothAtPoint(ValueError):
    """An operation that assumes smoothness at the point was asked elsewhere."""


@dataclass(frozen=True)
class Presentation:
    """S = k[x1..xn]/(f1..fc), with display names for the variables.

    Zero relators are dropped; c = 0 and n = 0 are both legal.
    """

    field: FieldSpec
    var_names: tuple  # tuple[str, ...]
    relators: tuple  # tuple[Polynomial, ...]

    def __post_init__(self):
        names = tuple(self.var_names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        amb = Ambient(len(names), self.field)
        kept = []
        for f in self.relators:
            if f.ambient != amb:
                raise AmbientMismatch("relator outside the presentation ring")
            if not f.is_zero:
                kept.append(f)
        object.__setattr__(self, "var_names", names)
        object.__setattr__(self, "relators", tuple(kept))

    @property
    def n(self) -> int:
        return len(self.var_names)

    @property
    def c(self) -> int:
        return len(self.relators)

    @property
    def ambient(self) -> Ambient:
        return Ambient(self.n, self.field)

    def relator_ideal(self) -> IdealBasis:
        return IdealBasis(self.ambient, self.relators)


@dataclass(frozen=True)
class Choice:
    """Equal-size subsets of relator rows and variable columns (0-based)."""

    rows: tuple  # tuple[int, ...], ascending
    cols: tuple  # tuple[int, ...], ascending

    @property
    def size(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class LocusPiece:
    """One term D(delta) \\ V((I0:I1)) of the smooth-locus union.

    is_empty records the syntactic test: every product delta*g with g a
    colon generator lies in I1, so the piece meets no point of V(I1).
    """

    choice: Choice
    delta: Polynomial
    colon_gens: tuple  # tuple[Polynomial, ...], reduced GB of (I0 : I1)
    is_empty: bool


@dataclass(frozen=True)
class SmoothLocusReport:
    pieces: tuple  # tuple[LocusPiece, ...] in canonical choice order
    non_smooth_ideal: IdealBasis  # reduced GB generators of N
    globally_smooth: bool
    empty_scheme: bool


@dataclass(frozen=True)
class SmoothnessResult:
    """Verdict of is_smooth plus a checkable certificate.

    When smooth, unit_cofactors satisfies sum(h_i * generators_i) = 1;
    when not, nonsmooth_basis is the reduced Groebner basis of N.
    """

    smooth: bool
    empty_scheme: bool
    generators: tuple
    unit_cofactors: Optional[tuple]
    nonsmooth_basis: Optional[tuple]


@dataclass(frozen=True)
class PointSmoothness:
    smooth: bool
    choice: Choice
    witness: Optional[Polynomial]


@dataclass(frozen=True)
class Chart:
    """A standard-smooth chart S_{delta*g} of a presentation.

    The chart ring keeps only the chosen relators (the rest are redundant
    on D(delta*g)) plus the Rabinowitsch relator w*(delta*g) - 1; its
    variables are the chosen columns, then w, then the remaining columns.
    variable_map sends a chart variable position to the source variable
    index, with None at the w slot.
    """

    presentation: Presentation
    origin: Choice
    colon_generator: Polynomial
    localized_element: Polynomial  # delta * g, in source coordinates
    variable_map: tuple

    def extend_point(self, point: Sequence) -> tuple:
        """Coordinates in the chart of a source point with (delta*g) != 0."""
        field = self.presentation.field
        value = self.localized_element.evaluate(point)
        if not value:
            raise PointNotOnVariety("point lies outside the chart's open set")
        w = field.inv(value)
        return tuple(w if src is None else field.coeff(point[src]) for src in self.variable_map)


def jacobian(pres: Presentation):
    """The c x n matrix of formal partials (rows: relators, cols: variables)."""
    return tuple(
        tuple(f.partial_derivative(j) for j in range(pres.n)) for f in pres.relators
    )


def enumerate_choices(c: int, n: int):
    """All row/column choices, ascending size then lexicographic.

    The count is C(n+c, c) = sum over i of C(n,i)*C(c,i).
    """
    out = []
    for c0 in range(min(c, n) + 1):
        for rows in itertools.combinations(range(c), c0):
            for cols in itertools.combinations(range(n), c0):
                out.append(Choice(rows, cols))
    return out


def _det_cofactor(m, ambient):
    size = len(m)
    if size == 0:
        return Polynomial.one(ambient)
    if size == 1:
        return m[0][0]
    total = Polynomial.zero(ambient)
    for j in range(size):
        entry = m[0][j]
        if entry.is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        cof = entry * _det_cofactor(minor, ambient)
        total = total + cof if j % 2 == 0 else total - cof
    return total


def _det_bareiss(m, ambient):
    """Fraction-free Bareiss determinant; exact in the polynomial ring."""
    size = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = Polynomial.one(ambient)
    for k in range(size - 1):
        if a[k][k].is_zero:
            swap = next((i for i in range(k + 1, size) if not a[i][k].is_zero), None)
            if swap is None:
                return Polynomial.zero(ambient)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = exact_divide(num, prev)
            a[i][k] = Polynomial.zero(ambient)
        prev = a[k][k]
    det = a[size - 1][size - 1]
    return det if sign == 1 else -det


def minor_det(jac, choice: Choice, ambient: Ambient) -> Polynomial:
    """Determinant of the selected square submatrix; the empty minor is 1.

    Cofactor expansion up to 4x4, Bareiss elimination beyond.
    """
    for i in choice.rows:
        if not 0 <= i < len(jac):
            raise IndexError(f"row {i} out of range")
    for j in choice.cols:
        if jac and not 0 <= j < len(jac[0]):
            raise IndexError(f"column {j} out of range")
        if not jac and j >= ambient.nvars:
            raise IndexError(f"column {j} out of range")
    sub = [[jac[i][j] for j in choice.cols] for i in choice.rows]
    if len(sub) <= 4:
        return _det_cofactor(sub, ambient)
    return _det_bareiss(sub, ambient)


def locus_piece(pres: Presentation, choice: Choice,
                _gb1: Optional[GroebnerBasis] = None) -> LocusPiece:
    """One smooth-locus piece: minor, colon ideal, and the emptiness flag."""
    amb = pres.ambient
    jac = jacobian(pres)
    delta = minor_det(jac, choice, amb)
    ideal0 = IdealBasis(amb, tuple(pres.relators[i] for i in choice.rows))
    gens = colon(ideal0, pres.relator_ideal()).generators
    gb1 = _gb1 if _gb1 is not None else buchberger(pres.relator_ideal())
    empty = all(normal_form(delta * g, gb1).is_zero for g in gens)
    return LocusPiece(choice, delta, gens, empty)


def smooth_locus(pres: Presentation, jobs: int = 1) -> SmoothLocusReport:
    """Every piece of the Theorem-2 union, in canonical choice order.

    Pieces are independent; with jobs > 1 they are computed on a thread
    pool but always assembled in canonical order.
    """
    gb1 = buchberger(pres.relator_ideal())
    choices = enumerate_choices(pres.c, pres.n)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pieces = tuple(pool.map(lambda ch: locus_piece(pres, ch, gb1), choices))
    else:
        pieces = tuple(locus_piece(pres, ch, gb1) for ch in choices)
    raw = _nonsmooth_generators(pres, pieces)
    nsm_gb = buchberger(raw)
    return SmoothLocusReport(
        pieces=pieces,
        non_smooth_ideal=IdealBasis(pres.ambient, nsm_gb.elements),
        globally_smooth=nsm_gb.is_unit,
        empty_scheme=gb1.is_unit,
    )


def _nonsmooth_generators(pres: Presentation, pieces) -> IdealBasis:
    gens = list(pres.relators)
    for piece in pieces:
        for g in piece.colon_gens:
            gens.append(piece.delta * g)
    return IdealBasis(pres.ambient, tuple(gens))


def is_smooth(pres: Presentation, report: Optional[SmoothLocusReport] = None) -> SmoothnessResult:
    """Global verdict with certificate: cofactors of 1 in N when smooth,
    the reduced basis of N when not."""
    if report is None:
        report = smooth_locus(pres)
    raw = _nonsmooth_generators(pres, report.pieces)
    if report.globally_smooth:
        cofactors = unit_certificate(raw)
        if cofactors is None:
            raise AssertionError("unit ideal without certificate")
        return SmoothnessResult(True, report.empty_scheme, raw.generators, cofactors, None)
    return SmoothnessResult(
        False, report.empty_scheme, raw.generators, None, report.non_smooth_ideal.generators
    )


def on_variety(pres: Presentation, point: Sequence) -> bool:
    """True iff every relator vanishes at the point."""
    if len(point) != pres.n:
        raise ValueError(f"point has {len(point)} coordinates, expected {pres.n}")
    return all(not f.evaluate(point) for f in pres.relators)


def smooth_at_point(pres: Presentation, point: Sequence) -> PointSmoothness:
    """Smoothness at a rational point of V(I1).

    Gaussian elimination of the Jacobian at the point picks a maximal-rank
    set of pivot rows and columns; with I0 spanned by the pivot relators,
    the point is smooth iff some generator of (I0 : I1) is nonzero there.
    """
    field = pres.field
    point = [field.coeff(v) for v in point]
    if not on_variety(pres, point):
        raise PointNotOnVariety("point does not satisfy the relators")
    jac = jacobian(pres)
    values = [[entry.evaluate(point) for entry in row] for row in jac]
    _, prows, pcols = rank_and_pivots(values, field)
    choice = Choice(tuple(sorted(prows)), tuple(pcols))
    ideal0 = IdealBasis(pres.ambient, tuple(pres.relators[i] for i in choice.rows))
    gens = colon(ideal0, pres.relator_ideal()).generators
    witness = next((g for g in gens if g.evaluate(point)), None)
    return PointSmoothness(witness is not None, choice, witness)


def is_standard_smooth(pres: Presentation) -> bool:
    """True iff c <= n and the leading c x c Jacobian minor is a unit of S."""
    if pres.c > pres.n:
        return False
    lead = Choice(tuple(range(pres.c)), tuple(range(pres.c)))
    det = minor_det(jacobian(pres), lead, pres.ambient)
    return is_unit_in_quotient(det, pres.relator_ideal())


def _fresh_name(taken) -> str:
    if "w" not in taken:
        return "w"
    i = 0
    while f"w{i}" in taken:
        i += 1
    return f"w{i}"


def standard_smooth_charts(pres: Presentation,
                           report: Optional[SmoothLocusReport] = None):
    """Standard-smooth charts covering the smooth locus.

    For each nonempty piece and each colon generator g with delta*g not in
    I1, the chart presents S_{delta*g}: chosen variables first, then the
    Rabinowitsch variable w, then the remaining variables; relators are the
    chosen ones followed by w*(delta*g) - 1.  The leading minor of the
    chart is delta^2 * g, a unit there, so every chart is standard smooth.
    """
    if report is None:
        report = smooth_locus(pres)
    gb1 = buchberger(pres.relator_ideal())
    w_name = _fresh_name(set(pres.var_names))
    charts = []
    for piece in report.pieces:
        if piece.is_empty:
            continue
        for g in piece.colon_gens:
            localized = piece.delta * g
            if normal_form(localized, gb1).is_zero:
                continue
            charts.append(_build_chart(pres, piece, g, localized, w_name))
    return charts


def _build_chart(pres, piece, g, localized, w_name) -> Chart:
    cols = piece.choice.cols
    rest = [j for j in range(pres.n) if j not in cols]
    var_map = [*cols, None, *rest]
    names = tuple(w_name if src is None else pres.var_names[src] for src in var_map)
    ext = Ambient(pres.n + 1, pres.field)
    c0 = len(cols)
    mapping = [0] * pres.n  # source index -> chart index
    for new_pos, src in enumerate(var_map):
        if src is not None:
            mapping[src] = new_pos
    chosen = [pres.relators[i].remap_variables(ext, mapping) for i in piece.choice.rows]
    w = Polynomial.variable(ext, c0)
    rab = w * localized.remap_variables(ext, mapping) - Polynomial.one(ext)
    chart_pres = Presentation(pres.field, names, tuple(chosen) + (rab,))
    return Chart(chart_pres, piece.choice, g, localized, tuple(var_map))


def choice_count(c: int, n: int) -> int:
    """Closed form C(n+c, c) for the number of pieces."""
    return math.comb(n + c, c)

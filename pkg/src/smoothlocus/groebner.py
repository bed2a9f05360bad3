"""Reduced Groebner bases and the ideal toolkit built on them.

Buchberger's algorithm with the two classical pair criteria (coprime
leading monomials and the chain criterion) and normal selection by lcm
degree.  Output bases are reduced: monic, inter-reduced and sorted by
ascending leading monomial, so they are canonical for a fixed order and
can be compared structurally.

On top of that: normal forms, ideal membership, unit-ideal tests,
elimination via block orders, intersections through the t-trick, colon
ideals, units modulo an ideal, exact division, and a traced variant of
Buchberger that produces a cofactor certificate when the ideal is (1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ._kernel import impl as _k
from .poly import (
    GREVLEX,
    Ambient,
    AmbientMismatch,
    MonomialOrder,
    Polynomial,
    block_order,
    mono_degree,
    mono_divides,
    mono_lcm,
)


class ExactDivisionError(ArithmeticError):
    """Division that was guaranteed exact left a remainder (internal bug)."""


@dataclass(frozen=True)
class IdealBasis:
    """Generators of an ideal; zero generators are dropped on construction."""

    ambient: Ambient
    generators: tuple  # tuple[Polynomial, ...]

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.ambient != self.ambient:
                raise AmbientMismatch("generator outside the ambient ring")
            if not g.is_zero:
                gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def of(cls, ambient: Ambient, gens: Sequence[Polynomial]) -> IdealBasis:
        return cls(ambient, tuple(gens))


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis; elements are monic and canonically sorted."""

    ambient: Ambient
    order: MonomialOrder
    elements: tuple  # tuple[Polynomial, ...]

    @property
    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant and not self.elements[0].is_zero


def _keyed(p: Polynomial, order: MonomialOrder):
    kid, blk = order.kind_id, order.block
    return _k.keyed_terms(list(p.terms), kid, blk)


def _to_poly(ambient: Ambient, terms) -> Polynomial:
    return Polynomial(ambient, _k.unkeyed(_k.keyed_terms([(m, c) for _, m, c in terms], _k.GREVLEX, 0)))


def _monic(terms, char):
    if not terms:
        return terms
    inv = pow(terms[0][2], -1, char) if char else 1 / terms[0][2]
    if char:
        return [(k, m, (c * inv) % char) for k, m, c in terms]
    return [(k, m, c * inv) for k, m, c in terms]


def _buchberger_raw(polys, char, kid, blk):
    """Reduced GB on keyed term lists; the engine behind everything here."""
    basis = [_monic(p, char) for p in polys if p]
    pairs = set()
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            pairs.add((i, j))

    def lcm_of(i, j):
        return mono_lcm(basis[i][0][1], basis[j][0][1])

    while pairs:
        i, j = min(pairs, key=lambda ij: (mono_degree(lcm_of(*ij)), ij))
        pairs.discard((i, j))
        lm_i = basis[i][0][1]
        lm_j = basis[j][0][1]
        lcm = mono_lcm(lm_i, lm_j)
        # product criterion: coprime leading monomials
        if all(a + b == m for a, b, m in zip(lm_i, lm_j, lcm)):
            continue
        # chain criterion
        skip = False
        for l in range(len(basis)):
            if l == i or l == j:
                continue
            if not mono_divides(basis[l][0][1], lcm):
                continue
            a = (min(i, l), max(i, l))
            b = (min(j, l), max(j, l))
            if a not in pairs and b not in pairs:
                skip = True
                break
        if skip:
            continue
        s = _k.kspoly(basis[i], basis[j], char, kid, blk)
        r = _k.kreduce(s, basis, char, kid, blk)
        if r:
            basis.append(_monic(r, char))
            new = len(basis) - 1
            for t in range(new):
                pairs.add((t, new))

    # minimalize: drop elements whose leading monomial another one divides
    basis.sort(key=lambda p: p[0][0])
    minimal = []
    for g in basis:
        if not any(mono_divides(h[0][1], g[0][1]) for h in minimal):
            minimal.append(g)
    # tail-reduce each element against the others
    reduced = list(minimal)
    for idx in range(len(reduced)):
        others = reduced[:idx] + reduced[idx + 1:]
        reduced[idx] = _monic(_k.kreduce(reduced[idx], others, char, kid, blk), char)
    reduced.sort(key=lambda p: p[0][0])
    return reduced


def buchberger(gens: IdealBasis, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `gens`."""
    char = gens.ambient.field.characteristic
    kid, blk = order.kind_id, order.block
    raw = _buchberger_raw([_keyed(g, order) for g in gens.generators], char, kid, blk)
    return GroebnerBasis(gens.ambient, order, tuple(_to_poly(gens.ambient, t) for t in raw))


def normal_form(p: Polynomial, basis: GroebnerBasis) -> Polynomial:
    """Remainder of p on division by the basis (no term divisible by a
    leading monomial of the basis); p minus the result lies in the ideal."""
    if p.ambient != basis.ambient:
        raise AmbientMismatch("polynomial outside the basis ambient")
    if not basis.elements:
        return p
    char = p.ambient.field.characteristic
    kid, blk = basis.order.kind_id, basis.order.block
    divisors = [_keyed(g, basis.order) for g in basis.elements]
    return _to_poly(p.ambient, _k.kreduce(_keyed(p, basis.order), divisors, char, kid, blk))


def ideal_membership(p: Polynomial, ideal: IdealBasis) -> bool:
    return normal_form(p, buchberger(ideal)).is_zero


def is_unit_ideal(ideal: IdealBasis) -> bool:
    return buchberger(ideal).is_unit


def is_unit_in_quotient(f: Polynomial, modulus: IdealBasis) -> bool:
    """True iff f is invertible in ambient/modulus, i.e. 1 in modulus + (f)."""
    if f.ambient != modulus.ambient:
        raise AmbientMismatch("polynomial outside the modulus ambient")
    return is_unit_ideal(IdealBasis(modulus.ambient, modulus.generators + (f,)))


def eliminate(ideal: IdealBasis, k: int) -> IdealBasis:
    """Generators of ideal intersected with the subring without the first
    k variables, via a block-order basis."""
    if k > ideal.ambient.nvars:
        raise ValueError(f"cannot eliminate {k} of {ideal.ambient.nvars} variables")
    basis = buchberger(ideal, block_order(k))
    kept = [g for g in basis.elements if all(all(e == 0 for e in m[:k]) for m, _ in g.terms)]
    return IdealBasis(ideal.ambient, tuple(kept))


def intersect(a: IdealBasis, b: IdealBasis) -> IdealBasis:
    """a ∩ b by the t-trick: eliminate t from t*a + (1-t)*b."""
    if a.ambient != b.ambient:
        raise AmbientMismatch("intersect needs a shared ambient")
    amb = a.ambient
    ext = Ambient(amb.nvars + 1, amb.field)
    shift = [j + 1 for j in range(amb.nvars)]
    t = Polynomial.variable(ext, 0)
    one_minus_t = Polynomial.one(ext) - t
    gens = [t * g.remap_variables(ext, shift) for g in a.generators]
    gens += [one_minus_t * g.remap_variables(ext, shift) for g in b.generators]
    kept = eliminate(IdealBasis(ext, tuple(gens)), 1)
    down = [j - 1 for j in range(1, ext.nvars)]
    down = [0] + down  # position 0 never occurs in kept generators
    projected = [g.remap_variables(amb, down) for g in kept.generators]
    return IdealBasis(amb, tuple(projected))


def divide_with_quotients(p: Polynomial, divisors: Sequence[Polynomial],
                          order: MonomialOrder = GREVLEX):
    """Multivariate division with quotient tracking.

    Returns (quotients, remainder) with p = sum(q_i d_i) + remainder and no
    remainder term divisible by a leading monomial of the divisors.
    """
    amb = p.ambient
    char = amb.field.characteristic
    kid, blk = order.kind_id, order.block
    keyed_divs = [_keyed(d, order) for d in divisors]
    if any(not d for d in keyed_divs):
        raise ZeroDivisionError("zero divisor in division")
    quots, rem = _k.kdivmod(_keyed(p, order), keyed_divs, char, kid, blk)
    qpolys = [Polynomial.from_terms(amb, q.items()) for q in quots]
    return qpolys, _to_poly(amb, rem)


def exact_divide(p: Polynomial, f: Polynomial) -> Polynomial:
    """p / f when f divides p exactly; raises ExactDivisionError otherwise."""
    if p.is_zero:
        return p
    quots, rem = divide_with_quotients(p, [f])
    if not rem.is_zero:
        raise ExactDivisionError("division left a remainder")
    return quots[0]


def colon(ideal: IdealBasis, by: IdealBasis) -> IdealBasis:
    """The ideal quotient (ideal : by) = {g | g*by ⊆ ideal}.

    Computed as the intersection over the generators f of `by` of
    (ideal ∩ (f)) / f; the division is exact because every element of
    ideal ∩ (f) is a multiple of f.  (ideal : (0)) is the unit ideal.
    Output generators are the reduced Groebner basis of the quotient.
    """
    if ideal.ambient != by.ambient:
        raise AmbientMismatch("colon needs a shared ambient")
    amb = ideal.ambient
    if not by.generators:
        return IdealBasis(amb, (Polynomial.one(amb),))
    result: Optional[IdealBasis] = None
    for f in by.generators:
        meet = intersect(ideal, IdealBasis(amb, (f,)))
        quot = IdealBasis(amb, tuple(exact_divide(g, f) for g in meet.generators))
        result = quot if result is None else intersect(result, quot)
    return IdealBasis(amb, buchberger(result).elements)


def unit_certificate(ideal: IdealBasis) -> Optional[tuple]:
    """Cofactors (h_1, ..., h_m) with sum h_i * g_i = 1, or None.

    Traced Buchberger: every basis element carries its representation in
    terms of the input generators; the trace stops as soon as a nonzero
    constant enters the basis.  Cold path, used for smoothness
    certificates only.
    """
    gens = ideal.generators
    if not gens:
        return None
    amb = ideal.ambient
    field = amb.field
    order = GREVLEX

    basis = []  # (Polynomial, rep tuple)
    zero = Polynomial.zero(amb)
    for i, g in enumerate(gens):
        rep = tuple(Polynomial.one(amb) if t == i else zero for t in range(len(gens)))
        basis.append((g, rep))

    def scaled(entry, c):
        p, rep = entry
        return (p.scale(c), tuple(r.scale(c) for r in rep))

    def reduce_traced(p, rep):
        divisors = [e[0] for e in basis]
        quots, rem = divide_with_quotients(p, divisors, order)
        for q, (_, rep_d) in zip(quots, basis):
            if q.is_zero:
                continue
            rep = tuple(r - q * rd for r, rd in zip(rep, rep_d))
        return rem, rep

    def finish(entry):
        p, rep = entry
        c = p.constant_value()
        out = tuple(r.scale(field.inv(c)) for r in rep)
        check = zero
        for h, g in zip(out, gens):
            check = check + h * g
        if check != Polynomial.one(amb):
            raise AssertionError("unit certificate verification failed")
        return out

    basis = [scaled(e, field.inv(e[0].leading(order)[1])) for e in basis]
    for e in basis:
        if e[0].is_constant:
            return finish(e)

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        def pair_deg(ij):
            li = basis[ij[0]][0].leading(order)[0]
            lj = basis[ij[1]][0].leading(order)[0]
            return mono_degree(mono_lcm(li, lj))
        i, j = min(pairs, key=lambda ij: (pair_deg(ij), ij))
        pairs.discard((i, j))
        pi, rep_i = basis[i]
        pj, rep_j = basis[j]
        lm_i, lc_i = pi.leading(order)
        lm_j, lc_j = pj.leading(order)
        lcm = mono_lcm(lm_i, lm_j)
        if all(a + b == m for a, b, m in zip(lm_i, lm_j, lcm)):
            continue
        ui = Polynomial.monomial(amb, tuple(a - b for a, b in zip(lcm, lm_i)), field.inv(lc_i))
        uj = Polynomial.monomial(amb, tuple(a - b for a, b in zip(lcm, lm_j)), field.inv(lc_j))
        s = ui * pi - uj * pj
        rep_s = tuple(ui * a - uj * b for a, b in zip(rep_i, rep_j))
        rem, rep_r = reduce_traced(s, rep_s)
        if rem.is_zero:
            continue
        entry = scaled((rem, rep_r), field.inv(rem.leading(order)[1]))
        if entry[0].is_constant:
            return finish(entry)
        basis.append(entry)
        new = len(basis) - 1
        pairs.update((t, new) for t in range(new))
    return None

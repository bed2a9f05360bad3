"""Square-zero lifting in finite-dimensional nilpotent test algebras.

A test algebra A is a monomial truncation k[e1..em]/M: the user forbids a
finite set of monomials (closed upward under divisibility), every e_i must
have some pure power forbidden, and the surviving monomials form a finite
basis.  Products of basis monomials are again basis monomials or zero, so
the multiplication table is just exponent addition plus a membership test.
Elements are dicts from basis monomials to field coefficients.

A square-zero datum picks basis monomials spanning an ideal Z with Z*Z = 0.
Given a standard-smooth presentation and a homomorphism into A/Z, the
lifting solver deforms chosen representatives a_j by corrections z_j in Z:
relator conditions become the affine system

    f_i(a) + sum_j (df_i/dx_j)(a) * z_j = 0,

the corrections of the trailing variables are free (zero by default), and
the leading c x c coefficient block is inverted by adjugate over A; its
determinant has invertible constant part because the leading minor of the
presentation is a unit.  The returned homomorphism kills every relator
exactly and reproduces the input modulo Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from .poly import FieldSpec, Monomial, Polynomial, mono_degree, mono_divides
from .smoothness import Presentation, is_standard_smooth

Element = Dict[Monomial, object]  # basis monomial -> nonzero coefficient


class LiftPreconditionError(ValueError):
    """lift_hom was called outside its hypotheses."""


class InfiniteBasisError(ValueError):
    """Some generator is not nilpotent, so the truncation is not finite."""


def _basis_sort_key(mono):
    return (mono_degree(mono), tuple(-e for e in mono))


@dataclass(frozen=True)
class NilpotentAlgebra:
    field: FieldSpec
    gen_names: tuple  # tuple[str, ...]
    forbidden: tuple  # tuple[Monomial, ...], generators of the truncation ideal
    basis: tuple  # tuple[Monomial, ...], sorted by (degree, variables)

    @property
    def ngens(self) -> int:
        return len(self.gen_names)

    def in_truncation(self, mono: Monomial) -> bool:
        return any(mono_divides(f, mono) for f in self.forbidden)

    # element constructors -------------------------------------------------

    def zero(self) -> Element:
        return {}

    def one(self) -> Element:
        return {(0,) * self.ngens: self.field.one}

    def scalar(self, value) -> Element:
        c = self.field.coeff(value)
        return {(0,) * self.ngens: c} if c else {}

    def gen(self, i: int) -> Element:
        mono = tuple(1 if t == i else 0 for t in range(self.ngens))
        if self.in_truncation(mono):
            return {}
        return {mono: self.field.one}

    def element(self, pairs) -> Element:
        """Element from (monomial, raw coefficient) pairs, truncating."""
        out: Element = {}
        for mono, raw in pairs:
            mono = tuple(mono)
            if self.in_truncation(mono):
                continue
            c = self.field.coeff(raw)
            acc = self.field.add(out.get(mono, self.field.zero), c)
            if acc:
                out[mono] = acc
            else:
                out.pop(mono, None)
        return out

    # arithmetic ------------------------------------------------------------

    def add(self, a: Element, b: Element) -> Element:
        out = dict(a)
        for m, c in b.items():
            acc = self.field.add(out.get(m, self.field.zero), c)
            if acc:
                out[m] = acc
            else:
                out.pop(m, None)
        return out

    def neg(self, a: Element) -> Element:
        return {m: self.field.neg(c) for m, c in a.items()}

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def scale(self, value, a: Element) -> Element:
        c = self.field.coeff(value)
        if not c:
            return {}
        return {m: self.field.mul(co, c) for m, co in a.items()}

    def mul(self, a: Element, b: Element) -> Element:
        out: Element = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                if self.in_truncation(m):
                    continue
                acc = self.field.add(out.get(m, self.field.zero), self.field.mul(ca, cb))
                if acc:
                    out[m] = acc
                else:
                    out.pop(m, None)
        return out

    def evaluate_poly(self, poly: Polynomial, images: Sequence[Element]) -> Element:
        """Exact substitution of algebra elements for the poly's variables."""
        if poly.ambient.field != self.field:
            raise ValueError("polynomial and algebra live over different fields")
        if poly.ambient.nvars != len(images):
            raise ValueError(f"expected {poly.ambient.nvars} images, got {len(images)}")
        total = self.zero()
        for mono, coeff in poly.terms:
            term = self.scalar(coeff)
            for img, e in zip(images, mono):
                for _ in range(e):
                    if not term:
                        break
                    term = self.mul(term, img)
            total = self.add(total, term)
        return total

    def constant_part(self, a: Element):
        return a.get((0,) * self.ngens, self.field.zero)

    def format_element(self, a: Element, names: Optional[Sequence[str]] = None) -> str:
        """Deterministic display, constant first then ascending degree."""
        if not a:
            return "0"
        names = list(names) if names is not None else list(self.gen_names)
        bits = []
        for mono in sorted(a.keys(), key=_basis_sort_key):
            c = a[mono]
            parts = [f"{n}^{e}" if e > 1 else n for n, e in zip(names, mono) if e]
            body = "*".join(parts)
            if not body:
                bits.append(str(c))
            elif c == self.field.one:
                bits.append(body)
            else:
                bits.append(f"{c}*{body}")
        out = bits[0]
        for b in bits[1:]:
            if b.startswith("-"):
                out += " - " + b[1:]
            else:
                out += " + " + b
        return out


def make_algebra(field: FieldSpec, ngens: int, forbidden,
                 names: Optional[Sequence[str]] = None) -> NilpotentAlgebra:
    """Build the truncated algebra, enumerating its finite monomial basis.

    Every generator must have a pure power among the forbidden monomials,
    otherwise the basis would be infinite.
    """
    forbidden = tuple(tuple(m) for m in forbidden)
    for m in forbidden:
        if len(m) != ngens:
            raise ValueError(f"forbidden monomial {m} has wrong arity")
        if not any(m):
            raise ValueError("forbidding the unit monomial collapses the algebra")
    for i in range(ngens):
        if not any(all(e == 0 for t, e in enumerate(f) if t != i) and f[i] > 0 for f in forbidden):
            raise InfiniteBasisError(f"generator {i} has no forbidden pure power")
    if names is None:
        names = tuple(f"e{i + 1}" for i in range(ngens))
    else:
        names = tuple(names)
        if len(names) != ngens or len(set(names)) != ngens:
            raise ValueError("generator names must be distinct, one per generator")

    def blocked(mono):
        return any(mono_divides(f, mono) for f in forbidden)

    seen = {(0,) * ngens}
    queue = [(0,) * ngens]
    while queue:
        m = queue.pop()
        for i in range(ngens):
            nxt = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nxt in seen or blocked(nxt):
                continue
            seen.add(nxt)
            queue.append(nxt)
    basis = tuple(sorted(seen, key=_basis_sort_key))
    return NilpotentAlgebra(field, names, forbidden, basis)


@dataclass(frozen=True)
class SquareZeroData:
    """An ideal Z of the algebra, spanned by basis monomials, with Z*Z = 0."""

    algebra: NilpotentAlgebra
    z_basis: tuple  # tuple[Monomial, ...]

    def __post_init__(self):
        zs = tuple(tuple(m) for m in self.z_basis)
        basis = set(self.algebra.basis)
        for m in zs:
            if m not in basis:
                raise ValueError(f"{m} is not a basis monomial of the algebra")
        object.__setattr__(self, "z_basis", tuple(sorted(set(zs), key=_basis_sort_key)))

    def contains(self, a: Element) -> bool:
        zset = set(self.z_basis)
        return all(m in zset for m in a)

    def project_out(self, a: Element) -> Element:
        """Canonical representative in A/Z: drop the Z coordinates."""
        zset = set(self.z_basis)
        return {m: c for m, c in a.items() if m not in zset}


def check_square_zero(data: SquareZeroData) -> bool:
    """Ideal closure (A*Z lands in Z or dies) and Z*Z = 0, by table lookup."""
    alg = data.algebra
    zset = set(data.z_basis)
    for z in data.z_basis:
        for b in alg.basis:
            prod = tuple(x + y for x, y in zip(z, b))
            if not alg.in_truncation(prod) and prod not in zset:
                return False
    for z1 in data.z_basis:
        for z2 in data.z_basis:
            prod = tuple(x + y for x, y in zip(z1, z2))
            if not alg.in_truncation(prod):
                return False
    return True


@dataclass(frozen=True)
class AlgebraHom:
    """Variable images in A; `quotient` marks a hom into A/Z instead.

    Images of a quotient hom are canonical representatives (no Z
    coordinates).
    """

    source: Presentation
    algebra: NilpotentAlgebra
    images: tuple  # tuple[Element, ...]
    quotient: Optional[SquareZeroData] = None

    def __post_init__(self):
        if len(self.images) != self.source.n:
            raise ValueError(f"expected {self.source.n} images, got {len(self.images)}")
        if self.quotient is not None:
            if self.quotient.algebra is not self.algebra and self.quotient.algebra != self.algebra:
                raise ValueError("quotient data belongs to a different algebra")
            images = tuple(self.quotient.project_out(img) for img in self.images)
            object.__setattr__(self, "images", images)
        else:
            object.__setattr__(self, "images", tuple(dict(i) for i in self.images))


def verify_hom(pres: Presentation, algebra: NilpotentAlgebra, hom: AlgebraHom) -> bool:
    """True iff every relator evaluates to exactly zero in A."""
    if len(hom.images) != pres.n:
        raise ValueError(f"expected {pres.n} images, got {len(hom.images)}")
    return all(not algebra.evaluate_poly(f, hom.images) for f in pres.relators)


def verify_hom_into_quotient(pres: Presentation, data: SquareZeroData, hom: AlgebraHom) -> bool:
    """True iff every relator evaluates into Z, i.e. to zero in A/Z."""
    alg = data.algebra
    return all(data.contains(alg.evaluate_poly(f, hom.images)) for f in pres.relators)


def invert_unit(algebra: NilpotentAlgebra, a: Element) -> Element:
    """Exact inverse of a unit: constant u times (1 - nilpotent), inverted
    by the finite geometric series."""
    u = algebra.constant_part(a)
    if not u:
        raise ZeroDivisionError("element has zero constant term, not a unit")
    # a = u * (1 - n)
    n = algebra.sub(algebra.one(), algebra.scale(algebra.field.inv(u), a))
    total = algebra.one()
    power = n
    while power:
        total = algebra.add(total, power)
        power = algebra.mul(power, n)
    return algebra.scale(algebra.field.inv(u), total)


def _adjugate_solve(algebra: NilpotentAlgebra, matrix, rhs):
    """Solve M z = rhs over A via adjugate and invert_unit(det M)."""
    size = len(matrix)

    def det(m):
        if not m:
            return algebra.one()
        if len(m) == 1:
            return m[0][0]
        total = algebra.zero()
        for j in range(len(m)):
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            cof = algebra.mul(m[0][j], det(minor))
            if j % 2:
                cof = algebra.neg(cof)
            total = algebra.add(total, cof)
        return total

    d = det(matrix)
    d_inv = invert_unit(algebra, d)
    solution = []
    for i in range(size):
        # adjugate row i = cofactors C_ji
        acc = algebra.zero()
        for j in range(size):
            minor = [
                [matrix[r][c] for c in range(size) if c != i]
                for r in range(size) if r != j
            ]
            cof = det(minor)
            if (i + j) % 2:
                cof = algebra.neg(cof)
            acc = algebra.add(acc, algebra.mul(cof, rhs[j]))
        solution.append(algebra.mul(d_inv, acc))
    return solution


def lift_hom(pres: Presentation, data: SquareZeroData, hom: AlgebraHom,
             free: Optional[Dict[int, Element]] = None) -> AlgebraHom:
    """Lift a homomorphism S -> A/Z through the square-zero surjection.

    `free` optionally assigns corrections in Z to variables of index >= c
    (they default to zero).  The result evaluates every relator to exactly
    zero in A and agrees with the input modulo Z.
    """
    alg = data.algebra
    if hom.quotient is None or hom.quotient != data:
        raise LiftPreconditionError("hom must map into A/Z for the given square-zero data")
    if not check_square_zero(data):
        raise LiftPreconditionError("Z is not a square-zero ideal")
    if not is_standard_smooth(pres):
        raise LiftPreconditionError("presentation is not standard smooth")
    if not verify_hom_into_quotient(pres, data, hom):
        raise LiftPreconditionError("images do not define a homomorphism into A/Z")

    c, n = pres.c, pres.n
    reps = [dict(img) for img in hom.images]
    corrections = [alg.zero() for _ in range(n)]
    if free:
        for j, z in free.items():
            if not c <= j < n:
                raise LiftPreconditionError(f"variable {j} is not free (must have index >= {c})")
            if not data.contains(z):
                raise LiftPreconditionError(f"free correction for variable {j} lies outside Z")
            corrections[j] = dict(z)

    if c:
        jac = [[f.partial_derivative(j) for j in range(n)] for f in pres.relators]
        jac_at = [[alg.evaluate_poly(entry, reps) for entry in row] for row in jac]
        rhs = []
        for i, f in enumerate(pres.relators):
            acc = alg.neg(alg.evaluate_poly(f, reps))
            for j in range(c, n):
                if corrections[j]:
                    acc = alg.sub(acc, alg.mul(jac_at[i][j], corrections[j]))
            rhs.append(acc)
        block = [row[:c] for row in jac_at]
        solved = _adjugate_solve(alg, block, rhs)
        for j, z in enumerate(solved):
            if not data.contains(z):
                raise AssertionError("correction escaped Z; lifting hypotheses violated")
            corrections[j] = z

    images = tuple(alg.add(rep, z) for rep, z in zip(reps, corrections))
    lifted = AlgebraHom(pres, alg, images)
    if not verify_hom(pres, alg, lifted):
        raise AssertionError("lift failed to kill the relators; lifting hypotheses violated")
    return lifted

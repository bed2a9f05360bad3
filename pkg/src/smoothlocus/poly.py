"""Exact multivariate polynomials over QQ and GF(p).

Coefficients are `fractions.Fraction` over the rationals and plain ints in
[0, p) over a prime field; there is no floating point anywhere.  A monomial
is a tuple of exponents, one per variable of the ambient ring.  Polynomials
are immutable and store their terms sorted by descending grevlex, so two
equal polynomials have identical representations and structural equality
is semantic equality.

Variables are anonymous indices here; display names belong to the
presentation layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ._kernel import impl as _k

Coefficient = Union[Fraction, int]
Monomial = tuple  # tuple[int, ...]


class AmbientMismatch(ValueError):
    """Operands live in different polynomial rings."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: QQ (characteristic 0) or GF(p), p prime."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not _is_prime(p):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")

    @property
    def kind(self) -> str:
        return "Rationals" if self.characteristic == 0 else "PrimeField"

    @property
    def zero(self) -> Coefficient:
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self) -> Coefficient:
        return Fraction(1) if self.characteristic == 0 else 1

    def coeff(self, value) -> Coefficient:
        """Normalize an int or Fraction into this field.

        Over GF(p) a fraction a/b maps to a * b^-1 mod p; b divisible by p
        is rejected.
        """
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ValueError(f"denominator {value.denominator} not invertible mod {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def add(self, a, b):
        c = a + b
        return c % self.characteristic if self.characteristic else c

    def sub(self, a, b):
        c = a - b
        return c % self.characteristic if self.characteristic else c

    def mul(self, a, b):
        c = a * b
        return c % self.characteristic if self.characteristic else c

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


@dataclass(frozen=True)
class Ambient:
    """A polynomial ring: number of variables plus coefficient field."""

    nvars: int
    field: FieldSpec


# -- monomial helpers ---------------------------------------------------

def mono_one(nvars: int) -> Monomial:
    return (0,) * nvars


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


@dataclass(frozen=True)
class MonomialOrder:
    """A multiplicative total order on monomials with 1 minimal.

    kind is one of "grevlex", "lex", "block"; a block order compares the
    first `block` variables lexicographically and the remaining ones by
    grevlex, which eliminates the leading block.
    """

    kind: str
    block: int = 0

    _KINDS = {"grevlex": _k.GREVLEX, "lex": _k.LEX, "block": _k.BLOCK}

    @property
    def kind_id(self) -> int:
        return self._KINDS[self.kind]

    def key(self, mono: Monomial):
        return _k.order_key(self.kind_id, self.block, mono)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


# -- polynomials --------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Immutable sparse polynomial; terms sorted by descending grevlex."""

    ambient: Ambient
    terms: tuple  # tuple[tuple[Monomial, Coefficient], ...]

    # construction ------------------------------------------------------

    @classmethod
    def from_terms(cls, ambient: Ambient, pairs: Iterable) -> Polynomial:
        """Build from (monomial, raw coefficient) pairs, normalizing.

        Duplicate monomials are combined, coefficients are mapped into the
        field and zero terms dropped.
        """
        field = ambient.field
        acc: dict = {}
        for mono, raw in pairs:
            mono = tuple(mono)
            if len(mono) != ambient.nvars:
                raise ValueError(f"monomial {mono} has wrong arity for {ambient.nvars} variables")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = field.coeff(raw)
            prev = acc.get(mono)
            acc[mono] = c if prev is None else field.add(prev, c)
        pairs = [(m, c) for m, c in acc.items() if c]
        return cls(ambient, _k.unkeyed(_k.keyed_terms(pairs, _k.GREVLEX, 0)))

    @classmethod
    def zero(cls, ambient: Ambient) -> Polynomial:
        return cls(ambient, ())

    @classmethod
    def constant(cls, ambient: Ambient, value) -> Polynomial:
        return cls.from_terms(ambient, [(mono_one(ambient.nvars), value)])

    @classmethod
    def one(cls, ambient: Ambient) -> Polynomial:
        return cls.constant(ambient, 1)

    @classmethod
    def variable(cls, ambient: Ambient, j: int) -> Polynomial:
        if not 0 <= j < ambient.nvars:
            raise IndexError(f"variable index {j} out of range for {ambient.nvars} variables")
        mono = tuple(1 if i == j else 0 for i in range(ambient.nvars))
        return cls.from_terms(ambient, [(mono, 1)])

    @classmethod
    def monomial(cls, ambient: Ambient, mono: Monomial, coeff=1) -> Polynomial:
        return cls.from_terms(ambient, [(tuple(mono), coeff)])

    # queries -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(mono_degree(m) == 0 for m, _ in self.terms)

    def constant_value(self) -> Coefficient:
        """The constant term's coefficient (zero if absent)."""
        one = mono_one(self.ambient.nvars)
        for m, c in self.terms:
            if m == one:
                return c
        return self.ambient.field.zero

    def total_degree(self) -> int:
        """Max total degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m, _ in self.terms)

    def leading(self, order: MonomialOrder):
        """(monomial, coefficient) maximal under `order`; None if zero."""
        if not self.terms:
            return None
        return max(self.terms, key=lambda t: order.key(t[0]))

    # arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ambient != self.ambient:
                raise AmbientMismatch(f"{other.ambient} vs {self.ambient}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ambient, other)
        return NotImplemented

    def _keyed(self):
        return [(_k.order_key(_k.GREVLEX, 0, m), m, c) for m, c in self.terms]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        char = self.ambient.field.characteristic
        return Polynomial(self.ambient, _k.unkeyed(_k.kadd(self._keyed(), other._keyed(), char)))

    __radd__ = __add__

    def __neg__(self):
        field = self.ambient.field
        return Polynomial(self.ambient, tuple((m, field.neg(c)) for m, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        char = self.ambient.field.characteristic
        prod = _k.kmul(self._keyed(), other._keyed(), char, _k.GREVLEX, 0)
        return Polynomial(self.ambient, _k.unkeyed(prod))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.ambient)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, value) -> Polynomial:
        """Multiply by a field scalar."""
        field = self.ambient.field
        c = field.coeff(value)
        if not c:
            return Polynomial.zero(self.ambient)
        return Polynomial(self.ambient, tuple((m, field.mul(co, c)) for m, co in self.terms))

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        lead = self.leading(order)
        if lead is None:
            return self
        return self.scale(self.ambient.field.inv(lead[1]))

    # calculus and evaluation ----------------------------------------------

    def partial_derivative(self, j: int) -> Polynomial:
        """Formal d/dx_j; over GF(p) the exponent factor is taken mod p."""
        if not 0 <= j < self.ambient.nvars:
            raise IndexError(f"variable index {j} out of range for {self.ambient.nvars} variables")
        field = self.ambient.field
        pairs = []
        for m, c in self.terms:
            e = m[j]
            if e == 0:
                continue
            factor = field.coeff(e)
            new_c = field.mul(c, factor)
            if not new_c:
                continue
            new_m = m[:j] + (e - 1,) + m[j + 1:]
            pairs.append((new_m, new_c))
        return Polynomial.from_terms(self.ambient, pairs)

    def evaluate(self, point: Sequence) -> Coefficient:
        """Exact value at a point with coordinates in the field."""
        if len(point) != self.ambient.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.ambient.nvars}")
        field = self.ambient.field
        p = field.characteristic
        coords = [field.coeff(v) for v in point]
        total = field.zero
        for m, c in self.terms:
            val = c
            for e, x in zip(m, coords):
                if e:
                    val = field.mul(val, pow(x, e, p) if p else pow(x, e))
            total = field.add(total, val)
        return total

    def remap_variables(self, target: Ambient, mapping: Sequence) -> Polynomial:
        """Push into another ring; mapping[old_index] = new index.

        Used for variable permutations and for adjoining fresh variables
        (positions not hit by the mapping get exponent 0).
        """
        if target.field != self.ambient.field:
            raise AmbientMismatch("remap cannot change the coefficient field")
        pairs = []
        for m, c in self.terms:
            new = [0] * target.nvars
            for old_j, e in enumerate(m):
                if e:
                    new[mapping[old_j]] += e
            pairs.append((tuple(new), c))
        return Polynomial.from_terms(target, pairs)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = "+".join(f"{c}:{m}" for m, c in self.terms)
        return f"Poly({bits})"

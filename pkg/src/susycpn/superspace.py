"""Superderivatives and aggregates of graded scalars.

The odd derivative on each superspace coordinate is D = -i d/dth + th d/dx,
acting with left theta-derivatives; applied twice it reproduces -i times the
ordinary derivative, which fixes the sign convention.
"""

from __future__ import annotations

from . import expr
from .expr import Expr, X_MINUS, X_PLUS
from .grassmann import GeneratorSet, SuperScalar

__all__ = [
    "theta_derivative", "partial_derivative", "super_derivative",
    "SuperVector", "SuperMatrix",
]

_I = expr.Const(1j)
_MINUS_I = expr.Const(-1j)


def _axis(pm: int):
    if pm == +1:
        return X_PLUS
    if pm == -1:
        return X_MINUS
    raise ValueError("pm must be +1 or -1")


def theta_derivative(s: SuperScalar, pm: int) -> SuperScalar:
    """Left derivative with respect to th+ (pm=+1) or th- (pm=-1).

    Striking the theta from a monomial picks up a minus sign for every
    generator that precedes it in the canonical order.
    """
    bit = s.gens.THETA_PLUS if pm == +1 else s.gens.THETA_MINUS
    _axis(pm)
    terms = {}
    for mask, coeff in s.terms.items():
        if not mask & bit:
            continue
        preceding = mask & (bit - 1)
        if preceding.bit_count() & 1:
            coeff = expr.neg(coeff)
        terms[mask & ~bit] = coeff
    return SuperScalar(s.gens, terms)


def partial_derivative(s: SuperScalar, pm: int) -> SuperScalar:
    """Coefficientwise derivative with respect to x+ or x-."""
    var = _axis(pm)
    return SuperScalar(s.gens,
                       {m: expr.differentiate(c, var) for m, c in s.terms.items()})


def super_derivative(s: SuperScalar, pm: int) -> SuperScalar:
    """-i d/dth + th d/dx on the chosen superspace direction; flips parity."""
    bit = s.gens.THETA_PLUS if pm == +1 else s.gens.THETA_MINUS
    theta = SuperScalar.monomial(s.gens, bit)
    return theta_derivative(s, pm).scale(_MINUS_I) + theta * partial_derivative(s, pm)


class SuperVector:
    """Column of graded scalars over one generator set."""

    __slots__ = ("gens", "components")

    def __init__(self, components):
        components = list(components)
        if not components:
            raise ValueError("empty vector")
        self.gens = components[0].gens
        for c in components:
            if c.gens is not self.gens:
                raise ValueError("generator-set mismatch")
        self.components = components

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i) -> SuperScalar:
        return self.components[i]

    def __add__(self, other):
        self._same_shape(other)
        return SuperVector([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._same_shape(other)
        return SuperVector([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return SuperVector([-c for c in self.components])

    def _same_shape(self, other):
        if not isinstance(other, SuperVector) or len(other) != len(self):
            raise ValueError("vector shape mismatch")

    def scale_left(self, s: SuperScalar) -> "SuperVector":
        return SuperVector([s * c for c in self.components])

    def scale_right(self, s: SuperScalar) -> "SuperVector":
        return SuperVector([c * s for c in self.components])

    def map(self, fn) -> "SuperVector":
        return SuperVector([fn(c) for c in self.components])

    def dagger(self) -> "SuperVector":
        return SuperVector([c.dagger() for c in self.components])

    def pair(self, other: "SuperVector") -> SuperScalar:
        """sum_i self_i^† other_i  (the hermitian pairing <self, other>)."""
        self._same_shape(other)
        total = SuperScalar.zero(self.gens)
        for a, b in zip(self.components, other.components):
            total = total + a.dagger() * b
        return total

    def norm_squared(self) -> SuperScalar:
        return self.pair(self)

    def outer(self, other: "SuperVector") -> "SuperMatrix":
        """Rank-one matrix self_i other_j^†."""
        self._same_shape(other)
        return SuperMatrix([[a * b.dagger() for b in other.components]
                            for a in self.components])

    def tensor(self, row: "SuperVector") -> "SuperMatrix":
        """Column-times-row product self_i row_j, with no conjugation."""
        self._same_shape(row)
        return SuperMatrix([[a * b for b in row.components]
                            for a in self.components])


class SuperMatrix:
    """Square matrix of graded scalars."""

    __slots__ = ("gens", "entries")

    def __init__(self, entries):
        entries = [list(row) for row in entries]
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise ValueError("matrix must be square")
        self.gens = entries[0][0].gens
        for row in entries:
            for e in row:
                if e.gens is not self.gens:
                    raise ValueError("generator-set mismatch")
        self.entries = entries

    @classmethod
    def identity(cls, n: int, gens: GeneratorSet) -> "SuperMatrix":
        one, zero = SuperScalar.one(gens), SuperScalar.zero(gens)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> SuperScalar:
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other):
        self._same_shape(other)
        return SuperMatrix([[a + b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return SuperMatrix([[a - b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return SuperMatrix([[-e for e in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, SuperMatrix):
            self._same_shape(other)
            n = self.n
            return SuperMatrix([
                [_sum(self.entries[i][k] * other.entries[k][j] for k in range(n))
                 for j in range(n)]
                for i in range(n)])
        raise TypeError("matrix product requires a SuperMatrix")

    def _same_shape(self, other):
        if not isinstance(other, SuperMatrix) or other.n != self.n:
            raise ValueError("matrix shape mismatch")

    def apply(self, v: SuperVector) -> SuperVector:
        if len(v) != self.n:
            raise ValueError("matrix/vector dimension mismatch")
        return SuperVector([
            _sum(self.entries[i][k] * v[k] for k in range(self.n))
            for i in range(self.n)])

    def scale(self, s) -> "SuperMatrix":
        """Left multiplication of every entry by a scalar."""
        if isinstance(s, SuperScalar):
            return SuperMatrix([[s * e for e in row] for row in self.entries])
        return SuperMatrix([[e.scale(s) for e in row] for row in self.entries])

    def map(self, fn) -> "SuperMatrix":
        return SuperMatrix([[fn(e) for e in row] for row in self.entries])

    def dagger(self) -> "SuperMatrix":
        n = self.n
        return SuperMatrix([[self.entries[j][i].dagger() for j in range(n)]
                            for i in range(n)])

    def trace(self) -> SuperScalar:
        return _sum(self.entries[i][i] for i in range(self.n))

    def det(self) -> SuperScalar:
        """Leibniz determinant; intended for the small sizes used here."""
        import itertools

        n = self.n
        total = SuperScalar.zero(self.gens)
        for perm in itertools.permutations(range(n)):
            sign = _perm_sign(perm)
            prod = SuperScalar.one(self.gens)
            for i in range(n):
                prod = prod * self.entries[i][perm[i]]
            total = total + prod.scale(sign)
        return total

    def commutator(self, other: "SuperMatrix") -> "SuperMatrix":
        return self * other - other * self


def _sum(items):
    total = None
    for item in items:
        total = item if total is None else total + item
    return total


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign

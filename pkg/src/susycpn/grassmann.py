"""Finite Grassmann algebra with expression-valued coefficients.

Generators anticommute and square to zero.  The first two generators are the
odd superspace coordinates th+ and th-, which are hermitian partners of each
other; they are followed by pairs (eta_k, etab_k) that carry the fermionic
profile functions.  Elements are sparse maps from generator subsets (bitmasks,
factors in ascending index order) to coefficient expressions.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import expr
from .expr import Expr, ZERO, is_zero

__all__ = ["GeneratorSet", "SuperScalar"]

_MAX_GENERATORS = 16


class GeneratorSet:
    """Ordered anticommuting generators with a pairing involution.

    th+ and th- occupy indices 0 and 1 and are each other's hermitian
    partners; eta_k sits at index 2k+2 with partner etab_k at 2k+3.
    """

    def __init__(self, eta_pairs: int = 2):
        count = 2 + 2 * eta_pairs
        if count > _MAX_GENERATORS:
            raise ValueError(f"at most {( _MAX_GENERATORS - 2) // 2} eta pairs supported")
        self.eta_pairs = eta_pairs
        self.count = count
        self.names = ["th+", "th-"]
        for k in range(eta_pairs):
            self.names += [f"eta{k}", f"etab{k}"]
        self.partner = [i ^ 1 for i in range(count)]

    THETA_PLUS = 1
    THETA_MINUS = 2

    def eta(self, k: int) -> int:
        if not 0 <= k < self.eta_pairs:
            raise ValueError(f"eta index {k} out of range")
        return 1 << (2 * k + 2)

    def etab(self, k: int) -> int:
        if not 0 <= k < self.eta_pairs:
            raise ValueError(f"etab index {k} out of range")
        return 1 << (2 * k + 3)

    def label(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return "*".join(self.names[i] for i in _bits(mask))

    def __repr__(self):
        return f"GeneratorSet(eta_pairs={self.eta_pairs})"


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation of two ascending disjoint monomials."""
    swaps = 0
    for g in _bits(b):
        swaps += (a >> (g + 1)).bit_count()
    return -1 if swaps & 1 else 1


def _sort_sign(seq: list[int]) -> int:
    swaps = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                swaps += 1
    return -1 if swaps & 1 else 1


class SuperScalar:
    """Grassmann-algebra element whose coefficients are expressions."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GeneratorSet, terms: dict[int, Expr]):
        self.gens = gens
        self.terms = {m: c for m, c in terms.items() if not is_zero(c)}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, gens: GeneratorSet) -> "SuperScalar":
        return cls(gens, {})

    @classmethod
    def one(cls, gens: GeneratorSet) -> "SuperScalar":
        return cls(gens, {0: expr.ONE})

    @classmethod
    def from_expr(cls, gens: GeneratorSet, e) -> "SuperScalar":
        if not isinstance(e, Expr):
            e = expr.Const(e)
        return cls(gens, {0: e})

    @classmethod
    def monomial(cls, gens: GeneratorSet, mask: int, coeff=expr.ONE) -> "SuperScalar":
        if not isinstance(coeff, Expr):
            coeff = expr.Const(coeff)
        return cls(gens, {mask: coeff})

    def _coerce(self, other) -> "SuperScalar":
        if isinstance(other, SuperScalar):
            if other.gens is not self.gens:
                raise ValueError("generator-set mismatch")
            return other
        return SuperScalar.from_expr(self.gens, other)

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = expr.add(terms[m], c) if m in terms else c
        return SuperScalar(self.gens, terms)

    __radd__ = __add__

    def __neg__(self):
        return SuperScalar(self.gens, {m: expr.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        """Graded product; the sign of each monomial merge is the parity of
        the permutation interleaving the two ascending factor sequences."""
        other = self._coerce(other)
        buckets: dict[int, list[Expr]] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                piece = expr.mul(ca, cb)
                if is_zero(piece):
                    continue
                if _merge_sign(ma, mb) < 0:
                    piece = expr.neg(piece)
                buckets.setdefault(ma | mb, []).append(piece)
        return SuperScalar(self.gens, {m: expr.add(*ps) for m, ps in buckets.items()})

    def __rmul__(self, other):
        return self._coerce(other) * self

    def scale(self, factor) -> "SuperScalar":
        """Multiply every coefficient by an even (ordinary) expression."""
        if not isinstance(factor, Expr):
            factor = expr.Const(factor)
        return SuperScalar(self.gens, {m: expr.mul(factor, c) for m, c in self.terms.items()})

    # -- involution and splits ----------------------------------------------

    def dagger(self) -> "SuperScalar":
        """Hermitian conjugate: reverse each monomial, map every generator to
        its partner, conjugate the coefficient.  (ab)^† = b^† a^†."""
        partner = self.gens.partner
        terms: dict[int, Expr] = {}
        for mask, coeff in self.terms.items():
            seq = [partner[g] for g in reversed(list(_bits(mask)))]
            new_mask = 0
            for g in seq:
                new_mask |= 1 << g
            c = expr.conjugate(coeff)
            if _sort_sign(seq) < 0:
                c = expr.neg(c)
            terms[new_mask] = expr.add(terms[new_mask], c) if new_mask in terms else c
        return SuperScalar(self.gens, terms)

    def body(self) -> Expr:
        return self.terms.get(0, ZERO)

    def soul(self) -> "SuperScalar":
        return SuperScalar(self.gens, {m: c for m, c in self.terms.items() if m})

    def grade_part(self, parity: int) -> "SuperScalar":
        """Monomials whose generator count has the given parity (0 or 1)."""
        return SuperScalar(
            self.gens,
            {m: c for m, c in self.terms.items() if m.bit_count() & 1 == parity})

    def is_even(self) -> bool:
        return all(m.bit_count() % 2 == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(m.bit_count() % 2 == 1 for m in self.terms)

    # -- nilpotent series ----------------------------------------------------

    def power_even(self, r) -> "SuperScalar":
        """Power of a grade-even element with invertible body.

        Expands body^r * sum_j C(r, j) (soul/body)^j; nilpotency makes the
        series finite.  r = -1 gives the multiplicative inverse.
        """
        if not self.is_even():
            raise ValueError("power_even requires a grade-even element")
        r = r if isinstance(r, Fraction) else Fraction(r)
        b = self.body()
        if is_zero(b):
            raise ValueError("power_even requires an invertible body")
        soul = self.soul()
        result = SuperScalar.from_expr(self.gens, expr.pow_(b, r))
        soul_power = SuperScalar.one(self.gens)
        coeff = Fraction(1)
        max_j = self.gens.count // 2
        for j in range(1, max_j + 1):
            soul_power = soul_power * soul
            if not soul_power.terms:
                break
            coeff = coeff * (r - (j - 1)) / j
            if coeff == 0:
                break
            piece = soul_power.scale(expr.mul(expr.Const(complex(coeff)),
                                              expr.pow_(b, r - j)))
            result = result + piece
        return result

    def inverse(self) -> "SuperScalar":
        return self.power_even(-1)

    def log_even(self) -> "SuperScalar":
        """Logarithm of a grade-even element with invertible body."""
        if not self.is_even():
            raise ValueError("log_even requires a grade-even element")
        b = self.body()
        if is_zero(b):
            raise ValueError("log_even requires an invertible body")
        soul = self.soul()
        result = SuperScalar.from_expr(self.gens, expr.log(b))
        soul_power = SuperScalar.one(self.gens)
        max_j = self.gens.count // 2
        for j in range(1, max_j + 1):
            soul_power = soul_power * soul
            if not soul_power.terms:
                break
            sign = 1.0 if j % 2 == 1 else -1.0
            piece = soul_power.scale(expr.mul(expr.Const(sign / j),
                                              expr.pow_(b, -j)))
            result = result + piece
        return result

    # -- numerics ------------------------------------------------------------

    def prune(self, points, threshold: float = 1e-14) -> "SuperScalar":
        """Drop coefficients smaller than the threshold at every probe point."""
        kept: dict[int, Expr] = {}
        for m, c in self.terms.items():
            values = expr.evaluate_many(c, points)
            if np.max(np.abs(values)) >= threshold:
                kept[m] = c
        return SuperScalar(self.gens, kept)

    def component_maxima(self, points) -> dict[str, float]:
        """Per-monomial maxima of |coefficient| over the sample points."""
        out = {}
        for m in sorted(self.terms):
            values = expr.evaluate_many(self.terms[m], points)
            out[self.gens.label(m)] = float(np.max(np.abs(values)))
        return out

    def __repr__(self):
        if not self.terms:
            return "SuperScalar(0)"
        parts = [f"{self.gens.label(m)}: {expr.describe(c, 40)}"
                 for m, c in sorted(self.terms.items())]
        return "SuperScalar({" + ", ".join(parts) + "})"

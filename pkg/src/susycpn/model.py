"""Supersymmetric CP^(N-1) layer: fields, projector, dynamics, currents.

A holomorphic configuration is specified per component by a bosonic profile
f_i(x+) and an optional fermionic profile carried as eta_k * gamma_i(x+).
From the resulting column w the unit field Phi = |w|^{-1} w, the rank-one
projector P = Phi Phi^†, covariant derivatives, the equation-of-motion
residuals and the conserved currents are assembled exactly; residuals are
then measured at random polarized points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import expr
from .expr import Const, Expr, X_MINUS, uses_variable
from .grassmann import GeneratorSet, SuperScalar
from .superspace import (
    SuperMatrix, SuperVector, partial_derivative, super_derivative,
)

__all__ = [
    "Component", "ModelSpec", "NonHolomorphicError",
    "build_w", "norm_squared", "phi_from_w", "projector",
    "gauge_connection", "covariant_derivative", "covariant_derivative_projected",
    "lagrangian_density", "eom_residual", "eom_residual_w",
    "Currents", "currents", "conservation_identities",
    "FieldComponents", "field_components", "constraint_residuals",
]


class NonHolomorphicError(ValueError):
    """A profile depends on x-, so the configuration is not holomorphic."""


@dataclass(frozen=True)
class Component:
    """One entry of the column w: f + i th+ eta_k gamma."""

    f: Expr
    gamma: Expr | None = None
    eta: int | None = None

    def __post_init__(self):
        if (self.gamma is None) != (self.eta is None):
            raise ValueError("fermionic profile needs both gamma and eta")


@dataclass(frozen=True)
class ModelSpec:
    """User-level description of a configuration plus sampling parameters."""

    n: int
    components: tuple[Component, ...]
    points: int = 20
    seed: int = 12345
    allow_nonholomorphic: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if len(self.components) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(self.components)}")

    @classmethod
    def build(cls, n: int, profiles, points: int = 20, seed: int = 12345,
              allow_nonholomorphic: bool = False) -> "ModelSpec":
        """Profiles as strings or Exprs: 'f' or ('f', 'gamma', eta_index)."""
        comps = []
        for prof in profiles:
            if isinstance(prof, (str, Expr)):
                comps.append(Component(_as_expr(prof, allow_nonholomorphic)))
            else:
                f, gamma, eta = prof
                comps.append(Component(_as_expr(f, allow_nonholomorphic),
                                       _as_expr(gamma, allow_nonholomorphic),
                                       int(eta)))
        return cls(n, tuple(comps), points, seed, allow_nonholomorphic)

    @property
    def eta_pairs(self) -> int:
        used = [c.eta for c in self.components if c.eta is not None]
        return (max(used) + 1) if used else 1

    def generator_set(self) -> GeneratorSet:
        return GeneratorSet(eta_pairs=self.eta_pairs)

    def is_holomorphic(self) -> bool:
        for c in self.components:
            if uses_variable(c.f, X_MINUS):
                return False
            if c.gamma is not None and uses_variable(c.gamma, X_MINUS):
                return False
        return True

    def guard_exprs(self) -> list[Expr]:
        """Divisor bodies of the profiles plus the body of |w|^2."""
        guards = []
        norm_body = expr.ZERO
        for c in self.components:
            guards.extend(expr.collect_divisors(c.f))
            if c.gamma is not None:
                guards.extend(expr.collect_divisors(c.gamma))
            norm_body = expr.add(norm_body, expr.mul(expr.conjugate(c.f), c.f))
        guards.append(norm_body)
        return guards


def _as_expr(value, polarized: bool) -> Expr:
    if isinstance(value, Expr):
        return value
    return expr.parse(value, polarized=polarized)


def build_w(spec: ModelSpec, gens: GeneratorSet | None = None) -> SuperVector:
    """Column w with components f_i + i th+ eta_{k_i} gamma_i."""
    if not spec.allow_nonholomorphic and not spec.is_holomorphic():
        raise NonHolomorphicError("profiles must not depend on x-")
    gens = gens or spec.generator_set()
    comps = []
    for c in spec.components:
        s = SuperScalar.from_expr(gens, c.f)
        if c.gamma is not None:
            mask = gens.THETA_PLUS | gens.eta(c.eta)
            s = s + SuperScalar.monomial(gens, mask, expr.mul(Const(1j), c.gamma))
        comps.append(s)
    return SuperVector(comps)


def norm_squared(w: SuperVector) -> SuperScalar:
    return w.norm_squared()


def phi_from_w(w: SuperVector) -> SuperVector:
    """Unit column |w|^{-1} w; satisfies Phi^† Phi = 1 identically."""
    from fractions import Fraction

    inv_norm = norm_squared(w).power_even(Fraction(-1, 2))
    return w.scale_left(inv_norm)


def projector(phi: SuperVector) -> SuperMatrix:
    """Rank-one hermitian idempotent P = Phi Phi^†."""
    return phi.outer(phi)


def gauge_connection(phi: SuperVector, pm: int) -> SuperScalar:
    """Composite connection A = Phi^† (D Phi); an odd scalar."""
    return phi.pair(phi.map(lambda c: super_derivative(c, pm)))


def covariant_derivative(lam: SuperVector, phi: SuperVector, pm: int,
                         connection: SuperScalar | None = None) -> SuperVector:
    """D lam - lam A, the covariant derivative of any homogeneous column."""
    a = connection if connection is not None else gauge_connection(phi, pm)
    return SuperVector([
        super_derivative(c, pm) - c * a for c in lam.components])


def covariant_derivative_projected(phi: SuperVector, pm: int,
                                   p: SuperMatrix | None = None) -> SuperVector:
    """Equivalent projected form (I - P) D Phi of the covariant derivative."""
    p = p if p is not None else projector(phi)
    eye = SuperMatrix.identity(p.n, phi.gens)
    return (eye - p).apply(phi.map(lambda c: super_derivative(c, pm)))


def lagrangian_density(phi: SuperVector) -> SuperScalar:
    """2(|D+ Phi|^2 - |D- Phi|^2) with |V|^2 = V^† V."""
    dp = covariant_derivative(phi, phi, +1)
    dm = covariant_derivative(phi, phi, -1)
    return (dp.norm_squared() - dm.norm_squared()).scale(2)


def eom_residual(phi: SuperVector) -> SuperVector:
    """Left side of D+ D- Phi + |D- Phi|^2 Phi = 0."""
    dm = covariant_derivative(phi, phi, -1)
    dpdm = covariant_derivative(dm, phi, +1)
    return dpdm + phi.scale_left(dm.norm_squared())


def eom_residual_w(w: SuperVector) -> SuperVector:
    """Equation of motion in terms of the unnormalized column w.

    Factor order follows the defining expression; the odd scalar factors
    w^† D w do not commute with the odd columns they multiply.
    """
    inv = norm_squared(w).power_even(-1)
    inv2 = inv * inv
    dp = w.map(lambda c: super_derivative(c, +1))
    dm = w.map(lambda c: super_derivative(c, -1))
    dpdm = dm.map(lambda c: super_derivative(c, +1))
    s_p = w.pair(dp)       # w^† D+ w
    s_m = w.pair(dm)       # w^† D- w
    s_pm = w.pair(dpdm)    # w^† D+ D- w
    term2 = dp.scale_right(s_m * inv)
    term3 = dm.scale_left(s_p * inv)
    term4 = w.scale_left(s_pm * inv)
    term5 = w.scale_left((s_p * s_m * inv2).scale(2))
    return dpdm - term2 - term3 - term4 + term5


@dataclass
class Currents:
    """K = [D- P, P] and its pieces; k_dagger is the literal hermitian
    conjugate of K (the commutator reverses under dagger, so it equals
    -[D+ P, P])."""

    k: SuperMatrix
    k_dagger: SuperMatrix
    m: SuperMatrix
    l: SuperMatrix
    projector: SuperMatrix


def currents(phi: SuperVector, w: SuperVector) -> Currents:
    p = projector(phi)
    dp_m = p.map(lambda e: super_derivative(e, -1))
    k = dp_m.commutator(p)
    eye = SuperMatrix.identity(p.n, phi.gens)
    inv = norm_squared(w).power_even(-1)
    dm_w = w.map(lambda c: super_derivative(c, -1))
    dm_wbar = w.dagger().map(lambda c: super_derivative(c, -1))
    m = ((eye - p) * dm_w.tensor(w.dagger())).scale(inv)
    l = -(w.tensor(dm_wbar) * (eye - p)).scale(inv)
    return Currents(k=k, k_dagger=k.dagger(), m=m, l=l, projector=p)


def conservation_identities(cur: Currents) -> dict[str, SuperMatrix]:
    """Residual matrices of the conservation structure.

    super_law          D+ K + D- K^† (the compatibility content of the flow)
    current_sum        K - M - L
    current_difference M - L - D- P
    bold_build         -i D- L - d- P   (the even current equals d- P ...)
    bold_build_dagger  -i D+ L^† - d+ P (... and its conjugate equals d+ P)
    bold_closedness    d+ (d- P) - d- (d+ P), the closedness of the one-form
                       integrating to the surface
    commutator_law     d+ [d- P, P] + d- [d+ P, P], the ordinary-derivative
                       conservation law of the commutator currents
    """
    p = cur.projector
    sd = super_derivative

    def smap(mat, pm):
        return mat.map(lambda e: sd(e, pm))

    def dmap(mat, pm):
        return mat.map(lambda e: partial_derivative(e, pm))

    super_law = smap(cur.k, +1) + smap(cur.k_dagger, -1)
    current_sum = cur.k - cur.m - cur.l
    current_difference = cur.m - cur.l - smap(p, -1)

    bold = smap(cur.l, -1).scale(Const(-1j))
    bold_build = bold - dmap(p, -1)
    bold_dagger = smap(cur.l.dagger(), +1).scale(Const(-1j))
    bold_build_dagger = bold_dagger - dmap(p, +1)
    bold_closedness = dmap(dmap(p, -1), +1) - dmap(dmap(p, +1), -1)

    kb_m = dmap(p, -1).commutator(p)
    kb_p = dmap(p, +1).commutator(p)
    commutator_law = dmap(kb_m, +1) + dmap(kb_p, -1)

    return {
        "super_law": super_law,
        "current_sum": current_sum,
        "current_difference": current_difference,
        "bold_build": bold_build,
        "bold_build_dagger": bold_build_dagger,
        "bold_closedness": bold_closedness,
        "commutator_law": commutator_law,
    }


@dataclass
class FieldComponents:
    """Theta expansion of a column: Phi = z + i th+ chi_p + i th- chi_m
    - (1/2) th+ th- f_aux.  Components are columns over the eta sector."""

    z: SuperVector
    chi_plus: SuperVector
    chi_minus: SuperVector
    f_aux: SuperVector


def _theta_split(s: SuperScalar):
    gens = s.gens
    tp, tm = gens.THETA_PLUS, gens.THETA_MINUS
    parts = {0: {}, 1: {}, 2: {}, 3: {}}
    for mask, coeff in s.terms.items():
        key = (1 if mask & tp else 0) | (2 if mask & tm else 0)
        parts[key][mask & ~(tp | tm)] = coeff
    return tuple(SuperScalar(gens, parts[k]) for k in range(4))


def field_components(phi: SuperVector) -> FieldComponents:
    gens = phi.gens
    minus_i = Const(-1j)
    z, bp, bm, d = [], [], [], []
    for c in phi.components:
        base, theta_p, theta_m, theta_pm = _theta_split(c)
        z.append(base)
        bp.append(theta_p.scale(minus_i))
        bm.append(theta_m.scale(minus_i))
        d.append(theta_pm.scale(-2))
    return FieldComponents(SuperVector(z), SuperVector(bp),
                           SuperVector(bm), SuperVector(d))


def constraint_residuals(phi: SuperVector) -> dict[str, SuperScalar]:
    """Constraints on the theta components implied by Phi^† Phi = 1.

    The theta-linear components mix the two chiralities: the th+ component
    of the unit-norm identity is z^† chi_p + chi_m^† z = 0 and the th-
    component is its conjugate.
    """
    fc = field_components(phi)
    one = SuperScalar.one(phi.gens)
    cond_z = fc.z.pair(fc.z) - one
    cond_chi_plus = fc.z.pair(fc.chi_plus) + fc.chi_minus.pair(fc.z)
    cond_chi_minus = fc.z.pair(fc.chi_minus) + fc.chi_plus.pair(fc.z)
    cond_f = fc.z.pair(fc.f_aux) + fc.f_aux.pair(fc.z) \
        - (fc.chi_minus.pair(fc.chi_minus) - fc.chi_plus.pair(fc.chi_plus)).scale(2)
    return {
        "unit_norm": cond_z,
        "chi_plus": cond_chi_plus,
        "chi_minus": cond_chi_minus,
        "auxiliary": cond_f,
    }

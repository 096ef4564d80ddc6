"""Surfaces induced by the projector: coordinate vectors, metric, curvature.

The N^2-1 real surface coordinates are built from the projector entries:
every off-diagonal pair (i<j) contributes P_ij + P_ji and i(P_ij - P_ji),
and the diagonal contributes N-1 components chosen so that the whole vector
satisfies sum_k dX_k dX_k = 2 tr(dP dP).  With that normalization the induced
metric g_{+-} = tr(d+P d-P) has vanishing g_{++}, g_{--} for holomorphic
configurations, and the unit-sphere picture emerges for N = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import cos, sin, sqrt

from . import expr
from .expr import Const, Expr
from .grassmann import GeneratorSet, SuperScalar
from .superspace import SuperMatrix, SuperVector, partial_derivative

__all__ = [
    "SurfaceVector", "MetricReport",
    "x_vector_cp1", "x_vector_cp2", "x_vector_diagonal_basis", "x_vector",
    "cp2_family_coefficients", "pauli_route_components",
    "sphere_residual", "diagonal_condition_residual",
    "metric", "metric_from_profile", "metric_cp2_closed_form", "curvature",
    "cp1_reference_components",
]

PAULI = (
    ((0, 1), (1, 0)),
    ((0, -1j), (1j, 0)),
    ((1, 0), (0, -1)),
)


@dataclass
class SurfaceVector:
    """Hermitian surface coordinates plus a record of how they were built."""

    components: list[SuperScalar]
    scheme: str
    parameters: dict

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i) -> SuperScalar:
        return self.components[i]


def _offdiagonal_components(p: SuperMatrix) -> list[SuperScalar]:
    comps = []
    for i in range(p.n):
        for j in range(i + 1, p.n):
            comps.append(p[i, j] + p[j, i])
            comps.append((p[i, j] - p[j, i]).scale(Const(1j)))
    return comps


def x_vector_cp1(p: SuperMatrix) -> SurfaceVector:
    """Three components P12+P21, i(P12-P21), P11-P22 for N = 2."""
    if p.n != 2:
        raise ValueError("x_vector_cp1 requires a 2x2 projector")
    comps = _offdiagonal_components(p) + [p[0, 0] - p[1, 1]]
    return SurfaceVector(comps, "pauli", {})


def pauli_route_components(phi: SuperVector) -> list[SuperScalar]:
    """Alternative construction X_i = Phi^† sigma_i Phi."""
    if len(phi) != 2:
        raise ValueError("requires a 2-component column")
    gens = phi.gens
    out = []
    for sigma in PAULI:
        acc = SuperScalar.zero(gens)
        for i in range(2):
            for j in range(2):
                if sigma[i][j] == 0:
                    continue
                acc = acc + (phi[i].dagger() * phi[j]).scale(Const(sigma[i][j]))
        out.append(acc)
    return out


def cp2_family_coefficients(alpha: float, branch: int = +1) -> tuple[float, float, float, float]:
    """One-parameter family (a, b, c, d) of diagonal resolutions for N = 3.

    P11 = 1/3 + a X1 + b X2 and P22 = 1/3 + c X1 + d X2; the branch picks the
    sign pair in c and d.  As printed these satisfy the diagonal matching
    condition with constant 1/2; the builder rescales them by 1/2 so the
    constant becomes 2 and the trace form of the metric is reproduced (see
    x_vector_cp2).
    """
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    a = 2 / sqrt(3) * cos(alpha)
    b = 2 / sqrt(3) * sin(alpha)
    c = -branch * sin(alpha) - cos(alpha) / sqrt(3)
    d = -sin(alpha) / sqrt(3) + branch * cos(alpha)
    return a, b, c, d


def x_vector_cp2(p: SuperMatrix, alpha: float, branch: int = +1) -> SurfaceVector:
    """Eight components for N = 3: six off-diagonal plus the family pair.

    The family coefficients are used at half their printed size: the halved
    matrix [[a,b],[c,d]] is the unique rescaling for which the diagonal
    components obey sum dX dX = 2 sum dP_ii dP_ii, matching the off-diagonal
    normalization.  At alpha = pi/6 on the upper branch the halved family
    reproduces the traceless diagonal basis diag(1,-1,0), diag(1,1,-2)/sqrt(3).
    """
    if p.n != 3:
        raise ValueError("x_vector_cp2 requires a 3x3 projector")
    a, b, c, d = cp2_family_coefficients(alpha, branch)
    ah, bh, ch, dh = a / 2, b / 2, c / 2, d / 2
    det = ah * dh - bh * ch
    if abs(det) < 1e-12:
        raise ValueError("singular family coefficient matrix")
    third = SuperScalar.from_expr(p.gens, Const(1 / 3))
    p11 = p[0, 0] - third
    p22 = p[1, 1] - third
    x1 = p11.scale(Const(dh / det)) - p22.scale(Const(bh / det))
    x2 = p22.scale(Const(ah / det)) - p11.scale(Const(ch / det))
    comps = _offdiagonal_components(p) + [x1, x2]
    return SurfaceVector(comps, "cp2_family", {
        "alpha": alpha, "branch": branch,
        "printed": (a, b, c, d), "effective": (ah, bh, ch, dh)})


def _diagonal_basis(n: int) -> list[list[float]]:
    """Diagonals of the standard traceless orthogonal basis, tr(L_m L_n) = 2."""
    basis = []
    for m in range(1, n):
        scale = sqrt(2.0 / (m * (m + 1)))
        diag = [scale] * m + [-m * scale] + [0.0] * (n - m - 1)
        basis.append(diag)
    return basis


def x_vector_diagonal_basis(p: SuperMatrix) -> SurfaceVector:
    """General-N scheme: diagonal components tr(P L_m) over the standard
    traceless orthogonal diagonal matrices."""
    comps = _offdiagonal_components(p)
    for diag in _diagonal_basis(p.n):
        acc = SuperScalar.zero(p.gens)
        for i, weight in enumerate(diag):
            if weight:
                acc = acc + p[i, i].scale(Const(weight))
        comps.append(acc)
    return SurfaceVector(comps, "diagonal_basis", {})


def x_vector(p: SuperMatrix, scheme: str = "auto", alpha: float = 0.0,
             branch: int = +1) -> SurfaceVector:
    if scheme == "auto":
        scheme = "pauli" if p.n == 2 else ("cp2_family" if p.n == 3 else "diagonal_basis")
    if scheme == "pauli":
        return x_vector_cp1(p)
    if scheme == "cp2_family":
        return x_vector_cp2(p, alpha, branch)
    if scheme == "diagonal_basis":
        return x_vector_diagonal_basis(p)
    raise ValueError(f"unknown scheme {scheme!r}")


def sphere_residual(x: SurfaceVector) -> SuperScalar:
    """X1^2 + X2^2 + X3^2 - 1; vanishes identically for N = 2."""
    if len(x.components) != 3:
        raise ValueError("sphere residual requires three components")
    gens = x.components[0].gens
    acc = SuperScalar.zero(gens)
    for c in x.components:
        acc = acc + c * c
    return acc - SuperScalar.one(gens)


def diagonal_condition_residual(x: SurfaceVector, p: SuperMatrix) -> SuperScalar:
    """Diagonal-scheme condition sum dX_i dX_i - 2 sum dP_ii dP_ii over the
    diagonal-derived components."""
    n = p.n
    diag_components = x.components[n * (n - 1):]
    acc = SuperScalar.zero(p.gens)
    for c in diag_components:
        acc = acc + partial_derivative(c, +1) * partial_derivative(c, -1)
    for i in range(n):
        acc = acc - (partial_derivative(p[i, i], +1)
                     * partial_derivative(p[i, i], -1)).scale(2)
    return acc


# ---------------------------------------------------------------------------
# Induced metric.

@dataclass
class MetricReport:
    """The induced metric in the holomorphic basis.

    g_pm is tr(d+P d-P); the same quantity rebuilt from the surface vector
    (divided by the scheme constant 2) and from the covariant form
    d+Phi^† (I-P) d-Phi + d-Phi^† (I-P) d+Phi is kept for cross-checks.
    """

    g_pm: SuperScalar
    g_pp: SuperScalar
    g_mm: SuperScalar
    g_pm_from_x: SuperScalar | None
    g_pm_covariant: SuperScalar
    scheme_constant: float = 2.0

    def component_breakdown(self, points):
        return self.g_pm.component_maxima(points)


def _quadratic_form(row: SuperVector, m: SuperMatrix, col: SuperVector) -> SuperScalar:
    acc = SuperScalar.zero(m.gens)
    for i in range(m.n):
        for j in range(m.n):
            acc = acc + row[i] * m[i, j] * col[j]
    return acc


def metric(phi: SuperVector, p: SuperMatrix | None = None,
           x: SurfaceVector | None = None) -> MetricReport:
    if p is None:
        from .model import projector

        p = projector(phi)
    dp = p.map(lambda e: partial_derivative(e, +1))
    dm = p.map(lambda e: partial_derivative(e, -1))
    g_pm = (dp * dm).trace()
    g_pp = (dp * dp).trace()
    g_mm = (dm * dm).trace()

    g_from_x = None
    if x is not None:
        acc = SuperScalar.zero(p.gens)
        for c in x.components:
            acc = acc + partial_derivative(c, +1) * partial_derivative(c, -1)
        g_from_x = acc.scale(0.5)

    eye = SuperMatrix.identity(p.n, p.gens)
    ip = eye - p
    dphi_p = phi.map(lambda c: partial_derivative(c, +1))
    dphi_m = phi.map(lambda c: partial_derivative(c, -1))
    dphi_p_bar = phi.dagger().map(lambda c: partial_derivative(c, +1))
    dphi_m_bar = phi.dagger().map(lambda c: partial_derivative(c, -1))
    g_cov = _quadratic_form(dphi_p_bar, ip, dphi_m) \
        + _quadratic_form(dphi_m_bar, ip, dphi_p)

    return MetricReport(g_pm=g_pm, g_pp=g_pp, g_mm=g_mm,
                        g_pm_from_x=g_from_x, g_pm_covariant=g_cov)


def metric_from_profile(w_field: SuperScalar) -> SuperScalar:
    """Closed form d+W d-Wbar / (1+|W|^2)^2 for the gauge column (1, W)."""
    wbar = w_field.dagger()
    denom = SuperScalar.one(w_field.gens) + wbar * w_field
    return (partial_derivative(w_field, +1) * partial_derivative(wbar, -1)) \
        * denom.power_even(-2)


def metric_cp2_closed_form(w1: SuperScalar, w2: SuperScalar) -> SuperScalar:
    """Closed form for the gauge column (1, W1, W2):
    (|d+W1|^2 + |d+W2|^2 + |W2 d+W1 - W1 d+W2|^2) / (1+|W1|^2+|W2|^2)^2."""
    gens = w1.gens

    def abs2(s: SuperScalar) -> SuperScalar:
        return s * s.dagger()

    d1 = partial_derivative(w1, +1)
    d2 = partial_derivative(w2, +1)
    cross = w2 * d1 - w1 * d2
    numerator = abs2(d1) + abs2(d2) + abs2(cross)
    denom = SuperScalar.one(gens) + abs2(w1) + abs2(w2)
    return numerator * denom.power_even(-2)


def curvature(g_pm: SuperScalar | MetricReport) -> SuperScalar:
    """Gaussian curvature -(2/F) d+d- ln F of the induced metric.

    F is 2 g_{+-}: the normalization under which the N = 2 surface, a unit
    sphere whose coordinates are full superfields, comes out at the constant
    reference value 2 with vanishing soul.
    """
    if isinstance(g_pm, MetricReport):
        g_pm = g_pm.g_pm
    f = g_pm.scale(2)
    log_f = f.log_even()
    ddlog = partial_derivative(partial_derivative(log_f, -1), +1)
    return (f.power_even(-1) * ddlog).scale(-2)


# ---------------------------------------------------------------------------
# Reference expansion of the N = 2 surface coordinates.

def cp1_reference_components(gens: GeneratorSet, f: Expr, gamma: Expr | None,
                             eta_index: int = 0) -> list[SuperScalar]:
    """The three surface components of the gauge column (1, f + i th+ eta g)
    assembled term by term from their explicit theta expansion:

      X1 = (f+fb)/D + i th- gb (1-f^2)/D^2 + i th+ g (1-fb^2)/D^2
           + 2 th+ th- gb g (f+fb)/D^3
      X2 = i(fb-f)/D - th- gb (1+f^2)/D^2 + th+ g (fb^2+1)/D^2
           + 2i th+ th- gb g (fb-f)/D^3
      X3 = (1-f fb)/D - 2i th- gb f/D^2 - 2i th+ g fb/D^2
           + 2 th+ th- gb g (1-f fb)/D^3

    with D = 1 + f fb, g = eta gamma and gb its conjugate.  Used as an
    independent oracle against the projector-derived construction.
    """
    fb = expr.conjugate(f)
    d = expr.add(expr.ONE, expr.mul(f, fb))
    inv = lambda k: expr.pow_(d, -k)
    one = SuperScalar.from_expr

    x1 = one(gens, expr.mul(expr.add(f, fb), inv(1)))
    x2 = one(gens, expr.mul(Const(1j), expr.sub(fb, f), inv(1)))
    x3 = one(gens, expr.mul(expr.sub(expr.ONE, expr.mul(f, fb)), inv(1)))
    if gamma is None:
        return [x1, x2, x3]

    mul = expr.mul
    gam = gamma
    gam_b = expr.conjugate(gamma)
    tp = gens.THETA_PLUS | gens.eta(eta_index)
    tm = gens.THETA_MINUS | gens.etab(eta_index)
    # th+ th- eta etab in canonical order; gb g = -gamma_b gamma eta etab
    top = gens.THETA_PLUS | gens.THETA_MINUS | gens.eta(eta_index) | gens.etab(eta_index)
    mono = SuperScalar.monomial

    x1 = x1 \
        + mono(gens, tm, mul(Const(1j), gam_b, expr.sub(expr.ONE, mul(f, f)), inv(2))) \
        + mono(gens, tp, mul(Const(1j), gam, expr.sub(expr.ONE, mul(fb, fb)), inv(2))) \
        + mono(gens, top, mul(Const(-2), gam_b, gam, expr.add(f, fb), inv(3)))
    # the th+ sign is pinned by hermiticity: X2 = i(P12 - P21) equals its
    # own conjugate, so the th+ and th- pieces are dagger partners
    x2 = x2 \
        + mono(gens, tm, mul(Const(-1), gam_b, expr.add(expr.ONE, mul(f, f)), inv(2))) \
        + mono(gens, tp, mul(Const(1), gam, expr.add(mul(fb, fb), expr.ONE), inv(2))) \
        + mono(gens, top, mul(Const(-2j), gam_b, gam, expr.sub(fb, f), inv(3)))
    x3 = x3 \
        + mono(gens, tm, mul(Const(-2j), gam_b, f, inv(2))) \
        + mono(gens, tp, mul(Const(-2j), gam, fb, inv(2))) \
        + mono(gens, top, mul(Const(-2), gam_b, gam,
                              expr.sub(expr.ONE, mul(f, fb)), inv(3)))
    return [x1, x2, x3]

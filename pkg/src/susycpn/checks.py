"""Residual evaluation and guarded random sampling for identity checks.

Identities between graded scalars are tested by evaluating every monomial
coefficient at random polarized points and recording the largest magnitude.
Sample points are redrawn while any divisor body is smaller than 1e-4 in
magnitude, which keeps rational inputs away from their poles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import expr
from .expr import EvalPoint, Expr, SingularPointError
from .grassmann import SuperScalar
from .superspace import SuperMatrix, SuperVector

__all__ = [
    "CheckResult", "draw_points", "component_maxima", "check_zero",
    "GuardError", "DIVISOR_CLEARANCE",
]

DIVISOR_CLEARANCE = 1e-4
_BRANCH_CLEARANCE = 1e-2


class GuardError(RuntimeError):
    """No sample point cleared the divisor guards."""


@dataclass
class CheckResult:
    """Outcome of one identity check: per-component residual maxima."""

    name: str
    max_residuals: dict[str, float]
    tolerance: float
    passed: bool
    note: str = ""

    @property
    def worst(self) -> float:
        return max(self.max_residuals.values(), default=0.0)

    def as_dict(self) -> dict:
        out = {"name": self.name,
               "max_residuals": dict(self.max_residuals),
               "tolerance": self.tolerance,
               "pass": self.passed}
        if self.note:
            out["note"] = self.note
        return out

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max residual {self.worst:.3e} (tol {self.tolerance:.1e})"


def draw_points(n: int, seed: int, guards: tuple = (), branch_guards: tuple = (),
                real_slice: bool = False, max_tries: int | None = None,
                min_clearance: float = DIVISOR_CLEARANCE) -> list[EvalPoint]:
    """Random points in the unit bidisc clearing all divisor guards.

    guards: expressions whose values act as divisor bodies downstream; a point
    is accepted only if each evaluates with magnitude (and internal divisor
    clearance) at least min_clearance.  The default floor avoids outright
    poles; checks asserting tolerances near machine precision pass a larger
    floor, since round-off grows with inverse powers of the divisor bodies.
    branch_guards: expressions that feed half-integer powers; their values
    must stay away from the branch cut on the negative real axis.
    """
    rng = random.Random(seed)
    max_tries = max_tries if max_tries is not None else 400 * max(n, 1)
    points: list[EvalPoint] = []
    for _ in range(max_tries):
        if len(points) == n:
            break
        p = expr.random_point(rng, real_slice=real_slice)
        if _admissible(p, guards, branch_guards, min_clearance):
            points.append(p)
    if len(points) < n:
        raise GuardError(
            f"could only draw {len(points)}/{n} points clearing the divisor guards")
    return points


def _admissible(p: EvalPoint, guards, branch_guards, min_clearance) -> bool:
    try:
        for g in guards:
            if expr.clearance(g, p) < min_clearance:
                return False
        for g in branch_guards:
            v = expr.evaluate(g, p)
            if v.real < _BRANCH_CLEARANCE and abs(v.imag) < _BRANCH_CLEARANCE:
                return False
    except SingularPointError:
        return False
    return True


def component_maxima(obj, points) -> dict[str, float]:
    """Largest |coefficient| per Grassmann component over the points.

    Accepts a SuperScalar, SuperVector, SuperMatrix, bare Expr, or a plain
    bool (structural assertions enter reports as residual 0.0 or 1.0).
    """
    import numpy as np

    if isinstance(obj, bool):
        return {"structural": 0.0 if obj else 1.0}
    if isinstance(obj, Expr):
        values = expr.evaluate_many(obj, points)
        return {"1": float(np.max(np.abs(values)))}
    if isinstance(obj, SuperScalar):
        return obj.component_maxima(points)
    if isinstance(obj, SuperVector):
        parts = [component_maxima(c, points) for c in obj.components]
    elif isinstance(obj, SuperMatrix):
        parts = [component_maxima(e, points) for row in obj.entries for e in row]
    else:
        raise TypeError(f"cannot evaluate residuals of {type(obj).__name__}")
    merged: dict[str, float] = {}
    for part in parts:
        for label, value in part.items():
            merged[label] = max(merged.get(label, 0.0), value)
    return merged


def check_zero(name: str, obj, points, tolerance: float, note: str = "") -> CheckResult:
    """Assert that an identity residual vanishes componentwise."""
    maxima = component_maxima(obj, points)
    passed = all(v <= tolerance for v in maxima.values())
    return CheckResult(name, maxima, tolerance, passed, note)

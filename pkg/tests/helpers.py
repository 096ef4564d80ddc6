"""Shared helpers for randomized identity tests."""

import random

import numpy as np

from susycpn.expr import Const, X_MINUS, X_PLUS, add, evaluate_many, mul, random_point
from susycpn.grassmann import GeneratorSet, SuperScalar


def sample_points(n=20, seed=20260810, real_slice=False):
    rng = random.Random(seed)
    return [random_point(rng, real_slice=real_slice) for _ in range(n)]


def random_coefficient(rng):
    """A small random polynomial in both coordinates."""
    def c():
        return Const(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))

    return add(c(), mul(c(), X_PLUS), mul(c(), X_MINUS), mul(c(), X_PLUS, X_MINUS))


def random_superscalar(gens, rng, parity=None, nterms=4):
    """Random sparse element; parity 0/1 restricts to even/odd monomials."""
    masks = [m for m in range(1 << gens.count)
             if parity is None or m.bit_count() % 2 == parity]
    chosen = rng.sample(masks, min(nterms, len(masks)))
    return SuperScalar(gens, {m: random_coefficient(rng) for m in chosen})


def max_residual(s, points):
    """Largest |coefficient| of a SuperScalar over the sample points."""
    worst = 0.0
    for c in s.terms.values():
        values = evaluate_many(c, points)
        worst = max(worst, float(np.max(np.abs(values))))
    return worst


def assert_superscalar_zero(s, points, tol=1e-10):
    residual = max_residual(s, points)
    assert residual < tol, f"residual {residual:.3e} exceeds {tol:.1e}: {s!r}"


def assert_superscalar_equal(a, b, points, tol=1e-10):
    assert_superscalar_zero(a - b, points, tol)

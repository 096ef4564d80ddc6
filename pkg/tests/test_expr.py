"""Expression engine: parsing, differentiation, conjugation, evaluation."""

import random

import numpy as np
import pytest

from susycpn.expr import (
    Const, EvalPoint, ExprSyntaxError, SingularPointError,
    X_MINUS, X_PLUS, add, clearance, collect_divisors, conjugate, differentiate,
    div, evaluate, evaluate_many, is_zero, log, mul, neg, parse, pow_,
    random_point, real_slice_point, to_text, uses_variable,
)

RNG_SEED = 20260810


def points(n=20, seed=RNG_SEED):
    rng = random.Random(seed)
    return [random_point(rng) for _ in range(n)]


def assert_evaluates_equal(a, b, pts=None, tol=1e-10):
    pts = pts or points()
    va = evaluate_many(a, pts)
    vb = evaluate_many(b, pts)
    scale = np.maximum(1.0, np.abs(vb))
    assert np.max(np.abs(va - vb) / scale) < tol


class TestParse:
    def test_polynomial_value(self):
        e = parse("x^2 + 1")
        assert evaluate(e, EvalPoint(2, 0)) == pytest.approx(5)

    def test_rational_value(self):
        e = parse("1/(1+x)")
        assert evaluate(e, EvalPoint(1, 0)) == pytest.approx(0.5)

    def test_fractional_exponent_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse("x^(1/2)")

    def test_float_exponent_rejected(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse("x^0.5")
        assert "integer" in str(err.value)

    def test_imaginary_literals(self):
        assert evaluate(parse("3i"), EvalPoint(0, 0)) == pytest.approx(3j)
        assert evaluate(parse("(1+2i)*x"), EvalPoint(2, 0)) == pytest.approx(2 + 4j)
        assert evaluate(parse("i*i"), EvalPoint(0, 0)) == pytest.approx(-1)

    def test_negative_exponent(self):
        e = parse("x^-2")
        assert evaluate(e, EvalPoint(2, 0)) == pytest.approx(0.25)

    def test_unary_minus(self):
        e = parse("-x + 2*-3")
        assert evaluate(e, EvalPoint(1, 0)) == pytest.approx(-7)

    def test_precedence(self):
        e = parse("1 + 2*3^2")
        assert evaluate(e, EvalPoint(0, 0)) == pytest.approx(19)

    def test_error_position(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse("1 + @")
        assert err.value.position == 4

    def test_unknown_name(self):
        with pytest.raises(ExprSyntaxError):
            parse("x + y")

    def test_trailing_garbage(self):
        with pytest.raises(ExprSyntaxError):
            parse("1 2")

    def test_unbalanced_paren(self):
        with pytest.raises(ExprSyntaxError):
            parse("(1 + x")

    def test_xbar_only_in_polarized_mode(self):
        with pytest.raises(ExprSyntaxError):
            parse("x + xbar")
        e = parse("x + xbar", polarized=True)
        assert evaluate(e, EvalPoint(1, 2)) == pytest.approx(3)

    def test_round_trip(self):
        rng = random.Random(7)
        for _ in range(40):
            e = _random_grammar_expr(rng, depth=3)
            text = to_text(e)
            reparsed = parse(text, polarized=True)
            assert_evaluates_equal(e, reparsed)


def _random_grammar_expr(rng, depth):
    if depth == 0:
        choice = rng.randrange(4)
        if choice == 0:
            return Const(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
        if choice == 1:
            return Const(rng.randrange(-3, 4))
        return X_PLUS if choice == 2 else X_MINUS
    a = _random_grammar_expr(rng, depth - 1)
    b = _random_grammar_expr(rng, depth - 1)
    op = rng.randrange(5)
    if op == 0:
        return add(a, b)
    if op == 1:
        return a - b
    if op == 2:
        return mul(a, b)
    if op == 3:
        return neg(a)
    return pow_(a, rng.choice([1, 2, 3]))


class TestDifferentiate:
    def test_power_rule(self):
        e = pow_(X_PLUS, 2)
        d = differentiate(e, X_PLUS)
        assert_evaluates_equal(d, mul(2, X_PLUS))

    def test_independent_variable(self):
        d = differentiate(pow_(X_PLUS, 2), X_MINUS)
        assert is_zero(d)

    def test_chain_rule_through_log(self):
        e = log(add(1, mul(X_PLUS, X_MINUS)))
        d = differentiate(e, X_PLUS)
        expected = div(X_MINUS, add(1, mul(X_PLUS, X_MINUS)))
        assert_evaluates_equal(d, expected)

    def test_linearity(self):
        rng = random.Random(11)
        for _ in range(20):
            a = _random_grammar_expr(rng, 3)
            b = _random_grammar_expr(rng, 3)
            lhs = differentiate(add(a, b), X_PLUS)
            rhs = add(differentiate(a, X_PLUS), differentiate(b, X_PLUS))
            assert_evaluates_equal(lhs, rhs)

    def test_product_rule(self):
        rng = random.Random(13)
        for _ in range(20):
            a = _random_grammar_expr(rng, 3)
            b = _random_grammar_expr(rng, 3)
            lhs = differentiate(mul(a, b), X_PLUS)
            rhs = add(mul(differentiate(a, X_PLUS), b),
                      mul(a, differentiate(b, X_PLUS)))
            assert_evaluates_equal(lhs, rhs)

    def test_mixed_partials_commute(self):
        e = div(add(X_PLUS, pow_(X_MINUS, 2)), add(2, mul(X_PLUS, X_MINUS)))
        ab = differentiate(differentiate(e, X_PLUS), X_MINUS)
        ba = differentiate(differentiate(e, X_MINUS), X_PLUS)
        assert_evaluates_equal(ab, ba)

    def test_half_integer_power(self):
        from fractions import Fraction

        e = pow_(add(1, mul(X_PLUS, X_MINUS)), Fraction(-1, 2))
        d = differentiate(e, X_PLUS)
        base = add(1, mul(X_PLUS, X_MINUS))
        expected = mul(Const(-0.5), pow_(base, Fraction(-3, 2)), X_MINUS)
        assert_evaluates_equal(d, expected)


class TestConjugate:
    def test_swaps_variables_and_constants(self):
        e = mul(Const(1j), X_PLUS)
        c = conjugate(e)
        p = EvalPoint(0.3 + 0.1j, -0.2 + 0.5j)
        assert evaluate(c, p) == pytest.approx(-1j * p.xm)

    def test_involution(self):
        rng = random.Random(17)
        for _ in range(20):
            e = _random_grammar_expr(rng, 3)
            assert_evaluates_equal(conjugate(conjugate(e)), e)

    def test_rational(self):
        c = conjugate(div(1, add(1, X_PLUS)))
        assert evaluate(c, EvalPoint(5, 1)) == pytest.approx(0.5)

    def test_intertwines_derivatives(self):
        rng = random.Random(19)
        for _ in range(20):
            e = _random_grammar_expr(rng, 3)
            lhs = conjugate(differentiate(e, X_PLUS))
            rhs = differentiate(conjugate(e), X_MINUS)
            assert_evaluates_equal(lhs, rhs)

    def test_maps_through_log(self):
        e = log(add(2, X_PLUS))
        p = EvalPoint(0.5 + 0.25j, 0.5 - 0.25j)
        assert evaluate(conjugate(e), p) == pytest.approx(
            complex(evaluate(e, p)).conjugate())


class TestEvaluate:
    def test_product_point(self):
        e = add(mul(X_PLUS, X_MINUS), 1)
        assert evaluate(e, EvalPoint(2, 3)) == pytest.approx(7)

    def test_pole_raises(self):
        e = div(1, X_PLUS)
        with pytest.raises(SingularPointError) as err:
            evaluate(e, EvalPoint(0, 1))
        assert "x" in str(err.value)

    def test_log_one(self):
        assert evaluate(log(X_PLUS), EvalPoint(1, 0)) == pytest.approx(0)

    def test_log_zero_raises(self):
        with pytest.raises(SingularPointError):
            evaluate(log(X_PLUS), EvalPoint(0, 1))

    def test_vectorized_matches_scalar(self):
        e = div(add(X_PLUS, 2), add(1, mul(X_PLUS, X_MINUS)))
        pts = points(8)
        vec = evaluate_many(e, pts)
        for i, p in enumerate(pts):
            assert vec[i] == pytest.approx(evaluate(e, p))

    def test_clearance_tracks_divisors(self):
        e = div(1, add(1, X_PLUS))
        assert clearance(e, EvalPoint(-1 + 1e-6, 0)) == pytest.approx(1e-6, rel=1e-2)

    def test_collect_divisors(self):
        e = add(div(1, X_PLUS), log(X_MINUS))
        bases = collect_divisors(e)
        assert X_PLUS in bases and X_MINUS in bases

    def test_uses_variable(self):
        e = parse("1/(1+x)")
        assert uses_variable(e, X_PLUS)
        assert not uses_variable(e, X_MINUS)

    def test_principal_branch_sqrt(self):
        from fractions import Fraction

        e = pow_(X_PLUS, Fraction(1, 2))
        v = evaluate(e, EvalPoint(4, 0))
        assert v == pytest.approx(2)


class TestFolding:
    def test_constants_fold(self):
        assert is_zero(add(Const(2), Const(-2)))
        assert is_zero(mul(Const(0), X_PLUS))
        assert mul(Const(1), X_PLUS) is X_PLUS

    def test_real_slice_point(self):
        p = real_slice_point(1 + 2j)
        assert p.xm == 1 - 2j

"""Expression DSL: grammar, printing round-trip, jets vs finite differences."""

import math
from fractions import Fraction

import numpy as np
import pytest

from goldenslant.errors import DomainError, ExprSyntaxError, UnknownIdentifier
from goldenslant.expr import Bin, Call, Const, Lit, Neg, Param, Pow, parse
from goldenslant.quadrat import ONE_MINUS_PSI, PSI

PARAMS = ["u1", "u2"]


class TestParsing:
    def test_product_with_function(self):
        e = parse("u1*cos(0.5)", PARAMS)
        assert e.root == Bin("*", Param("u1", 0), Call("cos", Lit(Fraction(1, 2))))

    def test_constant_times_parameter(self):
        e = parse("psi*u1", PARAMS)
        assert e.root == Bin("*", Const("psi"), Param("u1", 0))

    def test_malformed_input_reports_offset(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse("u1+*u2", PARAMS)
        assert err.value.offset == 3

    def test_unknown_identifier_reports_name_and_offset(self):
        with pytest.raises(UnknownIdentifier) as err:
            parse("u1+waffle", PARAMS)
        assert err.value.name == "waffle" and err.value.offset == 3

    def test_precedence_unary_minus_tighter_than_product(self):
        e = parse("-u1*u2", PARAMS)
        assert e.root == Bin("*", Neg(Param("u1", 0)), Param("u2", 1))

    def test_precedence_power_tighter_than_unary_minus(self):
        e = parse("-u1^2", PARAMS)
        assert e.root == Neg(Pow(Param("u1", 0), 2))

    def test_power_right_associative_integer_chain(self):
        e = parse("u1^2^3", PARAMS)
        assert e.root == Pow(Param("u1", 0), 8)

    def test_negative_exponent(self):
        assert parse("u1^-2", PARAMS).root == Pow(Param("u1", 0), -2)

    def test_fractional_exponent_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse("u1^1.5", PARAMS)

    def test_left_associativity_of_subtraction(self):
        e = parse("u1-u2-1", PARAMS)
        assert e.root == Bin("-", Bin("-", Param("u1", 0), Param("u2", 1)), Lit(Fraction(1)))

    def test_empty_and_trailing_input(self):
        with pytest.raises(ExprSyntaxError):
            parse("  ", PARAMS)
        with pytest.raises(ExprSyntaxError):
            parse("u1 u2", PARAMS)

    def test_duplicate_params_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse("u1", ["u1", "u1"])

    def test_function_requires_parentheses(self):
        with pytest.raises(ExprSyntaxError):
            parse("sin+1", PARAMS)


class TestPrintingRoundTrip:
    CASES = [
        "u1*cos(0.5)",
        "psi*u1",
        "-u1^2+u2^-1*sin(u1)",
        "(u1+u2)^3",
        "u1-(u2+1)",
        "u1-u2-1",
        "2.25*u1*u2/sqrt5",
        "-(u1*u2)",
        "exp(u1)+sqrt(u2+2)",
        "pi*u1^2",
        "1/2+1/2*u1",
        "-(-u1)",
    ]

    @pytest.mark.parametrize("text", CASES)
    def test_parse_print_parse_is_identity(self, text):
        e = parse(text, PARAMS)
        assert parse(e.to_text(), PARAMS) == e

    def test_random_reprints_are_stable(self):
        rng = np.random.default_rng(1)
        atoms = ["u1", "u2", "psi", "0.5", "2", "sqrt5"]
        for _ in range(200):
            n_ops = rng.integers(1, 6)
            text = str(rng.choice(atoms))
            for _ in range(n_ops):
                op = str(rng.choice(["+", "-", "*", "/"]))
                rhs = str(rng.choice(atoms))
                if rng.random() < 0.3:
                    rhs = f"sin({rhs})"
                if rng.random() < 0.2:
                    text = f"({text}){op}{rhs}^{rng.integers(1, 4)}"
                else:
                    text = f"{text}{op}{rhs}"
            e = parse(text, PARAMS)
            assert parse(e.to_text(), PARAMS) == e


class TestJetEvaluation:
    def test_square(self):
        j = parse("u1^2", ["u1"]).eval_jet([3.0])
        assert j.value == 9.0 and j.grad[0] == 6.0 and j.hess[0, 0] == 2.0

    def test_sine_at_zero(self):
        j = parse("sin(u1)", ["u1"]).eval_jet([0.0])
        assert j.value == 0.0 and j.grad[0] == 1.0 and j.hess[0, 0] == 0.0

    def test_bilinear_with_constant(self):
        j = parse("psi*u1*u2", PARAMS).eval_jet([1.0, 2.0])
        psi = float(PSI)
        assert math.isclose(j.value, 2 * psi, abs_tol=1e-14)
        assert np.allclose(j.grad, [2 * psi, psi], atol=1e-14)
        assert math.isclose(j.hess[0, 1], psi, abs_tol=1e-14)
        assert j.hess[0, 0] == 0.0

    def test_division_and_reciprocal_rules(self):
        j = parse("u1/u2", PARAMS).eval_jet([1.0, 2.0])
        assert math.isclose(j.value, 0.5)
        assert np.allclose(j.grad, [0.5, -0.25])
        assert math.isclose(j.hess[1, 1], 2 * 1.0 / 8.0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            parse("sqrt(u1)", ["u1"]).eval_jet([-1.0])
        with pytest.raises(DomainError):
            parse("1/u1", ["u1"]).eval_jet([0.0])
        with pytest.raises(DomainError):
            parse("u1^-1", ["u1"]).eval_jet([0.0])
        with pytest.raises(DomainError):
            parse("u1", ["u1"]).eval_jet([0.0, 1.0])

    def test_hessian_is_symmetric(self):
        j = parse("sin(u1*u2)+u1^3*u2", PARAMS).eval_jet([0.7, -0.4])
        assert np.array_equal(j.hess, j.hess.T)


def _fd_gradient(e, point, h=1e-5):
    m = len(point)
    grad = np.zeros(m)
    for i in range(m):
        up, dn = list(point), list(point)
        up[i] += h
        dn[i] -= h
        grad[i] = (e.eval_value(up) - e.eval_value(dn)) / (2 * h)
    return grad


def _fd_hessian(e, point, h=1e-5):
    m = len(point)
    hess = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            pp, pm, mp, mm = (list(point) for _ in range(4))
            pp[i] += h
            pp[j] += h
            pm[i] += h
            pm[j] -= h
            mp[i] -= h
            mp[j] += h
            mm[i] -= h
            mm[j] -= h
            hess[i, j] = (e.eval_value(pp) - e.eval_value(pm)
                          - e.eval_value(mp) + e.eval_value(mm)) / (4 * h * h)
    return hess


def _random_expression(rng, params):
    terms = []
    for _ in range(rng.integers(1, 3)):
        c = rng.uniform(-0.8, 0.8)
        kind = rng.integers(0, 4)
        u = params[rng.integers(0, len(params))]
        v = params[rng.integers(0, len(params))]
        if kind == 0:
            terms.append(f"{c:.4f}*{u}^{rng.integers(1, 4)}")
        elif kind == 1:
            terms.append(f"{c:.4f}*sin({u})")
        elif kind == 2:
            terms.append(f"{c:.4f}*cos({u}*{rng.uniform(0.5, 1.5):.4f})")
        else:
            terms.append(f"{c:.4f}*{u}*{v}")
    return "+".join(terms)


def test_jets_match_finite_differences_on_random_expressions():
    rng = np.random.default_rng(0)
    params = ["u1", "u2", "u3"]
    for _ in range(50):
        e = parse(_random_expression(rng, params), params)
        point = rng.uniform(-1, 1, 3)
        jet = e.eval_jet(point)
        grad_scale = max(1.0, float(np.abs(jet.grad).max()))
        hess_scale = max(1.0, float(np.abs(jet.hess).max()))
        assert np.abs(jet.grad - _fd_gradient(e, point)).max() <= 1e-6 * grad_scale
        assert np.abs(jet.hess - _fd_hessian(e, point)).max() <= 1e-6 * hess_scale
        assert math.isclose(jet.value, e.eval_value(point), rel_tol=1e-12, abs_tol=1e-12)


class TestAffineExtraction:
    def test_affine_with_golden_coefficients(self):
        const, coeffs = parse("(1-psi)*u1+2*psi", PARAMS).affine_exact()
        assert const == 2 * PSI
        assert coeffs[0] == ONE_MINUS_PSI and coeffs[1].sign() == 0

    def test_division_by_constant(self):
        const, coeffs = parse("u1/2", PARAMS).affine_exact()
        assert const.sign() == 0 and float(coeffs[0]) == 0.5

    @pytest.mark.parametrize("text", ["u1*u2", "sin(u1)", "pi*u1", "u1^2", "u1/u2"])
    def test_non_affine_returns_none(self, text):
        assert parse(text, PARAMS).affine_exact() is None

    def test_constant_power_is_exact(self):
        const, coeffs = parse("psi^2*u1", PARAMS).affine_exact()
        assert coeffs[0] == PSI + 1

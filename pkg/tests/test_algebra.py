from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cofactor_det, product_formula_a2, sympy_resultant
from valvol.algebra import (
    Poly,
    determinant,
    format_rational,
    is_squarefree,
    parse_rational,
    poly_parse,
    primitive_integer_vector,
    rational_root,
    resultant_in,
    sylvester_matrix,
    univariate_gcd,
)
from valvol.corpus import random_poly
from valvol.errors import ParseError, VariableError

XY = ("x", "y")
TXY = ("t", "x", "y")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def polys(vars, max_terms=5, max_deg=3):
    mono = st.tuples(*[st.integers(0, max_deg) for _ in vars])
    return st.dictionaries(mono, rationals, max_size=max_terms).map(lambda d: Poly(vars, d))


class TestRationals:
    def test_parse_forms(self):
        assert parse_rational("3") == 3
        assert parse_rational("-6/4") == Fraction(-3, 2)
        assert parse_rational(" 2 / 3 ") == Fraction(2, 3)

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_rational("1/0")

    def test_garbage(self):
        with pytest.raises(ParseError):
            parse_rational("1.5")

    @given(rationals)
    def test_round_trip(self, q):
        assert parse_rational(format_rational(q)) == q

    def test_canonical_text(self):
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational(Fraction(-2, 6)) == "-1/3"


class TestParse:
    def test_cusp(self):
        p = poly_parse("y^2 - x^3", XY)
        assert dict(p.terms) == {(0, 2): 1, (3, 0): -1}

    def test_zero(self):
        assert poly_parse("0", XY).is_zero()
        assert dict(poly_parse("0", XY).terms) == {}

    def test_four_terms(self):
        p = poly_parse("y^2 - 2*x^2*y + x^4 - x^3", XY)
        assert len(p.terms) == 4
        assert p.coeff((2, 1)) == -2

    def test_rational_coefficients_and_juxtaposition(self):
        p = poly_parse("-1/2 x y^3 + 3/4*x^2", XY)
        assert p.coeff((1, 3)) == Fraction(-1, 2)
        assert p.coeff((2, 0)) == Fraction(3, 4)

    def test_unknown_variable(self):
        with pytest.raises((ParseError, VariableError)):
            poly_parse("y^2 - z", XY)

    def test_zero_denominator_literal(self):
        with pytest.raises(ParseError):
            poly_parse("1/0*x", XY)

    def test_syntax_error_reports_position(self):
        for text in ("x + ^2", "x +", "y^ - x", "x ) y"):
            with pytest.raises(ParseError) as info:
                poly_parse(text, XY)
            assert info.value.position is not None

    @settings(max_examples=60)
    @given(polys(XY, max_terms=6, max_deg=5))
    def test_print_parse_identity(self, p):
        q = poly_parse(str(p), XY)
        assert q == p
        assert str(q) == str(p)

    def test_printing_order(self):
        assert str(poly_parse("x^4 - x^3 + y^2 - 2*x^2*y", XY)) == "y^2 - 2*x^2*y + x^4 - x^3"


class TestRing:
    @settings(max_examples=40)
    @given(polys(XY), polys(XY), polys(XY), st.lists(st.tuples(rationals, rationals), min_size=5, max_size=5))
    def test_axioms_by_evaluation(self, p, q, r, points):
        for pt in points:
            ev = lambda f: f.evaluate(pt)
            assert ev((p * q) * r) == ev(p * (q * r))
            assert ev(p * (q + r)) == ev(p * q) + ev(p * r)
            assert ev(p - q) == ev(p) - ev(q)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r

    def test_no_zero_coefficients_stored(self):
        x = Poly.var(XY, "x")
        assert (x - x).is_zero()
        assert dict((x + 1 - 1).terms) == {(1, 0): 1}

    def test_divexact(self):
        x, y = Poly.var(XY, "x"), Poly.var(XY, "y")
        f = (y - x**2) * (y + x)
        assert f.divexact(y + x) == y - x**2

    def test_compose_and_subs(self):
        p = poly_parse("y^2 - x^3", XY)
        t = Poly.var(XY, "x")
        assert p.compose({"x": t * t, "y": t**3}).is_zero()
        assert p.subs({"x": 1}) == poly_parse("y^2 - 1", XY)


class TestResultant:
    def test_cusp(self):
        p = poly_parse("x - t^2", TXY)
        q = poly_parse("y - t^3", TXY)
        r = resultant_in(p, q, "t")
        assert r.sign_normalized() == poly_parse("y^2 - x^3", XY)

    def test_linear(self):
        r = resultant_in(poly_parse("x - t", TXY), poly_parse("y - t", TXY), "t")
        assert r in (poly_parse("y - x", XY), poly_parse("x - y", XY))

    def test_product_formula_a2(self):
        q = poly_parse("y - t^3 - t^4", TXY)
        r = resultant_in(poly_parse("x - t^2", TXY), q, "t").sign_normalized()
        assert r == poly_parse("y^2 - 2*x^2*y + x^4 - x^3", XY)
        assert r == product_formula_a2([(3, 1), (4, 1)])

    def test_bareiss_matches_cofactor_oracle(self):
        p = poly_parse("x - t^2", TXY)
        q = poly_parse("y - t^3", TXY)
        m = sylvester_matrix(p, q, "t")
        assert len(m) == 5
        assert determinant(m) == cofactor_det(m)

    def test_random_against_sympy(self):
        rng = random.Random(7)
        for _ in range(15):
            p = random_poly(rng, TXY, terms=4, max_deg=3) + Poly.monomial(TXY, (rng.randint(1, 3), 0, 0))
            q = random_poly(rng, TXY, terms=4, max_deg=3) + Poly.monomial(TXY, (rng.randint(1, 3), 0, 0))
            assert resultant_in(p, q, "t") == sympy_resultant(p, q, "t")

    def test_antisymmetry(self):
        rng = random.Random(11)
        for _ in range(20):
            p = random_poly(rng, TXY, terms=4, max_deg=4) + Poly.monomial(TXY, (rng.randint(1, 4), 0, 0))
            q = random_poly(rng, TXY, terms=4, max_deg=4) + Poly.monomial(TXY, (rng.randint(1, 4), 0, 0))
            sign = (-1) ** (p.degree("t") * q.degree("t"))
            assert resultant_in(p, q, "t") == resultant_in(q, p, "t") * sign

    def test_vanishes_on_parametrized_curve(self):
        rng = random.Random(3)
        for a in (2, 3, 4):
            phi = {(e, 0, 0): Fraction(rng.randint(-3, 3) or 1) for e in rng.sample(range(1, 9), 3)}
            p = Poly.var(TXY, "x") - Poly.monomial(TXY, (a, 0, 0))
            q = Poly.var(TXY, "y") - Poly(TXY, phi)
            r = resultant_in(p, q, "t")
            for _ in range(5):
                s = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                y = sum(c * s ** m[0] for m, c in phi.items())
                assert r.evaluate((s**a, y)) == 0

    def test_common_factor_gives_zero(self):
        p = poly_parse("t^2 - x^2", TXY)
        q = poly_parse("t*y - x*y", TXY)
        assert resultant_in(p, q, "t").is_zero()

    def test_missing_variable(self):
        with pytest.raises(VariableError):
            resultant_in(poly_parse("x - y", TXY), poly_parse("y - t", TXY), "t")


class TestUnivariate:
    def test_gcd(self):
        # (u - 1)(u - 2) and (u - 1)(u + 3)
        assert univariate_gcd([2, -3, 1], [-3, 2, 1]) == [-1, 1]

    def test_squarefree(self):
        assert is_squarefree([-1, 0, 1])
        assert not is_squarefree([1, -2, 1])

    @given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**4), st.integers(1, 6))
    def test_rational_root_of_power(self, q, n):
        assert rational_root(q**n, n) == q

    def test_irrational_root(self):
        assert rational_root(Fraction(2), 2) is None
        assert rational_root(Fraction(-8, 27), 3) == Fraction(-2, 3)
        assert rational_root(Fraction(-4), 2) is None
        assert rational_root(Fraction(10**60), 3) == 10**20

    def test_primitive_vector(self):
        assert primitive_integer_vector((Fraction(3, 4), 1)) == (3, 4)
        assert primitive_integer_vector((4, 6)) == (2, 3)

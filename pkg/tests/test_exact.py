"""
Exact rationals, polynomials, resultants and valuations
"""
import math
import random
from fractions import Fraction

import pytest

from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import (
    ExactLog,
    PolyQ,
    form_resultant,
    is_squarefree,
    poly_divrem,
    poly_gcd,
    prime_support,
    product_formula_check,
    rat_to_str,
    resultant,
    resultant_from_residue,
    squarefree_factors,
    strip_primes,
    to_rat,
    val_p,
)
from app.core.realctx import RealCtx


class TestRationals:
    def test_parse(self):
        assert to_rat("3/4") == Fraction(3, 4)
        assert to_rat("-6/8") == Fraction(-3, 4)
        assert to_rat(" 7 ") == Fraction(7)
        assert to_rat(5) == Fraction(5)

    @pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "", "1/2/3"])
    def test_malformed(self, text):
        with pytest.raises(InvalidInputError, match="malformed rational"):
            to_rat(text)

    def test_render(self):
        assert rat_to_str(Fraction(-3, 4)) == "-3/4"
        assert rat_to_str(Fraction(6, 3)) == "2"


class TestPolyQ:
    def test_arithmetic_and_evaluation(self):
        f = PolyQ.from_coefficients([-1, -1, 1])
        g = PolyQ.from_coefficients([Fraction(1, 2), 1])
        assert f.degree == 2
        assert (f * g).degree == 3
        assert (f * g)(3) == f(3) * g(3)
        assert (f + g)(Fraction(1, 3)) == f(Fraction(1, 3)) + g(Fraction(1, 3))
        assert (f - f).is_zero
        assert f.derivative() == PolyQ.from_coefficients([-1, 2])
        assert str(f) == "t^2 - t - 1"

    def test_divrem(self):
        f = PolyQ.from_coefficients([1, 0, 0, 1])
        g = PolyQ.from_coefficients([1, 1])
        q, r = poly_divrem(f, g)
        assert r.is_zero
        assert q * g == f

    def test_divrem_round_trip(self):
        rng = random.Random(40)
        for _ in range(30):
            a = PolyQ.from_coefficients([Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(rng.randint(1, 41))])
            b = PolyQ.from_coefficients([rng.randint(-9, 9) for _ in range(rng.randint(1, 20))] + [rng.randint(1, 7)])
            q, r = poly_divrem(a, b)
            assert q * b + r == a
            assert r.is_zero or r.degree < b.degree

    def test_zero_divisor(self):
        with pytest.raises(ComputationError, match="zero divisor"):
            poly_divrem(PolyQ.variable(), PolyQ.constant(0))

    def test_gcd_is_monic(self):
        a = PolyQ.from_coefficients([-2, 2]) * PolyQ.from_coefficients([3, 1])
        b = PolyQ.from_coefficients([-1, 1]) * PolyQ.from_coefficients([5, 1])
        assert poly_gcd(a, b) == PolyQ.from_coefficients([-1, 1])

    def test_squarefree_decomposition(self):
        f = PolyQ.from_coefficients([-1, 1]) ** 2 * PolyQ.from_coefficients([2, 1]) * 3
        coeff, factors = squarefree_factors(f)
        assert coeff == 3
        assert sorted((m, g.degree) for g, m in factors) == [(1, 1), (2, 1)]
        assert not is_squarefree(f)
        assert is_squarefree(PolyQ.from_coefficients([-1, -1, 1]))

    def test_primitive_integral(self):
        f = PolyQ.from_coefficients([Fraction(-1, 3), Fraction(2, 3)])
        content, prim = f.primitive_integral()
        assert prim == (2, -1)
        assert content == Fraction(1, 3)


class TestResultant:
    def test_linear_against_evaluation(self):
        g = PolyQ.from_coefficients([1, 0, 1])
        assert resultant(PolyQ.from_coefficients([-2, 1]), g) == 5

    def test_product_over_roots(self):
        # Res(t^2 - 1, t - 3) = (1 - 3)(-1 - 3)
        assert resultant(PolyQ.from_coefficients([-1, 0, 1]), PolyQ.from_coefficients([-3, 1])) == 8

    def test_rational_coefficients(self):
        f = PolyQ.from_coefficients([Fraction(-1, 2), 1])
        g = PolyQ.from_coefficients([0, 0, 3])
        assert resultant(f, g) == Fraction(3, 4)

    def test_from_residue_matches_full(self):
        rng = random.Random(7)
        for _ in range(20):
            f = PolyQ.from_coefficients([rng.randint(-9, 9) for _ in range(3)] + [rng.randint(1, 5)])
            g = PolyQ.from_coefficients([rng.randint(-9, 9) for _ in range(6)] + [rng.randint(1, 5)])
            _, r = poly_divrem(g, f)
            assert resultant_from_residue(f, r, g.degree) == resultant(f, g)

    def test_antisymmetry_and_multiplicativity(self):
        rng = random.Random(11)

        def rand_poly(deg):
            return PolyQ.from_coefficients([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(deg)] + [rng.randint(1, 5)])

        for _ in range(15):
            f, g, h = rand_poly(rng.randint(1, 4)), rand_poly(rng.randint(1, 4)), rand_poly(rng.randint(1, 3))
            sign = -1 if (f.degree * g.degree) % 2 else 1
            assert resultant(g, f) == sign * resultant(f, g)
            assert resultant(f, g * h) == resultant(f, g) * resultant(f, h)

    def test_form_resultant_detects_common_root(self):
        # T0 T1 and T1^2 share [1:0]
        assert form_resultant([0, 1, 0], [0, 0, 1], 2) == 0
        assert form_resultant([1, 0, 0], [0, 0, 1], 2) != 0

    def test_zero_polynomial(self):
        with pytest.raises(InvalidInputError, match="zero polynomial"):
            resultant(PolyQ.constant(0), PolyQ.variable())


class TestValuations:
    def test_val_p(self):
        assert val_p(12, 2) == 2
        assert val_p(Fraction(3, 8), 2) == -3
        assert val_p(Fraction(3, 8), 5) == 0

    def test_valuation_of_zero(self):
        with pytest.raises(ComputationError, match="valuation of zero"):
            val_p(0, 3)

    def test_prime_support_and_strip(self):
        assert prime_support([Fraction(-360, 7), 0, 11]) == [2, 3, 5, 7, 11]
        assert strip_primes(Fraction(-360, 7), [2, 3]) == Fraction(5, 7)

    @pytest.mark.parametrize("q", [Fraction(6, 5), Fraction(12, 5), 2 ** 100, Fraction(-7, 360), -1])
    def test_product_formula_examples(self, q):
        assert product_formula_check(q)

    def test_product_formula_of_zero(self):
        with pytest.raises(ComputationError, match="valuation of zero"):
            product_formula_check(0)

    def test_product_formula_on_random_rationals(self):
        rng = random.Random(2024)
        for _ in range(1000):
            num = rng.randint(-10 ** 12, 10 ** 12) or 1
            den = rng.randint(1, 10 ** 12)
            assert product_formula_check(Fraction(num, den))


class TestExactLog:
    def test_of_and_arithmetic(self):
        a = ExactLog.of(8, 2)
        assert a.coefficient == -3
        b = ExactLog.of(Fraction(1, 2), 2)
        assert (a + b).coefficient == -2
        assert (a - b).coefficient == -4
        assert a.scale(Fraction(1, 4)).coefficient == Fraction(-3, 4)
        assert str(a.scale(Fraction(1, 4))) == "-3/4*log(2)"

    def test_to_real(self):
        mp = RealCtx(128).mp
        assert abs(ExactLog(Fraction(-1, 2), 3).to_real(mp) + math.log(3) / 2) < 1e-15

    def test_mixed_primes(self):
        with pytest.raises(InvalidInputError):
            ExactLog.of(2, 2) + ExactLog.of(3, 3)

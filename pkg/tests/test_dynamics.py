"""
Rational maps, iteration, periodic and preimage polynomials, orbit classes
"""
import random
from fractions import Fraction

import pytest

from app.core.dynamics.orbits import backward_orbit_size, classify_point, is_exceptional
from app.core.dynamics.periodic import (
    fixed_point_poly,
    forms_mod,
    infinity_data,
    preimage_poly,
    target_residue,
)
from app.core.dynamics.rational_map import (
    ProjPointQ,
    bad_primes,
    derivative_pair,
    iterate_exact,
    iterate_raw,
    new_map,
    polynomial_map,
)
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import PolyQ, poly_rem


class TestRationalMap:
    def test_degenerate_map(self):
        # T0 (T0 + T1) and T0^2 share the root T0 = 0
        with pytest.raises(InvalidInputError, match="degenerate map"):
            new_map([1, 1, 0], [1, 0, 0])

    def test_degree_one(self):
        with pytest.raises(InvalidInputError, match="degree must be at least 2"):
            new_map([1, 0], [0, 1])

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError, match="d\\+1"):
            new_map([1, 0, 0], [0, 1])

    def test_bad_primes(self, squaring, half_squaring, z2_plus_1):
        assert bad_primes(squaring) == []
        assert bad_primes(half_squaring) == [2]
        assert bad_primes(z2_plus_1) == []
        assert bad_primes(polynomial_map([Fraction(1, 3), 0, 1])) == [3]

    def test_point_normalisation(self):
        assert ProjPointQ.of(Fraction(6, -4)) == ProjPointQ(-3, 2)
        assert ProjPointQ.parse("inf").is_infinity
        assert str(ProjPointQ.parse("-3/2")) == "-3/2"
        with pytest.raises(InvalidInputError):
            ProjPointQ.parse("3/0")

    def test_iterate(self, squaring, z_plus_inverse):
        assert iterate_exact(squaring, ProjPointQ.of(3), 2) == ProjPointQ.of(81)
        assert iterate_exact(z_plus_inverse, ProjPointQ.of(0), 1).is_infinity
        assert iterate_exact(squaring, ProjPointQ.infinity(), 3).is_infinity

    def test_worked_orbits(self, squaring, half_squaring, z2_plus_1):
        assert iterate_exact(z2_plus_1, ProjPointQ.of(2), 3) == ProjPointQ.of(677)
        assert iterate_exact(half_squaring, ProjPointQ.of(2), 2) == ProjPointQ.of(2)
        assert iterate_raw(squaring, Fraction(2), Fraction(1), 3) == (256, 1)
        assert iterate_raw(half_squaring, Fraction(2), Fraction(1), 2) == (16, 8)
        assert iterate_raw(z2_plus_1, Fraction(-3, 7), Fraction(5), 0) == (Fraction(-3, 7), 5)

    def test_semigroup_law(self, squaring, half_squaring, z2_minus_1, z_plus_inverse):
        rng = random.Random(11)
        maps = [squaring, half_squaring, z2_minus_1, z_plus_inverse]
        for _ in range(50):
            phi = rng.choice(maps)
            x = ProjPointQ.of(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
            a, b = rng.randint(0, 3), rng.randint(0, 3)
            assert iterate_exact(phi, x, a + b) == iterate_exact(phi, iterate_exact(phi, x, a), b)

    def test_iteration_budget(self, squaring):
        with pytest.raises(ComputationError, match="budget"):
            iterate_raw(squaring, Fraction(2), Fraction(1), 30, cap=24)

    def test_derivative_pair(self, squaring, z_plus_inverse):
        a, b = derivative_pair(squaring)
        assert a == PolyQ.from_coefficients([0, 2])
        assert b == PolyQ.constant(1)
        a, b = derivative_pair(z_plus_inverse)
        assert a == PolyQ.from_coefficients([-1, 0, 1])
        assert b == PolyQ.from_coefficients([0, 0, 1])


class TestPeriodicPolynomials:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_squaring_closed_form(self, squaring, k):
        r = fixed_point_poly(squaring, k)
        expected = PolyQ.variable() ** (2 ** k) - PolyQ.variable()
        assert r.poly == expected
        assert r.inf_mult == 1
        assert r.total_degree == 2 ** k + 1

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_total_degree_rational_map(self, z_plus_inverse, k):
        assert fixed_point_poly(z_plus_inverse, k).total_degree == 2 ** k + 1
        assert preimage_poly(z_plus_inverse, ProjPointQ.of(2), k).total_degree == 2 ** k

    def test_degree_budget(self, squaring):
        with pytest.raises(ComputationError, match="budget"):
            fixed_point_poly(squaring, 13, cap=4096)

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_parabolic_multiplicity_stays_two(self, parabolic, k):
        r = fixed_point_poly(parabolic, k).poly
        assert r.coefficient(0) == 0
        assert r.coefficient(1) == 0
        # phi^k(t) = t + k t^2 + O(t^3)
        assert r.coefficient(2) == k

    def test_multiplicity_profile(self, parabolic):
        assert fixed_point_poly(parabolic, 1).multiplicity_profile() == [(2, 1)]

    def test_infinity_data_matches_full_polynomial(
        self, squaring, half_squaring, z2_plus_1, z_plus_inverse
    ):
        for phi in (squaring, half_squaring, z2_plus_1, z_plus_inverse):
            for k in range(1, 5):
                r = fixed_point_poly(phi, k)
                info = infinity_data(phi, k)
                assert info.degree == r.poly.degree
                assert info.inf_mult == r.inf_mult
                assert info.leading == r.poly.leading_coefficient
                s = preimage_poly(phi, ProjPointQ.of(2), k)
                info = infinity_data(phi, k, ProjPointQ.of(2))
                assert info.degree == s.poly.degree
                assert info.leading == s.poly.leading_coefficient

    def test_residues_match_full_reduction(self, z2_minus_1, golden_poly):
        for k in range(1, 5):
            r = fixed_point_poly(z2_minus_1, k).poly
            assert target_residue(z2_minus_1, k, golden_poly) == poly_rem(r, golden_poly)
        x, y = forms_mod(z2_minus_1, 2, golden_poly)
        assert y == PolyQ.constant(1)


class TestExceptionalPoints:
    def test_squaring(self, squaring):
        assert is_exceptional(squaring, ProjPointQ.of(0))
        assert is_exceptional(squaring, ProjPointQ.infinity())
        assert not is_exceptional(squaring, ProjPointQ.of(1))

    def test_chebyshev(self, chebyshev):
        assert is_exceptional(chebyshev, ProjPointQ.infinity())
        assert not is_exceptional(chebyshev, ProjPointQ.of(-2))
        assert not is_exceptional(chebyshev, ProjPointQ.of(0))

    def test_rational_map(self, z_plus_inverse):
        assert not is_exceptional(z_plus_inverse, ProjPointQ.infinity())

    def test_totally_ramified_two_cycle(self):
        inverse_square = new_map([0, 0, 1], [1, 0, 0])
        assert is_exceptional(inverse_square, ProjPointQ.of(0))
        assert is_exceptional(inverse_square, ProjPointQ.infinity())

    def test_unramified_two_cycle(self, z2_minus_1):
        assert not is_exceptional(z2_minus_1, ProjPointQ.of(0))
        assert not is_exceptional(z2_minus_1, ProjPointQ.of(-1))

    def test_preimage_of_exceptional_target(self, squaring):
        with pytest.raises(ComputationError, match="exceptional target"):
            preimage_poly(squaring, ProjPointQ.of(0), 2)

    def test_backward_orbit_size(self, squaring):
        assert backward_orbit_size(squaring, ProjPointQ.of(1), 3) == 8
        assert backward_orbit_size(squaring, ProjPointQ.of(0), 3) == 1
        assert backward_orbit_size(squaring, ProjPointQ.infinity(), 3) == 1


class TestClassify:
    def test_fixed(self, squaring):
        c = classify_point(squaring, ProjPointQ.of(0))
        assert (c.kind, c.tail, c.period) == ("periodic", 0, 1)
        assert c.exceptional

    def test_preperiodic(self, squaring):
        c = classify_point(squaring, ProjPointQ.of(-1))
        assert (c.kind, c.tail, c.period) == ("preperiodic", 1, 1)

    def test_two_cycle(self, z2_minus_1):
        c = classify_point(z2_minus_1, ProjPointQ.of(0))
        assert (c.kind, c.period) == ("periodic", 2)

    def test_wandering(self, squaring):
        c = classify_point(squaring, ProjPointQ.of(Fraction(3, 2)), bound=8)
        assert c.kind == "wandering"
        assert c.steps == 8

    def test_preperiodic_into_two_cycle(self, z2_minus_1):
        c = classify_point(z2_minus_1, ProjPointQ.of(1), bound=4)
        assert (c.kind, c.tail, c.period) == ("preperiodic", 1, 2)
        assert not c.exceptional

    def test_growing_orbit_wanders(self, z2_plus_1):
        c = classify_point(z2_plus_1, ProjPointQ.of(2), bound=10)
        assert c.kind == "wandering"

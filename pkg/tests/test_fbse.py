import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import jn_zeros, jv

from besselterm.errors import DomainError
from besselterm.fbse import (FourierBesselExpansion, TargetFunction, basis_function, coefficient, expansion,
                             overlap_term, partial_sums, reconstruct, residual_function, truncation_error)
from besselterm.quadrature import RadialFunction, l2prime_norm
from besselterm.roots import root
from besselterm.special_functions import bessel_j

T01 = TargetFunction(0, 1)
# 10**6-node trapezoid oracle, scipy Bessel functions
T1_P1_ORACLE = 0.0583337562561253


def norm_sq(target):
    return 0.5 * bessel_j(target.p + 1, root(target.p, target.q)) ** 2


class TestCoefficient:
    def test_own_basis(self):
        x = basis_function(0, 1)
        assert coefficient(x, 0, 1) == pytest.approx(1.0, abs=1e-9)
        assert abs(coefficient(x, 0, 2)) <= 1e-9

    def test_linearity(self):
        x = T01.radial()
        assert coefficient(2.5 * x, 1, 3) == pytest.approx(2.5 * coefficient(x, 1, 3), rel=1e-12)

    def test_requires_vanishing_boundary(self):
        with pytest.raises(DomainError):
            coefficient(RadialFunction(lambda t: 1.0 + 0 * t), 0, 1)

    def test_matches_expansion(self):
        exp = expansion(T01, 2)
        for n in (1, 4, 9):
            assert coefficient(T01.radial(), 2, n) == pytest.approx(exp.coefficient(n), abs=1e-12)


class TestOverlap:
    def test_threshold_constant(self):
        assert overlap_term(T01, 0, 1) == pytest.approx(0.06738, abs=5e-5)

    def test_orthogonal_term_vanishes(self):
        assert abs(overlap_term(T01, 0, 3)) <= 1e-10

    def test_cross_order_fixture(self):
        assert overlap_term(T01, 1, 1) == pytest.approx(T1_P1_ORACLE, abs=1e-8)

    @pytest.mark.parametrize("n", [1, 2, 7, 30])
    def test_invariant_under_R(self, n):
        assert overlap_term(T01, 1, n, R=2.0) == pytest.approx(overlap_term(T01, 1, n), abs=1e-12)

    def test_bad_index(self):
        with pytest.raises(DomainError):
            overlap_term(T01, 1, 0)


class TestPartialSums:
    @pytest.mark.parametrize("p,q", [(0, 1), (1, 2), (2.5, 3), (4, 1)])
    def test_own_order_single_term(self, p, q):
        target = TargetFunction(p, q)
        ps = partial_sums(target, p, 6)
        inc = np.diff(np.concatenate(([0.0], ps.cumulative)))
        expected = np.zeros(6)
        expected[q - 1] = 0.5 * norm_sq(target)
        np.testing.assert_allclose(inc, expected, atol=1e-9)

    def test_table_value(self):
        # exact constant; the rounded 0.06738 sits above cumulative[21]
        ps = partial_sums(T01, 1, 22)
        assert ps.cumulative[20] <= 0.5 * norm_sq(T01) - 0.01**2 / 2 < ps.cumulative[21]

    def test_monotone(self):
        assert np.all(np.diff(partial_sums(T01, 3, 100).cumulative) >= 0.0)

    def test_extension_is_stable(self):
        target = TargetFunction(1.5, 2)
        first = partial_sums(target, 4, 10).cumulative.copy()
        later = partial_sums(target, 4, 80).cumulative
        np.testing.assert_array_equal(later[:10], first)
        assert partial_sums(target, 4, 80).l_max == 80

    @pytest.mark.parametrize("p,q,pp", [(0, 1, 1), (0, 1, 5), (2, 2, 0), (3, 1, 7), (1.5, 3, 2)])
    def test_parseval_bound(self, p, q, pp):
        target = TargetFunction(p, q)
        cum = partial_sums(target, pp, 300).cumulative
        assert 2.0 * cum[-1] <= norm_sq(target) + 1e-9


class TestTruncationError:
    def test_own_basis_zero(self):
        assert truncation_error(TargetFunction(2, 3), 2, 3) <= 1e-7

    def test_table_boundary(self):
        assert truncation_error(T01, 1, 22) < 0.01
        assert truncation_error(T01, 1, 21) >= 0.01

    @pytest.mark.parametrize("l", [1, 5, 40])
    def test_algebraic_identity(self, l):
        err = truncation_error(T01, 2, l)
        cum = partial_sums(T01, 2, l).cumulative[-1]
        assert err**2 + 2.0 * cum == pytest.approx(norm_sq(T01), abs=1e-10)

    @pytest.mark.parametrize("pp", [1, 2, 3])
    @pytest.mark.parametrize("l", [1, 5, 10])
    def test_direct_norm_agrees(self, pp, l):
        direct = l2prime_norm(residual_function(T01, pp, l))
        assert direct == pytest.approx(truncation_error(T01, pp, l), abs=1e-6)


class TestReconstruct:
    def test_boundary(self):
        assert abs(reconstruct(T01, 3, 25, 1.0)) <= 1e-12

    def test_own_basis(self):
        target = TargetFunction(1, 2)
        assert reconstruct(target, 1, 4, 0.5) == pytest.approx(target(0.5), abs=1e-7)

    def test_projection_oracle(self):
        z = jn_zeros(2, 50)
        u = jn_zeros(0, 1)[0]
        total = 0.0
        for zn in z:
            num, _ = quad(lambda t: t * jv(0, u * t) * jv(2, zn * t), 0.0, 1.0, limit=400, epsabs=1e-14)
            total += 2.0 * num / jv(3, zn) ** 2 * jv(2, zn * 0.3)
        assert reconstruct(T01, 2, 50, 0.3) == pytest.approx(total, abs=1e-6)

    def test_array_input(self):
        t = np.linspace(0, 1, 7)
        out = reconstruct(T01, 1, 10, t)
        assert out.shape == t.shape
        assert out[3] == pytest.approx(reconstruct(T01, 1, 10, t[3]), rel=1e-15)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            reconstruct(T01, 1, 5, 1.5)


@pytest.mark.parametrize("p,q", [(-1.0, 1), (0, 0), (0, 1.5)])
def test_target_validation(p, q):
    with pytest.raises(DomainError):
        TargetFunction(p, q)


def test_target_vanishes_at_one():
    for p, q in [(0, 1), (3.5, 4)]:
        assert abs(TargetFunction(p, q)(1.0)) <= 1e-12
    assert math.isclose(T01.norm_squared(), norm_sq(T01))


# mpmath quad at 30 digits; fractional orders put t**s behaviour at the origin
FRACTIONAL_OVERLAPS = [
    (0.125, 0.0, 1, 0.1292538655084768),
    (0.125, 0.0, 2, -0.004742847934100123),
    (0.0, -0.9, 2, -0.07833662929864774),
    (0.5, 0.0, 2, -0.015643065527279024),
]


@pytest.mark.parametrize("p, pp, n, expected", FRACTIONAL_OVERLAPS)
def test_fractional_order_overlaps(p, pp, n, expected):
    exp = FourierBesselExpansion(TargetFunction(p, 1), pp)
    assert exp.overlap(n) == pytest.approx(expected, abs=1e-14)

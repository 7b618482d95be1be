import numpy as np
import pytest
from hypothesis import given, strategies as st

from besselterm.empirical import (HyperbolicFit, eps_grid, hyperbolic_fit, linear_fit, predict_terms,
                                  predictor_comparison, round_half_away, slope_grid)
from besselterm.errors import DomainError

REFERENCE_FIT = HyperbolicFit(0.2259, -0.55585, float("nan"))


class TestLinearFit:
    def test_two_points(self):
        fit = linear_fit([(0, 1), (1, 3)])
        assert fit.slope == pytest.approx(2.0) and fit.intercept == pytest.approx(1.0)
        assert fit.r_squared == pytest.approx(1.0)

    @pytest.mark.parametrize("ls,slope", [([22 * k for k in range(1, 10)], 22.0), (list(range(1, 10)), 1.0)])
    def test_table_rows(self, ls, slope):
        fit = linear_fit(list(zip(range(1, 10), ls)))
        assert fit.slope == pytest.approx(slope, abs=1e-9)
        assert abs(fit.intercept) <= 1e-9

    @given(st.lists(st.tuples(st.integers(0, 50), st.floats(-100, 100)), min_size=3, max_size=20))
    def test_normal_equations(self, pts):
        xs = {x for x, _ in pts}
        if len(xs) < 2:
            return
        fit = linear_fit(pts)
        x = np.array([p[0] for p in pts], float)
        y = np.array([p[1] for p in pts], float)
        res = y - (fit.slope * x + fit.intercept)
        scale = max(1.0, np.abs(y).sum(), np.abs(x * y).sum())
        assert abs(res.sum()) <= 1e-9 * scale
        assert abs((x * res).sum()) <= 1e-9 * scale
        assert -1e-12 <= fit.r_squared <= 1 + 1e-12

    @pytest.mark.parametrize("pts", [[(1, 2)], [(1, 2), (1, 3)], []])
    def test_degenerate(self, pts):
        with pytest.raises(DomainError):
            linear_fit(pts)


class TestHyperbolicFit:
    def test_exact_model(self):
        x = np.linspace(0.05, 1.0, 12)
        fit = hyperbolic_fit(list(zip(x, 3 / x + 2)))
        assert fit.a == pytest.approx(3, abs=1e-10) and fit.b == pytest.approx(2, abs=1e-10)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-10)

    def test_two_samples_interpolate(self):
        fit = hyperbolic_fit([(0.5, 1.0), (1.0, 4.0)])
        assert fit.slope_at(0.5) == pytest.approx(1.0) and fit.slope_at(1.0) == pytest.approx(4.0)
        assert fit.r_squared == pytest.approx(1.0)

    @pytest.mark.parametrize("pts", [[(1, 2)], [(0.0, 1), (1, 2)], [(-1, 1), (1, 2)], [(1, 1), (1, 2)]])
    def test_degenerate(self, pts):
        with pytest.raises(DomainError):
            hyperbolic_fit(pts)


class TestGrid:
    def test_inclusive(self):
        g = eps_grid(0.01, 0.36, 0.01)
        assert len(g) == 36 and g[0] == 0.01 and g[-1] == 0.36

    @pytest.mark.parametrize("args", [(0.1, 0.2, 0.0), (0.2, 0.1, 0.01)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            eps_grid(*args)

    def test_slope_grid_points(self):
        grid = dict(slope_grid(0, 1, 0.01, 0.15, 0.14, range(1, 11)))
        assert grid[0.01].slope == pytest.approx(22.0, abs=1e-9)
        assert grid[0.15].slope == pytest.approx(1.0, abs=1e-9)

    def test_single_point_is_linear_fit(self):
        [(eps, fit)] = slope_grid(0, 1, 0.05, 0.05, 0.01, range(1, 10))
        assert eps == 0.05
        assert fit == linear_fit([(k, 4 * k) for k in range(1, 10)])

    def test_empty_range(self):
        with pytest.raises(DomainError):
            slope_grid(0, 1, 0.1, 0.2, 0.1, [])


class TestPredict:
    def test_headline_arithmetic(self):
        pred = predict_terms(REFERENCE_FIT, 0.12, 30, 2)
        assert pred.m0 == pytest.approx(1.32665, abs=1e-5)
        assert pred.l_hat == pytest.approx(40.47, abs=5e-3)
        assert pred.l_rounded == 40

    def test_first_order(self):
        assert predict_terms(REFERENCE_FIT, 0.3, 1, 7).l_hat == 7

    def test_unit_slope(self):
        assert predict_terms(HyperbolicFit(0.0, 1.0, 1.0), 0.2, 5, 1).l_hat == 5

    @pytest.mark.parametrize("eps,pp", [(0.0, 3), (0.1, 0)])
    def test_validation(self, eps, pp):
        with pytest.raises(DomainError):
            predict_terms(REFERENCE_FIT, eps, pp, 1)

    def test_comparison_rows(self):
        rows = predictor_comparison(REFERENCE_FIT, 0.12, [1, 4])
        assert rows[0][0] == 1 and rows[0][1] == rows[0][2].l0 == 2
        assert rows[1][1] == 6


@pytest.mark.parametrize("x,expected", [(40.5, 41), (40.47, 40), (-2.5, -3), (0.49, 0), (3.0, 3)])
def test_round_half_away(x, expected):
    assert round_half_away(x) == expected

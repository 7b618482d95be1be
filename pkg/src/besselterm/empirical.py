"""Empirical term-count model.

For each ``eps / R`` on a grid, the term count is regressed linearly on the
expansion order ``p'``. The slopes are then fitted by ``a / x + b``, and the
count for a new ``(eps / R, p')`` is predicted as ``m0 * (p' - 1) + l0`` with
``m0 = a / (eps / R) + b`` and ``l0`` the exact count at ``p' = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fbse import TargetFunction
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .term_count import DEFAULT_L_MAX, TermCountQuery, counts_for_eps, min_terms

__all__ = [
    "HyperbolicFit",
    "LinearFit",
    "Prediction",
    "eps_grid",
    "hyperbolic_fit",
    "linear_fit",
    "predict_terms",
    "predictor_comparison",
    "round_half_away",
    "slope_grid",
]


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class HyperbolicFit:
    a: float
    b: float
    r_squared: float
    grid: tuple = ()

    def slope_at(self, eps_ratio: float) -> float:
        return self.a / eps_ratio + self.b


@dataclass(frozen=True)
class Prediction:
    m0: float
    l0: int
    l_hat: float
    l_rounded: int


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def _r_squared(y, fitted):
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def linear_fit(points) -> LinearFit:
    """Ordinary least squares line through ``(x, y)`` points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or np.unique(pts[:, 0]).size < 2:
        raise DomainError("linear_fit needs at least two points with distinct x")
    x, y = pts[:, 0], pts[:, 1]
    xm, ym = x.mean(), y.mean()
    slope = float(np.sum((x - xm) * (y - ym)) / np.sum((x - xm) ** 2))
    intercept = float(ym - slope * xm)
    return LinearFit(slope, intercept, _r_squared(y, slope * x + intercept))


def hyperbolic_fit(samples) -> HyperbolicFit:
    """Least-squares fit of ``y = a / x + b``."""
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DomainError("hyperbolic_fit needs at least two (x, y) samples")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0.0) or np.unique(x).size != x.size:
        raise DomainError("hyperbolic_fit needs distinct positive x")
    design = np.column_stack([1.0 / x, np.ones_like(x)])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    return HyperbolicFit(float(a), float(b), _r_squared(y, design @ (a, b)),
                         tuple(map(tuple, pts.tolist())))


def eps_grid(start: float, end: float, step: float) -> list[float]:
    """Inclusive grid ``start, start + step, ..., end`` rounded to 12 decimals."""
    if not step > 0.0:
        raise DomainError("grid step must be > 0")
    if end < start:
        raise DomainError("grid end must be >= start")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def slope_grid(p, q: int, eps_start: float, eps_end: float, eps_step: float, p_prime_range,
               l_max: int = DEFAULT_L_MAX, spec: QuadratureSpec = DEFAULT_SPEC):
    """``(eps, LinearFit)`` for each grid point, regressing ``l`` on ``p'``."""
    p_primes = [int(v) for v in p_prime_range]
    if not p_primes:
        raise DomainError("p' range must be non-empty")
    grid = eps_grid(eps_start, eps_end, eps_step)
    target = TargetFunction(p, q)
    counts = {pp: [r.l for r in counts_for_eps(target, pp, grid, l_max, spec)] for pp in p_primes}
    return [
        (eps, linear_fit([(pp, counts[pp][i]) for pp in p_primes]))
        for i, eps in enumerate(grid)
    ]


def predict_terms(fit: HyperbolicFit, eps_ratio: float, p_prime: int, l0: int) -> Prediction:
    if not eps_ratio > 0.0:
        raise DomainError("eps_ratio must be > 0")
    if p_prime < 1:
        raise DomainError("p_prime must be >= 1")
    m0 = fit.slope_at(eps_ratio)
    l_hat = m0 * (p_prime - 1) + l0
    return Prediction(m0, int(l0), l_hat, round_half_away(l_hat))


def predictor_comparison(fit: HyperbolicFit, eps_ratio: float, p_primes, p=0, q: int = 1,
                         l_max: int = DEFAULT_L_MAX, spec: QuadratureSpec = DEFAULT_SPEC):
    """``(p', actual l, Prediction)`` rows, with ``l0`` looked up exactly at ``p' = 1``."""
    target = TargetFunction(p, q)
    l0 = min_terms(TermCountQuery(target, 1, eps_ratio, l_max), spec).l
    rows = []
    for pp in p_primes:
        actual = min_terms(TermCountQuery(target, pp, eps_ratio, l_max), spec).l
        rows.append((int(pp), actual, predict_terms(fit, eps_ratio, int(pp), l0)))
    return rows

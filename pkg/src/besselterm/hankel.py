"""Hankel transforms and the order invariant.

For a radial function ``f`` with order-``n`` Hankel transform ``F_n``,

    r**2 f'' + r f' = n**2 f - r**2 H_n^{-1}(alpha**2 F_n),

and since the left side does not depend on ``n``, differencing consecutive
orders gives

    f(r) / r**2 = (H_{n+1}^{-1}(alpha**2 F_{n+1}) - H_n^{-1}(alpha**2 F_n)) / (2n + 1).

Both are checked in closed form on power laws ``r**s`` and numerically on
rapidly decaying functions.

When ``f`` does not behave like ``r**n`` near the origin, ``alpha**2 F_n`` tends to
a non-zero constant and the inverse integral only exists as an Abel limit.
The numeric inverse therefore integrates between consecutive zeros of the
kernel and extrapolates the partial integrals with Sidi's mW transformation,
which recovers that limit and is harmless when the integrand already decays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError, QuadratureError
from .quadrature import DEFAULT_SPEC, QuadratureSpec, panel_nodes
from .roots import default_table
from .special_functions import Order

__all__ = [
    "GAUSSIAN",
    "PowerLawPair",
    "RadialTestFunction",
    "TransformSample",
    "finite_difference_derivatives",
    "gaussian_power",
    "hankel_sample",
    "inverse_alpha_squared_numeric",
    "inverse_alpha_squared_power",
    "inverse_power_law",
    "invariant_residual_numeric",
    "invariant_rhs_power",
    "mw_extrapolate",
    "numeric_hankel",
    "order_combination_numeric",
    "power_law_coefficient",
    "radial_identity_residual",
]

DEFAULT_RADIUS = 14.0


def _is_pole(z: float) -> bool:
    return z <= 0.0 and z == math.floor(z)


def _gamma_sign(z: float) -> float:
    if z > 0.0:
        return 1.0
    return -1.0 if math.ceil(-z) % 2 else 1.0


@dataclass(frozen=True)
class PowerLawPair:
    """``f(r) = r**s`` paired with a Hankel order ``n >= -1/2``."""

    n: float
    s: float

    def __post_init__(self):
        if not self.n >= -0.5:
            raise DomainError(f"Hankel order must be >= -1/2, got {self.n}")

    @property
    def coefficient(self) -> float:
        return power_law_coefficient(self.n, self.s)

    def transform(self, alpha):
        """``H_n(r**s)(alpha) = coefficient * alpha**(-s-2)``."""
        return self.coefficient * np.asarray(alpha, dtype=float) ** (-self.s - 2.0)


def power_law_coefficient(n, s: float) -> float:
    """``2**(s+1) Gamma((n+s+2)/2) / Gamma((n-s)/2)``, the alpha-free factor of ``H_n(r**s)``.

    Zero when ``(n - s)/2`` is a pole of Gamma; a ``DomainError`` when
    ``(n + s + 2)/2`` is.
    """
    n = float(n)
    s = float(s)
    top = 0.5 * (n + s + 2.0)
    bottom = 0.5 * (n - s)
    if _is_pole(top):
        raise DomainError(f"Gamma pole at (n+s+2)/2 = {top} for n={n}, s={s}")
    if _is_pole(bottom):
        return 0.0
    sign = _gamma_sign(top) * _gamma_sign(bottom)
    return sign * math.exp((s + 1.0) * math.log(2.0) + math.lgamma(top) - math.lgamma(bottom))


def inverse_power_law(n, k: float, r: float) -> float:
    """``H_n^{-1}(alpha**k)(r)``; the transform is its own inverse."""
    return power_law_coefficient(n, k) * float(r) ** (-k - 2.0)


def inverse_alpha_squared_power(n, s: float, r: float) -> float:
    """``H_n^{-1}(alpha**2 H_n(r**s))`` through the Gamma factors, without simplifying."""
    return power_law_coefficient(n, s) * inverse_power_law(n, -s, r)


def invariant_rhs_power(n, s: float, r: float) -> float:
    """Right side of the order invariant for ``f = r**s``, using
    ``H_n^{-1}(alpha**2 F_n) = r**(s-2) (n**2 - s**2)``."""
    if not r > 0.0:
        raise DomainError("r must be > 0")
    n = float(n)
    if n == -0.5:
        raise DomainError("the invariant divides by 2n + 1, which vanishes at n = -1/2")
    base = r ** (s - 2.0)
    return (base * ((n + 1.0) ** 2 - s * s) - base * (n * n - s * s)) / (2.0 * n + 1.0)


@dataclass(frozen=True)
class TransformSample:
    order: float
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values must have equal length")
        if np.any(np.diff(self.grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")


def _radial_edges(r_max: float, alpha_max: float) -> np.ndarray:
    width = min(1.0, 2.0 * math.pi / alpha_max) if alpha_max > 0.0 else 1.0
    panels = max(1, int(math.ceil(r_max / width)))
    return np.linspace(0.0, r_max, panels + 1)


def _hankel_many(f: Callable, n: float, alphas: np.ndarray, r_max: float,
                 spec: QuadratureSpec) -> np.ndarray:
    if alphas.size == 0:
        return alphas.copy()
    edges = _radial_edges(r_max, float(alphas.max()))
    level = spec.panels_per_oscillation

    def at(level):
        r, w = panel_nodes(edges, spec.nodes_per_panel, level)
        return kernels.hankel_sums(n, alphas, r, w * r * np.asarray(f(r), dtype=float))

    coarse = at(level)
    for _ in range(spec.max_doublings):
        level *= 2
        fine = at(level)
        if np.max(np.abs(fine - coarse)) <= spec.abs_tolerance:
            return fine
        coarse = fine
    raise QuadratureError("forward Hankel transform did not reach tolerance")


def numeric_hankel(f: Callable, n, alpha, r_max: float = DEFAULT_RADIUS,
                   spec: QuadratureSpec = DEFAULT_SPEC):
    """``integral_0^r_max f(r) J_n(alpha r) r dr`` for scalar or array ``alpha``."""
    nv = Order(float(n)).value
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    if np.any(a < 0.0):
        raise DomainError("alpha must be >= 0")
    out = _hankel_many(f, nv, a, float(r_max), spec)
    return float(out[0]) if np.ndim(alpha) == 0 else out.reshape(np.shape(alpha))


def hankel_sample(f: Callable, n, alphas, r_max: float = DEFAULT_RADIUS,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> TransformSample:
    grid = np.asarray(alphas, dtype=float)
    return TransformSample(float(n), grid, numeric_hankel(f, n, grid, r_max, spec))


def mw_extrapolate(nodes: np.ndarray, partials: np.ndarray, terms: int = 6) -> float:
    """Sidi's mW limit of ``partials[l] = integral_0^{nodes[l]}`` taken at successive kernel zeros.

    Solves ``partials[l] = W + psi_l * sum_i beta_i / nodes[l]**i`` over the last
    ``terms + 1`` nodes, with ``psi_l = partials[l+1] - partials[l]``.
    """
    psi = np.diff(partials)
    rows = np.arange(psi.size - terms - 1, psi.size)
    if rows[0] < 1:
        raise DomainError(f"mW with {terms} terms needs at least {terms + 2} intervals")
    scale = nodes[rows[-1]]
    design = np.empty((rows.size, terms + 1))
    design[:, 0] = 1.0
    for i in range(terms):
        design[:, i + 1] = psi[rows] * (scale / nodes[rows]) ** i
    return float(np.linalg.solve(design, partials[rows])[0])


def inverse_alpha_squared_numeric(f: Callable, n, r: float, alpha_max: float = DEFAULT_RADIUS,
                                  r_max: float = DEFAULT_RADIUS, spec: QuadratureSpec = DEFAULT_SPEC,
                                  intervals: int = 16, tail_terms: int = 6) -> float:
    """``H_n^{-1}(alpha**2 F_n)(r)`` with ``F_n`` itself computed numerically.

    The inverse integral runs over at least ``intervals`` zero-to-zero panels
    of ``J_n(alpha r)`` and at least up to ``alpha_max``; its tail is handled by
    :func:`mw_extrapolate` unless the last panels already fall below tolerance.
    """
    nv = Order(float(n)).value
    if not nv >= -0.5:
        raise DomainError("Hankel order must be >= -1/2")
    if not r > 0.0:
        raise DomainError("r must be > 0")
    args = (f, nv, float(r), float(alpha_max), float(r_max), spec, int(intervals), int(tail_terms))
    try:
        hash(f)
    except TypeError:
        return _inverse_alpha_squared.__wrapped__(*args)
    return _inverse_alpha_squared(*args)


@lru_cache(maxsize=256)
def _inverse_alpha_squared(f, nv, r, alpha_max, r_max, spec, intervals, tail_terms):
    table = default_table()
    count = max(intervals, tail_terms + 2, int(math.ceil(alpha_max * r / math.pi)) + 1)
    zeros = table.roots_up_to(nv, count)
    while zeros[-1] < alpha_max * r:
        count *= 2
        zeros = table.roots_up_to(nv, count)
    nodes = np.concatenate(([0.0], zeros / r))
    m = spec.nodes_per_panel

    def interval_sums(level):
        a, w = panel_nodes(nodes, m, level)
        fa = _hankel_many(f, nv, a, r_max, spec)
        vals = w * a**3 * fa * kernels.jv(nv, a * r)
        return vals.reshape(nodes.size - 1, level * m).sum(axis=1)

    level = spec.panels_per_oscillation
    coarse = interval_sums(level)
    for _ in range(spec.max_doublings):
        level *= 2
        fine = interval_sums(level)
        if np.max(np.abs(fine - coarse)) <= spec.abs_tolerance:
            break
        coarse = fine
    else:
        raise QuadratureError("inverse Hankel transform did not reach tolerance")
    partials = np.concatenate(([0.0], np.cumsum(fine)))
    if np.max(np.abs(fine[-(tail_terms + 1):])) <= spec.abs_tolerance:
        return float(partials[-1])
    return mw_extrapolate(nodes, partials, tail_terms)


def order_combination_numeric(f: Callable, n, r: float, **kw) -> float:
    """``n**2 f(r) - r**2 H_n^{-1}(alpha**2 F_n)(r)``, which should not depend on ``n``."""
    n = float(n)
    return n * n * float(f(np.array(r))) - r * r * inverse_alpha_squared_numeric(f, n, r, **kw)


def radial_identity_residual(f: Callable, f_prime: Callable, f_double_prime: Callable, n, r: float,
                             **kw) -> float:
    """``|r**2 f'' + r f' - (n**2 f - r**2 H_n^{-1}(alpha**2 F_n))|`` at ``r``."""
    lhs = r * r * float(f_double_prime(np.array(r))) + r * float(f_prime(np.array(r)))
    return abs(lhs - order_combination_numeric(f, n, r, **kw))


def invariant_residual_numeric(f: Callable, n, r: float, **kw) -> float:
    """``|f(r)/r**2 - (H_{n+1}^{-1}(alpha**2 F_{n+1}) - H_n^{-1}(alpha**2 F_n)) / (2n+1)|``."""
    n = float(n)
    if n == -0.5:
        raise DomainError("the invariant divides by 2n + 1, which vanishes at n = -1/2")
    g0 = inverse_alpha_squared_numeric(f, n, r, **kw)
    g1 = inverse_alpha_squared_numeric(f, n + 1.0, r, **kw)
    return abs(float(f(np.array(r))) / (r * r) - (g1 - g0) / (2.0 * n + 1.0))


def finite_difference_derivatives(f: Callable, h: float = 1e-4):
    """Central-difference ``f'`` and ``f''``; accuracy is limited to about 1e-8."""

    def fp(r):
        r = np.asarray(r, dtype=float)
        return (f(r + h) - f(r - h)) / (2.0 * h)

    def fpp(r):
        r = np.asarray(r, dtype=float)
        return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)

    return fp, fpp


@dataclass(frozen=True)
class RadialTestFunction:
    name: str
    f: Callable
    f_prime: Callable
    f_double_prime: Callable


def _gauss(r):
    return np.exp(-np.asarray(r, dtype=float) ** 2)


GAUSSIAN = RadialTestFunction(
    "gaussian",
    _gauss,
    lambda r: -2.0 * np.asarray(r, dtype=float) * _gauss(r),
    lambda r: (4.0 * np.asarray(r, dtype=float) ** 2 - 2.0) * _gauss(r),
)


def gaussian_power(m: int) -> RadialTestFunction:
    """``r**m exp(-r**2)``, whose order-``m`` transform is itself Gaussian."""
    m = int(m)

    def f(r):
        r = np.asarray(r, dtype=float)
        return r**m * np.exp(-r * r)

    def fp(r):
        r = np.asarray(r, dtype=float)
        return (m * r ** (m - 1) - 2.0 * r ** (m + 1)) * np.exp(-r * r) if m else -2.0 * r * np.exp(-r * r)

    def fpp(r):
        r = np.asarray(r, dtype=float)
        e = np.exp(-r * r)
        return (m * (m - 1) * r ** (m - 2) - 2.0 * (2 * m + 1) * r**m + 4.0 * r ** (m + 2)) * e

    return RadialTestFunction(f"gaussian_power_{m}", f, fp, fpp)

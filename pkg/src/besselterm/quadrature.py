"""Weighted inner product, the induced ``L2'`` norm, and the quadrature engine.

All integrals are composite Gauss-Legendre sums over panels whose edges sit at
the zeros of the oscillatory factors. Error control compares a panel layout
with its two-fold refinement and doubles until the two agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, QuadratureError

__all__ = [
    "DEFAULT_SPEC",
    "QuadratureSpec",
    "RadialFunction",
    "gauss_legendre",
    "inner_product",
    "integrate",
    "l2prime_norm",
    "panel_nodes",
]


@dataclass(frozen=True)
class QuadratureSpec:
    panels_per_oscillation: int = 1
    nodes_per_panel: int = 32
    abs_tolerance: float = 1e-12
    max_doublings: int = 6

    def __post_init__(self):
        if self.panels_per_oscillation < 1:
            raise DomainError("panels_per_oscillation must be >= 1")
        if self.nodes_per_panel < 8:
            raise DomainError("nodes_per_panel must be >= 8")
        if not self.abs_tolerance > 0.0:
            raise DomainError("abs_tolerance must be > 0")
        if self.max_doublings < 1:
            raise DomainError("max_doublings must be >= 1")


DEFAULT_SPEC = QuadratureSpec()

# geometric panels next to t = 0; 2**-40 keeps t**s tails below 1e-13 for s > -1
ORIGIN_GRADING = 40


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[-1, 1]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(edges, nodes_per_panel: int, subdivisions: int = 1, origin_grading: int = 0):
    """Flattened nodes and weights of the composite rule on ``edges``.

    With ``origin_grading = k > 0`` and ``edges[0] == 0`` the first interval
    ``[0, h]`` is first replaced by the geometric intervals ``[0, h 2**-k],
    ..., [h/2, h]``. This resolves ``t**s`` endpoint behaviour for
    non-integer ``s``.

    Each interval is then split into ``subdivisions`` equal panels, so
    doubling ``subdivisions`` always refines the previous mesh. Nodes are
    ordered panel by panel; grading prepends ``k * subdivisions *
    nodes_per_panel`` nodes.
    """
    edges = np.asarray(edges, dtype=float)
    if origin_grading > 0 and edges[0] == 0.0:
        graded = edges[1] * np.exp2(-np.arange(origin_grading, 0, -1, dtype=float))
        edges = np.concatenate(([0.0], graded, edges[1:]))
    if subdivisions > 1:
        frac = np.arange(subdivisions) / subdivisions
        left = edges[:-1, None] + np.diff(edges)[:, None] * frac
        edges = np.append(left.ravel(), edges[-1])
    x0, w0 = gauss_legendre(nodes_per_panel)
    a = edges[:-1, None]
    half = 0.5 * np.diff(edges)[:, None]
    x = (a + half) + half * x0
    w = half * w0
    return x.ravel(), w.ravel()


def integrate(func: Callable, edges, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integrate a vectorised ``func`` over ``[edges[0], edges[-1]]``."""
    edges = np.asarray(edges, dtype=float)
    level = spec.panels_per_oscillation

    def at(level):
        x, w = panel_nodes(edges, spec.nodes_per_panel, level, ORIGIN_GRADING)
        return float(w @ np.asarray(func(x), dtype=float))

    coarse = at(level)
    for _ in range(spec.max_doublings):
        level *= 2
        fine = at(level)
        if abs(fine - coarse) <= spec.abs_tolerance:
            return fine
        coarse = fine
    raise QuadratureError(
        f"quadrature did not reach {spec.abs_tolerance:g} after {spec.max_doublings} doublings"
        f" (last change {abs(fine - coarse):.3g})"
    )


@dataclass(frozen=True)
class RadialFunction:
    """A real function on ``[0, R]`` with optional panel breakpoints.

    ``breakpoints`` are interior points (typically zeros of an oscillatory
    factor) used as panel edges by the quadrature engine.
    """

    evaluator: Callable
    R: float = 1.0
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        if not self.R > 0.0:
            raise DomainError(f"R must be positive, got {self.R}")

    def __call__(self, t):
        return np.asarray(self.evaluator(np.asarray(t, dtype=float)), dtype=float)

    def vanishes_at_boundary(self, atol: float = 1e-10) -> bool:
        return abs(float(self(self.R))) <= atol

    def _combine(self, other, op):
        if isinstance(other, RadialFunction):
            _check_same_domain(self, other)
            bp = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
            return RadialFunction(lambda t: op(self(t), other(t)), self.R, bp)
        c = float(other)
        return RadialFunction(lambda t: op(self(t), c), self.R, self.breakpoints)

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def _check_same_domain(f, g):
    if not math.isclose(f.R, g.R, rel_tol=1e-15, abs_tol=0.0):
        raise DomainError(f"functions live on different domains: R={f.R} vs R={g.R}")


def _edges(R, *functions):
    inner = set()
    for f in functions:
        inner.update(b for b in f.breakpoints if 0.0 < b < R)
    return np.array([0.0, *sorted(inner), R])


def inner_product(f: RadialFunction, g: RadialFunction, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``<f, g> = integral_0^R t f(t) g(t) dt``."""
    _check_same_domain(f, g)
    return integrate(lambda t: t * f(t) * g(t), _edges(f.R, f, g), spec)


def l2prime_norm(f: RadialFunction, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``(integral_0^R f(t)**2 t dt) ** 0.5``."""
    return math.sqrt(max(inner_product(f, f, spec), 0.0))

"""Fourier-Bessel expansion of a scaled Bessel function in a basis of another order.

The target is ``x(t) = J_p(u_{p,q} t)`` on ``[0, 1]``. Expanding it in the
basis ``J_{p'}(u_{p',n} t)`` gives coefficients ``c_n`` and non-negative
contributions

    T_n = (integral_0^1 J_p(u_{p,q} t) J_{p'}(u_{p',n} t) t dt / J_{p'+1}(u_{p',n}))**2

such that ``||x - x_l||**2 = J_{p+1}(u_{p,q})**2 / 2 - 2 * sum_{n<=l} T_n`` in the
``L2'`` norm.

The overlap integral is evaluated in the basis argument ``s = u_{p',n} t``,
with one panel per interval between consecutive zeros of ``J_{p'}``. In that
variable the panels and the basis values at their nodes are the same for every
``n``, so they are computed once and only the slowly varying target factor is
re-evaluated per term.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, QuadratureError
from .quadrature import (
    DEFAULT_SPEC,
    ORIGIN_GRADING,
    QuadratureSpec,
    RadialFunction,
    inner_product,
    panel_nodes,
)
from .roots import RootTable, default_table
from .special_functions import Order, bessel_j, bessel_j_pair

__all__ = [
    "ExpansionTerm",
    "FourierBesselExpansion",
    "PartialSum",
    "TargetFunction",
    "basis_function",
    "coefficient",
    "expansion",
    "overlap_term",
    "partial_sums",
    "reconstruct",
    "residual_function",
    "truncation_error",
]


@dataclass(frozen=True)
class TargetFunction:
    """``x(t) = J_p(u_{p,q} t)`` on ``[0, 1]``."""

    p: float
    q: int

    def __post_init__(self):
        object.__setattr__(self, "p", Order(float(self.p)).value)
        if int(self.q) != self.q or self.q < 1:
            raise DomainError(f"q must be a positive integer, got {self.q!r}")
        object.__setattr__(self, "q", int(self.q))

    def zero(self, table: RootTable | None = None) -> float:
        return (table or default_table()).root(self.p, self.q)

    def norm_squared(self, table: RootTable | None = None) -> float:
        """``||x||**2 = J_{p+1}(u_{p,q})**2 / 2``."""
        return 0.5 * bessel_j(self.p + 1.0, self.zero(table)) ** 2

    def radial(self, R: float = 1.0, table: RootTable | None = None) -> RadialFunction:
        table = table or default_table()
        u = self.zero(table)
        bp = tuple(R * table.roots_up_to(self.p, self.q)[:-1] / u) if self.q > 1 else ()
        return RadialFunction(lambda t: bessel_j(self.p, u * t / R), R, bp)

    def __call__(self, t):
        return bessel_j(self.p, self.zero() * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ExpansionTerm:
    n: int
    coefficient: float
    contribution: float


@dataclass(frozen=True)
class PartialSum:
    p_prime: float
    terms: tuple
    cumulative: np.ndarray

    @property
    def l_max(self) -> int:
        return len(self.terms)


def basis_function(alpha, n: int, R: float = 1.0, table: RootTable | None = None) -> RadialFunction:
    """``J_alpha(u_{alpha,n} t / R)`` with its interior zeros as breakpoints."""
    table = table or default_table()
    a = Order(float(alpha)).value
    zeros = table.roots_up_to(a, n)
    u = zeros[-1]
    return RadialFunction(lambda t: bessel_j(a, u * t / R), R, tuple(R * zeros[:-1] / u))


def coefficient(x: RadialFunction, alpha, n: int, spec: QuadratureSpec = DEFAULT_SPEC,
                table: RootTable | None = None) -> float:
    """Fourier-Bessel coefficient ``c_n`` of ``x`` in the order-``alpha`` basis."""
    if not x.vanishes_at_boundary(1e-10):
        raise DomainError("expanded function must vanish at R")
    table = table or default_table()
    a = Order(float(alpha)).value
    phi = basis_function(a, n, x.R, table)
    u = table.root(a, n)
    norm = (x.R * bessel_j(a + 1.0, u)) ** 2
    return 2.0 * inner_product(x, phi, spec) / norm


class FourierBesselExpansion:
    """Overlap terms of one ``(target, p')`` pair, extended on demand.

    Terms are computed in index order and never recomputed, so extending the
    expansion leaves earlier entries bit-identical.
    """

    def __init__(self, target: TargetFunction, p_prime, spec: QuadratureSpec = DEFAULT_SPEC,
                 table: RootTable | None = None):
        self.target = target
        self.p_prime = Order(float(p_prime)).value
        self.spec = spec
        self.table = table or default_table()
        self._u_target = target.zero(self.table)
        self._overlaps: list[float] = []
        self._next_norms: list[float] = []
        self._levels: dict[int, tuple[int, np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._overlaps)

    def _level_nodes(self, s: int, panels: int, zeros: np.ndarray):
        """Nodes ``x`` and weights ``w * x * J_{p'}(x)`` for ``panels`` zero intervals split ``s`` ways."""
        have = self._levels.get(s)
        if have is not None and have[0] >= panels:
            return have[1], have[2]
        cap = max(panels, 2 * have[0] if have else panels)
        edges = np.concatenate(([0.0], self.table.roots_up_to(self.p_prime, cap)))
        x, w = panel_nodes(edges, self.spec.nodes_per_panel, s, ORIGIN_GRADING)
        wxj = w * x * kernels.jv(self.p_prime, x)
        self._levels[s] = (cap, x, wxj)
        return x, wxj

    def _overlap_block(self, ns: np.ndarray, zeros: np.ndarray, base: int) -> np.ndarray:
        m = self.spec.nodes_per_panel
        z = zeros[ns - 1]
        betas = self._u_target / z
        level = base
        x, wxj = self._level_nodes(level, int(ns.max()), zeros)
        coarse = kernels.target_weighted_sums(self.target.p, betas, x, wxj, (ns + ORIGIN_GRADING) * level * m)
        result = np.empty_like(coarse)
        pending = np.arange(ns.size)
        for _ in range(self.spec.max_doublings):
            level *= 2
            x, wxj = self._level_nodes(level, int(ns[pending].max()), zeros)
            fine = kernels.target_weighted_sums(
                self.target.p, betas[pending], x, wxj, (ns[pending] + ORIGIN_GRADING) * level * m
            )
            ok = np.abs(fine - coarse) <= self.spec.abs_tolerance * z[pending] ** 2
            result[pending[ok]] = fine[ok]
            pending = pending[~ok]
            coarse = fine[~ok]
            if pending.size == 0:
                return result / z**2
        raise QuadratureError(
            f"overlap integrals for n={ns[pending].tolist()} did not converge "
            f"(p={self.target.p}, q={self.target.q}, p'={self.p_prime})"
        )

    def extend(self, l: int):
        """Make sure terms ``1..l`` are available."""
        if l <= len(self._overlaps):
            return
        with self._lock:
            start = len(self._overlaps) + 1
            if l < start:
                return
            zeros = self.table.roots_up_to(self.p_prime, l)
            ns = np.arange(start, l + 1)
            ratio = np.ceil(self._u_target / zeros[ns - 1]).astype(int)
            base = self.spec.panels_per_oscillation * np.maximum(ratio, 1)
            overlaps = np.empty(ns.size)
            for b in np.unique(base):
                sel = base == b
                overlaps[sel] = self._overlap_block(ns[sel], zeros, int(b))
            _, nxt = bessel_j_pair(self.p_prime, zeros[ns - 1])
            self._overlaps.extend(overlaps.tolist())
            self._next_norms.extend(np.atleast_1d(nxt).tolist())

    def overlap(self, n: int) -> float:
        """``integral_0^1 J_p(u_{p,q} t) J_{p'}(u_{p',n} t) t dt``."""
        self.extend(n)
        return self._overlaps[n - 1]

    def contribution(self, n: int) -> float:
        self.extend(n)
        return (self._overlaps[n - 1] / self._next_norms[n - 1]) ** 2

    def coefficient(self, n: int) -> float:
        self.extend(n)
        return 2.0 * self._overlaps[n - 1] / self._next_norms[n - 1] ** 2

    def contributions(self, l: int) -> np.ndarray:
        self.extend(l)
        return (np.asarray(self._overlaps[:l]) / np.asarray(self._next_norms[:l])) ** 2

    def coefficients(self, l: int) -> np.ndarray:
        self.extend(l)
        return 2.0 * np.asarray(self._overlaps[:l]) / np.asarray(self._next_norms[:l]) ** 2

    def cumulative(self, l: int) -> np.ndarray:
        return np.cumsum(self.contributions(l))

    def partial_sum(self, l: int) -> PartialSum:
        c = self.coefficients(l)
        t = self.contributions(l)
        terms = tuple(ExpansionTerm(n + 1, float(c[n]), float(t[n])) for n in range(l))
        return PartialSum(self.p_prime, terms, np.cumsum(t))


_cache: dict = {}
_cache_lock = threading.Lock()


def expansion(target: TargetFunction, p_prime, spec: QuadratureSpec = DEFAULT_SPEC) -> FourierBesselExpansion:
    """Shared, incrementally extended expansion for ``(target, p')`` on the default root table."""
    table = default_table()
    key = (target, float(p_prime), spec, id(table))
    with _cache_lock:
        exp = _cache.get(key)
        if exp is None:
            exp = _cache[key] = FourierBesselExpansion(target, p_prime, spec, table)
        return exp


def clear_cache():
    with _cache_lock:
        _cache.clear()


def overlap_term(target: TargetFunction, p_prime, n: int, spec: QuadratureSpec = DEFAULT_SPEC,
                 R: float = 1.0) -> float:
    """Contribution ``T_n``.

    With ``R != 1`` the integral is computed on ``[0, R]`` by the general
    inner-product engine and normalised by ``R**2``; the result is independent
    of ``R``.
    """
    if n < 1:
        raise DomainError(f"term index must be >= 1, got {n}")
    if R == 1.0:
        return expansion(target, p_prime, spec).contribution(n)
    table = default_table()
    pp = Order(float(p_prime)).value
    phi = basis_function(pp, n, R, table)
    ip = inner_product(target.radial(R, table), phi, spec)
    return (ip / (R * R * bessel_j(pp + 1.0, table.root(pp, n)))) ** 2


def partial_sums(target: TargetFunction, p_prime, l_max: int, spec: QuadratureSpec = DEFAULT_SPEC) -> PartialSum:
    if l_max < 1:
        raise DomainError(f"l_max must be >= 1, got {l_max}")
    return expansion(target, p_prime, spec).partial_sum(l_max)


def truncation_error(target: TargetFunction, p_prime, l: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``||x - x_l||`` in the ``L2'`` norm on ``[0, 1]``, from the contribution sum."""
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l}")
    cum = expansion(target, p_prime, spec).cumulative(l)[-1]
    return math.sqrt(max(0.0, target.norm_squared() - 2.0 * cum))


def reconstruct(target: TargetFunction, p_prime, l: int, t, spec: QuadratureSpec = DEFAULT_SPEC):
    """Partial sum ``x_l(t) = sum_{n<=l} c_n J_{p'}(u_{p',n} t)`` for ``t`` in ``[0, 1]``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0) or np.any(t_arr > 1.0):
        raise DomainError("t must lie in [0, 1]")
    exp = expansion(target, p_prime, spec)
    c = exp.coefficients(l)
    z = exp.table.roots_up_to(exp.p_prime, l)
    vals = kernels.jv(exp.p_prime, np.multiply.outer(np.atleast_1d(t_arr), z))
    out = vals @ c
    return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def residual_function(target: TargetFunction, p_prime, l: int, spec: QuadratureSpec = DEFAULT_SPEC) -> RadialFunction:
    """``x - x_l`` as a radial function, with the basis zeros of ``J_{p'}(u_{p',l} t)`` as breakpoints."""
    table = default_table()
    pp = Order(float(p_prime)).value
    x = target.radial(1.0, table)
    z = table.roots_up_to(pp, l)
    approx = RadialFunction(lambda t: reconstruct(target, pp, l, t, spec), 1.0, tuple(z[:-1] / z[-1]))
    return x - approx

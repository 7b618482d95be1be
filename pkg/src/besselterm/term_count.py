"""Minimal number of Fourier-Bessel terms for a given error ratio ``eps / R``.

The smallest ``l`` with ``||x - x_l|| < eps`` is the smallest ``l`` whose
cumulative contribution sum strictly exceeds

    threshold = J_{p+1}(u_{p,q})**2 / 4 - (eps / R)**2 / 2.

A negative threshold means a single term already suffices.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DomainError, LMaxExceeded
from .fbse import TargetFunction, expansion
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .special_functions import Order

__all__ = [
    "DEFAULT_L_MAX",
    "SweepRow",
    "SweepTable",
    "TermCountQuery",
    "TermCountResult",
    "counts_for_eps",
    "min_terms",
    "monotonicity_report",
    "monotonicity_violations",
    "order_profile",
    "sweep",
    "threshold",
]

log = logging.getLogger(__name__)

DEFAULT_L_MAX = 1000
_FIRST_CHUNK = 32


@dataclass(frozen=True)
class TermCountQuery:
    target: TargetFunction
    p_prime: float
    eps_ratio: float
    l_max: int = DEFAULT_L_MAX

    def __post_init__(self):
        object.__setattr__(self, "p_prime", Order(float(self.p_prime)).value)
        if not self.eps_ratio > 0.0:
            raise DomainError(f"eps_ratio must be > 0, got {self.eps_ratio}")
        if self.l_max < 1:
            raise DomainError(f"l_max must be >= 1, got {self.l_max}")


@dataclass(frozen=True)
class TermCountResult:
    l: int
    threshold: float
    achieved_sum: float
    shortcut_used: bool


def threshold(target: TargetFunction, eps_ratio: float) -> float:
    if not eps_ratio > 0.0:
        raise DomainError(f"eps_ratio must be > 0, got {eps_ratio}")
    return 0.5 * target.norm_squared() - 0.5 * eps_ratio**2


def _first_exceeding(cumulative: np.ndarray, thr: float):
    hits = np.flatnonzero(cumulative > thr)
    return int(hits[0]) + 1 if hits.size else None


def counts_for_eps(target: TargetFunction, p_prime, eps_ratios, l_max: int = DEFAULT_L_MAX,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> list[TermCountResult]:
    """Term counts for several ``eps / R`` against one shared, growing expansion."""
    exp = expansion(target, p_prime, spec)
    thresholds = [threshold(target, e) for e in eps_ratios]
    results: list[TermCountResult | None] = [None] * len(thresholds)
    for i, thr in enumerate(thresholds):
        if thr < 0.0:
            results[i] = TermCountResult(1, thr, float(exp.cumulative(1)[0]), True)
    size = min(l_max, max(len(exp), _FIRST_CHUNK))
    while True:
        cum = exp.cumulative(size)
        for i, thr in enumerate(thresholds):
            if results[i] is None:
                l = _first_exceeding(cum, thr)
                if l is not None:
                    results[i] = TermCountResult(l, thr, float(cum[l - 1]), False)
        if all(r is not None for r in results):
            return results
        if size >= l_max:
            i = next(k for k, r in enumerate(results) if r is None)
            raise LMaxExceeded(l_max, thresholds[i], float(cum[l_max - 1]))
        size = min(l_max, 2 * size)


def min_terms(query: TermCountQuery, spec: QuadratureSpec = DEFAULT_SPEC) -> TermCountResult:
    """Smallest ``l`` whose cumulative contribution strictly exceeds the threshold."""
    return counts_for_eps(query.target, query.p_prime, [query.eps_ratio], query.l_max, spec)[0]


@dataclass(frozen=True, order=True)
class SweepRow:
    p: float
    q: int
    p_prime: float
    eps_ratio: float
    l: int


@dataclass
class SweepTable:
    rows: list = field(default_factory=list)

    def __post_init__(self):
        keys = [(r.p, r.q, r.p_prime, r.eps_ratio) for r in self.rows]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate sweep rows")

    def lookup(self, p, q, p_prime, eps_ratio) -> int:
        for r in self.rows:
            if (r.p, r.q, r.p_prime, r.eps_ratio) == (p, q, p_prime, eps_ratio):
                return r.l
        raise KeyError((p, q, p_prime, eps_ratio))

    def __len__(self):
        return len(self.rows)


def _sweep_cell(args):
    target, p_prime, eps_ratios, l_max, spec = args
    results = counts_for_eps(target, p_prime, eps_ratios, l_max, spec)
    log.info("sweep: p=%g q=%d p'=%g done (max l=%d)", target.p, target.q, p_prime,
             max(r.l for r in results))
    return [SweepRow(target.p, target.q, float(p_prime), float(e), r.l)
            for e, r in zip(eps_ratios, results)]


def sweep(targets, p_primes, eps_ratios, l_max: int = DEFAULT_L_MAX,
          spec: QuadratureSpec = DEFAULT_SPEC, workers: int | None = None) -> SweepTable:
    """Term counts over the full grid ``targets x p_primes x eps_ratios``.

    Cells sharing ``(target, p')`` reuse one expansion. With ``workers > 1`` the
    groups run in separate processes; rows are sorted by ``(p, q, p', eps)``
    either way.
    """
    targets = list(targets)
    p_primes = [Order(float(v)).value for v in p_primes]
    eps_ratios = [float(e) for e in eps_ratios]
    if not targets or not p_primes or not eps_ratios:
        raise DomainError("sweep needs non-empty target, p' and eps lists")
    for e in eps_ratios:
        if not e > 0.0:
            raise DomainError(f"eps_ratio must be > 0, got {e}")
    jobs = [(t, pp, eps_ratios, l_max, spec) for t, pp in product(targets, p_primes)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(_sweep_cell, jobs))
    else:
        groups = [_sweep_cell(j) for j in jobs]
    rows = sorted(r for g in groups for r in g)
    return SweepTable(rows)


def order_profile(target: TargetFunction, p_prime_max: int, eps_ratio: float,
                  l_max: int = DEFAULT_L_MAX, spec: QuadratureSpec = DEFAULT_SPEC) -> dict[int, int]:
    """Term count for every integer ``p'`` in ``0..p_prime_max``."""
    return {
        pp: min_terms(TermCountQuery(target, pp, eps_ratio, l_max), spec).l
        for pp in range(int(p_prime_max) + 1)
    }


def monotonicity_violations(profile: dict[int, int], p: float) -> list[tuple[int, int]]:
    """Adjacent ``(p'_1, p'_2)`` pairs breaking the expected V shape around ``p``.

    Left of ``p`` the count must not increase towards ``p``; right of ``p`` it
    must not decrease away from it. Pairs straddling a non-integer ``p`` are
    not classified.
    """
    orders = sorted(profile)
    bad = []
    for a, b in zip(orders, orders[1:]):
        if b <= p and profile[a] < profile[b]:
            bad.append((a, b))
        elif a >= p and profile[b] < profile[a]:
            bad.append((a, b))
    return bad


def monotonicity_report(target: TargetFunction, p_prime_max: int, eps_ratio: float,
                        l_max: int = DEFAULT_L_MAX, spec: QuadratureSpec = DEFAULT_SPEC) -> list[tuple[int, int]]:
    if p_prime_max < target.p:
        raise DomainError("p_prime_max must be >= p")
    return monotonicity_violations(order_profile(target, p_prime_max, eps_ratio, l_max, spec), target.p)

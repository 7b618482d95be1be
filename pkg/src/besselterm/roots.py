"""Positive zeros ``u_{nu,q}`` of ``J_nu`` with an optional on-disk cache.

Zeros are found in index order. Each one is bracketed by scanning forward from
the previous zero (or from a lower bound on the first zero) in steps shorter
than the smallest possible gap, then refined by Newton's method seeded with
McMahon's asymptotic estimate and safeguarded by bisection.
"""

from __future__ import annotations

import csv
import math
import os
import threading
from pathlib import Path

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError
from .special_functions import Order

__all__ = [
    "CACHE_ENV",
    "CACHE_FILENAME",
    "RootTable",
    "default_table",
    "mcmahon_estimate",
    "root",
    "roots_up_to",
    "set_cache_dir",
]

CACHE_ENV = "BESSELTERM_CACHE_DIR"
CACHE_FILENAME = "bessel_roots.csv"
_HEADER = ["order", "index", "root"]
_SCAN_STEP = 0.5
_MAX_SCAN = 100_000
_MAX_NEWTON = 100


def mcmahon_estimate(nu: float, q: int) -> float:
    """McMahon's large-``q`` expansion for the ``q``-th zero of ``J_nu``."""
    mu = 4.0 * nu * nu
    beta = (q + 0.5 * nu - 0.25) * math.pi
    e = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / e
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e**5)
    )


def _pair(nu, x):
    j0, j1 = kernels.jv_pair(nu, np.array([x]))
    return float(j0[0]), float(j1[0])


def _value_and_slope(nu, x):
    j0, j1 = _pair(nu, x)
    return j0, nu / x * j0 - j1


def _bracket_next(nu, start):
    """First sign change of ``J_nu`` strictly after ``start``."""
    a = start
    fa = _pair(nu, a)[0]
    for _ in range(_MAX_SCAN):
        b = a + _SCAN_STEP
        fb = _pair(nu, b)[0]
        if fa == 0.0:
            return a, a
        if fa * fb <= 0.0:
            return a, b
        a, fa = b, fb
    raise ConvergenceError(f"no sign change of J_{nu} found after x={start}")


def _first_start(nu):
    # j_{nu,1}**2 > (nu+1)(nu+5); J_nu > 0 on (0, j_{nu,1})
    x = 0.9 * math.sqrt((nu + 1.0) * (nu + 5.0))
    while _pair(nu, x)[0] <= 0.0:
        x *= 0.5
    return x


def _refine(nu, q, a, b, tol):
    if a == b:
        return a
    fa = _pair(nu, a)[0]
    guess = mcmahon_estimate(nu, q)
    x = guess if a < guess < b else 0.5 * (a + b)
    for _ in range(_MAX_NEWTON):
        f, df = _value_and_slope(nu, x)
        if f == 0.0:
            return x
        if (f > 0.0) == (fa > 0.0):
            a, fa = x, f
        else:
            b = x
        step = f / df if df != 0.0 else math.inf
        x_new = x - step
        if not a < x_new < b:
            x_new = 0.5 * (a + b)
        if abs(x_new - x) <= 4.0 * np.finfo(float).eps * x:
            x = x_new
            break
        x = x_new
    else:
        raise ConvergenceError(f"zero {q} of J_{nu} did not converge in bracket [{a}, {b}]")
    if abs(_pair(nu, x)[0]) > tol:
        raise ConvergenceError(f"zero {q} of J_{nu} refined to {x} but |J| exceeds {tol}")
    return x


class RootTable:
    """Cache of zeros keyed by ``(order, index)``.

    Reads are lock-free; computing and inserting new zeros is serialised so
    each zero is computed once. With ``cache_dir`` set (or, failing that,
    ``BESSELTERM_CACHE_DIR``), entries are loaded from and appended to
    ``cache_dir/bessel_roots.csv``.
    """

    def __init__(self, cache_dir=None, tolerance: float = 1e-12):
        self.tolerance = tolerance
        self._entries: dict[tuple[float, int], float] = {}
        self._lock = threading.Lock()
        cache_dir = cache_dir or os.environ.get(CACHE_ENV) or None
        self.path = Path(cache_dir) / CACHE_FILENAME if cache_dir else None
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, newline="") as fh:
            for row in csv.DictReader(fh):
                self._entries[(float(row["order"]), int(row["index"]))] = float(row["root"])

    def _persist(self, rows):
        if self.path is None or not rows:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        new = not self.path.exists()
        with open(self.path, "a", newline="") as fh:
            writer = csv.writer(fh)
            if new:
                writer.writerow(_HEADER)
            for nu, q, u in rows:
                writer.writerow([f"{nu:.17g}", q, f"{u:.17g}"])

    def __len__(self):
        return len(self._entries)

    def __contains__(self, key):
        nu, q = key
        return (float(nu), int(q)) in self._entries

    def _known_prefix(self, nu):
        k = 0
        while (nu, k + 1) in self._entries:
            k += 1
        return k

    def _ensure(self, nu: float, count: int):
        if (nu, count) in self._entries:
            return
        with self._lock:
            k = self._known_prefix(nu)
            new_rows = []
            prev = self._entries[(nu, k)] if k else None
            for q in range(k + 1, count + 1):
                start = _first_start(nu) if prev is None else prev + 1e-9 * prev
                a, b = _bracket_next(nu, start)
                u = _refine(nu, q, a, b, self.tolerance)
                if prev is not None and not u > prev:
                    raise ConvergenceError(f"zero {q} of J_{nu} not above zero {q - 1}")
                self._entries[(nu, q)] = u
                new_rows.append((nu, q, u))
                prev = u
            self._persist(new_rows)

    def root(self, nu, q: int) -> float:
        """The ``q``-th positive zero of ``J_nu``."""
        v = Order(float(nu)).value
        q = int(q)
        if q < 1:
            raise DomainError(f"zero index must be >= 1, got {q}")
        self._ensure(v, q)
        return self._entries[(v, q)]

    def roots_up_to(self, nu, count: int) -> np.ndarray:
        """The first ``count`` positive zeros of ``J_nu`` as an increasing array."""
        v = Order(float(nu)).value
        count = int(count)
        if count < 1:
            raise DomainError(f"count must be >= 1, got {count}")
        self._ensure(v, count)
        return np.array([self._entries[(v, q)] for q in range(1, count + 1)])


_default: RootTable | None = None
_default_lock = threading.Lock()


def default_table() -> RootTable:
    """The process-wide table, cached on disk when ``BESSELTERM_CACHE_DIR`` is set."""
    global _default
    with _default_lock:
        if _default is None:
            _default = RootTable()
        return _default


def set_cache_dir(cache_dir) -> RootTable:
    """Replace the process-wide table with one backed by ``cache_dir`` (``None`` falls back to the environment)."""
    global _default
    with _default_lock:
        _default = RootTable(cache_dir)
        return _default


def root(nu, q: int) -> float:
    return default_table().root(nu, q)


def roots_up_to(nu, count: int) -> np.ndarray:
    return default_table().roots_up_to(nu, count)

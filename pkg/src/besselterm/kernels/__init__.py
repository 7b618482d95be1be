"""Hot numeric kernels with a compiled and a pure-numpy implementation.

The compiled (numba) path is used by default. Set ``BESSELTERM_DISABLE_NUMBA=1``
to force the numpy path; it is also used automatically if numba cannot be
imported. Both expose the same functions:

``jv(nu, x)``, ``jv_pair(nu, x)``
    Bessel function of the first kind on an array (and its ``nu + 1`` partner).
``target_weighted_sums(p, betas, x, weights, counts)``
    Prefix-weighted sums of ``J_p(beta * x)``, the inner loop of the
    Fourier-Bessel overlap integrals.
``hankel_sums(nu, alphas, r, weights)``
    Quadrature-weighted Hankel kernel sums for many transform variables.
"""

import os
from types import ModuleType

from . import numpy_kernels

ENV_FLAG = "BESSELTERM_DISABLE_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


def get_backend(name: str) -> ModuleType:
    """Return the kernel module for ``"numba"`` or ``"numpy"``."""
    if name == "numpy":
        return numpy_kernels
    if name == "numba":
        from . import numba_kernels

        return numba_kernels
    raise ValueError(f"unknown kernel backend {name!r}")


if _numba_disabled():
    _impl = numpy_kernels
    BACKEND = "numpy"
else:
    try:
        _impl = get_backend("numba")
        BACKEND = "numba"
    except ImportError:
        _impl = numpy_kernels
        BACKEND = "numpy"

jv = _impl.jv
jv_pair = _impl.jv_pair
target_weighted_sums = _impl.target_weighted_sums
hankel_sums = _impl.hankel_sums

__all__ = [
    "BACKEND",
    "ENV_FLAG",
    "get_backend",
    "hankel_sums",
    "jv",
    "jv_pair",
    "target_weighted_sums",
]

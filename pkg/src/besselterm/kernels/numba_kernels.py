"""Compiled kernels (numba).

Every public function here has a numpy twin of the same name and signature in
:mod:`besselterm.kernels.numpy_kernels`; the two must agree to rounding.
"""

import math

import numpy as np
from numba import njit

_BIG = 1e250
_SMALL = 1e-250
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@njit(cache=True)
def _series_pair(nu, x):
    half = 0.5 * x
    q = -half * half
    t0 = math.exp(nu * math.log(half) - math.lgamma(nu + 1.0))
    t1 = t0 * half / (nu + 1.0)
    s0 = t0
    s1 = t1
    for k in range(1, 400):
        t0 *= q / (k * (k + nu))
        t1 *= q / (k * (k + nu + 1.0))
        s0 += t0
        s1 += t1
        if abs(t0) <= 1e-17 * abs(s0) + 1e-300 and abs(t1) <= 1e-17 * abs(s1) + 1e-300:
            break
    return s0, s1


@njit(cache=True)
def _asymptotic(nu, x):
    mu4 = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    term = 1.0
    prev = math.inf
    for k in range(1, 400):
        term *= (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        at = abs(term)
        if at > prev:
            break
        prev = at
        r = k % 4
        if r == 1:
            q += term
        elif r == 2:
            p -= term
        elif r == 3:
            q -= term
        else:
            p += term
        if at < 1e-17:
            break
    chi = x - (0.5 * nu + 0.25) * math.pi
    return _SQRT_2_OVER_PI / math.sqrt(x) * (p * math.cos(chi) - q * math.sin(chi))


@njit(cache=True)
def _miller_pair(nu, x):
    if nu < 0.0:
        # the normalising sum cancels as nu -> -1; step down from nu + 1 instead
        j1, j2 = _miller_pair(nu + 1.0, x)
        return 2.0 * (nu + 1.0) / x * j1 - j2, j1
    m = int(math.floor(nu))
    mu = nu - m
    big = max(nu + 1.0, x)
    n_top = int(big) + 20 + int(math.sqrt(40.0 * big))
    if n_top % 2:
        n_top += 1
    kk = n_top // 2
    a = (mu + 2.0 * kk) * math.exp(
        math.lgamma(mu + kk) - math.lgamma(mu + 1.0) - math.lgamma(kk + 1.0)
    )
    f_up = 0.0
    f = 1e-30
    s = a * f
    jm = 0.0
    jm1 = 0.0
    two_over_x = 2.0 / x
    for j in range(n_top, 0, -1):
        f_down = (mu + j) * two_over_x * f - f_up
        f_up = f
        f = f_down
        jj = j - 1
        if jj == m:
            jm = f
            jm1 = f_up
        if jj % 2 == 0:
            k = jj // 2
            if k == 0:
                a = 1.0
            else:
                a = a * (mu + 2.0 * k) / (mu + 2.0 * k + 2.0) * (k + 1.0) / (mu + k)
            s += a * f
        if abs(f) > _BIG:
            f *= _SMALL
            f_up *= _SMALL
            s *= _SMALL
            jm *= _SMALL
            jm1 *= _SMALL
    norm = math.exp(mu * math.log(0.5 * x) - math.lgamma(mu + 1.0)) / s
    return jm * norm, jm1 * norm


@njit(cache=True)
def _use_asymptotic(nu, x):
    return x >= 25.0 and x >= 0.5 * (nu + 1.0) ** 2


@njit(cache=True)
def jpair_scalar(nu, x):
    """Return ``(J_nu(x), J_{nu+1}(x))`` for ``nu > -1`` and ``x >= 0``."""
    if x == 0.0:
        if nu == 0.0:
            return 1.0, 0.0
        if nu > 0.0:
            return 0.0, 0.0
        return math.inf, 0.0
    if x <= 4.0 or x * x <= 2.0 * (nu + 1.0):
        return _series_pair(nu, x)
    if _use_asymptotic(nu, x):
        return _asymptotic(nu, x), _asymptotic(nu + 1.0, x)
    return _miller_pair(nu, x)


@njit(cache=True)
def jv_scalar(nu, x):
    if _use_asymptotic(nu, x):
        return _asymptotic(nu, x)
    return jpair_scalar(nu, x)[0]


@njit(cache=True)
def jv(nu, x):
    out = np.empty(x.size)
    flat = x.ravel()
    for i in range(flat.size):
        out[i] = jv_scalar(nu, flat[i])
    return out.reshape(x.shape)


@njit(cache=True)
def jv_pair(nu, x):
    flat = x.ravel()
    j0 = np.empty(flat.size)
    j1 = np.empty(flat.size)
    for i in range(flat.size):
        a, b = jpair_scalar(nu, flat[i])
        j0[i] = a
        j1[i] = b
    return j0.reshape(x.shape), j1.reshape(x.shape)


@njit(cache=True)
def target_weighted_sums(p, betas, x, weights, counts):
    """``out[i] = sum_{j < counts[i]} weights[j] * J_p(betas[i] * x[j])``."""
    out = np.zeros(betas.size)
    for i in range(betas.size):
        b = betas[i]
        acc = 0.0
        for j in range(counts[i]):
            acc += weights[j] * jv_scalar(p, b * x[j])
        out[i] = acc
    return out


@njit(cache=True)
def hankel_sums(nu, alphas, r, weights):
    """``out[i] = sum_j weights[j] * J_nu(alphas[i] * r[j])``."""
    out = np.zeros(alphas.size)
    for i in range(alphas.size):
        a = alphas[i]
        acc = 0.0
        for j in range(r.size):
            acc += weights[j] * jv_scalar(nu, a * r[j])
        out[i] = acc
    return out

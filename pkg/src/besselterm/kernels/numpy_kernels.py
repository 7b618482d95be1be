"""Vectorised numpy kernels, used when numba is unavailable or disabled.

Same algorithms and region boundaries as the compiled kernels; iteration is
over series/recurrence index with whole arrays per step instead of per point.
"""

from math import lgamma, pi, sqrt

import numpy as np

_BIG = 1e250
_SMALL = 1e-250
_CHUNK = 2048


def _series_pair(nu, x):
    half = 0.5 * x
    q = -half * half
    t0 = np.exp(nu * np.log(half) - lgamma(nu + 1.0))
    t1 = t0 * half / (nu + 1.0)
    s0 = t0.copy()
    s1 = t1.copy()
    for k in range(1, 400):
        t0 = t0 * q / (k * (k + nu))
        t1 = t1 * q / (k * (k + nu + 1.0))
        s0 += t0
        s1 += t1
        done = (np.abs(t0) <= 1e-17 * np.abs(s0) + 1e-300) & (
            np.abs(t1) <= 1e-17 * np.abs(s1) + 1e-300
        )
        if done.all():
            break
    return s0, s1


def _asymptotic(nu, x):
    mu4 = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 400):
        term = term * ((mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x))
        at = np.abs(term)
        active &= at <= prev
        prev = np.where(active, at, prev)
        add = np.where(active, term, 0.0)
        r = k % 4
        if r == 1:
            q += add
        elif r == 2:
            p -= add
        elif r == 3:
            q -= add
        else:
            p += add
        active &= at >= 1e-17
        if not active.any():
            break
    chi = x - (0.5 * nu + 0.25) * pi
    return sqrt(2.0 / pi) / np.sqrt(x) * (p * np.cos(chi) - q * np.sin(chi))


def _miller_chunk(nu, x):
    if nu < 0.0:
        # the normalising sum cancels as nu -> -1; step down from nu + 1 instead
        j1, j2 = _miller_chunk(nu + 1.0, x)
        return 2.0 * (nu + 1.0) / x * j1 - j2, j1
    m = int(np.floor(nu))
    mu = nu - m
    big = max(nu + 1.0, float(x.max()))
    n_top = int(big) + 20 + int(sqrt(40.0 * big))
    if n_top % 2:
        n_top += 1
    kk = n_top // 2
    a = (mu + 2.0 * kk) * np.exp(lgamma(mu + kk) - lgamma(mu + 1.0) - lgamma(kk + 1.0))
    f_up = np.zeros_like(x)
    f = np.full_like(x, 1e-30)
    s = a * f
    jm = np.zeros_like(x)
    jm1 = np.zeros_like(x)
    two_over_x = 2.0 / x
    for j in range(n_top, 0, -1):
        f_down = (mu + j) * two_over_x * f - f_up
        f_up = f
        f = f_down
        jj = j - 1
        if jj == m:
            jm = f.copy()
            jm1 = f_up.copy()
        if jj % 2 == 0:
            k = jj // 2
            if k == 0:
                a = 1.0
            else:
                a = a * (mu + 2.0 * k) / (mu + 2.0 * k + 2.0) * (k + 1.0) / (mu + k)
            s = s + a * f
        over = np.abs(f) > _BIG
        if over.any():
            scale = np.where(over, _SMALL, 1.0)
            f = f * scale
            f_up = f_up * scale
            s = s * scale
            jm = jm * scale
            jm1 = jm1 * scale
    norm = np.exp(mu * np.log(0.5 * x) - lgamma(mu + 1.0)) / s
    return jm * norm, jm1 * norm


def _miller_pair(nu, x):
    # chunks share a starting index, so keep their argument ranges narrow
    order = np.argsort(x)
    xs = x[order]
    j0 = np.empty_like(x)
    j1 = np.empty_like(x)
    start = 0
    while start < xs.size:
        stop = min(start + _CHUNK, int(np.searchsorted(xs, 1.25 * xs[start] + 8.0, side="right")))
        idx = order[start:stop]
        j0[idx], j1[idx] = _miller_chunk(nu, x[idx])
        start = stop
    return j0, j1


def _regions(nu, x):
    zero = x == 0.0
    series = ~zero & ((x <= 4.0) | (x * x <= 2.0 * (nu + 1.0)))
    asym = ~zero & ~series & (x >= 25.0) & (x >= 0.5 * (nu + 1.0) ** 2)
    miller = ~(zero | series | asym)
    return zero, series, asym, miller


def _zero_value(nu):
    if nu == 0.0:
        return 1.0
    return 0.0 if nu > 0.0 else np.inf


def jv_pair(nu, x):
    nu = float(nu)
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    j0 = np.empty_like(flat)
    j1 = np.empty_like(flat)
    zero, series, asym, miller = _regions(nu, flat)
    j0[zero] = _zero_value(nu)
    j1[zero] = 0.0
    if series.any():
        j0[series], j1[series] = _series_pair(nu, flat[series])
    if asym.any():
        j0[asym] = _asymptotic(nu, flat[asym])
        j1[asym] = _asymptotic(nu + 1.0, flat[asym])
    if miller.any():
        j0[miller], j1[miller] = _miller_pair(nu, flat[miller])
    return j0.reshape(x.shape), j1.reshape(x.shape)


def jv(nu, x):
    nu = float(nu)
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty_like(flat)
    zero, series, asym, miller = _regions(nu, flat)
    out[zero] = _zero_value(nu)
    if series.any():
        out[series] = _series_pair(nu, flat[series])[0]
    if asym.any():
        out[asym] = _asymptotic(nu, flat[asym])
    if miller.any():
        out[miller] = _miller_pair(nu, flat[miller])[0]
    return out.reshape(x.shape)


def target_weighted_sums(p, betas, x, weights, counts):
    """``out[i] = sum_{j < counts[i]} weights[j] * J_p(betas[i] * x[j])``."""
    out = np.zeros(betas.size)
    for i, (b, c) in enumerate(zip(betas, counts)):
        out[i] = weights[:c] @ jv(p, b * x[:c])
    return out


def hankel_sums(nu, alphas, r, weights):
    """``out[i] = sum_j weights[j] * J_nu(alphas[i] * r[j])``."""
    out = np.empty(alphas.size)
    rows = max(1, (1 << 20) // max(r.size, 1))
    for start in range(0, alphas.size, rows):
        block = alphas[start:start + rows]
        out[start:start + rows] = jv(nu, np.multiply.outer(block, r)) @ weights
    return out

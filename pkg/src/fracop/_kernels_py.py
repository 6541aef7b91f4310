"""Pure-Python implementations of the scalar numerical kernels.

This module is the fallback twin of the compiled ``fracop._kernels``
extension: same algorithms, same constants, same branch points, so both
backends agree to rounding error.  Selection happens in ``fracop._backend``.
"""

import math

import numpy as np

COMPILED = False

# Lanczos approximation, g = 7, 9 coefficients.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_MACHEP = 1.11022302462515654042e-16
_BIG = 4.503599627370496e15
_BIGINV = 2.22044604925031308085e-16
_SQRT_TWO_PI = 2.5066282746310002


def _lanczos_sum(z):
    # z already shifted by -1
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (z + i)
    return acc


def gamma(z: float) -> float:
    """Gamma function for real z, excluding the poles at 0, -1, -2, ..."""
    if z <= 0.0 and z == math.floor(z):
        raise ValueError(f"gamma pole at z={z!r}")
    if z < 0.5:
        # reflection; sin(pi z) != 0 away from the poles
        return math.pi / (math.sin(math.pi * z) * gamma(1.0 - z))
    zz = z - 1.0
    t = zz + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (zz + 0.5) * math.exp(-t) * _lanczos_sum(zz)


def log_gamma(z: float) -> float:
    """Natural log of Gamma(z) for z > 0."""
    if z <= 0.0:
        raise ValueError(f"log_gamma requires z > 0, got {z!r}")
    if z < 0.5:
        return math.log(math.pi / math.sin(math.pi * z)) - log_gamma(1.0 - z)
    zz = z - 1.0
    t = zz + _LANCZOS_G + 0.5
    return (
        0.5 * math.log(2.0 * math.pi)
        + (zz + 0.5) * math.log(t)
        - t
        + math.log(_lanczos_sum(zz))
    )


def lower_inc_gamma_series(mu: float, x: float) -> float:
    """Lower incomplete gamma by its power series (preferred for x < mu + 1)."""
    if x == 0.0:
        return 0.0
    # gamma(mu, x) = x^mu e^-x Gamma(mu) * sum_k x^k / Gamma(mu + k + 1)
    ax = mu * math.log(x) - x - log_gamma(mu)
    ax = math.exp(ax)
    r = mu
    c = 1.0
    acc = 1.0
    while True:
        r += 1.0
        c *= x / r
        acc += c
        if c <= acc * _MACHEP:
            break
    return acc * ax / mu * gamma(mu)


def lower_inc_gamma_contfrac(mu: float, x: float) -> float:
    """Lower incomplete gamma via the continued fraction of the upper function.

    Reliable for x >= mu + 1; the fraction can hit a zero convergent below that.
    """
    ax = mu * math.log(x) - x - log_gamma(mu)
    ax = math.exp(ax)
    y = 1.0 - mu
    z = x + y + 1.0
    c = 0.0
    pkm2, qkm2 = 1.0, x
    pkm1, qkm1 = x + 1.0, z * x
    ans = pkm1 / qkm1
    while True:
        c += 1.0
        y += 1.0
        z += 2.0
        yc = y * c
        pk = pkm1 * z - pkm2 * yc
        qk = qkm1 * z - qkm2 * yc
        if qk != 0.0:
            r = pk / qk
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk
        if abs(pk) > _BIG:
            pkm2 *= _BIGINV
            pkm1 *= _BIGINV
            qkm2 *= _BIGINV
            qkm1 *= _BIGINV
        if t <= _MACHEP:
            break
    upper = ans * ax * gamma(mu)
    return gamma(mu) - upper


def lower_inc_gamma(mu: float, x: float) -> float:
    """gamma(mu, x) = int_0^x e^-t t^(mu-1) dt for mu > 0, x >= 0."""
    if mu <= 0.0:
        raise ValueError(f"lower_inc_gamma requires mu > 0, got {mu!r}")
    if x < 0.0:
        raise ValueError(f"lower_inc_gamma requires x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if x < mu + 1.0:
        return lower_inc_gamma_series(mu, x)
    return lower_inc_gamma_contfrac(mu, x)


def tempered_dot(w, u, f, sl: float) -> float:
    """sum_i w[i] * exp(-sl * u[i]) * f[i] (quadrature accumulation)."""
    if sl == 0.0:
        return float(np.dot(w, f))
    return float(np.dot(w, np.exp(-sl * np.asarray(u)) * f))


def gamma_map(z):
    out = np.empty(len(z))
    for i, zz in enumerate(z):
        out[i] = gamma(zz)
    return out


def lower_inc_gamma_map(mu: float, x):
    out = np.empty(len(x))
    for i, xx in enumerate(x):
        out[i] = lower_inc_gamma(mu, xx)
    return out

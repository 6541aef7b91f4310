"""Gamma-family special functions used by the operator engine and the norms.

The heavy lifting lives in the selected kernel backend (compiled or pure
Python, see :mod:`fracop._backend`); this module adds domain checks, the
signed reciprocal used by the closed-form derivative, and a fault-injection
hook for the mutation smoke test.
"""

import math
import os

from fracop._backend import kernels

__all__ = [
    "gamma",
    "log_gamma",
    "lower_incomplete_gamma",
    "reciprocal_gamma",
    "gamma_ratio",
]

# Test hook: relative perturbation applied to every gamma() result, so the
# verification suites can demonstrate that they catch a wrong Gamma.
_MUTATION = 1.0 + float(os.environ.get("FRACOP_GAMMA_MUTATION", "0") or 0.0)


def gamma(z: float) -> float:
    """Gamma(z) for real z away from the poles at 0, -1, -2, ..."""
    return kernels.gamma(z) * _MUTATION


def log_gamma(z: float) -> float:
    """ln Gamma(z) for z > 0."""
    return kernels.log_gamma(z) + math.log(_MUTATION)


def lower_incomplete_gamma(mu: float, x: float) -> float:
    """gamma(mu, x) = int_0^x e^-t t^(mu-1) dt, for mu > 0 and x >= 0."""
    return kernels.lower_inc_gamma(mu, x) * _MUTATION


def reciprocal_gamma(z: float) -> float:
    """1 / Gamma(z) for any real z; exactly 0 at the poles 0, -1, -2, ...

    The pole convention is explicit (not a by-product of overflow): the
    reciprocal gamma function is entire with zeros at the non-positive
    integers, and the closed-form fractional derivative relies on those
    zeros annihilating the corresponding terms.
    """
    if z <= 0.0 and z == math.floor(z):
        return 0.0
    if z >= 0.5:
        return math.exp(-log_gamma(z))
    # reflection: 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    return math.sin(math.pi * z) * math.exp(log_gamma(1.0 - z)) / math.pi


def gamma_ratio(p: float, q: float) -> float:
    """Gamma(p) / Gamma(q) for p > 0 and any real q, in log space.

    Returns 0 when q is a non-positive integer (pole of the denominator).
    """
    if q > 0.0:
        return math.exp(log_gamma(p) - log_gamma(q))
    return gamma(p) * reciprocal_gamma(q)

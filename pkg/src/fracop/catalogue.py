"""Derivative-equipped test integrands.

Every entry has the weighted log-coordinate form f(x) = V(x)^(-s) P(theta_rel)
on the left (V(x)^(+s) P on the right), for which the k-fold tempered
log-derivative is simply V^(-s) P^(k)(theta_rel).  The profile P and a stack
of its derivatives ride along on the Integrand, unlocking the engine's
cancellation-free path and analytic derivative handling.

Catalogue entries: logpow(nu) with P = tau^(nu-1) (the operator family's
eigen-functions), constants, polynomials in the relative log coordinate, and
the decaying exponential exp(-theta_rel).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from fracop.monotone import MonotoneMap
from fracop.operators import Integrand, ThetaProfile

__all__ = ["logpow", "constant", "logpoly", "expneg", "parse_integrand"]

_N_DERIVS = 8


def _theta_rel(m: MonotoneMap, anchor: float, side: str):
    ta = float(m.log_value(anchor))
    if side == "left":
        return lambda x: np.asarray(m.log_value(x), dtype=float) - ta
    return lambda x: ta - np.asarray(m.log_value(x), dtype=float)


def _weight(m: MonotoneMap, s: float, side: str):
    sign = -s if side == "left" else s
    if sign == 0.0:
        return lambda x: 1.0
    return lambda x: np.exp(sign * np.asarray(m.log_value(x), dtype=float))


def _assemble(m, s, anchor, side, tag, profile: ThetaProfile) -> Integrand:
    theta = _theta_rel(m, anchor, side)
    w = _weight(m, s, side)
    chain = (profile.fn,) + tuple(profile.derivatives)

    def make_eval(k):
        pk = chain[k]
        return lambda x: w(x) * pk(theta(x))

    return Integrand(
        eval=make_eval(0),
        delta_derivatives=tuple(make_eval(k) for k in range(1, len(chain))),
        tag=tag,
        map=m,
        s=s,
        anchor=anchor,
        side=side,
        profile=profile,
    )


def _pow_profile(nu: float) -> ThetaProfile:
    def deriv(k):
        fall = 1.0
        for i in range(k):
            fall *= nu - 1.0 - i
        e = nu - 1.0 - k
        if fall == 0.0:
            return lambda tau: np.zeros_like(np.asarray(tau, dtype=float))

        def pk(tau, fall=fall, e=e):
            tau = np.asarray(tau, dtype=float)
            with np.errstate(divide="ignore"):
                return fall * tau**e

        return pk

    return ThetaProfile(fn=deriv(0), derivatives=tuple(deriv(k) for k in range(1, _N_DERIVS + 1)))


def _exp_poly_profile(amp: float, lam: float, qcoef: Sequence[float]) -> ThetaProfile:
    # d/dtau [e^(lam tau) q(tau)] = e^(lam tau) (lam q + q'); iterate on coefficients
    chains = [np.asarray(qcoef, dtype=float)]
    for _ in range(_N_DERIVS):
        q = chains[-1]
        dq = npoly.polyder(q) if q.size > 1 else np.zeros(1)
        chains.append(npoly.polyadd(lam * q, dq))

    def make(q):
        if lam == 0.0:
            return lambda tau: amp * npoly.polyval(np.asarray(tau, dtype=float), q)
        return lambda tau: amp * np.exp(lam * np.asarray(tau, dtype=float)) * npoly.polyval(
            np.asarray(tau, dtype=float), q
        )

    return ThetaProfile(fn=make(chains[0]), derivatives=tuple(make(q) for q in chains[1:]))


def logpow(nu: float, m: MonotoneMap, s: float, anchor: float, side: str = "left") -> Integrand:
    """V^(-s) (relative log)^(nu-1): closed-form eigenfunction family."""
    if nu <= 0.0:
        raise ValueError(f"logpow exponent nu must be > 0, got {nu}")
    return _assemble(m, s, anchor, side, f"logpow:nu={nu:g}", _pow_profile(nu))


def constant(c: float, m: MonotoneMap, s: float, anchor: float, side: str = "left") -> Integrand:
    """The constant function f = c (with analytic tempered derivatives s^k c)."""
    sign = 1.0 if side == "left" else -1.0
    amp = c * math.exp(sign * s * float(m.log_value(anchor)))
    return _assemble(m, s, anchor, side, f"const:{c:g}", _exp_poly_profile(amp, s, [1.0]))


def logpoly(coeffs: Sequence[float], m: MonotoneMap, s: float, anchor: float,
            side: str = "left") -> Integrand:
    """Polynomial in the relative log coordinate: f = sum_j b_j theta_rel^j."""
    sign = 1.0 if side == "left" else -1.0
    amp = math.exp(sign * s * float(m.log_value(anchor)))
    tag = "logpoly:" + ",".join(f"{b:g}" for b in coeffs)
    return _assemble(m, s, anchor, side, tag, _exp_poly_profile(amp, s, list(coeffs)))


def expneg(m: MonotoneMap, s: float, anchor: float, side: str = "left") -> Integrand:
    """f = exp(-theta_rel), an eigenfunction of the first-order operator."""
    sign = 1.0 if side == "left" else -1.0
    amp = math.exp(sign * s * float(m.log_value(anchor)))
    return _assemble(m, s, anchor, side, "expneg", _exp_poly_profile(amp, s - 1.0, [1.0]))


def parse_integrand(spec: str, m: MonotoneMap, s: float, anchor: float,
                    side: str = "left") -> Integrand:
    """CLI integrand specs: logpow:nu=2 | const:1 | logpoly:b0,b1,... | expneg."""
    head, _, rest = spec.partition(":")
    if head == "logpow":
        rest = rest.removeprefix("nu=")
        return logpow(float(rest), m, s, anchor, side)
    if head == "const":
        return constant(float(rest or "1"), m, s, anchor, side)
    if head == "logpoly":
        coeffs = [float(v) for v in rest.split(",") if v]
        if not coeffs:
            raise ValueError("logpoly needs at least one coefficient")
        return logpoly(coeffs, m, s, anchor, side)
    if head == "expneg":
        return expneg(m, s, anchor, side)
    raise ValueError(f"unknown integrand spec {spec!r}")

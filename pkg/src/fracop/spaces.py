"""Weighted function spaces, the boundedness constant, and representations.

The weighted norm is

    ||f|| = ( int_a^b |V(x)^c f(x)|^p V'(x)/V(x) dx )^(1/p),

with the p = infinity case taken as a dense-grid supremum (essential suprema
are not computable from point evaluations; all supported test functions are
continuous, so the grid supremum converges).  The boundedness constant K has
two branches, one through the elapsed log span and one through the lower
incomplete gamma function.  The absolutely-continuous representation of the
derivative-admitting class and the boundary-sum form of the derivative round
out the section.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from fracop import specialfn
from fracop.monotone import DeltaOperatorSpec, MonotoneMap, apply_delta
from fracop.operators import (
    DEFAULT_CONFIG,
    Integrand,
    OperatorSpec,
    QuadratureConfig,
    as_integrand,
    _integral_core,
)
from fracop.oracles import anchor_limit, graded_panel_integral

__all__ = [
    "SpaceSpec",
    "AcRepresentation",
    "x_norm",
    "lp_norm",
    "bound_constant_k",
    "holder_estimate_bound",
    "ac_reconstruct",
    "ac_extract",
    "rl_derivative_representation",
]

INF = math.inf

#: grid sizes fixed by the norm and bound contracts
_SUP_GRID = 2049
_MAX_GRID = 4097


@dataclass(frozen=True)
class SpaceSpec:
    """Parameters (p, c, [a, b], map) of the weighted space."""

    p: float
    c: float
    interval: tuple[float, float]
    map: MonotoneMap

    def __post_init__(self):
        if self.p < 1.0:
            raise ValueError(f"p must be >= 1, got {self.p}")
        a, b = self.interval
        if not a < b:
            raise ValueError(f"interval must satisfy a < b, got {self.interval}")
        if not self.map.contains(np.array(self.interval)):
            raise ValueError(f"interval {self.interval} outside map domain")


def x_norm(space: SpaceSpec, f, rel_tol: float = 1e-10) -> float:
    """The weighted p-norm of f over the space's interval.

    Divergent integrals surface as the panel-doubling integrator's
    non-convergence error.  For p = infinity this is a documented
    2049-point grid supremum of V^c |f|.
    """
    f = as_integrand(f)
    a, b = space.interval
    m = space.map
    if space.p == INF:
        xs = np.linspace(a, b, _SUP_GRID)
        vals = np.asarray(m.value(xs), dtype=float) ** space.c * np.abs(
            np.asarray(f.eval(xs), dtype=float)
        )
        return float(np.max(vals))

    def integrand(x):
        w = np.asarray(m.value(x), dtype=float)
        dw = np.asarray(m.derivative(x), dtype=float)
        return np.abs(w**space.c * np.asarray(f.eval(x), dtype=float)) ** space.p * dw / w

    val = graded_panel_integral(
        integrand, a, b, grade_lo=5.0, grade_hi=5.0, rel_tol=rel_tol
    )
    return val ** (1.0 / space.p)


def lp_norm(f, interval: tuple[float, float], p: float, rel_tol: float = 1e-10) -> float:
    """Plain Lebesgue p-norm on the interval (used by the continuity bound)."""
    f = as_integrand(f)
    a, b = interval
    if p == INF:
        xs = np.linspace(a, b, _SUP_GRID)
        return float(np.max(np.abs(np.asarray(f.eval(xs), dtype=float))))

    def integrand(x):
        return np.abs(np.asarray(f.eval(x), dtype=float)) ** p

    val = graded_panel_integral(integrand, a, b, grade_lo=5.0, grade_hi=5.0, rel_tol=rel_tol)
    return val ** (1.0 / p)


def bound_constant_k(mu: float, s: float, c: float, space: SpaceSpec) -> float:
    """Operator-norm bound constant, both branches.

        s = c:  (log V(b)/V(a))^mu / Gamma(mu+1)
        s > c:  (s-c)^-mu gamma(mu, (s-c) log V(b)/V(a)) / Gamma(mu)
    """
    if mu <= 0.0:
        raise ValueError(f"mu must be > 0, got {mu}")
    if s < c:
        raise ValueError(f"the bound requires s >= c, got s={s} < c={c}")
    a, b = space.interval
    span = float(space.map.log_value(b)) - float(space.map.log_value(a))
    if s == c:
        return span**mu / specialfn.gamma(mu + 1.0)
    return (
        (s - c) ** -mu
        * specialfn.lower_incomplete_gamma(mu, (s - c) * span)
        / specialfn.gamma(mu)
    )


def holder_estimate_bound(
    mu: float,
    s: float,
    p: float,
    space: SpaceSpec,
    f_norm: float,
    x1: float,
    x2: float,
) -> float:
    """Quantitative continuity bound on |V(x2)^s If(x2) - V(x1)^s If(x1)|.

    The three-branch right-hand side (mu below, at, above 1), valid under
    the hypotheses V(b) <= e, s > 0, p > max(1/mu, 1).  Map suprema are
    4097-point grid maxima (monotone maps attain them at the right end).
    """
    a, b = space.interval
    m = space.map
    if float(m.value(b)) > math.e * (1.0 + 1e-12):
        raise ValueError("bound requires V(b) <= e on the interval")
    if s <= 0.0:
        raise ValueError(f"bound requires s > 0, got {s}")
    if p <= max(1.0 / mu, 1.0):
        raise ValueError(f"bound requires p > max(1/mu, 1), got p={p}")
    if not (a <= x1 <= x2 <= b):
        raise ValueError("need a <= x1 <= x2 <= b")
    if x1 == x2:
        return 0.0

    xs = np.linspace(a, b, _MAX_GRID)
    sup_v = float(np.max(np.asarray(m.value(xs), dtype=float)))
    sup_dv = float(np.max(np.asarray(m.derivative(xs), dtype=float)))
    q = p / (p - 1.0)
    qe = q * (mu - 1.0) + 1.0
    pref = (
        sup_v**s
        * f_norm
        * (sup_dv / float(m.value(a))) ** (1.0 / p)
        / (specialfn.gamma(mu) * qe ** (1.0 / q))
    )
    gap = float(m.log_value(x2)) - float(m.log_value(x1))
    step = gap ** (mu - 1.0 / p)
    if mu < 1.0:
        branch = 2.0 * step
    elif mu == 1.0:
        branch = step
    else:
        la = float(m.log_value(a))
        t2 = (float(m.log_value(x2)) - la) ** qe
        t1 = (float(m.log_value(x1)) - la) ** qe
        branch = step + (t2 - t1) ** (1.0 / q)
    return pref * branch


@dataclass(frozen=True)
class AcRepresentation:
    """Representation data of the derivative-admitting class.

    g is recovered from a density phi and anchor constants c_0..c_{n-1} via
    the n-fold log-coordinate primitive (see :func:`ac_reconstruct`).
    """

    n: int
    s: float
    density: Callable
    constants: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(self.constants) != self.n:
            raise ValueError(
                f"need exactly n={self.n} constants, got {len(self.constants)}"
            )


def ac_reconstruct(
    rep: AcRepresentation,
    space: SpaceSpec,
    x,
    config: QuadratureConfig = DEFAULT_CONFIG,
):
    """g(x) = V^-s [ (1/(n-1)!) int_a^x (log V(x)/V(t))^(n-1) phi(t) dt
                     + sum_k c_k (log V(x)/V(a))^k ]."""
    m = space.map
    a = space.interval[0]
    n, s = rep.n, rep.s
    phi = rep.density

    # the density integral carries a plain dt measure; fold V/V' into the
    # integrand to reach the canonical log-coordinate kernel of order n
    wrapped = Integrand(
        eval=lambda t: np.asarray(phi(t), dtype=float)
        * np.asarray(m.value(t), dtype=float)
        / np.asarray(m.derivative(t), dtype=float),
        tag="ac-density",
    )
    xarr = np.asarray(x, dtype=float)
    scalar = xarr.ndim == 0
    xflat = np.atleast_1d(xarr).ravel()
    L = np.maximum(
        np.asarray(m.log_value(xflat), dtype=float) - float(m.log_value(a)), 0.0
    )
    integral = np.zeros_like(L)
    pos = L > 0.0
    if np.any(pos):
        integral[pos], _ = _integral_core(m, float(n), 0.0, a, wrapped, L[pos], config)
    poly = sum(c * L**k for k, c in enumerate(rep.constants))
    out = np.exp(-s * np.asarray(m.log_value(xflat), dtype=float)) * (integral + poly)
    return float(out[0]) if scalar else out.reshape(xarr.shape)


def _gk_at(m, s, k, g, x):
    """g_k(x) = V(x)^s (delta[s,k] g)(x), the weighted log-coordinate derivative."""
    d = apply_delta(DeltaOperatorSpec(m, s, k), g, x)
    if s == 0.0:
        return d
    return np.exp(s * np.asarray(m.log_value(x), dtype=float)) * d


def ac_extract(g, space: SpaceSpec, n: int, s: float) -> AcRepresentation:
    """Recover (phi, c_0..c_{n-1}) from a function in the representation class.

    c_k = g_k(a)/k! with the anchor values taken by direct evaluation when
    finite, else by a one-sided ladder from a+eps; phi = (V'/V) g_n.
    """
    m = space.map
    a, b = space.interval
    g = as_integrand(g)
    consts = []
    for k in range(n):
        try:
            val = float(np.asarray(_gk_at(m, s, k, g, a), dtype=float))
        except (ValueError, FloatingPointError):
            val = math.nan
        if not math.isfinite(val):
            val = anchor_limit(
                lambda xi, k=k: float(np.asarray(_gk_at(m, s, k, g, xi))),
                a,
                scale=(b - a),
            )
        consts.append(val / math.factorial(k))

    def phi(t):
        t = np.asarray(t, dtype=float)
        return (
            np.asarray(m.derivative(t), dtype=float)
            / np.asarray(m.value(t), dtype=float)
            * np.asarray(_gk_at(m, s, n, g, t), dtype=float)
        )

    return AcRepresentation(n=n, s=s, density=phi, constants=tuple(consts))


def rl_derivative_representation(
    gk_at_anchor: Sequence[float],
    g_n: Callable,
    mu: float,
    spec: OperatorSpec,
    x,
    config: QuadratureConfig = DEFAULT_CONFIG,
):
    """Boundary-sum form of the fractional derivative for representable g:

        V(x)^-s [ (1/Gamma(n-mu)) int_a^x (log V(x)/V(t))^(n-mu-1) g'_{n-1}(t) dt
                  + sum_k g_k(a)/Gamma(k-mu+1) (log V(x)/V(a))^(k-mu) ],

    with g'_{n-1}(t) dt = g_n(t) V'(t)/V(t) dt reaching the canonical kernel.
    Requires the anchor values g_k(a), k = 0..n-1, finite; must agree with
    the operator engine wherever both apply.
    """
    m, s, a = spec.map, spec.s, spec.anchor
    n = int(math.floor(mu)) + 1
    if len(gk_at_anchor) != n:
        raise ValueError(f"need n={n} anchor values, got {len(gk_at_anchor)}")
    xarr = np.asarray(x, dtype=float)
    scalar = xarr.ndim == 0
    xflat = np.atleast_1d(xarr).ravel()
    L = np.asarray(m.log_value(xflat), dtype=float) - float(m.log_value(a))
    if np.any(L <= 0.0):
        raise ValueError("representation evaluated at or below the anchor")
    integral, _ = _integral_core(
        m, n - mu, 0.0, a, as_integrand(g_n), L, config
    )
    boundary = np.zeros_like(L)
    for k, gk in enumerate(gk_at_anchor):
        rec = specialfn.reciprocal_gamma(k - mu + 1.0)
        if rec != 0.0 and gk != 0.0:
            boundary = boundary + gk * rec * L ** (k - mu)
    out = np.exp(-s * np.asarray(m.log_value(xflat), dtype=float)) * (
        integral + boundary
    )
    return float(out[0]) if scalar else out.reshape(xarr.shape)

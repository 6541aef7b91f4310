"""Independent reference values for validating the operator engine.

Two families: closed forms for the logpow eigenfunctions (evaluated in
log-gamma space with an explicit pole convention), and a brute-force
integrator built from a different quadrature family than the engine
(graded-mesh composite Gauss-Legendre in the log coordinate, with a
panel-doubling convergence certificate).  To keep the routes disjoint this
module deliberately uses the standard library's gamma functions rather than
:mod:`fracop.specialfn`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracop.monotone import MonotoneMap
from fracop.operators import OperatorKind, OperatorSpec, Side, as_integrand, frac_integral

__all__ = [
    "LogPowSpec",
    "logpow_integral_closed_form",
    "logpow_derivative_closed_form",
    "brute_force_integral",
    "newton_leibniz_rhs",
    "graded_panel_integral",
    "anchor_limit",
]


@dataclass(frozen=True)
class LogPowSpec:
    """Parameters of the eigenfunction f = V^(-s) (relative log)^(nu-1)."""

    nu: float
    map: MonotoneMap
    s: float
    anchor: float
    side: str = "left"

    def __post_init__(self):
        if self.nu <= 0.0:
            raise ValueError(f"nu must be > 0, got {self.nu}")


def _signed_reciprocal_gamma(q: float) -> float:
    """1/Gamma(q) for any real q; exactly 0 at the poles."""
    if q <= 0.0 and q == math.floor(q):
        return 0.0
    if q >= 0.5:
        return math.exp(-math.lgamma(q))
    return math.sin(math.pi * q) * math.exp(math.lgamma(1.0 - q)) / math.pi


def _theta_rel(spec: LogPowSpec, x):
    t = np.asarray(spec.map.log_value(x), dtype=float)
    ta = float(spec.map.log_value(spec.anchor))
    return t - ta if spec.side == "left" else ta - t


def _weight(spec: LogPowSpec, x):
    sign = -spec.s if spec.side == "left" else spec.s
    if sign == 0.0:
        return 1.0
    return np.exp(sign * np.asarray(spec.map.log_value(x), dtype=float))


def logpow_integral_closed_form(spec: LogPowSpec, mu: float, x):
    """Gamma(nu)/Gamma(nu+mu) V^(-s) (relative log)^(nu+mu-1)."""
    ratio = math.exp(math.lgamma(spec.nu) - math.lgamma(spec.nu + mu))
    tau = _theta_rel(spec, x)
    with np.errstate(divide="ignore"):
        out = ratio * _weight(spec, x) * tau ** (spec.nu + mu - 1.0)
    return float(out) if np.ndim(x) == 0 else out


def logpow_derivative_closed_form(spec: LogPowSpec, mu: float, x):
    """Gamma(nu)/Gamma(nu-mu) V^(-s) (relative log)^(nu-mu-1).

    Identically zero when nu - mu is a non-positive integer (the reciprocal
    gamma zero annihilates the eigenfunction).
    """
    rec = _signed_reciprocal_gamma(spec.nu - mu)
    if rec == 0.0:
        out = np.zeros_like(np.asarray(x, dtype=float))
        return float(out) if np.ndim(x) == 0 else out
    ratio = math.exp(math.lgamma(spec.nu)) * rec
    tau = _theta_rel(spec, x)
    with np.errstate(divide="ignore"):
        out = ratio * _weight(spec, x) * tau ** (spec.nu - mu - 1.0)
    return float(out) if np.ndim(x) == 0 else out


# {{{ graded-mesh composite Gauss-Legendre


_GL_NODES = 10
_gl_cache: dict = {}


def _gl_rule(n: int):
    rule = _gl_cache.get(n)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(n)
        _gl_cache[n] = rule = (0.5 * (x + 1.0), 0.5 * w)
    return rule


def _graded_mesh(lo: float, hi: float, m: int, grade_lo: float, grade_hi: float):
    """2m panel breakpoints on [lo, hi], polynomially clustered at both ends."""
    mid = 0.5 * (lo + hi)
    frac = (np.arange(m + 1) / m) ** grade_lo
    left = lo + (mid - lo) * frac
    frac = (np.arange(m + 1) / m) ** grade_hi
    right = hi - (hi - mid) * frac
    return np.concatenate([left[:-1], right[::-1]])


def graded_panel_integral(
    fn,
    lo: float,
    hi: float,
    *,
    panels: int = 16,
    grade_lo: float = 1.0,
    grade_hi: float = 1.0,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-12,
    max_panels: int = 2**20,
    nodes: int = _GL_NODES,
):
    """Composite Gauss-Legendre with panel-doubling convergence certificate.

    fn must be vectorized.  Returns the converged value; raises RuntimeError
    when doubling up to max_panels never brings successive values within
    tolerance (the divergent-integral detector for the norms).
    """
    if hi <= lo:
        return 0.0
    xg, wg = _gl_rule(nodes)
    m = max(8, panels // 2)
    prev = None
    while 2 * m <= max_panels:
        bp = _graded_mesh(lo, hi, m, grade_lo, grade_hi)
        widths = np.diff(bp)
        keep = widths > 0.0  # extreme grading can underflow panel widths
        lefts, widths = bp[:-1][keep], widths[keep]
        pts = lefts[:, None] + widths[:, None] * xg[None, :]
        vals = np.asarray(fn(pts), dtype=float)
        cur = float(np.sum(widths[:, None] * wg[None, :] * vals))
        if prev is not None and abs(cur - prev) <= max(abs_tol, rel_tol * abs(cur)):
            return cur
        prev = cur
        m *= 2
    raise RuntimeError(
        f"graded panel integration did not converge below {rel_tol:g} "
        f"relative within {max_panels} panels"
    )


# }}}


def brute_force_integral(spec: OperatorSpec, f, x: float, panels: int = 64) -> float:
    """The defining integral, computed by an independent quadrature family.

    Works in the log coordinate tau = |log V(x) - log V(t)| (the kernel
    factor tau^(mu-1) is not resolvable in the original coordinate for small
    mu: the first graded panel would need t closer to x than floating point
    allows), with composite Gauss-Legendre on a polynomially graded mesh,
    clustered at tau = 0 for the kernel and at tau = L for a possible anchor
    singularity of f.  Panel counts double until successive values agree to
    1e-9 relative.
    """
    if panels < 16:
        raise ValueError(f"panels must be >= 16, got {panels}")
    f = as_integrand(f)
    m = spec.map
    mu, s = spec.mu, spec.s
    theta_x = float(m.log_value(x))
    theta_a = float(m.log_value(spec.anchor))
    left = spec.side is Side.LEFT
    L = theta_x - theta_a if left else theta_a - theta_x
    if L < 0.0:
        raise ValueError("evaluation point on the wrong side of the anchor")
    if L == 0.0:
        return 0.0
    val_x = float(m.value(x))

    def integrand(tau):
        t = m.inverse(val_x * np.exp(-tau if left else tau))
        with np.errstate(divide="ignore"):
            kern = tau ** (mu - 1.0)
        if s != 0.0:
            kern = kern * np.exp(-s * tau)
        return kern * np.asarray(f.eval(t), dtype=float)

    grade_kernel = min(60.0, math.ceil((2 * _GL_NODES + 1) / min(mu, 1.0)))
    value = graded_panel_integral(
        integrand,
        0.0,
        L,
        panels=panels,
        grade_lo=grade_kernel,
        grade_hi=3.0,
        rel_tol=1e-9,
    )
    return value / math.gamma(mu)


def anchor_limit(fn, anchor: float, scale: float, levels=(1e-3, 1e-4, 1e-5)):
    """lim fn(anchor + eps) as eps -> 0+, by geometric-sequence extrapolation.

    Evaluates on the eps ladder levels*scale and extrapolates assuming a
    single power-law correction (exact for the catalogue limits).  Raises
    on oscillation across the ladder.
    """
    eps = [lv * scale for lv in levels]
    v = [float(fn(anchor + e)) for e in eps]
    d1, d2 = v[1] - v[0], v[2] - v[1]
    span = max(abs(vi) for vi in v) + 1e-300
    if abs(d2) <= 1e-13 * span:
        return v[2]
    if abs(d2) >= abs(d1):
        raise RuntimeError(
            f"anchor limit did not settle: differences {d1:.3e}, {d2:.3e}"
        )
    r = d2 / d1
    return v[2] + d2 * r / (1.0 - r)


def newton_leibniz_rhs(spec: OperatorSpec, f, x: float) -> float:
    """Right-hand side of the reconstruction identity for 0 < mu < 1:

        f(x) - (1/Gamma(mu)) (V(a)/V(x))^s (log V(x)/V(a))^(mu-1)
               * lim_{xi -> a+} I[1-mu, s] f(xi),

    with the boundary limit taken along an eps ladder from the anchor.
    """
    if not (0.0 < spec.mu < 1.0):
        raise ValueError(f"the two-term form needs 0 < mu < 1, got {spec.mu}")
    if spec.side is not Side.LEFT:
        raise ValueError("right-sided form not implemented")
    f = as_integrand(f)
    m, a, s, mu = spec.map, spec.anchor, spec.s, spec.mu
    ispec = spec.with_(kind=OperatorKind.INTEGRAL, mu=1.0 - mu)
    lim = anchor_limit(
        lambda xi: frac_integral(ispec, f, xi), a, scale=(x - a)
    )
    tau = float(m.log_value(x)) - float(m.log_value(a))
    weight = math.exp(-s * tau) if s != 0.0 else 1.0
    boundary = weight * tau ** (mu - 1.0) * lim / math.gamma(mu)
    return float(f.eval(x)) - boundary

"""Tempered and Hadamard-type fractional operators with respect to functions.

A numerical library for the unified operator family

    I[mu, s] f(x) = (1/Gamma(mu)) int_a^x (V(t)/V(x))^s
                    (log V(x)/V(t))^(mu-1) f(t) V'(t)/V(t) dt

and its Riemann-Liouville / Caputo style derivatives, for arbitrary positive
increasing maps V, together with closed-form oracles, weighted-space norms,
representation formulas, integration by parts, and executable verification
suites for the identities relating them all.
"""

from fracop._backend import BACKEND
from fracop.monotone import (
    DeltaOperatorSpec,
    MonotoneMap,
    apply_delta,
    make_builtin,
    make_custom,
    parse_map,
    validate,
)
from fracop.operators import (
    Integrand,
    OperatorKind,
    OperatorSpec,
    Side,
    ThetaProfile,
    compose_m,
    compose_q,
    evaluate,
    evaluate_with_error,
    frac_derivative_caputo,
    frac_derivative_rl,
    frac_integral,
    reduce_special_case,
    signed_order,
)
from fracop.quadrature import (
    QuadratureConfig,
    QuadratureError,
    estimate_error,
    singular_integral,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DeltaOperatorSpec",
    "MonotoneMap",
    "apply_delta",
    "make_builtin",
    "make_custom",
    "parse_map",
    "validate",
    "Integrand",
    "OperatorKind",
    "OperatorSpec",
    "Side",
    "ThetaProfile",
    "compose_m",
    "compose_q",
    "evaluate",
    "evaluate_with_error",
    "frac_derivative_caputo",
    "frac_derivative_rl",
    "frac_integral",
    "reduce_special_case",
    "signed_order",
    "QuadratureConfig",
    "QuadratureError",
    "estimate_error",
    "singular_integral",
    "__version__",
]

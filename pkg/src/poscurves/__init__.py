"""Volume functions for curve classes on simplicial projective toric varieties."""

__version__ = "0.1.0"

from .errors import ConvergenceError, PreconditionError, TheoremViolation  # noqa: E402
from .toric import (CurveClass, DivisorClass, Fan, FanError, ToricVariety, build_variety,  # noqa: E402
                    pair, sigma_decompose)
from .cones import ConeDescription, cone_membership  # noqa: E402
from .polytope import Polytope, divisor_polytope, mixed_volume_top  # noqa: E402
from .minkowski import FacetData, solve_minkowski, weight_to_facet_data  # noqa: E402
from .positivity import (ci_membership, classify_boundary, mcal, mcal_derivative, morse_bound,  # noqa: E402
                         pi_hat, positive_product_top, volhat, zariski_decompose)
from .fans import builtin  # noqa: E402

__all__ = [
    "ConeDescription", "ConvergenceError", "CurveClass", "DivisorClass", "FacetData", "Fan", "FanError",
    "Polytope", "PreconditionError", "TheoremViolation", "ToricVariety", "build_variety", "builtin",
    "ci_membership", "classify_boundary", "cone_membership", "divisor_polytope", "mcal", "mcal_derivative",
    "mixed_volume_top", "morse_bound", "pair", "pi_hat", "positive_product_top", "sigma_decompose",
    "solve_minkowski", "volhat", "weight_to_facet_data", "zariski_decompose",
]

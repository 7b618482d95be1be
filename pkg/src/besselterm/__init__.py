"""Fourier-Bessel term counts, an empirical term-count model and Hankel order invariants."""

from .errors import BesselTermError, ConvergenceError, DomainError, LMaxExceeded, QuadratureError
from .special_functions import Order, bessel_j, bessel_j_pair, bessel_j_prime, gamma_fn
from .roots import RootTable, root, roots_up_to
from .quadrature import QuadratureSpec, RadialFunction, inner_product, l2prime_norm
from .fbse import (FourierBesselExpansion, PartialSum, TargetFunction, basis_function, coefficient,
                   overlap_term, partial_sums, reconstruct, truncation_error)
from .term_count import (SweepTable, TermCountQuery, TermCountResult, min_terms, monotonicity_report,
                         sweep, threshold)
from .empirical import HyperbolicFit, Prediction, hyperbolic_fit, linear_fit, predict_terms, slope_grid
from .hankel import (PowerLawPair, TransformSample, invariant_residual_numeric, invariant_rhs_power,
                     numeric_hankel, power_law_coefficient, radial_identity_residual)

__version__ = "0.1.0"

"""Exception types raised by the library."""


class BesselTermError(Exception):
    """Base class for all library errors."""


class DomainError(BesselTermError, ValueError):
    """An argument lies outside the domain of the function (e.g. ``nu <= -1``)."""


class ConvergenceError(BesselTermError, RuntimeError):
    """An iterative refinement did not converge within its step budget."""


class QuadratureError(BesselTermError, RuntimeError):
    """Panel refinement saturated before the requested tolerance was met."""


class LMaxExceeded(BesselTermError, RuntimeError):
    """No truncation length up to ``l_max`` satisfies the error bound."""

    def __init__(self, l_max, threshold, achieved):
        self.l_max = l_max
        self.threshold = threshold
        self.achieved = achieved
        super().__init__(
            f"l_max exceeded: cumulative sum {achieved:.6g} at l={l_max} "
            f"does not exceed threshold {threshold:.6g}; raise l_max"
        )

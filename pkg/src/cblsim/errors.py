"""Exception types shared across the package."""


class CblsimError(Exception):
    """Base class for all package-specific errors."""


class ThresholdError(CblsimError):
    """Raised when a steady-state quantity is requested at or above threshold.

    Above threshold at least one quadrature relaxation rate is non-positive
    and the linearized moments have no stationary value.
    """


class StepSizeError(CblsimError):
    """Raised when an integrator step violates its stability margin."""


class RepresentabilityError(CblsimError):
    """Raised when a quadrature diffusion strength is negative.

    A real-valued trajectory ensemble can only realize non-negative
    diffusion; callers must fall back to the deterministic moment ODEs.
    """


class TruncationLeakError(CblsimError):
    """Raised when the top of the photon-number basis carries population.

    Results computed from a leaking truncation are untrustworthy; rerun
    with a larger dimension.
    """

"""Physical parameters and derived rates of the degenerate coherent beat laser.

A three-level cascade medium is pumped into the cavity with an initial
superposition of its top and bottom levels (parameterized by eta), driven on
the two-photon transition with amplitude omega (in units of the atomic decay
rate gamma, which is set to 1 throughout), and damped through one mirror into
a broadband biased-noise environment of intensity N.  Everything downstream
is a function of the five numbers collected in :class:`SystemParams`.

The module computes the gain/loss/correlation coefficients of the adiabatic
cavity-mode equation of motion, the quadrature drift rates lambda_+/- and
diffusion strengths, and the threshold condition mu > 2|beta| that both
relaxation rates be positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Operating point of the laser.

    Attributes
    ----------
    A : float
        Linear gain coefficient (pump-rate-scaled coupling), >= 0.
    kappa : float
        Cavity damping constant, in (0, 1].
    eta : float
        Atomic superposition parameter in [-1, 1]; the initial populations
        are rho_aa = (1 - eta)/2 and rho_cc = (1 + eta)/2.
    omega : float
        Drive amplitude over gamma, >= 0.
    N : float
        Mean photon number of the biased environment modes, >= 0.
    """

    A: float
    kappa: float
    eta: float
    omega: float
    N: float

    def __post_init__(self):
        A = _require_finite("A", self.A)
        kappa = _require_finite("kappa", self.kappa)
        eta = _require_finite("eta", self.eta)
        omega = _require_finite("omega", self.omega)
        N = _require_finite("N", self.N)
        if A < 0:
            raise ValueError(f"A must be >= 0, got {A}")
        if not 0.0 < kappa <= 1.0:
            raise ValueError(f"kappa must lie in (0, 1], got {kappa}")
        if not -1.0 <= eta <= 1.0:
            raise ValueError(f"eta must lie in [-1, 1], got {eta}")
        if omega < 0:
            raise ValueError(f"omega must be >= 0, got {omega}")
        if N < 0:
            raise ValueError(f"N must be >= 0, got {N}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "N", N)


@dataclass(frozen=True)
class AtomicPreparation:
    """Initial atomic density-matrix elements for a pure superposition."""

    rho_aa: float
    rho_cc: float
    rho_ac: float


@dataclass(frozen=True)
class ReservoirMoments:
    """Intensity N and correlation M = sqrt(N(N+1)) of the biased input."""

    N: float
    M: float


@dataclass(frozen=True)
class GainCoefficients:
    """Dimensionless coefficients of the cavity-mode generator.

    C drives gain, D loss, E and F the two-photon correlations; B is the
    drive-dependent normalization.  All are functions of the preparation
    and of omega only.
    """

    B: float
    C: float
    D: float
    E: float
    F: float


@dataclass(frozen=True)
class DriftDiffusion:
    """Quadrature drift and diffusion of the linearized cavity mode.

    The c-number mode obeys d(alpha)/dt = -(mu/2) alpha + beta alpha* + f(t),
    so the quadratures x_+/- = alpha* +/- alpha relax at lambda_-/2 and
    lambda_+/2 respectively, with lambda_+/- = mu +/- 2 beta.  diff_plus and
    diff_minus are the noise strengths entering d<x_+/-^2>/dt.
    """

    mu: float
    beta: float
    lambda_plus: float
    lambda_minus: float
    diff_plus: float
    diff_minus: float
    below_threshold: bool


def atomic_preparation(eta: float) -> AtomicPreparation:
    """Populations and coherence of the injected superposition.

    rho_aa = (1 - eta)/2, rho_cc = (1 + eta)/2, rho_ac = sqrt(1 - eta^2)/2.
    """
    eta = _require_finite("eta", eta)
    if not -1.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [-1, 1], got {eta}")
    rho_aa = (1.0 - eta) / 2.0
    rho_cc = (1.0 + eta) / 2.0
    rho_ac = math.sqrt(max(0.0, 1.0 - eta * eta)) / 2.0
    return AtomicPreparation(rho_aa, rho_cc, rho_ac)


def reservoir_moments(N: float) -> ReservoirMoments:
    """Second moments of the biased environment: M = sqrt(N(N+1))."""
    N = _require_finite("N", N)
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    return ReservoirMoments(N, math.sqrt(N * (N + 1.0)))


def gain_coefficients(prep: AtomicPreparation, omega: float) -> GainCoefficients:
    """Generator coefficients B, C, D, E, F for a given preparation and drive.

    Satisfies C + D = 1 + omega^2 and E - F = (omega/2)(1 + omega^2)
    identically; at omega = 0 they collapse to B = 1, C = rho_aa,
    D = rho_cc, E = F = -rho_ac.
    """
    w = _require_finite("omega", omega)
    if w < 0:
        raise ValueError(f"omega must be >= 0, got {w}")
    raa, rcc, rac = prep.rho_aa, prep.rho_cc, prep.rho_ac
    w2 = w * w
    B = (1.0 + w2) * (1.0 + w2 / 4.0)
    C = raa * (1.0 + w2 / 4.0) - rac * (1.5 * w) + rcc * (0.75 * w2)
    D = raa * (0.75 * w2) + rac * (1.5 * w) + rcc * (1.0 + w2 / 4.0)
    E = -raa * (w / 2.0) * (1.0 - w2 / 2.0) - rac * (1.0 - w2 / 2.0) + rcc * w * (1.0 + w2 / 4.0)
    F = -raa * w * (1.0 + w2 / 4.0) - rac * (1.0 - w2 / 2.0) + rcc * (w / 2.0) * (1.0 - w2 / 2.0)
    return GainCoefficients(B, C, D, E, F)


def drift_diffusion(params: SystemParams) -> DriftDiffusion:
    """Drift rates and quadrature diffusion strengths at an operating point.

    mu = (A/B)(D - C) + kappa and beta = (A/2B)(E - F).  The diffusion
    strengths combine the atomic correlations with the biased input:

        diff_plus  = 2[(A/B)(C - F) + kappa (N + M)]
        diff_minus = 2[kappa (M - N) - (A/B)(C + F)]

    which is the unique pairing that reproduces the closed-form steady
    state and reduces to 2 kappa (M +/- N) for an empty cavity.
    """
    prep = atomic_preparation(params.eta)
    g = gain_coefficients(prep, params.omega)
    res = reservoir_moments(params.N)
    A, kappa = params.A, params.kappa
    N, M = res.N, res.M
    gain_ratio = A / g.B
    mu = gain_ratio * (g.D - g.C) + kappa
    beta = 0.5 * gain_ratio * (g.E - g.F)
    lambda_plus = mu + 2.0 * beta
    lambda_minus = mu - 2.0 * beta
    diff_plus = 2.0 * (gain_ratio * (g.C - g.F) + kappa * (N + M))
    diff_minus = 2.0 * (kappa * (M - N) - gain_ratio * (g.C + g.F))
    below = lambda_plus > 0.0 and lambda_minus > 0.0
    return DriftDiffusion(mu, beta, lambda_plus, lambda_minus, diff_plus, diff_minus, below)


def check_threshold(params: SystemParams) -> bool:
    """True when mu > 2|beta|, i.e. both quadrature rates are positive."""
    rates = drift_diffusion(params)
    return rates.below_threshold

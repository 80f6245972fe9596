"""Closed-form quadrature moments, variances and photon numbers.

Two independent routes to every steady-state observable are kept side by
side on purpose:

* the drift/diffusion route, ``diff_+/- / lambda_-/+``, built from
  :mod:`cblsim.model`;
* a direct closed-form expression in terms of (A, kappa, eta, omega, N)
  only, written without reference to the intermediate coefficients.

Both must agree to machine precision, and the test suite holds them to
1e-12 relative.  Special-case expressions for omega = 0 and eta = 0 are
additional cross-check paths.  Variances are vacuum-normalized: a value of
1 is the vacuum level and squeezing means the minus variance drops below 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import ThresholdError
from .model import SystemParams, drift_diffusion, reservoir_moments

# lambda_minus below this is treated as numerically indistinguishable from
# threshold; results are still returned but flagged, since the plus moment
# grows like 1/lambda_minus.
NEAR_THRESHOLD_RATE = 1e-9


@dataclass(frozen=True)
class QuadMoments:
    """Second moments <x_+^2> and <x_-^2> of the cavity quadratures.

    ``time`` is the elapsed time from the vacuum initial state, or None
    for the steady state.
    """

    plus: float
    minus: float
    time: Optional[float] = None


@dataclass(frozen=True)
class SteadyObservables:
    """Every steady-state output quantity at one operating point."""

    var_plus_cav: float
    var_minus_cav: float
    var_plus_out: float
    var_minus_out: float
    n_cav: float
    n_out: float
    squeeze_pct_cav: float
    squeeze_pct_out: float
    near_threshold: bool = False


def _require_below_threshold(params: SystemParams):
    rates = drift_diffusion(params)
    if not rates.below_threshold:
        raise ThresholdError(
            f"no steady state: lambda_minus={rates.lambda_minus:.6g}, "
            f"lambda_plus={rates.lambda_plus:.6g} (need both > 0)"
        )
    return rates


def quad_moments_transient(params: SystemParams, t: float) -> QuadMoments:
    """Quadrature moments after evolving the vacuum for a time t.

    Each moment saturates exponentially at its own rate:
    <x_+/-^2>(t) = (diff_+/- / lambda_-/+)(1 - exp(-lambda_-/+ t)).
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    rates = _require_below_threshold(params)
    plus = rates.diff_plus / rates.lambda_minus * -math.expm1(-rates.lambda_minus * t)
    minus = rates.diff_minus / rates.lambda_plus * -math.expm1(-rates.lambda_plus * t)
    return QuadMoments(plus, minus, time=float(t))


def quad_moments_steady(params: SystemParams) -> QuadMoments:
    """Steady-state quadrature moments from the direct closed form.

    Written in terms of the bare inputs only (with s = sqrt(1 - eta^2) and
    w = omega):

        <x_+/-^2> = A (b1 +/- b2) / (kappa H_+/-) + 2 B (M +/- N) / H_+/-

        b1 = (w/2)(1 - 3 eta + w^2) + s (1 - w^2/2)
        b2 = 1 - eta + (w^2/2)(2 + eta) - s (3w/2)
        H_+/- = B + (A/kappa)[(1 - w^2/2) eta + s (3w/2) -/+ (w/2)(1 + w^2)]

    and equals diff_+/- / lambda_-/+ from the drift/diffusion route.
    """
    _require_below_threshold(params)
    A, kappa, eta, w, N = params.A, params.kappa, params.eta, params.omega, params.N
    M = reservoir_moments(N).M
    s = math.sqrt(max(0.0, 1.0 - eta * eta))
    w2 = w * w
    B = (1.0 + w2) * (1.0 + w2 / 4.0)
    b1 = (w / 2.0) * (1.0 - 3.0 * eta + w2) + s * (1.0 - w2 / 2.0)
    b2 = 1.0 - eta + (w2 / 2.0) * (2.0 + eta) - s * (1.5 * w)
    common = (1.0 - w2 / 2.0) * eta + s * (1.5 * w)
    h_plus = B + (A / kappa) * (common - (w / 2.0) * (1.0 + w2))
    h_minus = B + (A / kappa) * (common + (w / 2.0) * (1.0 + w2))
    plus = A * (b1 + b2) / (kappa * h_plus) + 2.0 * B * (M + N) / h_plus
    minus = A * (b1 - b2) / (kappa * h_minus) + 2.0 * B * (M - N) / h_minus
    return QuadMoments(plus, minus, time=None)


def cavity_variances(moments: QuadMoments) -> Tuple[float, float]:
    """Cavity quadrature variances (Delta a_+^2, Delta a_-^2) = 1 +/- <x_+/-^2>."""
    return 1.0 + moments.plus, 1.0 - moments.minus


def output_variances(params: SystemParams, cav: Tuple[float, float]) -> Tuple[float, float]:
    """Output variances from the mirror boundary condition.

    The transmitted field mixes the cavity field (weight kappa) with the
    reflected biased input (weight 1 - kappa):

        Delta a_+/-(out)^2 = (1 - kappa)(1 + 2N +/- 2M) + kappa Delta a_+/-^2
    """
    kappa, N = params.kappa, params.N
    M = reservoir_moments(N).M
    res_plus = 1.0 + 2.0 * N + 2.0 * M
    res_minus = 1.0 + 2.0 * N - 2.0 * M
    return (
        (1.0 - kappa) * res_plus + kappa * cav[0],
        (1.0 - kappa) * res_minus + kappa * cav[1],
    )


def output_variances_direct(params: SystemParams) -> Tuple[float, float]:
    """Output variances evaluated in one step from the bare inputs.

    Independent of :func:`output_variances`; the two must agree to 1e-12
    relative for every below-threshold point.
    """
    _require_below_threshold(params)
    A, kappa, eta, w, N = params.A, params.kappa, params.eta, params.omega, params.N
    M = reservoir_moments(N).M
    s = math.sqrt(max(0.0, 1.0 - eta * eta))
    w2 = w * w
    B = (1.0 + w2) * (1.0 + w2 / 4.0)
    b1 = (w / 2.0) * (1.0 - 3.0 * eta + w2) + s * (1.0 - w2 / 2.0)
    b2 = 1.0 - eta + (w2 / 2.0) * (2.0 + eta) - s * (1.5 * w)
    common = (1.0 - w2 / 2.0) * eta + s * (1.5 * w)
    h_plus = B + (A / kappa) * (common - (w / 2.0) * (1.0 + w2))
    h_minus = B + (A / kappa) * (common + (w / 2.0) * (1.0 + w2))
    out = []
    for sign, h in ((1.0, h_plus), (-1.0, h_minus)):
        reservoir = 1.0 + 2.0 * N + sign * 2.0 * M
        value = (
            (kappa * h + A * b2) / h
            + sign * A * b1 / h
            + 2.0 * kappa * B * (N + sign * M) / h
            + (1.0 - kappa) * reservoir
        )
        out.append(value)
    return out[0], out[1]


def output_variances_omega0(params: SystemParams) -> Tuple[float, float]:
    """Undriven special case (omega = 0).

    Delta a_+/-(out)^2 = [kappa^2 (1 + 2N +/- 2M) + kappa A (1 +/- s)]
                         / (A eta + kappa) + (1 - kappa)(1 + 2N +/- 2M).
    """
    if params.omega != 0.0:
        raise ValueError(f"omega must be 0 for this path, got {params.omega}")
    A, kappa, eta, N = params.A, params.kappa, params.eta, params.N
    denom = A * eta + kappa
    if denom <= 0.0:
        raise ThresholdError(f"no steady state: A*eta + kappa = {denom:.6g} <= 0")
    M = reservoir_moments(N).M
    s = math.sqrt(max(0.0, 1.0 - eta * eta))
    out = []
    for sign in (1.0, -1.0):
        reservoir = 1.0 + 2.0 * N + sign * 2.0 * M
        value = (kappa * kappa * reservoir + kappa * A * (1.0 + sign * s)) / denom
        value += (1.0 - kappa) * reservoir
        out.append(value)
    return out[0], out[1]


def output_variances_eta0(params: SystemParams) -> Tuple[float, float]:
    """Balanced-superposition special case (eta = 0), authoritative values.

    Returns the general-path result restricted to eta = 0.  An alternate
    bracket form circulates for this case (see
    :func:`output_variances_eta0_variant`) but fails its own omega = 0
    limit for omega > 0, so the general path is the one trusted here; the
    consistency report quantifies the gap.
    """
    if params.eta != 0.0:
        raise ValueError(f"eta must be 0 for this path, got {params.eta}")
    _require_below_threshold(params)
    return output_variances_direct(params)


def output_variances_eta0_variant(params: SystemParams) -> Tuple[float, float]:
    """Alternate closed form for eta = 0, kept only for the consistency report.

    Uses the reduced denominators
    H''_+/- = B + (A/kappa)[3w/2 -/+ (w/2)(1 + w^2)] and a first bracket
    (w/2)(w^2/2 - 2 - w) + 1 that disagrees with the general expression
    whenever omega > 0.  Do not use for results.
    """
    if params.eta != 0.0:
        raise ValueError(f"eta must be 0 for this path, got {params.eta}")
    A, kappa, w, N = params.A, params.kappa, params.omega, params.N
    M = reservoir_moments(N).M
    w2 = w * w
    B = (1.0 + w2) * (1.0 + w2 / 4.0)
    b1_variant = (w / 2.0) * (w2 / 2.0 - 2.0 - w) + 1.0
    b2 = 1.0 + w2 - 1.5 * w
    out = []
    for sign in (1.0, -1.0):
        h = B + (A / kappa) * (1.5 * w - sign * (w / 2.0) * (1.0 + w2))
        reservoir = 1.0 + 2.0 * N + sign * 2.0 * M
        value = (
            (kappa * h + sign * A * b1_variant) / h
            + A * b2 / h
            + 2.0 * kappa * B * (N + sign * M) / h
            + (1.0 - kappa) * reservoir
        )
        out.append(value)
    return out[0], out[1]


def mean_photon_cavity(moments: QuadMoments) -> float:
    """Mean cavity photon number, (<x_+^2> - <x_-^2>)/4."""
    return (moments.plus - moments.minus) / 4.0


def mean_photon_output(params: SystemParams, moments: QuadMoments) -> float:
    """Mean photon number of the transmitted field.

    n_out = kappa n_cav + N (1 - kappa): what leaks out of the cavity plus
    the reflected part of the biased input.
    """
    _require_below_threshold(params)
    return params.kappa * mean_photon_cavity(moments) + params.N * (1.0 - params.kappa)


def mean_photon_output_omega0(params: SystemParams) -> float:
    """Undriven special case of the output photon number.

    n_out = [kappa A (1 - eta) + 2 kappa^2 N] / (2 (A eta + kappa))
            + N (1 - kappa); must agree with the general path to 1e-12.
    """
    if params.omega != 0.0:
        raise ValueError(f"omega must be 0 for this path, got {params.omega}")
    A, kappa, eta, N = params.A, params.kappa, params.eta, params.N
    denom = A * eta + kappa
    if denom <= 0.0:
        raise ThresholdError(f"no steady state: A*eta + kappa = {denom:.6g} <= 0")
    return (kappa * A * (1.0 - eta) + 2.0 * kappa * kappa * N) / (2.0 * denom) + N * (1.0 - kappa)


def squeezing_percent(variance: float) -> float:
    """Noise reduction below vacuum in percent: (1 - variance) * 100.

    Negative values mean excess noise.
    """
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    return (1.0 - variance) * 100.0


def steady_observables(params: SystemParams) -> SteadyObservables:
    """All steady-state observables at one operating point.

    Raises ThresholdError above threshold.  Points with
    0 < lambda_minus < 1e-9 are evaluated but tagged near_threshold, since
    the plus moment diverges as 1/lambda_minus.
    """
    rates = _require_below_threshold(params)
    moments = quad_moments_steady(params)
    var_cav = cavity_variances(moments)
    var_out = output_variances(params, var_cav)
    n_cav = mean_photon_cavity(moments)
    n_out = mean_photon_output(params, moments)
    return SteadyObservables(
        var_plus_cav=var_cav[0],
        var_minus_cav=var_cav[1],
        var_plus_out=var_out[0],
        var_minus_out=var_out[1],
        n_cav=n_cav,
        n_out=n_out,
        squeeze_pct_cav=squeezing_percent(var_cav[1]),
        squeeze_pct_out=squeezing_percent(var_out[1]),
        near_threshold=rates.lambda_minus < NEAR_THRESHOLD_RATE,
    )

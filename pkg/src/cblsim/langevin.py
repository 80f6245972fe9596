"""First verification path: moment ODEs and a stochastic quadrature ensemble.

The linearized mode gives two decoupled scalar ODEs for the quadrature
second moments,

    d<x_+/-^2>/dt = -lambda_-/+ <x_+/-^2> + diff_+/-,

which this module integrates with a classical fourth-order scheme, solves
algebraically, and (where the diffusion strengths are non-negative)
simulates as an ensemble of real Ornstein-Uhlenbeck trajectories.  None of
these paths share code with :mod:`cblsim.analytic`, which is the point.

A plain complex-trajectory simulation cannot reach <x_-^2> > 0 (the
squeezing regime of the normally ordered moments), so the ensemble runs two
independent real processes, one per quadrature, and refuses points where a
diffusion strength is negative instead of returning silently wrong
statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import RepresentabilityError, StepSizeError, ThresholdError
from .model import DriftDiffusion, SystemParams, drift_diffusion

# dt * max(lambda) must stay below this for the explicit schemes
STABILITY_MARGIN = 0.1


@dataclass(frozen=True)
class MomentState:
    """Quadrature second moments at one instant."""

    m_plus: float
    m_minus: float
    t: float


@dataclass(frozen=True)
class EnsembleConfig:
    """Size, step and seed of a stochastic ensemble run."""

    n_trajectories: int
    dt: float
    t_end: float
    seed: int

    def __post_init__(self):
        if self.n_trajectories <= 0:
            raise ValueError(f"n_trajectories must be positive, got {self.n_trajectories}")
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class EnsembleMoments:
    """Ensemble estimates of the quadrature moments with standard errors."""

    m_plus: float
    m_minus: float
    se_plus: float
    se_minus: float
    t: float
    n_trajectories: int


def _rk4_decay_step(m: float, lam: float, diff: float, dt: float) -> float:
    # one RK4 step of dm/dt = -lam*m + diff
    k1 = diff - lam * m
    k2 = diff - lam * (m + 0.5 * dt * k1)
    k3 = diff - lam * (m + 0.5 * dt * k2)
    k4 = diff - lam * (m + dt * k3)
    return m + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def moment_ode_step(state: MomentState, rates: DriftDiffusion, dt: float) -> MomentState:
    """Advance both moments by one fourth-order step of size dt."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return MomentState(
        m_plus=_rk4_decay_step(state.m_plus, rates.lambda_minus, rates.diff_plus, dt),
        m_minus=_rk4_decay_step(state.m_minus, rates.lambda_plus, rates.diff_minus, dt),
        t=state.t + dt,
    )


def integrate_moments(params: SystemParams, t_end: float, dt: float) -> List[MomentState]:
    """Moment trajectory from the vacuum initial state up to t_end.

    The exact solution saturates exponentially, so the global error scales
    as (lambda dt)^4; the stated step bound dt * max(lambda) < 0.1 is a
    stability margin, and tighter steps buy accuracy.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    rates = drift_diffusion(params)
    if not rates.below_threshold:
        raise ThresholdError(
            f"cannot integrate to steady state: lambda_minus={rates.lambda_minus:.6g}"
        )
    lam_max = max(rates.lambda_plus, rates.lambda_minus)
    if dt * lam_max >= STABILITY_MARGIN:
        raise StepSizeError(
            f"dt*max(lambda) = {dt * lam_max:.4g} breaks the {STABILITY_MARGIN} margin"
        )
    trajectory = [MomentState(0.0, 0.0, 0.0)]
    if t_end == 0:
        return trajectory
    n_steps = max(1, round(t_end / dt))
    dt = t_end / n_steps  # land exactly on t_end
    state = trajectory[0]
    for i in range(n_steps):
        state = moment_ode_step(state, rates, dt)
        # keep reported times exact multiples of dt
        state = MomentState(state.m_plus, state.m_minus, (i + 1) * dt)
        trajectory.append(state)
    return trajectory


def steady_moments_linear(params: SystemParams) -> MomentState:
    """Stationary moments from the algebraic balance -lambda m + diff = 0."""
    rates = drift_diffusion(params)
    if not rates.below_threshold:
        raise ThresholdError(
            f"no steady state: lambda_minus={rates.lambda_minus:.6g}"
        )
    return MomentState(
        m_plus=rates.diff_plus / rates.lambda_minus,
        m_minus=rates.diff_minus / rates.lambda_plus,
        t=math.inf,
    )


def stochastic_ensemble(params: SystemParams, cfg: EnsembleConfig) -> EnsembleMoments:
    """Euler-Maruyama ensemble estimate of the quadrature moments.

    Runs x_+ with decay lambda_-/2 and diffusion diff_+, and x_- with decay
    lambda_+/2 and diffusion diff_-, both from x = 0.  Estimates are the
    cross-trajectory means of x^2 at t_end with their standard errors.
    Identical (params, cfg) give bit-identical results; the generator is
    counter-based (Philox) keyed on cfg.seed.
    """
    rates = drift_diffusion(params)
    if not rates.below_threshold:
        raise ThresholdError(
            f"no steady state to sample: lambda_minus={rates.lambda_minus:.6g}"
        )
    if rates.diff_plus < 0 or rates.diff_minus < 0:
        raise RepresentabilityError(
            f"negative diffusion (diff_plus={rates.diff_plus:.6g}, "
            f"diff_minus={rates.diff_minus:.6g}); use the moment ODEs instead"
        )
    lam_max = max(rates.lambda_plus, rates.lambda_minus)
    if cfg.dt * lam_max >= STABILITY_MARGIN:
        raise StepSizeError(
            f"dt*max(lambda) = {cfg.dt * lam_max:.4g} breaks the {STABILITY_MARGIN} margin"
        )
    n = cfg.n_trajectories
    n_steps = max(1, round(cfg.t_end / cfg.dt))
    dt = cfg.t_end / n_steps
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    x = np.zeros((2, n))
    decay = np.array([[1.0 - 0.5 * rates.lambda_minus * dt], [1.0 - 0.5 * rates.lambda_plus * dt]])
    kick = np.array(
        [[math.sqrt(rates.diff_plus * dt)], [math.sqrt(rates.diff_minus * dt)]]
    )
    for _ in range(n_steps):
        x = decay * x + kick * rng.standard_normal((2, n))
    sq = x * x
    means = sq.mean(axis=1)
    if n > 1:
        ses = sq.std(axis=1, ddof=1) / math.sqrt(n)
    else:
        ses = np.array([math.inf, math.inf])
    return EnsembleMoments(
        m_plus=float(means[0]),
        m_minus=float(means[1]),
        se_plus=float(ses[0]),
        se_minus=float(ses[1]),
        t=cfg.t_end,
        n_trajectories=n,
    )

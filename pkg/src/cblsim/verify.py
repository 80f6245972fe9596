"""Oracle-equivalence suites behind the ``verify`` subcommand.

Two independent numerical routes are held against the closed-form steady
state: the quadrature moment ODEs (cheap, run on a large random sweep) and
the number-basis density-matrix propagation (expensive, run on a fixed grid
of moderate operating points with truncation convergence confirmed).  All
sampling is internally seeded, so a verification run is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import fockspace
from .analytic import quad_moments_steady, quad_moments_transient
from .langevin import integrate_moments, steady_moments_linear
from .model import SystemParams, drift_diffusion

_SAMPLER_SEED = 20081201


@dataclass(frozen=True)
class ToleranceProfile:
    """Tolerances and effort knobs for one verification run."""

    name: str
    langevin_steady: float
    langevin_transient: float
    langevin_points: int
    transient_points: int
    langevin_step_scale: float  # dt = scale / lambda_plus
    master_moments: float
    master_trace: float
    master_extra_dim: int  # extra truncation headroom on top of the scan


PROFILES: Dict[str, ToleranceProfile] = {
    "default": ToleranceProfile(
        name="default",
        langevin_steady=1e-8,
        langevin_transient=1e-8,
        langevin_points=1000,
        transient_points=100,
        langevin_step_scale=0.05,
        master_moments=1e-6,
        master_trace=1e-10,
        master_extra_dim=0,
    ),
    "strict": ToleranceProfile(
        name="strict",
        langevin_steady=1e-10,
        langevin_transient=1e-9,
        langevin_points=1000,
        transient_points=100,
        langevin_step_scale=0.006,
        master_moments=5e-7,
        master_trace=1e-10,
        master_extra_dim=8,
    ),
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str = ""

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"  {status}  {self.name}: max|dev| = {self.worst:.3e}  tol = {self.tolerance:.1e}"
        if self.detail:
            line += f"  ({self.detail})"
        return line


@dataclass(frozen=True)
class VerifyReport:
    title: str
    checks: Tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def render(self) -> str:
        lines = [self.title]
        lines += [check.render() for check in self.checks]
        lines.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def sample_below_threshold(
    count: int,
    seed: int = _SAMPLER_SEED,
    max_rate_ratio: float = 25.0,
    min_lambda: float = 0.05,
    max_moment: float = 40.0,
) -> List[SystemParams]:
    """Random operating points with a steady state and bounded stiffness.

    The rejection filters keep integration budgets finite near threshold
    (where lambda_minus -> 0 and the plus moment diverges); they do not
    otherwise shape the distribution.
    """
    rng = np.random.default_rng(seed)
    points: List[SystemParams] = []
    while len(points) < count:
        params = SystemParams(
            A=float(rng.uniform(0.0, 15.0)),
            kappa=float(rng.uniform(0.05, 1.0)),
            eta=float(rng.uniform(-1.0, 1.0)),
            omega=float(rng.uniform(0.0, 2.0)),
            N=float(rng.uniform(0.0, 2.0)),
        )
        rates = drift_diffusion(params)
        if not rates.below_threshold:
            continue
        if rates.lambda_minus < min_lambda:
            continue
        if rates.lambda_plus / rates.lambda_minus > max_rate_ratio:
            continue
        linear = steady_moments_linear(params)
        if abs(linear.m_plus) > max_moment or abs(linear.m_minus) > max_moment:
            continue
        points.append(params)
    return points


def _steady_integration_time(params: SystemParams) -> float:
    rates = drift_diffusion(params)
    linear = steady_moments_linear(params)
    scale = 1.0 + abs(linear.m_plus) + abs(linear.m_minus)
    return (26.0 + math.log(scale)) / rates.lambda_minus


def verify_langevin(profile: ToleranceProfile) -> VerifyReport:
    """Moment-ODE steady states and transients vs the closed forms."""
    points = sample_below_threshold(profile.langevin_points)
    worst_steady = 0.0
    for params in points:
        rates = drift_diffusion(params)
        dt = profile.langevin_step_scale / rates.lambda_plus
        t_end = _steady_integration_time(params)
        final = integrate_moments(params, t_end, dt)[-1]
        target = quad_moments_steady(params)
        dev = max(abs(final.m_plus - target.plus), abs(final.m_minus - target.minus))
        worst_steady = max(worst_steady, dev)

    worst_transient = 0.0
    transient_step_scale = min(profile.langevin_step_scale, 0.006)
    for params in points[: profile.transient_points]:
        rates = drift_diffusion(params)
        dt = transient_step_scale / rates.lambda_plus
        t_end = 3.0 / rates.lambda_minus
        trajectory = integrate_moments(params, t_end, dt)
        for state in trajectory[:: max(1, len(trajectory) // 64)]:
            target = quad_moments_transient(params, state.t)
            dev = max(abs(state.m_plus - target.plus), abs(state.m_minus - target.minus))
            worst_transient = max(worst_transient, dev)

    checks = (
        Check(
            name="moment-ODE steady state vs closed form",
            passed=worst_steady < profile.langevin_steady,
            worst=worst_steady,
            tolerance=profile.langevin_steady,
            detail=f"{len(points)} random below-threshold points",
        ),
        Check(
            name="moment-ODE transient vs exponential saturation",
            passed=worst_transient < profile.langevin_transient,
            worst=worst_transient,
            tolerance=profile.langevin_transient,
            detail=f"{profile.transient_points} points, sampled along trajectories",
        ),
    )
    return VerifyReport(
        title=f"langevin oracle vs closed form (profile: {profile.name})", checks=checks
    )


def _master_grid() -> List[SystemParams]:
    """Fixed verification grid: moderate rates, n_cav < 3, clear of threshold."""
    raw = [
        # (A, kappa, eta, omega, N)
        (0.0, 0.2, 0.0, 0.0, 0.0),
        (0.0, 0.2, 0.0, 0.0, 0.4),
        (0.0, 0.9, 0.5, 1.0, 0.6),
        (0.5, 0.6, 0.3, 0.0, 0.2),
        (0.5, 0.4, -0.4, 0.5, 0.1),
        (0.8, 0.8, 0.0, 0.4, 0.3),
        (1.0, 0.5, 0.25, 0.0, 0.4),
        (1.0, 0.7, 0.6, 0.8, 0.0),
        (1.0, 0.9, -0.2, 1.2, 0.2),
        (1.5, 0.6, 0.5, 0.3, 0.1),
        (1.5, 0.8, 0.0, 1.0, 0.4),
        (2.0, 0.5, 0.7, 0.0, 0.2),
        (2.0, 0.9, 0.4, 0.6, 0.5),
        (2.0, 0.7, 1.0, 0.5, 0.3),
        (2.5, 0.8, 0.6, 0.2, 0.0),
        (3.0, 0.9, 0.8, 0.0, 0.4),
        (1.5, 0.9, 0.4, 1.5, 0.1),
        (4.0, 0.9, 0.9, 0.3, 0.2),
        (1.2, 0.3, 0.35, 0.1, 0.4),
        (0.7, 0.5, -0.6, 1.8, 0.0),
        (2.2, 0.6, 0.75, 0.9, 0.25),
        (5.0, 1.0, 0.95, 0.2, 0.3),
    ]
    return [SystemParams(A=a, kappa=k, eta=e, omega=w, N=n) for a, k, e, w, n in raw]


def _starting_dim(params: SystemParams) -> int:
    """Basis size for ~2e-7 truncation error.

    The number distribution of the Gaussian fixed point decays by roughly
    q = m_plus/(m_plus + 2) per level (exact for thermal and squeezed-vacuum
    limits), and the truncation error tracks ~30 q^dim empirically.
    """
    moments = quad_moments_steady(params)
    m_plus = max(moments.plus, 0.05)
    q = m_plus / (m_plus + 2.0)
    dim = math.ceil(math.log(30.0 / 2e-7) / -math.log(q))
    return min(70, max(12, dim))


def verify_master(profile: ToleranceProfile) -> VerifyReport:
    """Number-basis steady moments vs the closed form on the fixed grid."""
    grid = _master_grid()
    worst_moment = 0.0
    worst_trace = 0.0
    converged_points = 0
    failures: List[str] = []
    for params in grid:
        d0 = _starting_dim(params) + profile.master_extra_dim
        previous: Optional[Tuple[float, float]] = None
        converged_moments: Optional[Tuple[float, float]] = None
        state = None
        for dim in (d0, d0 + 8, d0 + 16, d0 + 24):
            warm = state.padded(dim) if state is not None else None
            try:
                state = fockspace.steady_state(params, dim, initial=warm)
            except fockspace.TruncationLeakError:
                state = None
                previous = None
                continue
            moments = fockspace.quad_moments_from_state(state)
            trace_dev = abs(np.trace(state.matrix) - 1.0)
            herm_dev = float(np.max(np.abs(state.matrix - state.matrix.conj().T)))
            worst_trace = max(worst_trace, trace_dev, herm_dev)
            if previous is not None and (
                abs(moments[0] - previous[0]) < 1e-8 and abs(moments[1] - previous[1]) < 1e-8
            ):
                converged_moments = moments
                break
            previous = moments
        if converged_moments is None:
            failures.append(f"no truncation convergence at {params}")
            continue
        converged_points += 1
        target = quad_moments_steady(params)
        dev = max(
            abs(converged_moments[0] - target.plus), abs(converged_moments[1] - target.minus)
        )
        worst_moment = max(worst_moment, dev)

    checks = [
        Check(
            name="density-matrix steady moments vs closed form",
            passed=worst_moment < profile.master_moments and not failures,
            worst=worst_moment,
            tolerance=profile.master_moments,
            detail=f"{converged_points}/{len(grid)} points truncation-converged",
        ),
        Check(
            name="trace and Hermiticity preservation",
            passed=worst_trace < profile.master_trace,
            worst=worst_trace,
            tolerance=profile.master_trace,
        ),
    ]
    for failure in failures:
        checks.append(Check(name=failure, passed=False, worst=math.inf, tolerance=0.0))
    return VerifyReport(
        title=f"density-matrix oracle vs closed form (profile: {profile.name})",
        checks=tuple(checks),
    )


def verify_scope(scope: str, profile_name: str = "default") -> Tuple[str, bool]:
    """Run one or both oracle suites; returns (report text, all passed)."""
    try:
        profile = PROFILES[profile_name]
    except KeyError:
        raise ValueError(
            f"unknown tolerance profile {profile_name!r}; choose from {sorted(PROFILES)}"
        ) from None
    reports: List[VerifyReport] = []
    if scope in ("langevin", "all"):
        reports.append(verify_langevin(profile))
    if scope in ("master", "all"):
        reports.append(verify_master(profile))
    if not reports:
        raise ValueError(f"unknown scope {scope!r}; choose langevin, master or all")
    text = "\n\n".join(report.render() for report in reports)
    return text + "\n", all(report.ok for report in reports)

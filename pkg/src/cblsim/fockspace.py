"""Second verification path: density-matrix propagation in a photon-number basis.

The cavity-mode generator is assembled from a gain channel at rate
g_up = A C / B + kappa N, a loss channel at rate g_down = A D / B +
kappa (N + 1), a two-photon (parametric) Hamiltonian of strength beta, and a
phase-sensitive pair term whose coefficient g_corr is fixed by requiring the
first and second moment equations of the generator to coincide exactly with
the c-number drift and diffusion of :mod:`cblsim.model`.  That makes this
module and the Langevin reduction logically independent realizations of one
generator, so their agreement on steady moments is a real test rather than
a tautology.

Everything is dense numpy at desk scale (dim <= 80 or so); the propagator
is a classical fourth-order explicit scheme on the full matrix, which
converges to the exact null space of the generator regardless of step size
(within stability), so step size controls only the transient accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ThresholdError, TruncationLeakError
from .model import SystemParams, drift_diffusion, gain_coefficients, atomic_preparation, reservoir_moments

# population allowed in the top two basis states before results are rejected
LEAK_LIMIT = 1e-6
STABILITY_MARGIN = 0.1


@dataclass
class FockState:
    """Density matrix in the photon-number basis, truncated at dim - 1."""

    dim: int
    matrix: np.ndarray

    @staticmethod
    def vacuum(dim: int) -> "FockState":
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
        return FockState(dim, rho)

    def validate(self, tol: float = 1e-10) -> None:
        """Check unit trace, Hermiticity and positivity of the diagonal."""
        if self.matrix.shape != (self.dim, self.dim):
            raise ValueError(f"matrix shape {self.matrix.shape} != ({self.dim}, {self.dim})")
        trace = np.trace(self.matrix)
        if abs(trace - 1.0) > tol:
            raise ValueError(f"trace deviates from 1 by {abs(trace - 1.0):.3g}")
        herm = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if herm > tol:
            raise ValueError(f"Hermiticity violated by {herm:.3g}")
        min_pop = float(np.min(np.diag(self.matrix).real))
        if min_pop < -1e-8:
            raise ValueError(f"negative population {min_pop:.3g}")

    def top_population(self) -> float:
        """Combined population of the two highest number states.

        The ground state never counts, so a dim-2 basis is judged by its
        single excited level.
        """
        pops = np.diag(self.matrix).real
        top = min(2, self.dim - 1)
        return float(np.sum(pops[self.dim - top :]))

    def padded(self, dim: int) -> "FockState":
        """Zero-padded copy of this state on a larger basis."""
        if dim < self.dim:
            raise ValueError(f"cannot pad {self.dim} down to {dim}")
        rho = np.zeros((dim, dim), dtype=complex)
        rho[: self.dim, : self.dim] = self.matrix
        return FockState(dim, rho)


@dataclass(frozen=True)
class GeneratorCoefficients:
    """Channel strengths of the number-basis generator.

    g_corr is the pair-correlation coefficient produced by moment matching;
    the parametric Hamiltonian strength equals the drift coefficient beta
    and is carried separately by the generator.
    """

    g_up: float
    g_down: float
    g_corr: float


class CavityGenerator:
    """Precomputed action rho -> d(rho)/dt for one operating point."""

    def __init__(self, params: SystemParams, dim: int):
        if dim < 2:
            raise ValueError(f"dim must be >= 2, got {dim}")
        prep = atomic_preparation(params.eta)
        g = gain_coefficients(prep, params.omega)
        M = reservoir_moments(params.N).M
        rates = drift_diffusion(params)
        A, kappa, N = params.A, params.kappa, params.N
        g_up = A * g.C / g.B + kappa * N
        g_down = A * g.D / g.B + kappa * (N + 1.0)
        # strength of <f f>; the pair coefficient absorbs the difference
        # between it and the Hamiltonian contribution beta
        c_ff = kappa * M - A * g.F / g.B
        g_corr = rates.beta - c_ff

        self.params = params
        self.dim = dim
        self.rates = rates
        self.coefficients = GeneratorCoefficients(g_up, g_down, g_corr)

        s = np.sqrt(np.arange(1, dim, dtype=float))
        a = np.diag(s, 1).astype(complex)
        ad = a.conj().T
        beta = rates.beta
        # all one-sided (non-sandwich) terms, collected into K rho + rho K^dag
        self._K = (
            -0.5 * g_up * (a @ ad)
            - 0.5 * g_down * (ad @ a)
            - 0.5 * g_corr * (ad @ ad + a @ a)
            + 0.5 * beta * (ad @ ad - a @ a)
        )
        self._Kd = self._K.conj().T
        weights = np.outer(s, s)  # sqrt(m n) weights for the sandwich terms
        self._w_up = g_up * weights
        self._w_down = g_down * weights
        self._w_corr = g_corr * weights if g_corr != 0.0 else None
        self._scratch = np.empty((dim - 1, dim - 1), dtype=complex)

    def fastest_rate(self) -> float:
        """Rate scale of the stiffest matrix elements, used for step bounds.

        The diagonal decay grows like (g_up + g_down)(n + m)/2; pair terms
        only widen the spectrum once they exceed the geometric mean of the
        channel rates, so only that excess is charged.
        """
        c = self.coefficients
        excess_pair = max(0.0, abs(c.g_corr) - math.sqrt(c.g_up * c.g_down))
        per_quantum = c.g_up + c.g_down + 2.0 * (excess_pair + abs(self.rates.beta))
        return max(per_quantum, 1e-12) * (self.dim - 1)

    def apply(self, rho: np.ndarray, out: Optional[np.ndarray] = None) -> np.ndarray:
        """Evaluate d(rho)/dt; preserves trace and Hermiticity exactly."""
        if out is None:
            out = np.empty_like(rho)
        work = self._scratch
        np.matmul(self._K, rho, out=out)
        out += rho @ self._Kd
        np.multiply(self._w_up, rho[:-1, :-1], out=work)   # ad rho a
        out[1:, 1:] += work
        np.multiply(self._w_down, rho[1:, 1:], out=work)   # a rho ad
        out[:-1, :-1] += work
        if self._w_corr is not None:
            np.multiply(self._w_corr, rho[:-1, 1:], out=work)  # ad rho ad
            out[1:, :-1] += work
            np.multiply(self._w_corr, rho[1:, :-1], out=work)  # a rho a
            out[:-1, 1:] += work
        return out


def build_generator(params: SystemParams, dim: int) -> CavityGenerator:
    """Generator for one operating point on a dim-state number basis."""
    return CavityGenerator(params, dim)


def default_dt(generator: CavityGenerator) -> float:
    """Largest step honoring the stability margin on the fastest rate."""
    return STABILITY_MARGIN / generator.fastest_rate()


def _rk4_propagate(generator: CavityGenerator, rho: np.ndarray, t_end: float, dt: float) -> np.ndarray:
    n_steps = max(1, round(t_end / dt))
    h = t_end / n_steps
    k = np.empty_like(rho)
    stage = np.empty_like(rho)
    accum = np.empty_like(rho)
    for _ in range(n_steps):
        generator.apply(rho, out=k)                    # k1
        np.multiply(k, h / 6.0, out=accum)
        np.multiply(k, 0.5 * h, out=stage)
        stage += rho
        generator.apply(stage, out=k)                  # k2
        accum += (h / 3.0) * k
        np.multiply(k, 0.5 * h, out=stage)
        stage += rho
        generator.apply(stage, out=k)                  # k3
        accum += (h / 3.0) * k
        np.multiply(k, h, out=stage)
        stage += rho
        generator.apply(stage, out=k)                  # k4
        accum += (h / 6.0) * k
        rho += accum
    return rho


def evolve(state: FockState, generator: CavityGenerator, t_end: float, dt: Optional[float] = None) -> FockState:
    """Propagate a state for a time t_end.

    dt defaults to the stability-margin step.  Raises TruncationLeakError
    if the top two number states end up with more than 1e-6 population.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    if state.dim != generator.dim:
        raise ValueError(f"state dim {state.dim} != generator dim {generator.dim}")
    if dt is None:
        dt = default_dt(generator)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end == 0:
        return FockState(state.dim, state.matrix.copy())
    rho = _rk4_propagate(generator, state.matrix.copy(), t_end, dt)
    out = FockState(state.dim, rho)
    leak = out.top_population()
    if leak > LEAK_LIMIT:
        raise TruncationLeakError(
            f"top two number states carry {leak:.3g} population at dim={state.dim}"
        )
    return out


def moments_from_state(state: FockState) -> Tuple[complex, complex, float]:
    """Expectation values (<a>, <a^2>, <a^dag a>) of a number-basis matrix.

    The quadrature moments follow as <x_+/-^2> = 2 Re<a^2> +/- 2 <a^dag a>
    once <a> = 0, with <a^dag^2> the conjugate of <a^2>.
    """
    rho = state.matrix
    dim = state.dim
    n_weights = np.arange(dim, dtype=float)
    mean = complex(np.sum(np.sqrt(n_weights[1:]) * np.diagonal(rho, -1)))
    if dim > 2:
        w2 = np.sqrt(n_weights[2:] * n_weights[1:-1])
        a_sq = complex(np.sum(w2 * np.diagonal(rho, -2)))
    else:
        a_sq = 0.0 + 0.0j
    n = float(np.sum(n_weights * np.diag(rho).real))
    return mean, a_sq, n


def quad_moments_from_state(state: FockState) -> Tuple[float, float]:
    """Normally ordered quadrature moments (<x_+^2>, <x_-^2>) of a state."""
    _, a_sq, n = moments_from_state(state)
    return 2.0 * a_sq.real + 2.0 * n, 2.0 * a_sq.real - 2.0 * n


def steady_state(
    params: SystemParams,
    dim: int,
    dt: Optional[float] = None,
    moment_tol: float = 1e-10,
    max_chunks: int = 400,
    initial: Optional[FockState] = None,
) -> FockState:
    """Propagate to the fixed point of the generator, from the vacuum by default.

    Runs in chunks of 1/min(lambda_+/-) and stops once the moment vector
    (<a>, <a^2>, <a^dag a>) moves less than moment_tol over a chunk.  The
    explicit scheme shares its fixed point with the exact flow, so the
    detector tolerance, not the step, limits the result.  Passing an
    ``initial`` state (for instance the fixed point found on a smaller
    basis, zero-padded) only shortens the transient.
    """
    generator = build_generator(params, dim)
    rates = generator.rates
    if not rates.below_threshold:
        raise ThresholdError(
            f"no steady state: lambda_minus={rates.lambda_minus:.6g}"
        )
    if dt is None:
        dt = default_dt(generator)
    chunk = 1.0 / min(rates.lambda_plus, rates.lambda_minus)
    if initial is None:
        state = FockState.vacuum(dim)
    else:
        if initial.dim != dim:
            raise ValueError(f"initial dim {initial.dim} != {dim}")
        state = FockState(dim, initial.matrix.copy())
    previous = np.array([0.0, 0.0, 0.0, 0.0])
    for _ in range(max_chunks):
        state = evolve(state, generator, chunk, dt)
        mean, a_sq, n = moments_from_state(state)
        current = np.array([mean.real, mean.imag, a_sq.real, n])
        if np.max(np.abs(current - previous)) < moment_tol:
            return state
        previous = current
    raise RuntimeError(
        f"no fixed point after {max_chunks} chunks of {chunk:.3g} time units"
    )


@dataclass(frozen=True)
class TruncationRow:
    dim: int
    m_plus: float
    m_minus: float
    n: float
    leak: float


@dataclass(frozen=True)
class TruncationScan:
    """Steady moments per basis size plus the first converged size."""

    rows: List[TruncationRow]
    converged_dim: Optional[int]

    @property
    def converged(self) -> bool:
        return self.converged_dim is not None


def truncation_scan(
    params: SystemParams,
    dims: Sequence[int],
    dt: Optional[float] = None,
    tol: float = 1e-8,
) -> TruncationScan:
    """Steady-state moments across increasing truncations.

    converged_dim is the smallest dim whose moments agree with the next
    smaller dim to within tol.  Raises TruncationLeakError if even the
    largest dim leaks more than the acceptance limit.
    """
    dims = list(dims)
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"dims must be strictly increasing, got {dims}")
    rows: List[TruncationRow] = []
    converged_dim = None
    leak_error = None
    for dim in dims:
        try:
            state = steady_state(params, dim, dt=dt)
        except TruncationLeakError as err:
            leak_error = err
            if dim == dims[-1]:
                raise TruncationLeakError(
                    f"largest dim {dim} still leaks: {err}"
                ) from err
            continue
        m_plus, m_minus = quad_moments_from_state(state)
        _, _, n = moments_from_state(state)
        rows.append(TruncationRow(dim, m_plus, m_minus, n, state.top_population()))
        if converged_dim is None and len(rows) >= 2:
            prev, curr = rows[-2], rows[-1]
            if abs(curr.m_plus - prev.m_plus) < tol and abs(curr.m_minus - prev.m_minus) < tol:
                converged_dim = prev.dim
    if not rows and leak_error is not None:
        raise TruncationLeakError(str(leak_error))
    return TruncationScan(rows=rows, converged_dim=converged_dim)

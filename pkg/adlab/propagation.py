"""Time-evolution operators: exact (numerical), adiabatic, and their
decomposition U_nm(t) = ⟨n(t)|U(t)|m(0)⟩ in the instantaneous basis.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from adlab.exceptions import NonHermitianInput, PhaseUnwrapAmbiguous, StepTooLarge
from adlab.grid import TimeGrid
from adlab.logger import logger
from adlab.models.base import HERMITIAN_TOL, HamiltonianModel
from adlab.spectral import (
    CouplingMatrix,
    SpectralFrame,
    coupling_array,
    energies_array,
    frame_times,
    states_array,
    time_derivative,
    uniform_step,
)

STEP_GUARD = 0.5
DOMINANCE_FLOOR = 0.1
INTEGRATORS = ("midpoint", "magnus4")


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    U: np.ndarray  # (K, N, N), fixed t=0 basis
    label: str = "exact"
    psi: Optional[np.ndarray] = None  # (K, N) samples of U(t)|ψ(0)⟩

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


@dataclass(frozen=True, eq=False)
class PropagatorDecomposition:
    times: np.ndarray
    Unm: np.ndarray          # (K, N, N)
    phi: np.ndarray          # (K, N) unwrapped Arg U_nn
    phi_valid: np.ndarray    # (N,) bool
    offdiag_norm: np.ndarray  # (K,)
    epsilon_hat: float
    warnings: List[PhaseUnwrapAmbiguous] = field(default_factory=list)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.Unm, axis1=1, axis2=2)


def _dagger(stack: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(stack, -1, -2))


def unitarity_residual(stack: np.ndarray) -> float:
    """max over the stack of max|U†U − I|."""
    eye = np.eye(stack.shape[-1])
    return float(np.max(np.abs(_dagger(stack) @ stack - eye)))


def _hermitian_exponentials(generators: np.ndarray) -> np.ndarray:
    """exp(−iK) for a stack of Hermitian K, exactly unitary via eigh."""
    w, v = np.linalg.eigh(generators)
    return (v * np.exp(-1j * w)[:, None, :]) @ _dagger(v)


def _step_generators(model: HamiltonianModel, times: np.ndarray, dt: float, method: str) -> np.ndarray:
    if method == "midpoint":
        mids = model.evaluate_many(times[:-1] + dt / 2)
        _check_step(mids, times, dt)
        return dt * mids
    if method == "magnus4":
        offset = dt * np.sqrt(3) / 6
        h1 = model.evaluate_many(times[:-1] + dt / 2 - offset)
        h2 = model.evaluate_many(times[:-1] + dt / 2 + offset)
        _check_step(h1, times, dt)
        _check_step(h2, times, dt)
        commutator = h2 @ h1 - h1 @ h2
        return 0.5 * dt * (h1 + h2) - 1j * (np.sqrt(3) * dt ** 2 / 12) * commutator
    raise ValueError(f"Unsupported integrator: {method}")


def _check_step(hamiltonians: np.ndarray, times: np.ndarray, dt: float) -> None:
    residuals = np.max(np.abs(hamiltonians - _dagger(hamiltonians)), axis=(1, 2))
    worst = int(np.argmax(residuals))
    if residuals[worst] > HERMITIAN_TOL:
        raise NonHermitianInput(float(times[worst]), float(residuals[worst]))
    norm = float(np.max(np.abs(np.linalg.eigvalsh(hamiltonians))))
    if dt * norm > STEP_GUARD:
        raise StepTooLarge(dt, norm, STEP_GUARD)


def propagate_exact(model: HamiltonianModel, grid: TimeGrid, psi0: Optional[np.ndarray] = None,
                    method: str = "midpoint") -> Trajectory:
    """Integrate i·dU/dt = H(t)U with exponential steps.

    'midpoint' uses exp(−iΔt H(t_k + Δt/2)) (second order); 'magnus4' adds
    the two-point commutator term (fourth order). Both step factors are
    exponentials of Hermitian matrices, so every step is exactly unitary.
    """
    times = grid.times
    dt = grid.dt
    factors = _hermitian_exponentials(_step_generators(model, times, dt, method))

    n = model.dimension
    U = np.empty((len(times), n, n), dtype=complex)
    U[0] = np.eye(n)
    for k, factor in enumerate(factors):
        U[k + 1] = factor @ U[k]

    psi = None if psi0 is None else U @ np.asarray(psi0, dtype=complex)
    logger.debug(f"Propagated {model.name} over {len(times)} points ({method}, dt={dt:.3e})")
    return Trajectory(times=times, U=U, label="exact", psi=psi)


def adiabatic_phases(frames: Sequence[SpectralFrame], coupling_seq: Sequence[CouplingMatrix]) -> np.ndarray:
    """φ_n(t) = −∫E_n dt′ + ∫ i⟨n|ṅ⟩ dt′ (real part), trapezoidal, φ_n(0) = 0."""
    times = frame_times(frames)
    uniform_step(times)
    rates = -energies_array(frames) - np.imag(np.diagonal(coupling_array(coupling_seq), axis1=1, axis2=2))
    return cumulative_trapezoid(rates, times, axis=0, initial=0.0)


def propagate_adiabatic(frames: Sequence[SpectralFrame], coupling_seq: Sequence[CouplingMatrix],
                        psi0: Optional[np.ndarray] = None) -> Trajectory:
    """U_ad(t) = Σ_n e^{iφ_n(t)} |n(t)⟩⟨n(0)|."""
    phi = adiabatic_phases(frames, coupling_seq)
    states = states_array(frames)
    U = (states * np.exp(1j * phi)[:, None, :]) @ states[0].conj().T
    psi = None if psi0 is None else U @ np.asarray(psi0, dtype=complex)
    return Trajectory(times=frame_times(frames), U=U, label="adiabatic", psi=psi)


def decompose(trajectory: Trajectory, frames: Sequence[SpectralFrame]) -> PropagatorDecomposition:
    """Project U(t) on the instantaneous basis and extract φ_n and ε̂."""
    times = frame_times(frames)
    if len(times) != len(trajectory.times) or np.max(np.abs(times - trajectory.times)) > 1e-12:
        raise ValueError("Trajectory and frames must share the grid")

    states = states_array(frames)
    unm = _dagger(states) @ trajectory.U @ states[0]
    diag = np.diagonal(unm, axis1=1, axis2=2)

    steps = np.angle(diag[1:] * np.conj(diag[:-1]))
    phi = np.vstack([np.angle(diag[:1]), np.angle(diag[:1]) + np.cumsum(steps, axis=0)])

    n_levels = unm.shape[1]
    phi_valid = np.ones(n_levels, dtype=bool)
    warnings = []
    for n in range(n_levels):
        weak = np.flatnonzero(np.abs(diag[:, n]) < DOMINANCE_FLOOR)
        if len(weak):
            k = int(weak[0])
            issue = PhaseUnwrapAmbiguous(n, float(times[k]), float(abs(diag[k, n])))
            logger.warning(f"⚠️ {issue}")
            warnings.append(issue)
            phi_valid[n] = False

    off = ~np.eye(n_levels, dtype=bool)
    offdiag_norm = np.max(np.abs(unm[:, off]), axis=1) if n_levels > 1 else np.zeros(len(times))
    return PropagatorDecomposition(
        times=times,
        Unm=unm,
        phi=phi,
        phi_valid=phi_valid,
        offdiag_norm=offdiag_norm,
        epsilon_hat=float(np.max(offdiag_norm)),
        warnings=warnings,
    )


def moving_basis_unitarity_residual(decomposition: PropagatorDecomposition) -> float:
    """max|Σ_p U_pn conj(U_pm) − δ_nm| over the grid."""
    return unitarity_residual(decomposition.Unm)


def verify_offdiag_ode_residual(decomposition: PropagatorDecomposition, frames: Sequence[SpectralFrame],
                                coupling_seq: Sequence[CouplingMatrix]) -> np.ndarray:
    """Per-time max |i·U̇_nm − E_n U_nm + i Σ_p ⟨n|ṗ⟩ U_pm|."""
    dt = uniform_step(decomposition.times)
    unm = decomposition.Unm
    energies = energies_array(frames)
    d = coupling_array(coupling_seq)
    residual = 1j * time_derivative(unm, dt) - energies[:, :, None] * unm + 1j * (d @ unm)
    return np.max(np.abs(residual), axis=(1, 2))

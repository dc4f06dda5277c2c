"""Consistency checks of the adiabatic approximation.

The rotated-frame norm check, minimum-normed distances, the lower bound on
the smallness parameter ε and the adiabatic-vs-exact fidelity.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from adlab.exceptions import NotNormalized
from adlab.grid import TimeGrid
from adlab.logger import logger
from adlab.models.base import HamiltonianModel
from adlab.phases import trapezoid_linear_ode
from adlab.propagation import PropagatorDecomposition, Trajectory, decompose, propagate_exact
from adlab.spectral import (
    CouplingMatrix,
    SpectralFrame,
    coupling_array,
    couplings,
    energies_array,
    frame_times,
    states_array,
    tracked_frames,
)

NORMALIZATION_TOL = 1e-9
INDETERMINATE_TOL = 1e-9
ADIABATIC_DISTANCE_TOL = 1e-3

ADIABATIC = "adiabatic"
NON_ADIABATIC = "non_adiabatic"
EPSILON_SPLIT = "offdiag_over_eps_hat"


@dataclass(frozen=True, eq=False)
class RotatedFrame:
    states: np.ndarray       # (K, N, N), columns |n̄(t)⟩ = U†|n(t)⟩
    hamiltonians: np.ndarray  # (K, N, N), H̄ = −U†HU


@dataclass(frozen=True, eq=False)
class MSReport:
    grid: TimeGrid
    level: int
    norm_naive: np.ndarray
    norm_corrected: np.ndarray
    norm_true: np.ndarray
    norm_diagonal: np.ndarray
    hbar_check: float

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


@dataclass(frozen=True, eq=False)
class EpsilonBoundReport:
    grid: TimeGrid
    level: int
    D_eig: np.ndarray
    D_state: np.ndarray
    denom: np.ndarray
    eps_lower: np.ndarray         # NaN where indeterminate
    eps_lower_linear: np.ndarray  # printed linear-difference form, not asserted sound
    eps_hat: float
    indeterminate: np.ndarray
    regime: str
    split: str = EPSILON_SPLIT

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


def _check_unit(vector: np.ndarray) -> None:
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1) > NORMALIZATION_TOL:
        raise NotNormalized(norm)


def min_normed_distance(a: np.ndarray, b: np.ndarray) -> float:
    """D(a, b) = √(2(1 − |⟨a|b⟩|)).

    Raises:
        NotNormalized: If either vector is off unit norm by more than 1e-9
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_unit(a)
    _check_unit(b)
    return float(np.sqrt(max(0.0, 2 * (1 - abs(np.vdot(a, b))))))


def _distances_from(start: np.ndarray, path: np.ndarray) -> np.ndarray:
    overlaps = np.abs(path @ start.conj())
    return np.sqrt(np.clip(2 * (1 - overlaps), 0.0, None))


def rotated_frame_states(model: HamiltonianModel, trajectory: Trajectory,
                         frames: Sequence[SpectralFrame]) -> RotatedFrame:
    """|n̄(t)⟩ = U†(t)|n(t)⟩ and H̄(t) = −U†(t)H(t)U(t)."""
    u_dagger = np.conj(np.swapaxes(trajectory.U, -1, -2))
    hamiltonians = model.evaluate_many(trajectory.times)
    return RotatedFrame(u_dagger @ states_array(frames), -(u_dagger @ hamiltonians @ trajectory.U))


def marzlin_sanders_check(model: HamiltonianModel, grid: TimeGrid, n: int,
                          frames: Optional[Sequence[SpectralFrame]] = None,
                          coupling_seq: Optional[Sequence[CouplingMatrix]] = None,
                          trajectory: Optional[Trajectory] = None,
                          method: str = "midpoint") -> MSReport:
    """Norm of the rotated-frame state |ψ̄⟩ = U†|n(0)⟩ three ways.

    norm_naive: e^{iγ_n}⟨n(0)|n(t)⟩, the product that follows from inserting
    the adiabatic ansatz into the rotated frame. norm_corrected: the same
    product with ⟨n(0)|n(t)⟩ replaced by the solution of the strict adiabatic
    amplitude equation. norm_true: ⟨ψ̄|ψ̄⟩ from U itself. norm_diagonal:
    |U_nn|², the norm left when only the diagonal piece of U is kept.
    """
    frames = frames if frames is not None else tracked_frames(model, grid)
    coupling_seq = coupling_seq if coupling_seq is not None else couplings(frames)
    psi0 = frames[0].state(n)
    if trajectory is None:
        trajectory = propagate_exact(model, grid, psi0=psi0, method=method)

    rotated = rotated_frame_states(model, trajectory, frames)
    n_bar = rotated.states[:, :, n]
    energies = energies_array(frames)[:, n]
    eigen_residual = rotated.hamiltonians @ n_bar[:, :, None] + energies[:, None, None] * n_bar[:, :, None]
    hbar_check = float(np.max(np.abs(eigen_residual)))

    times = frame_times(frames)
    gamma_rate = -np.imag(coupling_array(coupling_seq)[:, n, n])
    gamma = cumulative_trapezoid(gamma_rate, times, initial=0.0)
    states = states_array(frames)
    a_exact = states[:, :, n] @ psi0.conj()
    a_adiabatic = trapezoid_linear_ode(-1j * gamma_rate, np.zeros(len(times), dtype=complex), grid.dt)

    psi_bar = np.conj(np.swapaxes(trajectory.U, -1, -2)) @ psi0
    unm = decompose(trajectory, frames).Unm

    report = MSReport(
        grid=grid,
        level=n,
        norm_naive=np.exp(1j * gamma) * a_exact,
        norm_corrected=np.exp(1j * gamma) * a_adiabatic,
        norm_true=np.sum(np.abs(psi_bar) ** 2, axis=1),
        norm_diagonal=np.abs(unm[:, n, n]) ** 2,
        hbar_check=hbar_check,
    )
    logger.debug(
        f"Rotated-frame check level {n}: min|naive|={np.min(np.abs(report.norm_naive)):.6f}, "
        f"max|corrected-1|={np.max(np.abs(report.norm_corrected - 1)):.2e}, H̄ residual={hbar_check:.2e}"
    )
    return report


def epsilon_lower_bound(decomposition: PropagatorDecomposition, frames: Sequence[SpectralFrame],
                        trajectory: Trajectory, n: int) -> EpsilonBoundReport:
    """Pointwise lower bound on ε from the two minimum-normed distances.

    eps_lower = (D_eig² − D_state²)/(2·Σ_{m≠n}|δU_mn|) with δU_mn = U_mn/ε̂;
    points where Σ_{m≠n}|U_mn| ≤ 1e-9 are flagged indeterminate (NaN).
    """
    states = states_array(frames)
    psi0 = states[0][:, n]
    psi = trajectory.psi if trajectory.psi is not None else trajectory.U @ psi0

    d_eig = _distances_from(psi0, states[:, :, n])
    d_state = _distances_from(psi0, psi)

    others = [m for m in range(states.shape[2]) if m != n]
    raw = np.sum(np.abs(decomposition.Unm[:, others, n]), axis=1)
    eps_hat = decomposition.epsilon_hat
    denom = raw / eps_hat if eps_hat > 0 else raw

    indeterminate = raw <= INDETERMINATE_TOL
    safe = np.where(indeterminate, 1.0, denom)
    eps_lower = np.where(indeterminate, np.nan, (d_eig ** 2 - d_state ** 2) / (2 * safe))
    eps_linear = np.where(indeterminate, np.nan, (d_eig - d_state) / safe)

    regime = ADIABATIC if np.max(np.abs(d_eig - d_state)) <= ADIABATIC_DISTANCE_TOL else NON_ADIABATIC
    if np.any(indeterminate):
        logger.debug(f"ε bound indeterminate at {int(np.sum(indeterminate))} points")
    if eps_hat == 0:
        logger.warning("⚠️ ε̂ = 0: ε bound reported with raw off-diagonal magnitudes")

    grid = TimeGrid(float(decomposition.times[-1]), len(decomposition.times) - 1)
    return EpsilonBoundReport(grid, n, d_eig, d_state, denom, eps_lower, eps_linear, eps_hat,
                              indeterminate, regime)


def _final_matrices(value: Union[Trajectory, np.ndarray]) -> np.ndarray:
    return np.asarray(value.U if isinstance(value, Trajectory) else value, dtype=complex)


def fidelity_adiabatic_vs_exact(U_ad: Union[Trajectory, np.ndarray], U_exact: Union[Trajectory, np.ndarray],
                                frames: Sequence[SpectralFrame], n: int) -> np.ndarray:
    """F(t) = |⟨ψ_A(t)|ψ_E(t)⟩|² for the two evolutions of |n(0)⟩."""
    adiabatic, exact = _final_matrices(U_ad), _final_matrices(U_exact)
    if adiabatic.shape != exact.shape:
        raise ValueError("Adiabatic and exact propagators must share the grid")
    psi0 = frames[0].state(n)
    overlaps = np.einsum("ki,ki->k", (adiabatic @ psi0).conj(), exact @ psi0)
    return np.abs(overlaps) ** 2


def fidelity_constant(fidelity: np.ndarray, omega: float, theta: float) -> float:
    """C in 1 − min F = C·(ω sin θ/2)²."""
    scale = (omega * np.sin(theta) / 2) ** 2
    if scale == 0:
        return 0.0
    return float((1 - np.min(fidelity)) / scale)

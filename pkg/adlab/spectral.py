"""Instantaneous eigensystems tracked along a time grid.

Frames are level-tracked by maximal overlap with the previous frame and
phase-fixed so that consecutive same-level overlaps ⟨n(t_{k-1})|n(t_k)⟩ are
real and positive (discrete parallel transport). Couplings ⟨m(t)|ṅ(t)⟩ are
central finite differences of the gauge-fixed states.
"""
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from adlab.exceptions import DegeneracyDetected, GridTooCoarse, NonHermitianInput
from adlab.grid import TimeGrid
from adlab.logger import logger
from adlab.models.base import HERMITIAN_TOL, HamiltonianModel

PARALLEL_TRANSPORT = "parallel_transport"
CLOSED_FORM = "closed_form"
CUSTOM = "custom"

DEGENERACY_REL_TOL = 1e-8
ANTI_HERMITIAN_TOL = 1e-3
_TINY = 1e-300


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GaugeRecord:
    """Bookkeeping of the tracking permutation and phase correction of one frame."""
    convention: str
    permutation: Tuple[int, ...]
    phase_shift: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class SpectralFrame:
    t: float
    energies: np.ndarray
    states: np.ndarray  # column n is |n(t)⟩
    gauge: GaugeRecord

    @property
    def dimension(self) -> int:
        return len(self.energies)

    def state(self, n: int) -> np.ndarray:
        return self.states[:, n]


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    t: float
    d: np.ndarray  # d[m, n] ≈ ⟨m(t)|ṅ(t)⟩


@dataclass(frozen=True, eq=False)
class AdiabaticityReport:
    ratios: np.ndarray  # (K, N, N), zero diagonal
    max_ratio: float
    t_max: float
    pair_max: Tuple[int, int]


# ──────────────────────────────────────────────────────────────────────────────
# STACKING HELPERS
# ──────────────────────────────────────────────────────────────────────────────
def frame_times(frames: Sequence[SpectralFrame]) -> np.ndarray:
    return np.array([f.t for f in frames])


def energies_array(frames: Sequence[SpectralFrame]) -> np.ndarray:
    return np.stack([f.energies for f in frames])


def states_array(frames: Sequence[SpectralFrame]) -> np.ndarray:
    return np.stack([f.states for f in frames])


def coupling_array(couplings: Sequence[CouplingMatrix]) -> np.ndarray:
    return np.stack([c.d for c in couplings])


def uniform_step(times: np.ndarray) -> float:
    """Return Δt, raising ValueError unless `times` is strictly increasing and uniform."""
    steps = np.diff(times)
    if len(steps) == 0 or np.any(steps <= 0):
        raise ValueError("Time grid must be strictly increasing")
    dt = float(steps.mean())
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1.0):
        raise ValueError("Time grid must be uniform")
    return dt


def _check_gaps(t: float, energies: np.ndarray, tol_deg: Optional[float]) -> None:
    if len(energies) < 2:
        return
    gap = float(np.min(np.diff(np.sort(energies))))
    tol = tol_deg if tol_deg is not None else DEGENERACY_REL_TOL * max(np.max(np.abs(energies)), _TINY)
    if gap < tol:
        raise DegeneracyDetected(t, gap)


def _first_component_phase(states: np.ndarray) -> np.ndarray:
    """Phases that make the first non-negligible component of each column real positive."""
    shifts = np.zeros(states.shape[1])
    for n in range(states.shape[1]):
        column = states[:, n]
        idx = int(np.argmax(np.abs(column) > 1e-10))
        shifts[n] = -np.angle(column[idx])
    return shifts


def _match_levels(previous: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """perm[n] = column of `candidates` that continues level n of `previous`."""
    weights = np.abs(previous.conj().T @ candidates)
    perm = np.argmax(weights, axis=1)
    if len(set(perm.tolist())) == len(perm):
        return perm
    rows, cols = linear_sum_assignment(-weights)
    return cols[np.argsort(rows)]


# ──────────────────────────────────────────────────────────────────────────────
# FRAMES
# ──────────────────────────────────────────────────────────────────────────────
def decompose_tracked(model: HamiltonianModel, grid: TimeGrid, ref: Optional[np.ndarray] = None,
                      tol_deg: Optional[float] = None) -> Tuple[SpectralFrame, ...]:
    """Gauge-fixed, level-tracked eigensystems of `model` on `grid`.

    Args:
        model: Hamiltonian source
        grid: Uniform time grid
        ref: Optional N×N matrix whose columns fix the order and phase of frame 0
        tol_deg: Absolute degeneracy tolerance (default 1e-8 × max|E| per frame)

    Raises:
        NonHermitianInput: If H(t) violates the Hermiticity tolerance
        DegeneracyDetected: If two levels come closer than the tolerance
    """
    times = grid.times
    hamiltonians = model.evaluate_many(times)
    residuals = np.max(np.abs(hamiltonians - np.conj(np.swapaxes(hamiltonians, -1, -2))), axis=(1, 2))
    bad = np.flatnonzero(residuals > HERMITIAN_TOL)
    if len(bad):
        raise NonHermitianInput(float(times[bad[0]]), float(residuals[bad[0]]))

    raw_energies, raw_states = np.linalg.eigh(hamiltonians)
    n_levels = model.dimension
    frames = []
    previous = None
    for k, t in enumerate(times):
        _check_gaps(float(t), raw_energies[k], tol_deg)
        candidates = raw_states[k]
        if previous is None:
            if ref is not None:
                ref = np.asarray(ref, dtype=complex)
                perm = _match_levels(ref, candidates)
                states = candidates[:, perm]
                shifts = -np.angle(np.einsum("in,in->n", ref.conj(), states))
            else:
                perm = np.arange(n_levels)
                states = candidates
                shifts = _first_component_phase(states)
        else:
            perm = _match_levels(previous, candidates)
            states = candidates[:, perm]
            shifts = -np.angle(np.einsum("in,in->n", previous.conj(), states))
        states = states * np.exp(1j * shifts)
        frames.append(SpectralFrame(
            t=float(t),
            energies=_frozen(raw_energies[k][perm]),
            states=_frozen(states),
            gauge=GaugeRecord(PARALLEL_TRANSPORT, tuple(int(p) for p in perm), _frozen(shifts)),
        ))
        previous = states

    logger.debug(f"Tracked {n_levels} levels of {model.name} over {len(frames)} frames")
    return tuple(frames)


def frames_from_closed_form(model: HamiltonianModel, grid: TimeGrid,
                            tol_deg: Optional[float] = None) -> Tuple[SpectralFrame, ...]:
    """Frames built from the model's closed-form eigenvectors, with no gauge fixing."""
    if not model.has_eigensystem:
        raise ValueError(f"{model.name} has no closed-form eigensystem")
    identity = tuple(range(model.dimension))
    zero = _frozen(np.zeros(model.dimension))
    frames = []
    for t in grid.times:
        energies, states = model.eigensystem(float(t))
        _check_gaps(float(t), energies, tol_deg)
        frames.append(SpectralFrame(float(t), _frozen(energies), _frozen(states),
                                    GaugeRecord(CLOSED_FORM, identity, zero)))
    return tuple(frames)


def parallel_transport(frames: Sequence[SpectralFrame]) -> Tuple[SpectralFrame, ...]:
    """Re-fix the phases of existing frames to the real-positive-overlap gauge.

    Frame 0 keeps its phases; level identity is taken as given.
    """
    fixed = [frames[0]]
    previous = frames[0].states
    for frame in frames[1:]:
        shifts = -np.angle(np.einsum("in,in->n", previous.conj(), frame.states))
        states = frame.states * np.exp(1j * shifts)
        fixed.append(SpectralFrame(frame.t, frame.energies, _frozen(states),
                                   GaugeRecord(PARALLEL_TRANSPORT, frame.gauge.permutation,
                                               _frozen(shifts))))
        previous = states
    return tuple(fixed)


def regauge(frames: Sequence[SpectralFrame], phases: np.ndarray) -> Tuple[SpectralFrame, ...]:
    """Multiply |n(t_k)⟩ by exp(i·phases[k, n])."""
    phases = np.asarray(phases, dtype=float)
    return tuple(
        SpectralFrame(f.t, f.energies, _frozen(f.states * np.exp(1j * phases[k])),
                      GaugeRecord(CUSTOM, f.gauge.permutation, _frozen(phases[k])))
        for k, f in enumerate(frames)
    )


# ──────────────────────────────────────────────────────────────────────────────
# COUPLINGS
# ──────────────────────────────────────────────────────────────────────────────
def time_derivative(states: np.ndarray, dt: float) -> np.ndarray:
    """O(Δt²) derivative of a (K, N, N) stack: central inside, one-sided at the ends."""
    deriv = np.empty_like(states)
    deriv[1:-1] = (states[2:] - states[:-2]) / (2 * dt)
    deriv[0] = (-3 * states[0] + 4 * states[1] - states[2]) / (2 * dt)
    deriv[-1] = (3 * states[-1] - 4 * states[-2] + states[-3]) / (2 * dt)
    return deriv


def couplings(frames: Sequence[SpectralFrame]) -> Tuple[CouplingMatrix, ...]:
    """d[m][n](t_k) = ⟨m(t_k)|ṅ(t_k)⟩ by finite differences.

    Raises:
        GridTooCoarse: If d + d† exceeds the anti-Hermiticity tolerance
    """
    if len(frames) < 3:
        raise ValueError("couplings need at least 3 frames")
    times = frame_times(frames)
    dt = uniform_step(times)
    states = states_array(frames)
    d = np.conj(np.swapaxes(states, -1, -2)) @ time_derivative(states, dt)

    residual = np.max(np.abs(d + np.conj(np.swapaxes(d, -1, -2))), axis=(1, 2))
    worst = int(np.argmax(residual))
    if residual[worst] > ANTI_HERMITIAN_TOL:
        raise GridTooCoarse(float(times[worst]), float(residual[worst]))
    return tuple(CouplingMatrix(float(t), _frozen(d[k])) for k, t in enumerate(times))


def couplings_from_hamiltonian(model: HamiltonianModel, frames: Sequence[SpectralFrame],
                               h: float = 1e-6) -> np.ndarray:
    """Off-diagonal ⟨m|ṅ⟩ = ⟨m|Ḣ|n⟩/(E_n − E_m) with Ḣ by central differences.

    Used as an independent cross-check of `couplings`; the diagonal is zero.
    """
    out = np.zeros((len(frames), frames[0].dimension, frames[0].dimension), dtype=complex)
    for k, frame in enumerate(frames):
        h_dot = (model.evaluate(frame.t + h) - model.evaluate(frame.t - h)) / (2 * h)
        numer = frame.states.conj().T @ h_dot @ frame.states
        gaps = frame.energies[None, :] - frame.energies[:, None]
        np.fill_diagonal(gaps, 1.0)
        out[k] = numer / gaps
        np.fill_diagonal(out[k], 0.0)
    return out


def adiabaticity_ratio(frames: Sequence[SpectralFrame],
                       coupling_seq: Sequence[CouplingMatrix]) -> AdiabaticityReport:
    """r[m][n](t) = |⟨m|ṅ⟩| / |E_n − E_m| for m ≠ n, with its global maximum."""
    energies = energies_array(frames)
    d = np.abs(coupling_array(coupling_seq))
    gaps = np.abs(energies[:, None, :] - energies[:, :, None])
    n_levels = energies.shape[1]
    off = ~np.eye(n_levels, dtype=bool)
    for k, frame in enumerate(frames):
        if n_levels > 1 and np.min(gaps[k][off]) == 0:
            raise DegeneracyDetected(frame.t, 0.0)
    ratios = np.zeros_like(d)
    ratios[:, off] = d[:, off] / gaps[:, off]
    if n_levels < 2:
        return AdiabaticityReport(ratios, 0.0, frames[0].t, (0, 0))
    k, m, n = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    return AdiabaticityReport(ratios, float(ratios[k, m, n]), frames[k].t, (int(m), int(n)))


def tracked_frames(model: HamiltonianModel, grid: TimeGrid,
                   tol_deg: Optional[float] = None) -> Tuple[SpectralFrame, ...]:
    """`decompose_tracked` seeded with the model's closed-form t=0 eigenvectors when it has them."""
    ref = model.eigensystem(0.0)[1] if model.has_eigensystem else None
    return decompose_tracked(model, grid, ref=ref, tol_deg=tol_deg)

"""Phase quantities along a trajectory.

Connection integrals ∫ i⟨ψ|ψ̇⟩ dt are accumulated from consecutive overlaps,
−Σ arg⟨ψ_k|ψ_{k+1}⟩, which keeps the noncyclic and open-path phases gauge invariant
on the grid itself; the reference-section route uses finite differences and
serves as the cross-check.
"""
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from adlab.exceptions import BranchSingularity, NonRealAccumulator, OrthogonalStates
from adlab.logger import logger
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

ORTHOGONALITY_TOL = 1e-6
ACCUMULATOR_TOL = 1e-6
BRANCH_TOL = 1e-9
ROUTE_TOL = 1e-5


@dataclass(frozen=True, eq=False)
class GaugeStampedPhase:
    """A gauge-dependent phase together with the gauge it was computed in."""
    values: np.ndarray
    gauge: str
    imag_residual: float = 0.0


@dataclass(frozen=True, eq=False)
class GeometricPhase:
    values: np.ndarray
    reference_route: np.ndarray
    route_discrepancy: float


@dataclass(frozen=True, eq=False)
class AmplitudeRecord:
    level: int
    times: np.ndarray
    A_exact: np.ndarray
    A_ode: np.ndarray
    A_adiabatic: np.ndarray
    A_series: np.ndarray
    S: np.ndarray
    Q: np.ndarray
    gamma: np.ndarray


@dataclass(frozen=True, eq=False)
class PhaseReport:
    level: int
    times: np.ndarray
    gauge: str
    delta: np.ndarray
    gamma: np.ndarray
    pancharatnam: Optional[np.ndarray]
    geom_noncyclic: Optional[np.ndarray]
    geom_openpath: np.ndarray
    S: np.ndarray
    Q: np.ndarray
    phi_corrected: np.ndarray
    # column -> first time where its phase is undefined; such columns are NaN
    undefined: Dict[str, float] = field(default_factory=dict)


# ──────────────────────────────────────────────────────────────────────────────
# BUILDING BLOCKS
# ──────────────────────────────────────────────────────────────────────────────
def _as_path(states) -> np.ndarray:
    path = np.asarray(states, dtype=complex)
    if path.ndim != 2 or len(path) < 2:
        raise ValueError("A state path must be a (K, N) array with K >= 2")
    return path


def connection_integral(states: np.ndarray) -> np.ndarray:
    """Cumulative ∫ i⟨ψ|ψ̇⟩ dt′ as −Σ arg⟨ψ_k|ψ_{k+1}⟩."""
    path = _as_path(states)
    links = np.einsum("ki,ki->k", path[:-1].conj(), path[1:])
    return np.concatenate([[0.0], -np.cumsum(np.angle(links))])


def _overlap_with_start(path: np.ndarray, times: Optional[np.ndarray], tol_orth: float) -> np.ndarray:
    overlaps = path @ path[0].conj()
    magnitudes = np.abs(overlaps)
    k = int(np.argmin(magnitudes))
    if magnitudes[k] < tol_orth:
        t = float(times[k]) if times is not None else float(k)
        raise OrthogonalStates(t, float(magnitudes[k]))
    return overlaps


def richardson_combine(coarse: np.ndarray, fine: np.ndarray) -> np.ndarray:
    """(4·I_h − I_2h)/3 on the coarse points; `fine` lives on the refined grid."""
    return (4 * np.asarray(fine)[::2] - np.asarray(coarse)) / 3


# ──────────────────────────────────────────────────────────────────────────────
# OPERATIONS
# ──────────────────────────────────────────────────────────────────────────────
def dynamical_phase(frames: Sequence[SpectralFrame], n: int) -> np.ndarray:
    """δ_n(t) = −∫ E_n dt′ by the trapezoidal rule."""
    times = frame_times(frames)
    uniform_step(times)
    return cumulative_trapezoid(-energies_array(frames)[:, n], times, initial=0.0)


def berry_accumulator(frames: Sequence[SpectralFrame], coupling_seq: Sequence[CouplingMatrix], n: int,
                      tol: float = ACCUMULATOR_TOL) -> GaugeStampedPhase:
    """γ_n(t) = ∫ i⟨n|ṅ⟩ dt′, stamped with the frames' gauge convention.

    Raises:
        NonRealAccumulator: If the imaginary part of the integral exceeds `tol`
    """
    times = frame_times(frames)
    uniform_step(times)
    rate = 1j * coupling_array(coupling_seq)[:, n, n]
    gamma = cumulative_trapezoid(rate, times, initial=0.0)
    residual = float(np.max(np.abs(gamma.imag)))
    if residual > tol:
        raise NonRealAccumulator(n, residual)
    return GaugeStampedPhase(gamma.real, frames[0].gauge.convention, residual)


def pancharatnam_phase(states: np.ndarray, times: Optional[np.ndarray] = None,
                       tol_orth: float = ORTHOGONALITY_TOL) -> np.ndarray:
    """Unwrapped Arg⟨ψ(0)|ψ(t)⟩.

    Raises:
        OrthogonalStates: If |⟨ψ(0)|ψ(t)⟩| < tol_orth anywhere on the path
    """
    path = _as_path(states)
    return np.unwrap(np.angle(_overlap_with_start(path, times, tol_orth)))


def reference_section(states: np.ndarray, tol_orth: float = ORTHOGONALITY_TOL) -> np.ndarray:
    """|χ(t)⟩ = ⟨ψ(t)|ψ(0)⟩/|⟨ψ(t)|ψ(0)⟩| · |ψ(t)⟩."""
    path = _as_path(states)
    overlaps = _overlap_with_start(path, None, tol_orth)
    return path * (np.conj(overlaps) / np.abs(overlaps))[:, None]


def geometric_phase_noncyclic(states: np.ndarray, times: np.ndarray,
                              tol_orth: float = ORTHOGONALITY_TOL) -> GeometricPhase:
    """Φ_G(t) = Arg⟨ψ(0)|ψ(t)⟩ + ∫ i⟨ψ|ψ̇⟩ dt′, cross-checked against ∫ i⟨χ|χ̇⟩ dt′."""
    path = _as_path(states)
    times = np.asarray(times, dtype=float)
    dt = uniform_step(times)
    values = pancharatnam_phase(path, times, tol_orth) + connection_integral(path)

    chi = reference_section(path, tol_orth)
    chi_rate = -np.imag(np.einsum("ki,ki->k", chi.conj(), time_derivative(chi, dt)))
    reference_route = cumulative_trapezoid(chi_rate, times, initial=0.0)

    discrepancy = float(np.max(np.abs(np.angle(np.exp(1j * (values - reference_route))))))
    if discrepancy > ROUTE_TOL:
        logger.warning(f"⚠️ Geometric phase routes differ by {discrepancy:.2e} (grid may be coarse)")
    return GeometricPhase(values, reference_route, discrepancy)


def open_path_adiabatic_phase(frames: Sequence[SpectralFrame], n: int,
                              tol_orth: float = ORTHOGONALITY_TOL) -> np.ndarray:
    """Φ_G^(n)(t) = Arg⟨n(0)|n(t)⟩ + ∫ i⟨n|ṅ⟩ dt′ on the eigenvector path."""
    path = states_array(frames)[:, :, n]
    return pancharatnam_phase(path, frame_times(frames), tol_orth) + connection_integral(path)


def trapezoid_linear_ode(rate: np.ndarray, source: np.ndarray, dt: float) -> np.ndarray:
    """Solve ẏ = rate·y + source, y(0) = 1, with the (implicit) trapezoidal rule."""
    y = np.empty(len(rate), dtype=complex)
    y[0] = 1.0
    half = 0.5 * dt
    for k in range(len(rate) - 1):
        y[k + 1] = ((1 + half * rate[k]) * y[k] + half * (source[k] + source[k + 1])) / (1 - half * rate[k + 1])
    return y


def amplitude_ode_solutions(frames: Sequence[SpectralFrame], coupling_seq: Sequence[CouplingMatrix],
                            n: int) -> AmplitudeRecord:
    """A_n(t) = ⟨n(0)|n(t)⟩ four ways: read from frames, integrated from the
    full amplitude equation, strict adiabatic e^{−iγ_n}, and the first-order series.
    """
    times = frame_times(frames)
    dt = uniform_step(times)
    states = states_array(frames)
    d = coupling_array(coupling_seq)
    n_levels = states.shape[2]
    others = [m for m in range(n_levels) if m != n]

    overlaps = np.einsum("i,kim->km", states[0][:, n].conj(), states)  # ⟨n(0)|m(t)⟩
    a_exact = overlaps[:, n]

    gamma_rate = 1j * d[:, n, n]
    gamma = cumulative_trapezoid(gamma_rate.real, times, initial=0.0)
    source = 1j * np.einsum("km,km->k", overlaps[:, others], d[:, others, n])

    # i·dA/dt = γ̇ A + S  ⇔  dA/dt = −iγ̇ A − iS
    a_ode = trapezoid_linear_ode(-1j * gamma_rate, -1j * source, dt)
    a_adiabatic = np.exp(-1j * gamma)
    q = cumulative_trapezoid(source * np.exp(1j * gamma), times, initial=0.0)

    # First-order overlaps ⟨n(0)|m(t)⟩ ≈ e^{−iγ_m} ∫ e^{iγ_m − iγ_n} ⟨n|ṁ⟩ dt′
    gammas = cumulative_trapezoid(-np.imag(np.diagonal(d, axis1=1, axis2=2)), times, axis=0, initial=0.0)
    born = np.zeros((len(times), len(others)), dtype=complex)
    for j, m in enumerate(others):
        integrand = np.exp(1j * (gammas[:, m] - gamma)) * d[:, n, m]
        born[:, j] = np.exp(-1j * gammas[:, m]) * cumulative_trapezoid(integrand, times, initial=0.0)
    source_1 = 1j * np.einsum("km,km->k", born, d[:, others, n])
    q_1 = cumulative_trapezoid(source_1 * np.exp(1j * gamma), times, initial=0.0)
    a_series = np.exp(-1j * gamma) * (1 - 1j * q_1)

    return AmplitudeRecord(n, times, a_exact, a_ode, a_adiabatic, a_series, source, q, gamma)


def branch_phase(q: np.ndarray, times: np.ndarray, tol: float = BRANCH_TOL) -> np.ndarray:
    """Continuously unwrapped atan2(−Re Q, 1 + Im Q).

    Raises:
        BranchSingularity: If |1 + Im Q| < tol at any time
    """
    q = np.asarray(q, dtype=complex)
    numerator, denominator = -q.real, 1 + q.imag
    singular = np.flatnonzero(np.abs(denominator) < tol)
    if len(singular):
        k = int(singular[0])
        raise BranchSingularity(float(times[k]), float(denominator[k]))
    return np.unwrap(np.arctan2(numerator, denominator))


def corrected_geometric_phase(record: AmplitudeRecord, zero_source: bool = False,
                              tol: float = BRANCH_TOL) -> np.ndarray:
    """Φ_G^(n)(t) = atan2(−Re Q_n, 1 + Im Q_n), continuously unwrapped.

    With `zero_source` the strict adiabatic limit S_n ≡ 0 is imposed, so
    Q_n ≡ 0 and the phase vanishes identically.

    Raises:
        BranchSingularity: If |1 + Im Q_n| < tol at any time
    """
    q = np.zeros_like(record.Q) if zero_source else record.Q
    return branch_phase(q, record.times, tol)


def _guarded(column: str, compute: Callable[[], np.ndarray], size: int,
             undefined: Dict[str, float]) -> np.ndarray:
    """Run `compute`; a phase without a defined branch becomes a NaN column."""
    try:
        return compute()
    except (OrthogonalStates, BranchSingularity) as e:
        logger.warning(f"⚠️ {column} undefined from t={e.t:.6g}: {e}")
        undefined[column] = e.t
        return np.full(size, np.nan)


def phase_report(frames: Sequence[SpectralFrame], coupling_seq: Sequence[CouplingMatrix], n: int,
                 psi: Optional[np.ndarray] = None) -> PhaseReport:
    """Every phase quantity of level n; `psi` is the exact evolution of |n(0)⟩.

    The Arg-based columns (pancharatnam, geom_noncyclic, geom_openpath and
    phi_corrected) are NaN when their overlap or branch denominator vanishes
    on the grid; the offending time is kept in `undefined`.
    """
    times = frame_times(frames)
    size = len(times)
    undefined: Dict[str, float] = {}
    record = amplitude_ode_solutions(frames, coupling_seq, n)
    pancharatnam = geom = None
    if psi is not None:
        pancharatnam = _guarded("pancharatnam", lambda: pancharatnam_phase(psi, times), size, undefined)
        geom = _guarded("geom_noncyclic", lambda: geometric_phase_noncyclic(psi, times).values, size, undefined)
    return PhaseReport(
        level=n,
        times=times,
        gauge=frames[0].gauge.convention,
        delta=dynamical_phase(frames, n),
        gamma=berry_accumulator(frames, coupling_seq, n).values,
        pancharatnam=pancharatnam,
        geom_noncyclic=geom,
        geom_openpath=_guarded("geom_openpath", lambda: open_path_adiabatic_phase(frames, n), size, undefined),
        S=record.S,
        Q=record.Q,
        phi_corrected=_guarded("phi_corrected", lambda: corrected_geometric_phase(record), size, undefined),
        undefined=undefined,
    )


def refine_phase_report(report: PhaseReport, fine_frames: Sequence[SpectralFrame],
                        fine_couplings: Sequence[CouplingMatrix]) -> PhaseReport:
    """Richardson-combine every quadrature in `report` with a rerun on the half-step grid.

    δ_n, γ_n and Q_n are combined as (4·I_h − I_2h)/3; φ_corrected is rebuilt
    from the combined Q_n. The overlap-based phases are exact sums on the
    grid and are left as they are.
    """
    n = report.level
    fine = amplitude_ode_solutions(fine_frames, fine_couplings, n)
    q = richardson_combine(report.Q, fine.Q)
    undefined = dict(report.undefined)
    phi = report.phi_corrected
    if "phi_corrected" not in undefined:
        phi = _guarded("phi_corrected", lambda: branch_phase(q, report.times), len(report.times), undefined)
    return replace(
        report,
        delta=richardson_combine(report.delta, dynamical_phase(fine_frames, n)),
        gamma=richardson_combine(report.gamma, berry_accumulator(fine_frames, fine_couplings, n).values),
        Q=q,
        phi_corrected=phi,
        undefined=undefined,
    )

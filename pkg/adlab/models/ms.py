"""Rotating-field spin-1/2 model in the instantaneous representation.

H(t) = R(t)·σ with strength ω₀ and a rotation of the field in the x-y plane
at frequency Ω = 2π/τ.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from adlab.logger import logger
from adlab.models.base import Eigensystem, HamiltonianModel

PROPAGATOR_TOL = 1e-4


@dataclass(frozen=True)
class MSParams:
    omega0: float
    Omega: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")

    @property
    def period(self) -> Optional[float]:
        """Drive period τ = 2π/Ω, None for a static field."""
        return None if self.Omega == 0 else 2 * np.pi / abs(self.Omega)


def ms_hamiltonian(p: MSParams, t: float) -> np.ndarray:
    w0, W = p.omega0, p.Omega
    diag = 0.5 * W * (1 - np.cos(2 * w0 * t))
    side = 0.5 * W * np.sin(2 * w0 * t)
    return np.array([
        [diag, np.exp(-1j * W * t) * (w0 - 1j * side)],
        [np.exp(1j * W * t) * (w0 + 1j * side), -diag],
    ], dtype=complex)


def ms_exact_propagator(p: MSParams, t: float) -> np.ndarray:
    c, s = np.cos(p.omega0 * t), np.sin(p.omega0 * t)
    return np.array([
        [c, -1j * np.exp(-1j * p.Omega * t) * s],
        [-1j * np.exp(1j * p.Omega * t) * s, c],
    ], dtype=complex)


def ms_theta(p: MSParams, t: float) -> float:
    """θ(t) = tan⁻¹[(Ω/2ω₀) sin 2ω₀t], principal branch."""
    return float(np.arctan(p.Omega / (2 * p.omega0) * np.sin(2 * p.omega0 * t)))


def ms_energy(p: MSParams, t: float) -> float:
    """E₀(t) = √(ω₀² + Ω² sin² ω₀t)."""
    return float(np.sqrt(p.omega0 ** 2 + (p.Omega * np.sin(p.omega0 * t)) ** 2))


def ms_eigensystem(p: MSParams, t: float) -> Eigensystem:
    e0 = ms_energy(p, t)
    tilt = p.Omega * np.sin(p.omega0 * t) ** 2
    upper = np.sqrt((e0 + tilt) / (2 * e0))
    lower = np.sqrt((e0 - tilt) / (2 * e0))
    half = 0.5 * (p.Omega * t + ms_theta(p, t))
    left, right = np.exp(-1j * half), np.exp(1j * half)

    n1 = np.array([upper * left, lower * right])
    n2 = np.array([-lower * left, upper * right])
    return np.array([e0, -e0]), np.column_stack([n1, n2])


def ms_diagonal_elements(p: MSParams, t: float) -> np.ndarray:
    """⟨n_i(t)|U(t)|n_i(0)⟩ for i = 1, 2 from the printed closed forms."""
    _, states = ms_eigensystem(p, t)
    a1, b1 = states[:, 0]
    a2, b2 = states[:, 1]
    c, s = np.cos(p.omega0 * t), np.sin(p.omega0 * t)
    minus, plus = np.exp(-1j * p.Omega * t), np.exp(1j * p.Omega * t)
    u11 = (np.conj(a1) * (c - 1j * minus * s) + np.conj(b1) * (c - 1j * plus * s)) / np.sqrt(2)
    # n2(0) = (-1, 1)/√2 carries the overall sign
    u22 = (np.conj(b2) * (c + 1j * plus * s) - np.conj(a2) * (c + 1j * minus * s)) / np.sqrt(2)
    return np.array([u11, u22])


def verify_ms_propagator(p: MSParams, t_end: Optional[float] = None, steps: int = 8000) -> float:
    """Max elementwise gap between the printed U(t) and integrating i·dU/dt = HU."""
    from adlab.grid import TimeGrid
    from adlab.propagation import propagate_exact

    t_end = t_end or 2 * np.pi / p.omega0
    grid = TimeGrid(t_end, steps)
    trajectory = propagate_exact(MSModel(p, verify=False), grid)
    printed = np.stack([ms_exact_propagator(p, t) for t in grid.times])
    return float(np.max(np.abs(trajectory.U - printed)))


def _check_printed_propagator(p: MSParams) -> bool:
    residual = verify_ms_propagator(p)
    if residual <= PROPAGATOR_TOL:
        logger.debug(f"MS printed propagator verified (residual {residual:.2e})")
        return True
    logger.warning(
        f"⚠️ MS printed propagator disagrees with integration by {residual:.2e}; "
        f"using the integrated propagator"
    )
    return False


class MSModel(HamiltonianModel):
    """Rotating-field model with closed-form eigensystem and propagator.

    With `verify=True` the printed propagator is checked against numerical
    integration when the model is built; if it fails the integrated
    propagator is used instead.
    """

    name = "ms"

    def __init__(self, params: MSParams, verify: bool = True):
        self.params = params
        self.printed_propagator_ok = _check_printed_propagator(params) if verify else True

    @property
    def dimension(self) -> int:
        return 2

    def evaluate(self, t: float) -> np.ndarray:
        return ms_hamiltonian(self.params, t)

    @property
    def has_eigensystem(self) -> bool:
        return True

    @property
    def has_propagator(self) -> bool:
        return True

    def eigensystem(self, t: float) -> Eigensystem:
        return ms_eigensystem(self.params, t)

    def exact_propagator(self, t: float) -> np.ndarray:
        if self.printed_propagator_ok:
            return ms_exact_propagator(self.params, t)
        from adlab.grid import TimeGrid
        from adlab.propagation import propagate_exact

        if t == 0:
            return np.eye(2, dtype=complex)
        steps = max(3, int(np.ceil(abs(t) / 1e-3)))
        return propagate_exact(MSModel(self.params, verify=False), TimeGrid(t, steps)).U[-1]

    def describe(self) -> dict:
        return {"name": self.name, "omega0": self.params.omega0, "Omega": self.params.Omega}

"""Schwinger's precessing-spin model.

H(t) = −b(σ_x sin θ cos φ + σ_y sin θ sin φ + σ_z cos θ), φ = ωt, b = gμ₀H.
Energies are ±b at all times; the closed-form elements U_ij(t) live in the
printed-gauge instantaneous basis returned by `schwinger_eigensystem`.
"""
from dataclasses import dataclass

import numpy as np

from adlab.exceptions import DegenerateFrequency
from adlab.models.base import Eigensystem, HamiltonianModel

FREQUENCY_TOL = 1e-12


@dataclass(frozen=True)
class SchwingerParams:
    b: float
    theta: float
    omega: float
    allow_polar: bool = False

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b}")
        lo, hi = (0.0, np.pi)
        inside = lo <= self.theta <= hi if self.allow_polar else lo < self.theta < hi
        if not inside:
            raise ValueError(f"theta must lie in (0, π) unless allow_polar is set, got {self.theta}")


def schwinger_hamiltonian(p: SchwingerParams, t: float) -> np.ndarray:
    c, s = np.cos(p.theta), np.sin(p.theta)
    phi = p.omega * t
    return -p.b * np.array([
        [c, s * np.exp(-1j * phi)],
        [s * np.exp(1j * phi), -c],
    ], dtype=complex)


def schwinger_eigensystem(p: SchwingerParams, t: float) -> Eigensystem:
    """Energies (+b, −b) and the printed eigenvectors |n₁(t)⟩, |n₂(t)⟩."""
    half = 0.5 * p.omega * t
    sh, ch = np.sin(p.theta / 2), np.cos(p.theta / 2)
    n1 = np.array([np.exp(-1j * half) * sh, -np.exp(1j * half) * ch])
    n2 = np.array([np.exp(-1j * half) * ch, np.exp(1j * half) * sh])
    return np.array([p.b, -p.b]), np.column_stack([n1, n2])


def schwinger_connection(p: SchwingerParams) -> np.ndarray:
    """Closed-form ⟨n_i|ṅ_j⟩ in the printed gauge (time independent)."""
    c, s = np.cos(p.theta), np.sin(p.theta)
    return 0.5j * p.omega * np.array([[c, -s], [-s, -c]])


def schwinger_effective_frequency(p: SchwingerParams) -> float:
    """Ẽ₁ = [b² + bω cos θ + ω²/4]^{1/2}."""
    radicand = p.b ** 2 + p.b * p.omega * np.cos(p.theta) + p.omega ** 2 / 4
    return float(np.sqrt(max(radicand, 0.0)))


def schwinger_exact_propagator_elements(p: SchwingerParams, t: float) -> np.ndarray:
    e1 = schwinger_effective_frequency(p)
    if e1 < FREQUENCY_TOL:
        raise DegenerateFrequency(e1, FREQUENCY_TOL)
    shift = p.b + 0.5 * p.omega * np.cos(p.theta)
    u11 = (e1 * np.cos(e1 * t) - 1j * shift * np.sin(e1 * t)) / e1
    u21 = 1j * p.omega * np.sin(p.theta) * np.sin(e1 * t) / (2 * e1)
    return np.array([[u11, u21], [u21, np.conj(u11)]])


def schwinger_adiabatic_propagator_elements(p: SchwingerParams, t: float) -> np.ndarray:
    shift = p.b + 0.5 * p.omega * np.cos(p.theta)
    u11 = np.exp(-1j * t * shift)
    # sin(shift·t)/shift, written so shift → 0 stays finite
    window = t * np.sinc(shift * t / np.pi)
    u21 = 0.5j * p.omega * np.sin(p.theta) * window
    return np.array([[u11, u21], [u21, np.conj(u11)]])


def schwinger_adiabatic_exact_overlap(p: SchwingerParams, t: float) -> complex:
    """_A⟨n₁(t)|n₁(t)⟩_E from the two closed-form element sets."""
    exact = schwinger_exact_propagator_elements(p, t)[:, 0]
    adiabatic = schwinger_adiabatic_propagator_elements(p, t)[:, 0]
    return complex(np.vdot(adiabatic, exact))


class SchwingerModel(HamiltonianModel):
    name = "schwinger"

    def __init__(self, params: SchwingerParams):
        self.params = params

    @property
    def dimension(self) -> int:
        return 2

    def evaluate(self, t: float) -> np.ndarray:
        return schwinger_hamiltonian(self.params, t)

    @property
    def has_eigensystem(self) -> bool:
        return True

    @property
    def has_propagator(self) -> bool:
        return True

    def eigensystem(self, t: float) -> Eigensystem:
        return schwinger_eigensystem(self.params, t)

    def exact_propagator(self, t: float) -> np.ndarray:
        """U(t) = Σ |n_i(t)⟩ U_ij(t) ⟨n_j(0)| in the fixed basis."""
        _, now = schwinger_eigensystem(self.params, t)
        _, start = schwinger_eigensystem(self.params, 0.0)
        return now @ schwinger_exact_propagator_elements(self.params, t) @ start.conj().T

    def describe(self) -> dict:
        p = self.params
        return {"name": self.name, "b": p.b, "theta": p.theta, "omega": p.omega}

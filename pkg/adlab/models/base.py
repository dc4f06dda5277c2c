from abc import ABC, abstractmethod
from typing import Sequence, Tuple

import numpy as np

from adlab.exceptions import NonHermitianInput

HERMITIAN_TOL = 1e-12

Eigensystem = Tuple[np.ndarray, np.ndarray]


def hermiticity_residual(h: np.ndarray) -> float:
    """max |H - H†| over the entries of one matrix (or a stack of matrices)."""
    return float(np.max(np.abs(h - np.conj(np.swapaxes(h, -1, -2)))))


class HamiltonianModel(ABC):
    """Time-parameterized Hermitian matrix source H(t), ħ = 1.

    Built-in models also provide closed-form hooks; `has_eigensystem` and
    `has_propagator` tell callers whether `eigensystem(t)` and
    `exact_propagator(t)` are available.
    """

    name: str = "model"

    @property
    @abstractmethod
    def dimension(self) -> int:
        pass

    @abstractmethod
    def evaluate(self, t: float) -> np.ndarray:
        """Return the N×N complex matrix H(t)."""
        pass

    def evaluate_many(self, times: Sequence[float]) -> np.ndarray:
        """Stack H(t) over `times` into an array of shape (K, N, N)."""
        return np.stack([self.evaluate(float(t)) for t in times])

    @property
    def has_eigensystem(self) -> bool:
        return False

    @property
    def has_propagator(self) -> bool:
        return False

    def eigensystem(self, t: float) -> Eigensystem:
        """Closed-form (energies, column eigenvectors) at t."""
        raise NotImplementedError(f"{self.name} has no closed-form eigensystem")

    def exact_propagator(self, t: float) -> np.ndarray:
        """Closed-form U(t) in the fixed t=0 basis."""
        raise NotImplementedError(f"{self.name} has no closed-form propagator")

    def check_hermitian(self, times: Sequence[float], tol: float = HERMITIAN_TOL) -> None:
        """Raise NonHermitianInput at the first sampled time violating `tol`."""
        for t in times:
            residual = hermiticity_residual(self.evaluate(float(t)))
            if residual > tol:
                raise NonHermitianInput(float(t), residual)

    def describe(self) -> dict:
        """Parameters echoed into run manifests."""
        return {"name": self.name, "dimension": self.dimension}


class CallableModel(HamiltonianModel):
    """Wraps any callable t -> N×N Hermitian matrix."""

    def __init__(self, fn, dimension: int, name: str = "callable"):
        self._fn = fn
        self._dimension = dimension
        self.name = name

    @property
    def dimension(self) -> int:
        return self._dimension

    def evaluate(self, t: float) -> np.ndarray:
        return np.asarray(self._fn(t), dtype=complex)


class ConstantModel(HamiltonianModel):
    """Time-independent H; its eigensystem and propagator are exact."""

    name = "constant"

    def __init__(self, matrix):
        self._matrix = np.asarray(matrix, dtype=complex)
        self._energies, self._states = np.linalg.eigh(self._matrix)

    @property
    def dimension(self) -> int:
        return self._matrix.shape[0]

    def evaluate(self, t: float) -> np.ndarray:
        return self._matrix.copy()

    @property
    def has_eigensystem(self) -> bool:
        return True

    @property
    def has_propagator(self) -> bool:
        return True

    def eigensystem(self, t: float) -> Eigensystem:
        return self._energies.copy(), self._states.copy()

    def exact_propagator(self, t: float) -> np.ndarray:
        phases = np.exp(-1j * self._energies * t)
        return (self._states * phases) @ self._states.conj().T

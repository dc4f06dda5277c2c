import numpy as np


def circular_distance(a: float, b: float) -> float:
    """|a − b| modulo 2π."""
    return abs(float(np.angle(np.exp(1j * (a - b)))))


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

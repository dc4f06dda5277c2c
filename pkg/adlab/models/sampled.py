"""Models backed by sampled matrices, and the plain-text matrix file format.

File layout (comma separated, '#' starts a comment line):

    N,K
    t_0,re(H00),im(H00),re(H01),im(H01),...      (2·N² values, row-major)
    ...                                           (K rows, t strictly increasing)
"""
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from adlab.exceptions import NotHermitian, ParseError
from adlab.logger import logger
from adlab.models.base import HamiltonianModel, hermiticity_residual

LOAD_HERMITIAN_TOL = 1e-10


class SampledModel(HamiltonianModel):
    """Linear interpolation between H(t_k) samples."""

    name = "matrix_file"

    def __init__(self, times: Sequence[float], matrices: np.ndarray, source: str = ""):
        self.times = np.asarray(times, dtype=float)
        self.matrices = np.asarray(matrices, dtype=complex)
        self.source = source
        if self.times.ndim != 1 or len(self.times) < 2:
            raise ValueError("A sampled model needs at least two sample times")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Sample times must be strictly increasing")

    @property
    def dimension(self) -> int:
        return self.matrices.shape[1]

    def evaluate(self, t: float) -> np.ndarray:
        if t < self.times[0] - 1e-12 or t > self.times[-1] + 1e-12:
            raise ValueError(
                f"t={t} outside sampled range [{self.times[0]}, {self.times[-1]}]"
            )
        k = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 2))
        w = (t - self.times[k]) / (self.times[k + 1] - self.times[k])
        h = (1 - w) * self.matrices[k] + w * self.matrices[k + 1]
        # Interpolating Hermitian samples stays Hermitian; symmetrize away roundoff.
        return 0.5 * (h + h.conj().T)

    def describe(self) -> dict:
        return {"name": self.name, "dimension": self.dimension, "path": self.source,
                "samples": len(self.times)}


def _parse_number(field: str, line_no: int, column: int) -> float:
    try:
        return float(field)
    except ValueError:
        raise ParseError(line_no, column, f"not a number: {field.strip()!r}") from None


def load_matrix_model(path: Union[str, Path]) -> SampledModel:
    """Read a matrix file and validate Hermiticity of every sample."""
    path = Path(path)
    logger.info(f"📂 Loading matrix model from {path}")
    header = None
    times, matrices = [], []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            if header is None:
                if len(fields) != 2:
                    raise ParseError(line_no, len(fields), "header must be 'N,K'")
                n, k = (int(_parse_number(f, line_no, i + 1)) for i, f in enumerate(fields))
                if n < 1 or k < 2:
                    raise ParseError(line_no, 1, f"need N >= 1 and K >= 2, got N={n}, K={k}")
                header = (n, k)
                continue
            n = header[0]
            expected = 1 + 2 * n * n
            if len(fields) != expected:
                raise ParseError(line_no, min(len(fields), expected) + 1,
                                 f"expected {expected} values, found {len(fields)}")
            values = [_parse_number(f, line_no, i + 1) for i, f in enumerate(fields)]
            pairs = np.array(values[1:]).reshape(n * n, 2)
            times.append(values[0])
            matrices.append((pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, n))

    if header is None:
        raise ParseError(1, 1, "empty matrix file")
    if len(times) != header[1]:
        raise ParseError(line_no, 1, f"header announces {header[1]} samples, found {len(times)}")

    for t, h in zip(times, matrices):
        residual = hermiticity_residual(h)
        if residual > LOAD_HERMITIAN_TOL:
            raise NotHermitian(t, residual)

    logger.info(f"✅ Loaded {len(times)} samples of {header[0]}x{header[0]} matrices")
    return SampledModel(times, np.stack(matrices), source=str(path))


def write_matrix_file(model: HamiltonianModel, times: Sequence[float], path: Union[str, Path],
                      precision: int = 17) -> Path:
    """Sample `model` on `times` and write it in the matrix file layout."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = model.dimension
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"# sampled {model.name} model\n{n},{len(times)}\n")
        for t in times:
            h = model.evaluate(float(t)).reshape(-1)
            values = [float(t)]
            for z in h:
                values.extend([z.real, z.imag])
            handle.write(",".join(f"{v:.{precision}g}" for v in values) + "\n")
    return path

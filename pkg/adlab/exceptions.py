"""Domain errors for adlab.

Every error keeps the values that triggered it as attributes so callers
(and the pipeline's task wrapper) can report them without parsing messages.
"""
from typing import Optional


# ──────────────────────────────────────────────────────────────────────────────
# BASE
# ──────────────────────────────────────────────────────────────────────────────
class AdlabError(Exception):
    """Base class for every error raised by adlab."""


# ──────────────────────────────────────────────────────────────────────────────
# MODELS / SPECTRAL
# ──────────────────────────────────────────────────────────────────────────────
class DegenerateFrequency(AdlabError):
    """Raised when the Schwinger effective frequency Ẽ₁ vanishes."""
    def __init__(self, frequency: float, tolerance: float):
        super().__init__(
            f"Effective frequency {frequency:.3e} is below tolerance {tolerance:.1e}"
        )
        self.frequency = frequency
        self.tolerance = tolerance


class NonHermitianInput(AdlabError):
    """Raised when H(t) departs from Hermiticity beyond tolerance."""
    def __init__(self, t: float, residual: float):
        super().__init__(f"H(t={t:.6g}) is not Hermitian: max|H - H†| = {residual:.3e}")
        self.t = t
        self.residual = residual


class NotHermitian(NonHermitianInput):
    """Raised while loading a sampled model whose matrix at `t` is not Hermitian."""


class DegeneracyDetected(AdlabError):
    """Raised when two instantaneous levels come closer than the tolerance."""
    def __init__(self, t: float, gap: float):
        super().__init__(f"Spectrum is degenerate at t={t:.6g}: minimum gap {gap:.3e}")
        self.t = t
        self.gap = gap


class GridTooCoarse(AdlabError):
    """Raised when finite-difference couplings lose anti-Hermiticity."""
    def __init__(self, t: float, residual: float):
        super().__init__(
            f"Grid too coarse at t={t:.6g}: coupling anti-Hermiticity residual {residual:.3e}"
        )
        self.t = t
        self.residual = residual


# ──────────────────────────────────────────────────────────────────────────────
# PROPAGATION
# ──────────────────────────────────────────────────────────────────────────────
class StepTooLarge(AdlabError):
    """Raised when Δt·max‖H‖ exceeds the accuracy guard."""
    def __init__(self, dt: float, norm: float, limit: float):
        super().__init__(
            f"Step too large: dt*max|H| = {dt * norm:.3e} exceeds {limit} (dt={dt:.3e})"
        )
        self.dt = dt
        self.norm = norm
        self.limit = limit


class PhaseUnwrapAmbiguous(AdlabError):
    """Diagonal element lost dominance, so its phase cannot be unwrapped."""
    def __init__(self, level: int, t: float, magnitude: float):
        super().__init__(
            f"|U_nn| = {magnitude:.3e} < 0.1 for level {level} at t={t:.6g}; phase invalid"
        )
        self.level = level
        self.t = t
        self.magnitude = magnitude


# ──────────────────────────────────────────────────────────────────────────────
# PHASES / DIAGNOSTICS
# ──────────────────────────────────────────────────────────────────────────────
class NonRealAccumulator(AdlabError):
    """Raised when ∫ i⟨n|ṅ⟩ dt picks up an imaginary part."""
    def __init__(self, level: int, residual: float):
        super().__init__(f"Berry accumulator of level {level} has imaginary part {residual:.3e}")
        self.level = level
        self.residual = residual


class OrthogonalStates(AdlabError):
    """Raised when an overlap is too small for its argument to be defined."""
    def __init__(self, t: float, overlap: float):
        super().__init__(f"Overlap magnitude {overlap:.3e} at t={t:.6g}: phase undefined")
        self.t = t
        self.overlap = overlap


class BranchSingularity(AdlabError):
    """Raised when 1 + Im Q_n vanishes in the arctangent phase formula."""
    def __init__(self, t: float, denominator: float):
        super().__init__(f"Arctan denominator {denominator:.3e} at t={t:.6g}")
        self.t = t
        self.denominator = denominator


class NotNormalized(AdlabError):
    """Raised when a vector expected to be a unit vector is not."""
    def __init__(self, norm: float):
        super().__init__(f"Vector is not normalized: norm = {norm:.12g}")
        self.norm = norm


# ──────────────────────────────────────────────────────────────────────────────
# CONFIG / IO / PIPELINE
# ──────────────────────────────────────────────────────────────────────────────
class ConfigInvalid(AdlabError):
    def __init__(self, field_path: str, reason: str):
        super().__init__(f"Invalid config at '{field_path}': {reason}")
        self.field_path = field_path
        self.reason = reason


class ParseError(AdlabError):
    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"Parse error at line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class TaskFailed(AdlabError):
    """Wraps a module error with the pipeline task that raised it."""
    def __init__(self, task: str, cause: Exception, point: Optional[str] = None):
        where = f" (sweep point {point})" if point else ""
        super().__init__(f"Task '{task}' failed{where}: {cause}")
        self.task = task
        self.cause = cause
        self.point = point

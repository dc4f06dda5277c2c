from .decompose import DecomposeStep
from .diagnostics import EpsilonBoundStep, FidelityStep, MSCheckStep
from .phases import PhasesStep
from .propagate import PropagateStep
from .spectrum import SpectrumStep

__all__ = [
    'SpectrumStep',
    'PropagateStep',
    'DecomposeStep',
    'PhasesStep',
    'MSCheckStep',
    'EpsilonBoundStep',
    'FidelityStep',
]

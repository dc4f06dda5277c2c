"""Hamiltonian models for adlab

This module provides the built-in analytic models (MS rotating field,
Schwinger precession) and generic sampled/callable models for user data.
"""
from typing import Any, Dict, Optional

from .base import CallableModel, ConstantModel, HamiltonianModel, hermiticity_residual
from .ms import (
    MSModel,
    MSParams,
    ms_diagonal_elements,
    ms_eigensystem,
    ms_exact_propagator,
    ms_hamiltonian,
    verify_ms_propagator,
)
from .sampled import SampledModel, load_matrix_model, write_matrix_file
from .schwinger import (
    SchwingerModel,
    SchwingerParams,
    schwinger_adiabatic_exact_overlap,
    schwinger_adiabatic_propagator_elements,
    schwinger_connection,
    schwinger_effective_frequency,
    schwinger_eigensystem,
    schwinger_exact_propagator_elements,
    schwinger_hamiltonian,
)

MODEL_NAMES = ("ms", "schwinger", "matrix_file")


def get_model(name: str, params: Optional[Dict[str, Any]] = None, path: Optional[str] = None) -> HamiltonianModel:
    """Build a model from its configuration name and parameters.

    Args:
        name: Model name ('ms', 'schwinger' or 'matrix_file')
        params: Keyword parameters of the model's parameter record
        path: Matrix file path, required for 'matrix_file'

    Returns:
        Model instance

    Raises:
        ValueError: If the model is not supported or its parameters are invalid
    """
    name = name.lower()
    params = params or {}

    if name == 'ms':
        return MSModel(MSParams(**params))
    elif name == 'schwinger':
        return SchwingerModel(SchwingerParams(**params))
    elif name == 'matrix_file':
        if not path:
            raise ValueError("matrix_file model requires a path")
        return load_matrix_model(path)
    else:
        raise ValueError(f"Unsupported model: {name}")


__all__ = [
    'HamiltonianModel',
    'CallableModel',
    'ConstantModel',
    'SampledModel',
    'MSModel',
    'MSParams',
    'SchwingerModel',
    'SchwingerParams',
    'MODEL_NAMES',
    'get_model',
    'hermiticity_residual',
    'load_matrix_model',
    'write_matrix_file',
    'ms_hamiltonian',
    'ms_exact_propagator',
    'ms_eigensystem',
    'ms_diagonal_elements',
    'verify_ms_propagator',
    'schwinger_hamiltonian',
    'schwinger_eigensystem',
    'schwinger_connection',
    'schwinger_effective_frequency',
    'schwinger_exact_propagator_elements',
    'schwinger_adiabatic_propagator_elements',
    'schwinger_adiabatic_exact_overlap',
]

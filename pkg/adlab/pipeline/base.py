from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from adlab.diagnostics import EpsilonBoundReport, MSReport
from adlab.exceptions import AdlabError, TaskFailed
from adlab.grid import TimeGrid
from adlab.logger import logger
from adlab.models.base import HamiltonianModel
from adlab.phases import PhaseReport
from adlab.propagation import PropagatorDecomposition, Trajectory
from adlab.schema import ExperimentConfig
from adlab.spectral import CouplingMatrix, SpectralFrame
from adlab.writers import Table, write_table


@dataclass
class PipelineContext:
    """Context object passed between pipeline steps"""
    config: ExperimentConfig
    model: HamiltonianModel
    working_dir: Path
    point: Optional[str] = None  # sweep label, None outside sweeps
    frames: Sequence[SpectralFrame] = ()
    couplings: Sequence[CouplingMatrix] = ()
    trajectory: Optional[Trajectory] = None
    adiabatic: Optional[Trajectory] = None
    decomposition: Optional[PropagatorDecomposition] = None
    phases: Optional[PhaseReport] = None
    ms_report: Optional[MSReport] = None
    epsilon: Optional[EpsilonBoundReport] = None
    fidelity: Optional[np.ndarray] = None
    outputs: Dict[str, List[str]] = field(default_factory=dict)
    columns: Dict[str, List[str]] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.config.grid.t_end, self.config.grid.steps)

    @property
    def level(self) -> int:
        return self.config.level

    @property
    def tasks(self) -> List[str]:
        return self.config.ordered_tasks()

    @property
    def initial_state(self) -> np.ndarray:
        return self.frames[0].state(self.level)

    def write(self, task: str, stem: str, table: Table) -> Path:
        """Write a table into the working directory and record it under `task`."""
        out = self.config.output
        path = write_table(self.working_dir, stem, table, out.format, out.precision)
        self.outputs.setdefault(task, []).append(path.name)
        self.columns[path.name] = table[0]
        return path


class PipelineStep(ABC):
    """Base class for all pipeline steps.

    A step serves one or more tasks; it is skipped when none of them is
    requested. Module errors are logged and re-raised as TaskFailed.
    """
    tasks: Sequence[str] = ()

    def __init__(self, name: str):
        self.name = name
        self._next_step: Optional[PipelineStep] = None

    @abstractmethod
    def run(self, context: PipelineContext) -> None:
        pass

    def wanted(self, context: PipelineContext) -> bool:
        requested = context.tasks
        return not self.tasks or any(task in requested for task in self.tasks)

    def execute(self, context: PipelineContext) -> bool:
        if not self.wanted(context):
            logger.debug(f"Skipping {self.name}: not requested")
            return self.run_next(context)
        logger.info(f"🚀 {self.name}{self._where(context)}")
        try:
            self.run(context)
        except TaskFailed:
            raise
        except (AdlabError, ValueError, np.linalg.LinAlgError) as e:
            logger.error(f"❌ {self.name} failed{self._where(context)}: {e}")
            logger.exception(e)
            raise TaskFailed(self.name, e, context.point) from e
        logger.info(f"✅ {self.name} completed{self._where(context)}")
        return self.run_next(context)

    def set_next(self, step: 'PipelineStep') -> 'PipelineStep':
        self._next_step = step
        return step

    def run_next(self, context: PipelineContext) -> bool:
        if self._next_step:
            return self._next_step.execute(context)
        return True

    @staticmethod
    def _where(context: PipelineContext) -> str:
        return f" [{context.point}]" if context.point else ""

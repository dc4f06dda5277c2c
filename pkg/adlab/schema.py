import json
import math
import os
from pathlib import Path
from typing import Any, Dict, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from adlab import DEFAULT_RUNS_DIR, __version__
from adlab.exceptions import ConfigInvalid

TaskName = Literal["propagate", "decompose", "phases", "ms_check", "epsilon_bound", "fidelity", "sweep"]

TASK_ORDER = ("propagate", "decompose", "phases", "ms_check", "epsilon_bound", "fidelity")
TASK_DEPENDENCIES = {
    "propagate": (),
    "decompose": ("propagate",),
    "phases": ("propagate",),
    "ms_check": ("propagate",),
    "epsilon_bound": ("decompose",),
    "fidelity": ("propagate",),
}
GRID_FIELDS = ("t_end", "steps")


class ModelSpec(BaseModel):
    name: Literal["ms", "schwinger", "matrix_file"]
    params: Dict[str, Union[float, bool]] = Field(default_factory=dict)
    path: Optional[str] = None  # matrix_file only

    @model_validator(mode="after")
    def _path_for_matrix_file(self) -> 'ModelSpec':
        if self.name == "matrix_file" and not self.path:
            raise ValueError("matrix_file model requires 'path'")
        return self


class GridSpec(BaseModel):
    t_end: float = Field(gt=0)
    steps: int = Field(ge=3)


class SweepSpec(BaseModel):
    param: str  # a model parameter, or 't_end' / 'steps'
    values: List[float] = Field(min_length=1)

    @field_validator("values")
    @classmethod
    def _finite(cls, values: List[float]) -> List[float]:
        if not all(math.isfinite(v) for v in values):
            raise ValueError("sweep values must be finite")
        return values


class OutputSpec(BaseModel):
    directory: str = Field(default_factory=lambda: os.environ.get("ADLAB_OUTPUT_DIR", DEFAULT_RUNS_DIR))
    format: Literal["csv", "json"] = "csv"
    precision: int = Field(default=12, ge=1, le=17)


class ExperimentConfig(BaseModel):
    model: ModelSpec
    grid: GridSpec
    level: int = Field(default=0, ge=0)
    tasks: List[TaskName] = Field(default_factory=lambda: list(TASK_ORDER))
    sweep: Optional[SweepSpec] = None
    output: OutputSpec = Field(default_factory=OutputSpec)
    integrator: Literal["midpoint", "magnus4"] = "midpoint"
    richardson: bool = False

    @model_validator(mode="after")
    def _sweep_declared(self) -> 'ExperimentConfig':
        if "sweep" in self.tasks and self.sweep is None:
            raise ValueError("task 'sweep' requires a 'sweep' section")
        return self

    def ordered_tasks(self) -> List[str]:
        """Requested tasks plus their dependencies, in execution order."""
        wanted = set()
        pending = [t for t in self.tasks if t != "sweep"]
        while pending:
            task = pending.pop()
            if task not in wanted:
                wanted.add(task)
                pending.extend(TASK_DEPENDENCIES[task])
        return [t for t in TASK_ORDER if t in wanted]

    def sweep_points(self) -> Iterator[Tuple[str, 'ExperimentConfig']]:
        """(label, config) per sweep value; labels are '<param>=<value>'."""
        for value in self.sweep.values:
            label = f"{self.sweep.param}={value:g}"
            if self.sweep.param in GRID_FIELDS:
                grid = self.grid.model_copy(update={self.sweep.param: type(getattr(self.grid, self.sweep.param))(value)})
                yield label, self.model_copy(update={"grid": grid, "sweep": None})
            else:
                model = self.model.model_copy(update={"params": {**self.model.params, self.sweep.param: value}})
                yield label, self.model_copy(update={"model": model, "sweep": None})


class RunManifest(BaseModel):
    config: dict
    version: str = __version__
    grid_hash: str
    gauge: str
    epsilon_split: str
    integrator: str
    outputs: Dict[str, List[str]] = Field(default_factory=dict)
    columns: Dict[str, List[str]] = Field(default_factory=dict)
    points: List[str] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)


def _field_path(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a config mapping.

    Raises:
        ConfigInvalid: With the dotted path of the first offending field
    """
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigInvalid(_field_path(first), first["msg"]) from e


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigInvalid("<file>", f"config not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigInvalid("<file>", f"line {e.lineno}, column {e.colno}: {e.msg}") from e
    return parse_config(data)

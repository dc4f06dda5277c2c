import signal
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from adlab import __version__
from adlab.diagnostics import EPSILON_SPLIT
from adlab.exceptions import ConfigInvalid, NonHermitianInput, ParseError, TaskFailed
from adlab.logger import logger
from adlab.models import get_model
from adlab.models.base import HamiltonianModel
from adlab.pipeline.base import PipelineContext, PipelineStep
from adlab.pipeline.steps import (
    DecomposeStep,
    EpsilonBoundStep,
    FidelityStep,
    MSCheckStep,
    PhasesStep,
    PropagateStep,
    SpectrumStep,
)
from adlab.schema import ExperimentConfig, RunManifest
from adlab.writers import write_manifest


def build_model(config: ExperimentConfig) -> HamiltonianModel:
    """Instantiate the configured model and check `level` against its dimension.

    Raises:
        ConfigInvalid: If the parameters are rejected, the matrix file cannot
            be read or parsed, or level >= N
    """
    spec = config.model
    try:
        model = get_model(spec.name, dict(spec.params), spec.path)
    except (ParseError, NonHermitianInput, OSError) as e:
        raise ConfigInvalid("model.path", str(e)) from e
    except (TypeError, ValueError) as e:
        raise ConfigInvalid("model.params", str(e)) from e
    if config.level >= model.dimension:
        raise ConfigInvalid("level", f"level {config.level} >= dimension {model.dimension}")
    return model


class PipelineRunner:
    """Runs an experiment config: one pipeline, or one per sweep point."""
    def __init__(self, config: ExperimentConfig, working_dir: Optional[Path] = None, max_workers: int = 4):
        self.config = config
        self.working_dir = Path(working_dir or config.output.directory)
        self.max_workers = max_workers
        self._setup_pipeline()
        self._interrupted = False
        self.failures: List[TaskFailed] = []

    def _handle_interrupt(self, signum, frame):
        """Handle keyboard interrupt (Ctrl+C) and termination signals"""
        if self._interrupted:
            logger.warning("⚠️ Force quitting...")
            raise KeyboardInterrupt()
        logger.warning("⚠️ Interrupt received. Finishing running points and stopping gracefully...")
        self._interrupted = True

    def _setup_pipeline(self):
        """Setup the pipeline steps in the correct order"""
        spectrum = SpectrumStep("spectrum")
        spectrum.set_next(PropagateStep("propagate")) \
            .set_next(DecomposeStep("decompose")) \
            .set_next(PhasesStep("phases")) \
            .set_next(MSCheckStep("ms_check")) \
            .set_next(EpsilonBoundStep("epsilon_bound")) \
            .set_next(FidelityStep("fidelity"))
        self.pipeline: PipelineStep = spectrum

    def _manifest(self, context: PipelineContext) -> RunManifest:
        gauge = context.frames[0].gauge.convention if context.frames else ""
        return RunManifest(
            config=context.config.model_dump(mode="json"),
            version=__version__,
            grid_hash=context.grid.digest(),
            gauge=gauge,
            epsilon_split=EPSILON_SPLIT,
            integrator=context.config.integrator,
            outputs=context.outputs,
            columns=context.columns,
            summary=context.metadata,
        )

    def process_point(self, config: ExperimentConfig, working_dir: Path,
                      point: Optional[str] = None) -> RunManifest:
        """Run every requested task for one config and write its manifest.

        Raises:
            ConfigInvalid: If the model cannot be built from the config
            TaskFailed: If a task raises a module error
        """
        context = PipelineContext(config=config, model=build_model(config),
                                  working_dir=working_dir, point=point)
        self.pipeline.execute(context)
        manifest = self._manifest(context)
        write_manifest(working_dir, manifest.model_dump(mode="json"))
        return manifest

    def _process_sweep(self) -> Tuple[List[RunManifest], Dict[str, int]]:
        stats = {"successful": 0, "failed": 0, "skipped": 0}
        points = list(self.config.sweep_points())
        # Models are built up front so config errors surface before any work starts
        for _, config in points:
            build_model(config)

        def run_point(item):
            label, config = item
            if self._interrupted:
                return label, None
            try:
                return label, self.process_point(config, self.working_dir / label, label)
            except TaskFailed as e:
                self.failures.append(e)
                return label, e

        manifests = []
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            for label, result in pool.map(run_point, points):
                if result is None:
                    stats["skipped"] += 1
                elif isinstance(result, TaskFailed):
                    stats["failed"] += 1
                else:
                    stats["successful"] += 1
                    manifests.append(result)

        summary = RunManifest(
            config=self.config.model_dump(mode="json"),
            grid_hash=manifests[0].grid_hash if manifests else "",
            gauge=manifests[0].gauge if manifests else "",
            epsilon_split=EPSILON_SPLIT,
            integrator=self.config.integrator,
            points=[label for label, _ in points],
            summary={"stats": stats},
        )
        write_manifest(self.working_dir, summary.model_dump(mode="json"))
        return manifests, stats

    def run(self) -> Tuple[List[RunManifest], Dict[str, int]]:
        """Run the experiment and return the manifests with statistics.

        A single run raises TaskFailed; in a sweep, failed points are
        counted and collected in `self.failures`.
        """
        in_main = threading.current_thread() is threading.main_thread()
        previous = {}
        if in_main:
            for signum in (signal.SIGINT, signal.SIGTERM):
                previous[signum] = signal.signal(signum, self._handle_interrupt)
        try:
            if self.config.sweep is not None:
                manifests, stats = self._process_sweep()
            else:
                manifests = [self.process_point(self.config, self.working_dir)]
                stats = {"successful": 1, "failed": 0, "skipped": 0}
        except KeyboardInterrupt:
            logger.warning("⚠️ Pipeline interrupted by user")
            manifests, stats = [], {"successful": 0, "failed": 0, "skipped": 0}
        finally:
            # Restore the caller's signal handlers
            for signum, handler in previous.items():
                signal.signal(signum, handler)
        logger.info(f"📊 Runs: {stats['successful']} successful, {stats['failed']} failed, {stats['skipped']} skipped")
        return manifests, stats

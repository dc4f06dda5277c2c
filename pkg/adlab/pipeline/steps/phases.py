from adlab.logger import logger
from adlab.phases import PhaseReport, phase_report, refine_phase_report
from adlab.pipeline.base import PipelineContext, PipelineStep
from adlab.spectral import couplings, tracked_frames
from adlab.writers import phases_table


class PhasesStep(PipelineStep):
    tasks = ("phases",)

    def run(self, context: PipelineContext) -> None:
        report = phase_report(context.frames, context.couplings, context.level, psi=context.trajectory.psi)
        if context.config.richardson:
            report = self._refine(context, report)
        context.phases = report
        if report.undefined:
            context.metadata["phases_undefined"] = dict(report.undefined)
        context.write("phases", "phases", phases_table(report))

    @staticmethod
    def _refine(context: PipelineContext, report: PhaseReport) -> PhaseReport:
        """Richardson-combine the quadrature phases with a half-step rerun."""
        fine_frames = tracked_frames(context.model, context.grid.refined())
        logger.info(f"Richardson refinement on {len(fine_frames)} points")
        return refine_phase_report(report, fine_frames, couplings(fine_frames))

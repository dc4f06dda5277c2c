from adlab.logger import logger
from adlab.pipeline.base import PipelineContext, PipelineStep
from adlab.spectral import adiabaticity_ratio, couplings, tracked_frames


class SpectrumStep(PipelineStep):
    """Tracked instantaneous eigenbasis and couplings; every task needs them."""

    def run(self, context: PipelineContext) -> None:
        context.frames = tracked_frames(context.model, context.grid)
        context.couplings = couplings(context.frames)
        report = adiabaticity_ratio(context.frames, context.couplings)
        context.metadata["adiabaticity_max"] = report.max_ratio
        context.metadata["adiabaticity_t_max"] = report.t_max
        logger.info(f"📊 max |⟨m|ṅ⟩|/|E_n − E_m| = {report.max_ratio:.3e} at t = {report.t_max:.4g}")

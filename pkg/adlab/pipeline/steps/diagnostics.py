from adlab.diagnostics import epsilon_lower_bound, fidelity_adiabatic_vs_exact, marzlin_sanders_check
from adlab.logger import logger
from adlab.pipeline.base import PipelineContext, PipelineStep
from adlab.writers import epsilon_table, fidelity_table, ms_report_table


class MSCheckStep(PipelineStep):
    tasks = ("ms_check",)

    def run(self, context: PipelineContext) -> None:
        context.ms_report = marzlin_sanders_check(
            context.model, context.grid, context.level,
            frames=context.frames, coupling_seq=context.couplings, trajectory=context.trajectory,
        )
        context.metadata["hbar_check"] = context.ms_report.hbar_check
        context.write("ms_check", "ms_report", ms_report_table(context.ms_report))


class EpsilonBoundStep(PipelineStep):
    tasks = ("epsilon_bound",)

    def run(self, context: PipelineContext) -> None:
        report = epsilon_lower_bound(context.decomposition, context.frames, context.trajectory, context.level)
        context.epsilon = report
        context.metadata["epsilon_regime"] = report.regime
        if report.regime == "adiabatic":
            logger.info("📊 Distances coincide: the ε bound degenerates to 0")
        context.write("epsilon_bound", "epsilon", epsilon_table(report))


class FidelityStep(PipelineStep):
    tasks = ("fidelity",)

    def run(self, context: PipelineContext) -> None:
        context.fidelity = fidelity_adiabatic_vs_exact(context.adiabatic, context.trajectory,
                                                       context.frames, context.level)
        context.metadata["fidelity_min"] = float(context.fidelity.min())
        context.write("fidelity", "fidelity", fidelity_table(context.trajectory.times, context.fidelity))

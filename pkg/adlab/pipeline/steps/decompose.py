from adlab.pipeline.base import PipelineContext, PipelineStep
from adlab.propagation import decompose
from adlab.writers import decomposition_table


class DecomposeStep(PipelineStep):
    tasks = ("decompose",)

    def run(self, context: PipelineContext) -> None:
        context.decomposition = decompose(context.trajectory, context.frames)
        context.metadata["epsilon_hat"] = context.decomposition.epsilon_hat
        context.metadata["phase_warnings"] = [str(w) for w in context.decomposition.warnings]
        context.write("decompose", "decomposition", decomposition_table(context.decomposition))

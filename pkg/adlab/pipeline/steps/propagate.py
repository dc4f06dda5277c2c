from adlab.pipeline.base import PipelineContext, PipelineStep
from adlab.propagation import propagate_adiabatic, propagate_exact, unitarity_residual
from adlab.writers import trajectory_table


class PropagateStep(PipelineStep):
    tasks = ("propagate",)

    def run(self, context: PipelineContext) -> None:
        psi0 = context.initial_state
        context.trajectory = propagate_exact(context.model, context.grid, psi0=psi0,
                                             method=context.config.integrator)
        context.metadata["unitarity_residual"] = unitarity_residual(context.trajectory.U)
        if "fidelity" in context.tasks:
            context.adiabatic = propagate_adiabatic(context.frames, context.couplings, psi0=psi0)
        context.write("propagate", "trajectory", trajectory_table(context.trajectory))

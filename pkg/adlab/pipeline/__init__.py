from .base import PipelineContext, PipelineStep
from .runner import PipelineRunner, build_model

__all__ = ['PipelineContext', 'PipelineStep', 'PipelineRunner', 'build_model']

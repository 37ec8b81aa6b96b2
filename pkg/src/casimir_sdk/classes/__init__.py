from .enum import Branch, Extrapolation, Method, OutputFormat, Polarization, WindowMode
from .results import (
    PressureResult,
    SpectralSample,
    WindowForceDifference
)
from .run_config import COMMANDS, MODELS, RunConfig, RunConfigSchema

"""Numeric-buffer bindings over the tcslsim command line and file formats."""

from .bindings import (
    ANT3D_FORMAT_VERSION,
    CIR_COLUMNS,
    SIMULATOR_ENV,
    Ant3dFormatError,
    ConfigError,
    RealizationBatchView,
    SimulatorError,
    generate_batch,
    load_pattern,
)

__version__ = "0.1.0"

__all__ = [
    "ANT3D_FORMAT_VERSION",
    "CIR_COLUMNS",
    "SIMULATOR_ENV",
    "Ant3dFormatError",
    "ConfigError",
    "RealizationBatchView",
    "SimulatorError",
    "generate_batch",
    "load_pattern",
    "__version__",
]

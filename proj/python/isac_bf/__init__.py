"""Max-min ISAC beamforming solvers."""

from ._core import (
    DegenerateInput,
    Error,
    InvalidArgument,
    Scene,
    SystemConfig,
    __version__,
    derive_seed,
    dominant_eigenvalue,
    evaluate,
    generate_scene,
    hermitian_solve,
    path_loss_amplitude,
    project_per_antenna,
    solve,
    solve_fp,
    steering_vector,
)

__all__ = [
    "DegenerateInput",
    "Error",
    "InvalidArgument",
    "Scene",
    "SystemConfig",
    "derive_seed",
    "dominant_eigenvalue",
    "evaluate",
    "generate_scene",
    "hermitian_solve",
    "path_loss_amplitude",
    "project_per_antenna",
    "solve",
    "solve_fp",
    "steering_vector",
]

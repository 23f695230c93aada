"""HTTP service wrapping the experiment runners."""

from .app import app, create_app
from .schemas import ExperimentRequest, ExperimentResponse, HealthResponse, MeshResponse

__all__ = [
    "app",
    "create_app",
    "ExperimentRequest",
    "ExperimentResponse",
    "HealthResponse",
    "MeshResponse",
]

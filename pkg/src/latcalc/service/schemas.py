"""Request/response bodies for the experiment service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

__all__ = [
    "ExperimentRequest",
    "ExperimentResponse",
    "HealthResponse",
    "MeshResponse",
]


class ExperimentRequest(BaseModel):
    """Mirror of ExperimentConfig minus the experiment name (that is the route).

    Defaults match the CLI defaults, so an empty body runs the stock setup.
    """

    kernel: str = "kalton"
    dim: int = Field(default=64, ge=1)
    seed: int = 0
    arity: int = Field(default=2, ge=2)
    kmax: int = Field(default=20, ge=1)
    deltas: list[float] = [1.0, 0.5]
    quad_n: list[int] = [512, 4096]
    target: str = "euclidean"
    p: float = 3.0
    rule: Literal["trapezoid", "midpoint"] = "trapezoid"
    tol: float = Field(default=1e-12, gt=0.0)


class ExperimentResponse(BaseModel):
    experiment: str
    verdict: str
    exit_code: int
    columns: list[str]
    rows: list[list[float | int | str]]
    notes: list[str]
    report_text: str
    csv_text: str


class HealthResponse(BaseModel):
    status: str
    version: str


class MeshResponse(BaseModel):
    n: int
    delta: float
    subdivisions: int
    diameter: float
    num_nodes: int
    num_simplices: int
    csv_text: str

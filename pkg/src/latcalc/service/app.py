"""HTTP facade over the experiment runners.

One POST route per experiment; the response carries the verdict, the exit
code the CLI should propagate, and both renderings (text report, CSV) built
server-side so every client sees identical bytes.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query

from .. import __version__
from ..config import ConfigError, ExperimentConfig
from ..experiments import ExperimentReport, run_experiment
from ..triangulation import build_triangulation, mesh_to_csv
from .schemas import ExperimentRequest, ExperimentResponse, HealthResponse, MeshResponse

__all__ = ["create_app", "app"]


def _response(report: ExperimentReport) -> ExperimentResponse:
    return ExperimentResponse(
        experiment=report.experiment,
        verdict=report.verdict,
        exit_code=report.exit_code,
        columns=list(report.columns),
        rows=report.rows_as_lists(),
        notes=list(report.notes),
        report_text=report.to_text(),
        csv_text=report.to_csv(),
    )


def _run(experiment: str, req: ExperimentRequest) -> ExperimentResponse:
    try:
        config = ExperimentConfig(
            experiment=experiment,
            kernel=req.kernel,
            dim=req.dim,
            seed=req.seed,
            arity=req.arity,
            kmax=req.kmax,
            deltas=tuple(req.deltas),
            quad_n=tuple(req.quad_n),
            target=req.target,
            p=req.p,
            rule=req.rule,
            tol=req.tol,
        ).validated()
        return _response(run_experiment(config))
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(
        title="latcalc",
        version=__version__,
        description="Function calculus on finite lattices, with verification experiments.",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/verify", response_model=ExperimentResponse)
    def verify(req: ExperimentRequest) -> ExperimentResponse:
        return _run("verify", req)

    @app.post("/kalton", response_model=ExperimentResponse)
    def kalton(req: ExperimentRequest) -> ExperimentResponse:
        return _run("kalton", req)

    @app.post("/counterexample", response_model=ExperimentResponse)
    def counterexample(req: ExperimentRequest) -> ExperimentResponse:
        return _run("counterexample", req)

    @app.post("/approx", response_model=ExperimentResponse)
    def approx(req: ExperimentRequest) -> ExperimentResponse:
        return _run("approx", req)

    @app.get("/mesh", response_model=MeshResponse)
    def mesh(
        n: int = Query(ge=2, le=6), delta: float = Query(gt=0.0, le=2.0)
    ) -> MeshResponse:
        try:
            tri = build_triangulation(n, delta)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return MeshResponse(
            n=tri.n,
            delta=tri.delta,
            subdivisions=tri.k,
            diameter=tri.mesh_diameter,
            num_nodes=tri.num_nodes,
            num_simplices=tri.num_simplices,
            csv_text=mesh_to_csv(tri),
        )

    return app


app = create_app()

"""HTTP/JSON service exposing the simulation pipeline to the web UI.

Endpoints:

* ``POST /simulate``  scenario document -> report JSON
* ``POST /compare``   comparison document -> comparison report JSON
* ``GET  /universe``  group labels, kinds, and the correlation matrix
* ``GET  /defaults``  assignment rules and the preset compositions
* ``GET  /health``

The service is stateless between requests apart from the correlation matrix
and default rules loaded at startup.  Reports are rendered with the same
canonical encoder as the CLI, so identical (scenario, sigma, seed, M) produce
byte-identical bodies.  Validation problems return 400 with structured
errors; an infeasible calibration returns 422; requests beyond the in-flight
cap return 429.
"""
from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .errors import CalibrationInfeasible, UnicornSimError
from .presets import all_preset_compositions
from .prob_assigner import default_rules, load_rules, rules_to_dict
from .reports import (
    DEFAULT_MAX_ITERATIONS,
    CompareDocument,
    ScenarioDocument,
    canonical_json_bytes,
    compare_report,
    composition_to_dict,
    sha256_hex,
    simulate_report,
)
from .universe import read_universe

#: Concurrent simulations allowed before the service sheds load.
DEFAULT_INFLIGHT_LIMIT = 8


def create_app(
    sigma_csv,
    rules_json=None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    inflight_limit: int = DEFAULT_INFLIGHT_LIMIT,
    workers: int = 1,
    ui_dir=None,
) -> FastAPI:
    sigma_csv = Path(sigma_csv)
    kinds_json = sigma_csv.with_name(sigma_csv.stem + "_kinds.json")
    universe = read_universe(sigma_csv, kinds_json)
    sigma_sha = sha256_hex(sigma_csv.read_bytes())
    rules = load_rules(rules_json) if rules_json else default_rules()
    gate = threading.Semaphore(inflight_limit)

    app = FastAPI(title="unicornsim", version=__version__)
    # desk tool: let a separately served UI (or curl from anywhere) talk to us
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def canonical_response(payload: dict, status_code: int = 200) -> Response:
        return Response(
            content=canonical_json_bytes(payload) + b"\n",
            status_code=status_code,
            media_type="application/json",
        )

    def error_response(status_code: int, error: str, message: str) -> JSONResponse:
        return JSONResponse(
            status_code=status_code,
            content={"error": error, "message": message},
        )

    def run_guarded(build):
        if not gate.acquire(blocking=False):
            return error_response(429, "overloaded", "too many simulations in flight")
        try:
            return canonical_response(build())
        except CalibrationInfeasible as exc:
            return error_response(422, "calibration_infeasible", str(exc))
        except UnicornSimError as exc:
            return error_response(400, type(exc).__name__, str(exc))
        finally:
            gate.release()

    @app.post("/simulate")
    async def post_simulate(request: Request):
        try:
            body = await request.json()
        except Exception:
            return error_response(400, "bad_json", "request body is not valid JSON")

        def build():
            scenario = ScenarioDocument(body)
            return simulate_report(
                scenario, universe, sigma_sha, workers=workers, max_iterations=max_iterations
            )

        return run_guarded(build)

    @app.post("/compare")
    async def post_compare(request: Request):
        try:
            body = await request.json()
        except Exception:
            return error_response(400, "bad_json", "request body is not valid JSON")

        def build():
            compare_request = CompareDocument(body)
            return compare_report(
                compare_request,
                universe,
                sigma_sha,
                workers=workers,
                max_iterations=max_iterations,
            )

        return run_guarded(build)

    @app.get("/universe")
    async def get_universe():
        return canonical_response(
            {
                "groups": [
                    {"label": g.label, "kind": g.kind.value} for g in universe.groups
                ],
                "sigma": [[float(v) for v in row] for row in universe.sigma],
                "sigma_sha256": sigma_sha,
            }
        )

    @app.get("/defaults")
    async def get_defaults():
        return canonical_response(
            {
                "rules": rules_to_dict(rules),
                "compositions": [
                    {"label": c.label, "composition": composition_to_dict(c)}
                    for c in all_preset_compositions()
                ],
                "max_iterations": max_iterations,
                "engine_version": __version__,
            }
        )

    @app.get("/health")
    async def get_health():
        return canonical_response({"status": "ok", "engine_version": __version__})

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=Path(ui_dir), html=True), name="ui")

    return app

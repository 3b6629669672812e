"""HTTP service exposing the design pipeline over a fixed database.

The database is loaded once at app construction and never mutated:
every request works against the same immutable snapshot, so identical
concurrent requests produce identical answers. Payload builders are
plain functions over plain dicts; the CLI reuses them so both surfaces
emit the same JSON for the same inputs.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from . import designer, physics
from .catalog import ComboDatabase, PropulsionCombo, load_database
from .designer import DesignCandidate, max_vertical_accel
from .errors import (
    CopterDesignError,
    DomainError,
    NoFeasibleDesignError,
    UnresolvedNormalizerError,
    UnsupportedLayoutError,
)
from .schemas import DesignRequest


def render_json(payload: dict) -> bytes:
    """The one JSON serialization both the service and the CLI use."""
    return json.dumps(
        payload, ensure_ascii=False, allow_nan=False, separators=(",", ":")
    ).encode("utf-8")


def candidate_payload(c: DesignCandidate, gravity: float) -> dict:
    return {
        "combo": {
            "motor_id": c.combo_ref.motor_id,
            "esc_id": c.combo_ref.esc_id,
            "prop_id": c.combo_ref.prop_id,
        },
        "achieved_time": c.achieved_time,
        "achieved_payload": c.achieved_payload,
        "achieved_ratio": c.achieved_ratio,
        "max_vertical_accel": max_vertical_accel(c.achieved_ratio, gravity),
        "copter_mass": c.copter_mass,
        "battery": {
            "voltage": c.battery.voltage,
            "capacity": c.battery.capacity,
            "max_discharge": c.battery.max_discharge,
            "mass": c.battery.mass,
        },
        "airframe": {
            "diameter": c.airframe.diameter,
            "mass": c.airframe.mass,
        },
        "hover_current": c.hover_current,
        "indexes": list(c.indexes),
        "objective": c.objective,
        "density_converted": c.density_converted,
    }


def build_design_payload(db: ComboDatabase, request: DesignRequest) -> dict:
    """Run the pipeline and shape the response; no timing, no transport."""
    req = request.requirements()
    defaults = request.design_defaults()
    cfg = request.evaluation_config()
    candidates = designer.design(db, req, defaults, cfg, top_n=request.top_n)
    return {
        "candidates": [
            candidate_payload(c, defaults.gravity) for c in candidates
        ],
        "air_density": req.air_density,
        "considered": len(db),
        "returned": len(candidates),
        "db_fingerprint": db.fingerprint,
    }


def combo_payload(combo: PropulsionCombo, source: str) -> dict:
    k_t0, k_t1, k_t2 = combo.fit_coeffs
    return {
        "motor_id": combo.motor_id,
        "esc_id": combo.esc_id,
        "prop_id": combo.prop_id,
        "key": combo.key(),
        "battery_voltage": combo.battery_voltage,
        "prop_diameter": combo.prop_diameter,
        "kv": combo.kv,
        "mass": combo.mass,
        "full_throttle_thrust": combo.full_throttle_thrust,
        "full_throttle_speed": combo.full_throttle_speed,
        "full_throttle_current": combo.full_throttle_current,
        "motor_max_current": combo.motor_max_current,
        "ref_air_density": combo.ref_air_density,
        "fit_coeffs": {"k_t0": k_t0, "k_t1": k_t1, "k_t2": k_t2},
        "source": source,
    }


def build_convert_payload(
    db: ComboDatabase,
    combo_key: str,
    density: float,
    hover_thrust: float | None,
) -> dict:
    combo = db.find(combo_key)
    if combo is None:
        raise DomainError(f"no combination {combo_key!r}")
    speed, thrust = physics.convert_full_throttle(combo, density)
    payload = {
        "combo": combo.key(),
        "ref_air_density": combo.ref_air_density,
        "air_density": density,
        "full_throttle_speed": speed,
        "full_throttle_thrust": thrust,
        "density_converted": density != combo.ref_air_density,
        "hover": None,
    }
    if hover_thrust is not None:
        current_ref = combo.fit_current(hover_thrust)
        payload["hover"] = {
            "thrust": hover_thrust,
            "speed": physics.hover_speed_at_density(combo, hover_thrust, density),
            "esc_current": physics.convert_hover_current(
                combo, hover_thrust, current_ref, density
            ),
        }
    return payload


def _error_response(
    status: int, code: str, message: str, details=None
) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={
            "error": {"code": code, "message": message, "details": details}
        },
    )


class _TimedJSON(Response):
    media_type = "application/json"


def _timed(payload: dict, started: float) -> _TimedJSON:
    payload = dict(payload)
    payload["timing_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    return _TimedJSON(content=render_json(payload))


def create_app(
    db: ComboDatabase | str | Path, ui_dir: str | Path | None = None
) -> FastAPI:
    """Build the service around one immutable database snapshot.

    When ``ui_dir`` points at a directory with an ``index.html``, its files
    are served at ``/`` so the browser explorer runs same-origin with the
    API; the API routes are registered first and always win.
    """
    if not isinstance(db, ComboDatabase):
        db = load_database(db)

    app = FastAPI(title="copterdesign", docs_url=None, redoc_url=None)
    app.state.db = db

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        details = [
            {
                "field": ".".join(
                    str(part) for part in err["loc"] if part != "body"
                ),
                "message": err["msg"],
            }
            for err in exc.errors()
        ]
        return _error_response(
            400, "validation_error", "invalid request", details
        )

    @app.exception_handler(NoFeasibleDesignError)
    async def _on_infeasible(request: Request, exc: NoFeasibleDesignError):
        details = {"reasons": exc.reasons}
        if exc.nearest_miss is not None:
            details["nearest_miss"] = exc.nearest_miss
        return _error_response(422, exc.code, str(exc), details)

    @app.exception_handler(UnresolvedNormalizerError)
    async def _on_normalizer(request: Request, exc: UnresolvedNormalizerError):
        return _error_response(422, exc.code, str(exc), None)

    @app.exception_handler(UnsupportedLayoutError)
    async def _on_layout(request: Request, exc: UnsupportedLayoutError):
        return _error_response(400, exc.code, str(exc), None)

    @app.exception_handler(DomainError)
    async def _on_domain(request: Request, exc: DomainError):
        return _error_response(400, exc.code, str(exc), None)

    @app.exception_handler(CopterDesignError)
    async def _on_package_error(request: Request, exc: CopterDesignError):
        return _error_response(400, exc.code, str(exc), None)

    @app.get("/healthz")
    async def healthz():
        started = time.perf_counter()
        return _timed(
            {
                "status": "ok",
                "combinations": len(db),
                "db_fingerprint": db.fingerprint,
            },
            started,
        )

    @app.post("/api/v1/design")
    async def post_design(request: DesignRequest):
        started = time.perf_counter()
        return _timed(build_design_payload(db, request), started)

    @app.get("/api/v1/combinations")
    async def get_combinations(
        offset: int = Query(0, ge=0),
        limit: int = Query(50, ge=1, le=200),
    ):
        started = time.perf_counter()
        rows = list(zip(db.combos, db.provenance))[offset : offset + limit]
        return _timed(
            {
                "combinations": [
                    combo_payload(combo, source) for combo, source in rows
                ],
                "total": len(db),
                "offset": offset,
                "limit": limit,
                "db_fingerprint": db.fingerprint,
            },
            started,
        )

    @app.get("/api/v1/convert")
    async def get_convert(
        combo: str,
        density: float = Query(..., gt=0, le=1.5),
        hover_thrust: float | None = Query(None, gt=0),
    ):
        started = time.perf_counter()
        if db.find(combo) is None:
            return _error_response(
                404, "unknown_combination", f"no combination {combo!r}"
            )
        return _timed(
            build_convert_payload(db, combo, density, hover_thrust), started
        )

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

"""Stateless HTTP scoring service.

Thin JSON layer over the scoring library: every number in a response comes
from the same functions the CLI uses, so the two surfaces agree bit for bit.
All endpoints are stateless and idempotent; the only shared state is the
immutable preset bundle loaded at startup.

Error contract: structurally invalid bodies yield 400 with field-level
errors; a body that parses but names an unknown mode or activity yields 422.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .presets import PresetBundle, builtin_presets, load_presets
from .risk import (
    ACTIVITY_LEVELS,
    ActivityLevel,
    FixedK,
    Mode,
    PrevalenceModel,
    expected_infected,
    environment_rate,
    prevalence_fraction,
)
from .routes import (
    Route,
    ScoringConfig,
    Segment,
    rank_routes,
    walking_sweep,
)


class UnknownNameError(ValueError):
    """A syntactically valid body referenced an unknown mode or activity."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(message)
        self.field = field


class FieldError(ValueError):
    """A semantically invalid field in an otherwise well-formed body."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(message)
        self.field = field


class SegmentBody(BaseModel):
    mode: str
    distance_m: float | None = None
    stops: int | None = None
    minutes: float | None = None
    activity: str | None = None


class RouteBody(BaseModel):
    id: str = Field(min_length=1)
    label: str = ""
    segments: list[SegmentBody] = Field(min_length=1)


class PrevalenceBody(BaseModel):
    active_cases: int = Field(ge=0)
    population: int = Field(gt=0)


class ScoreRequest(BaseModel):
    routes: list[RouteBody] = Field(min_length=1)
    prevalence: float | PrevalenceBody | None = None
    derived: bool = False
    activities: dict[str, str] = Field(default_factory=dict)


class SweepRequest(BaseModel):
    width_m: float = Field(gt=0)
    lengths_m: list[float] = Field(min_length=1)
    densities_per_m2: list[float] = Field(min_length=1)
    exposure_hours: float = Field(gt=0)
    activity: str = "moderate"
    prevalence: float | None = None
    interaction_cap_m: float = Field(default=20.0, gt=0)


def _lookup_mode(raw: str, field: str) -> Mode:
    try:
        return Mode(raw)
    except ValueError:
        raise UnknownNameError(field, f"unknown mode {raw!r}") from None


def _lookup_activity(raw: str, field: str) -> ActivityLevel:
    if raw not in ACTIVITY_LEVELS:
        raise UnknownNameError(field, f"unknown activity {raw!r}")
    return ACTIVITY_LEVELS[raw]


def _to_segment(body: SegmentBody, field: str) -> Segment:
    mode = _lookup_mode(body.mode, f"{field}.mode")
    activity = (
        _lookup_activity(body.activity, f"{field}.activity") if body.activity else None
    )
    try:
        return Segment(
            mode=mode,
            hours=None if body.minutes is None else body.minutes / 60.0,
            walk_distance_m=body.distance_m,
            transit_stops=body.stops,
            activity=activity,
        )
    except ValueError as exc:
        raise FieldError(field, str(exc)) from None


def _to_routes(bodies: list[RouteBody]) -> list[Route]:
    routes = []
    for i, body in enumerate(bodies):
        segments = tuple(
            _to_segment(seg, f"routes.{i}.segments.{j}")
            for j, seg in enumerate(body.segments)
        )
        routes.append(Route(body.id, body.label, segments))
    return routes


def _to_prevalence(
    raw: float | PrevalenceBody | None, field: str
) -> float | PrevalenceModel | None:
    if raw is None:
        return None
    if isinstance(raw, PrevalenceBody):
        try:
            return PrevalenceModel(raw.active_cases, raw.population)
        except ValueError as exc:
            raise FieldError(field, str(exc)) from None
    if not 0.0 <= raw <= 1.0:
        raise FieldError(field, f"prevalence out of [0, 1]: {raw}")
    return raw


def _profile_payload(presets: PresetBundle, mode: Mode) -> dict[str, Any]:
    profile = presets.profile(mode)
    if isinstance(profile.k_model, FixedK):
        k_payload: dict[str, Any] = {"kind": "fixed", "k": profile.k_model.k}
    else:
        k_payload = {
            "kind": "line",
            "slope": profile.k_model.slope,
            "intercept": profile.k_model.intercept,
        }
    payload: dict[str, Any] = {
        "mode": mode.value,
        "length_m": profile.length_m,
        "width_m": profile.width_m,
        "capacity": profile.capacity,
        "density_per_m2": profile.density_per_m2,
        "k_model": k_payload,
        "canonical_r_mean_m": profile.canonical_r_mean_m,
        "canonical_n_infected": profile.canonical_n_infected,
        "exact_rate_per_hour": profile.canonical_rate_per_hour,
        "default_activity": (
            profile.default_activity.label if profile.default_activity else None
        ),
    }
    activity = profile.default_activity
    if isinstance(profile.k_model, FixedK) or activity is not None:
        n = expected_infected(profile.capacity, prevalence_fraction(presets.prevalence))
        payload["derived_rate_per_hour"] = environment_rate(
            profile,
            activity if activity is not None else ACTIVITY_LEVELS["low"],
            n,
            profile.canonical_r_mean_m,
        )
    return payload


def create_app(
    presets_path: str | None = None, presets: PresetBundle | None = None
) -> FastAPI:
    if presets is None:
        presets = load_presets(presets_path) if presets_path else builtin_presets()

    app = FastAPI(title="routerisk", version=__version__)

    # the browser front end is served from a different origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=False,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError) -> JSONResponse:
        errors = [
            {
                "field": ".".join(str(part) for part in err["loc"] if part != "body"),
                "message": err["msg"],
            }
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"errors": errors})

    @app.exception_handler(UnknownNameError)
    async def unknown_name_handler(request: Request, exc: UnknownNameError) -> JSONResponse:
        return JSONResponse(
            status_code=422, content={"errors": [{"field": exc.field, "message": str(exc)}]}
        )

    @app.exception_handler(FieldError)
    async def field_error_handler(request: Request, exc: FieldError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"errors": [{"field": exc.field, "message": str(exc)}]}
        )

    @app.get("/api/health")
    async def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/api/presets")
    async def get_presets() -> dict[str, Any]:
        return {
            "engine_version": __version__,
            "preset_version": presets.version,
            "prevalence": {
                "active_cases": presets.prevalence.active_cases,
                "population": presets.prevalence.population,
                "fraction": prevalence_fraction(presets.prevalence),
            },
            "environments": [
                _profile_payload(presets, mode) for mode in presets.profiles
            ],
        }

    @app.post("/api/score")
    async def score(body: ScoreRequest) -> dict[str, Any]:
        routes = _to_routes(body.routes)
        prevalence = _to_prevalence(body.prevalence, "prevalence")
        overrides = {
            _lookup_mode(mode, f"activities.{mode}"): _lookup_activity(
                label, f"activities.{mode}"
            )
            for mode, label in body.activities.items()
        }
        config = ScoringConfig(derived=body.derived, activity_overrides=overrides)
        reports = rank_routes(routes, presets, prevalence, config)
        return {
            "engine_version": __version__,
            "preset_version": presets.version,
            "reports": [
                {
                    "route_id": report.route_id,
                    "label": report.label,
                    "total": report.total,
                    "per_segment": [
                        {
                            "index": s.index,
                            "mode": s.mode.value,
                            "hours": s.hours,
                            "rate_per_hour": s.rate_per_hour,
                            "probability": s.probability,
                        }
                        for s in report.per_segment
                    ],
                }
                for report in reports
            ],
        }

    @app.post("/api/sweep")
    async def sweep(body: SweepRequest) -> dict[str, Any]:
        activity = _lookup_activity(body.activity, "activity")
        prevalence = _to_prevalence(body.prevalence, "prevalence")
        try:
            points = walking_sweep(
                body.width_m,
                body.lengths_m,
                body.densities_per_m2,
                body.exposure_hours,
                activity,
                presets=presets,
                prevalence=prevalence,
                interaction_cap_m=body.interaction_cap_m,
            )
        except ValueError as exc:
            raise FieldError("lengths_m", str(exc)) from None
        return {
            "points": [
                {
                    "length_m": p.length_m,
                    "density_per_m2": p.density_per_m2,
                    "probability": p.probability,
                }
                for p in points
            ]
        }

    return app


app = create_app()

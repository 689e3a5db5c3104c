"""Scoring and ranking of multi-modal routes.

A route is an ordered list of segments, each traveled in one environment.
Segment durations come from an explicit time, a walking distance at a
configurable speed, or a transit stop count at a configurable per-stop time.
Each segment's infection probability is the hazard law at that environment's
rate; the whole-route probability combines the segments as independent
exposures, so segment order never matters.

Scoring uses the presets' canonical ("exact") rates by default; derived mode
recomputes each rate from the k(E) line, the vehicle capacity and the
prevalence instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .geometry import Rectangle, mean_distance_closed
from .presets import PresetBundle, builtin_presets
from .risk import (
    ACTIVITY_LEVELS,
    MODERATE,
    ActivityLevel,
    Mode,
    PrevalenceModel,
    combine_route_probabilities,
    environment_rate,
    expected_infected,
    hazard_probability,
    k_of_activity,
    prevalence_fraction,
)

#: Modes whose duration may be given as a stop count.
TRANSIT_MODES = frozenset({Mode.SUBWAY, Mode.BRT, Mode.CITY_BUS})


class RouteParseError(ValueError):
    """A route file could not be parsed."""


@dataclass(frozen=True)
class Segment:
    """One leg of a journey in a single environment.

    Exactly one of ``hours``, ``walk_distance_m`` or ``transit_stops`` must
    be given; distances only make sense for walking and stop counts only for
    transit modes.
    """

    mode: Mode
    hours: float | None = None
    walk_distance_m: float | None = None
    transit_stops: int | None = None
    activity: ActivityLevel | None = None

    def __post_init__(self) -> None:
        given = [
            value
            for value in (self.hours, self.walk_distance_m, self.transit_stops)
            if value is not None
        ]
        if len(given) != 1:
            raise ValueError(
                "segment needs exactly one of hours, walk_distance_m, transit_stops"
            )
        if self.walk_distance_m is not None and self.mode is not Mode.WALKING:
            raise ValueError(f"walk distance is not valid for mode {self.mode.value!r}")
        if self.transit_stops is not None and self.mode not in TRANSIT_MODES:
            raise ValueError(f"stop count is not valid for mode {self.mode.value!r}")
        if self.hours is not None and self.hours < 0:
            raise ValueError("hours cannot be negative")
        if self.walk_distance_m is not None and self.walk_distance_m < 0:
            raise ValueError("walk distance cannot be negative")
        if self.transit_stops is not None and self.transit_stops < 0:
            raise ValueError("stop count cannot be negative")


@dataclass(frozen=True)
class Route:
    id: str
    label: str
    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("route id cannot be empty")
        if not self.segments:
            raise ValueError(f"route {self.id!r} has no segments")


@dataclass(frozen=True)
class SegmentScore:
    index: int
    mode: Mode
    hours: float
    rate_per_hour: float
    probability: float


@dataclass(frozen=True)
class RiskReport:
    """Per-segment and total infection probabilities for one route."""

    route_id: str
    label: str
    per_segment: tuple[SegmentScore, ...]
    total: float


@dataclass(frozen=True)
class ScoringConfig:
    """Tunable scoring assumptions with the standard defaults."""

    walking_speed_m_per_h: float = 5000.0
    minutes_per_stop: float = 3.0
    derived: bool = False
    activity_overrides: dict[Mode, ActivityLevel] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.walking_speed_m_per_h <= 0:
            raise ValueError("walking speed must be positive")
        if self.minutes_per_stop <= 0:
            raise ValueError("per-stop time must be positive")


DEFAULT_CONFIG = ScoringConfig()


def segment_duration(segment: Segment, config: ScoringConfig = DEFAULT_CONFIG) -> float:
    """Duration of a segment in hours."""
    if segment.hours is not None:
        return segment.hours
    if segment.walk_distance_m is not None:
        return segment.walk_distance_m / config.walking_speed_m_per_h
    assert segment.transit_stops is not None
    return segment.transit_stops * config.minutes_per_stop / 60.0


def _fraction(presets: PresetBundle, prevalence: float | PrevalenceModel | None) -> float:
    if prevalence is None:
        return prevalence_fraction(presets.prevalence)
    if isinstance(prevalence, PrevalenceModel):
        return prevalence_fraction(prevalence)
    if not 0.0 <= prevalence <= 1.0:
        raise ValueError(f"prevalence out of [0, 1]: {prevalence}")
    return prevalence


def segment_rate(
    segment: Segment,
    presets: PresetBundle,
    prevalence: float | PrevalenceModel | None = None,
    config: ScoringConfig = DEFAULT_CONFIG,
) -> float:
    """Hazard rate (per hour) for a segment's environment.

    Exact mode uses the preset's canonical rate; since the rate is linear in
    the infectious count, an explicit prevalence rescales it proportionally.
    Derived mode recomputes ``-k(E) * n / r_mean**2`` with n = capacity *
    prevalence and the preset's canonical mean separation.
    """
    profile = presets.profile(segment.mode)
    if not config.derived:
        rate = profile.canonical_rate_per_hour
        if prevalence is not None:
            rate *= _fraction(presets, prevalence) / prevalence_fraction(presets.prevalence)
        return rate
    activity = (
        segment.activity
        or config.activity_overrides.get(segment.mode)
        or profile.default_activity
        or MODERATE
    )
    n = expected_infected(profile.capacity, _fraction(presets, prevalence))
    return environment_rate(profile, activity, n, profile.canonical_r_mean_m)


def segment_probability(
    segment: Segment,
    presets: PresetBundle,
    prevalence: float | PrevalenceModel | None = None,
    config: ScoringConfig = DEFAULT_CONFIG,
) -> float:
    """Infection probability for one segment."""
    rate = segment_rate(segment, presets, prevalence, config)
    return hazard_probability(rate, segment_duration(segment, config))


def route_probability(
    route: Route,
    presets: PresetBundle,
    prevalence: float | PrevalenceModel | None = None,
    config: ScoringConfig = DEFAULT_CONFIG,
) -> RiskReport:
    """Score a whole route, segment by segment."""
    scores = []
    for index, segment in enumerate(route.segments):
        rate = segment_rate(segment, presets, prevalence, config)
        hours = segment_duration(segment, config)
        scores.append(
            SegmentScore(
                index=index,
                mode=segment.mode,
                hours=hours,
                rate_per_hour=rate,
                probability=hazard_probability(rate, hours),
            )
        )
    total = combine_route_probabilities(s.probability for s in scores)
    return RiskReport(route_id=route.id, label=route.label, per_segment=tuple(scores), total=total)


def rank_routes(
    routes: list[Route],
    presets: PresetBundle,
    prevalence: float | PrevalenceModel | None = None,
    config: ScoringConfig = DEFAULT_CONFIG,
) -> list[RiskReport]:
    """Score all routes and sort ascending by total risk (stable on ties)."""
    if not routes:
        raise ValueError("no routes to rank")
    reports = [route_probability(route, presets, prevalence, config) for route in routes]
    return sorted(reports, key=lambda report: report.total)


@dataclass(frozen=True)
class SweepPoint:
    length_m: float
    density_per_m2: float
    probability: float


def walking_sweep(
    width_m: float,
    lengths_m: list[float],
    densities_per_m2: list[float],
    exposure_hours: float,
    activity: ActivityLevel = MODERATE,
    *,
    presets: PresetBundle | None = None,
    prevalence: float | PrevalenceModel | None = None,
    interaction_cap_m: float = 20.0,
) -> list[SweepPoint]:
    """Walking infection probability as a function of corridor length and crowding.

    For each (length, density): occupants = density * area, infectious count
    n = occupants * prevalence, mean separation from the rectangle's closed
    form, probability = 1 - exp(k(E) * n * z / r_mean**2).

    Beyond ``interaction_cap_m`` extra corridor length no longer changes a
    pedestrian's effective surroundings (inverse-square hazard is local), so
    the shared environment is capped at that length: the probability rises
    toward the square corridor and is constant past the cap.
    """
    if width_m <= 0 or exposure_hours <= 0:
        raise ValueError("width and exposure time must be positive")
    if interaction_cap_m <= 0:
        raise ValueError("interaction cap must be positive")
    if any(length <= 0 for length in lengths_m):
        raise ValueError("lengths must be positive")
    if any(density < 0 for density in densities_per_m2):
        raise ValueError("densities cannot be negative")

    bundle = presets if presets is not None else builtin_presets()
    profile = bundle.profile(Mode.WALKING)
    k = k_of_activity(profile, activity)
    y = _fraction(bundle, prevalence)

    points = []
    for length in lengths_m:
        effective = min(length, interaction_cap_m)
        r_mean = mean_distance_closed(Rectangle(effective, width_m))
        area = effective * width_m
        for density in densities_per_m2:
            n = density * area * y
            probability = -math.expm1(k * n * exposure_hours / (r_mean * r_mean))
            points.append(SweepPoint(length, density, probability))
    return points


# ---------------------------------------------------------------------------
# Route file parsing and serialization.
#
# Format (version 1):
#   format = 1
#   route <id> "<label>"
#     <mode> distance_m=<meters> | stops=<count> | minutes=<minutes> [activity=<label>]
#
# Segment lines belong to the most recent `route` line. Indentation is
# cosmetic; '#' starts a comment.
# ---------------------------------------------------------------------------

_DURATION_KEYS = {"distance_m", "stops", "minutes"}


def _parse_segment(tokens: list[str], source: str, lineno: int) -> Segment:
    try:
        mode = Mode(tokens[0])
    except ValueError:
        raise RouteParseError(f"{source}:{lineno}: unknown mode {tokens[0]!r}") from None
    fields: dict[str, str] = {}
    for token in tokens[1:]:
        key, eq, value = token.partition("=")
        if not eq or not value:
            raise RouteParseError(f"{source}:{lineno}: expected key=value, got {token!r}")
        if key in fields:
            raise RouteParseError(f"{source}:{lineno}: duplicate field {key!r}")
        fields[key] = value
    duration_keys = _DURATION_KEYS & fields.keys()
    if len(duration_keys) != 1:
        raise RouteParseError(
            f"{source}:{lineno}: segment needs exactly one of distance_m, stops, minutes"
        )
    activity = None
    if "activity" in fields:
        label = fields.pop("activity")
        if label not in ACTIVITY_LEVELS:
            raise RouteParseError(f"{source}:{lineno}: unknown activity {label!r}")
        activity = ACTIVITY_LEVELS[label]
    unknown = fields.keys() - _DURATION_KEYS
    if unknown:
        raise RouteParseError(
            f"{source}:{lineno}: unknown fields: {', '.join(sorted(unknown))}"
        )
    try:
        if "distance_m" in fields:
            return Segment(mode, walk_distance_m=float(fields["distance_m"]), activity=activity)
        if "stops" in fields:
            return Segment(mode, transit_stops=int(fields["stops"]), activity=activity)
        return Segment(mode, hours=float(fields["minutes"]) / 60.0, activity=activity)
    except ValueError as exc:
        raise RouteParseError(f"{source}:{lineno}: {exc}") from None


def parse_routes(text: str, source: str = "<string>") -> list[Route]:
    """Parse a route document; returns the routes in file order."""
    routes: list[Route] = []
    current_id: str | None = None
    current_label = ""
    current_segments: list[Segment] = []
    saw_format = False

    def flush(lineno: int) -> None:
        nonlocal current_id, current_segments
        if current_id is None:
            return
        if not current_segments:
            raise RouteParseError(f"{source}:{lineno}: route {current_id!r} has no segments")
        routes.append(Route(current_id, current_label, tuple(current_segments)))
        current_id, current_segments = None, []

    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("format"):
            _, _, value = line.partition("=")
            if value.strip() != "1":
                raise RouteParseError(f"{source}:{lineno}: unsupported format {value.strip()!r}")
            saw_format = True
            continue
        if line.startswith("route "):
            flush(lineno)
            rest = line[len("route "):].strip()
            route_id, _, label_part = rest.partition(" ")
            if not route_id:
                raise RouteParseError(f"{source}:{lineno}: route needs an id")
            label_part = label_part.strip()
            if label_part and not (label_part.startswith('"') and label_part.endswith('"')):
                raise RouteParseError(f"{source}:{lineno}: label must be double-quoted")
            current_id = route_id
            current_label = label_part[1:-1] if label_part else ""
            continue
        if current_id is None:
            raise RouteParseError(f"{source}:{lineno}: segment before any route line")
        current_segments.append(_parse_segment(line.split(), source, lineno))

    flush(lineno + 1)
    if routes and not saw_format:
        raise RouteParseError(f"{source}: missing 'format = 1' header")
    return routes


def _segment_line(segment: Segment) -> str:
    if segment.walk_distance_m is not None:
        body = f"{segment.mode.value} distance_m={segment.walk_distance_m:g}"
    elif segment.transit_stops is not None:
        body = f"{segment.mode.value} stops={segment.transit_stops}"
    else:
        assert segment.hours is not None
        body = f"{segment.mode.value} minutes={segment.hours * 60.0:g}"
    if segment.activity is not None:
        body += f" activity={segment.activity.label}"
    return "  " + body


def serialize_routes(routes: list[Route]) -> str:
    """Render routes in canonical form; parse(serialize(r)) == r."""
    lines = ["format = 1"]
    for route in routes:
        lines.append(f'route {route.id} "{route.label}"')
        lines.extend(_segment_line(segment) for segment in route.segments)
    return "\n".join(lines) + "\n"


def parse_routes_file(path: Path | str) -> list[Route]:
    file = Path(path)
    return parse_routes(file.read_text(), source=str(file))


def builtin_route_fixture(name: str) -> list[Route]:
    """Load a shipped route fixture ('neshan' or 'balad')."""
    from importlib import resources

    text = resources.files("routerisk.data").joinpath(f"{name}.routes").read_text()
    return parse_routes(text, source=f"routerisk/data/{name}.routes")


def split_walk(segment: Segment, first_m: float) -> tuple[Segment, Segment]:
    """Split a walking-distance segment in two; totals are unchanged."""
    if segment.walk_distance_m is None:
        raise ValueError("only walking-distance segments can be split")
    if not 0 <= first_m <= segment.walk_distance_m:
        raise ValueError("split point outside the segment")
    return (
        replace(segment, walk_distance_m=first_m),
        replace(segment, walk_distance_m=segment.walk_distance_m - first_m),
    )

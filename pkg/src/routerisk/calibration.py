"""Re-derivation of environment coefficients from raw exposure tables.

Each calibration observation is "two people, one infectious, separation r,
duration z hours, infection probability f"; inverting the single-carrier
hazard law gives the environment coefficient ``k = (r**2 / z) * ln(1 - f)``.
Observations are grouped by activity level, joined with the air-intake
table, and fitted with ordinary least squares to produce the per-environment
``k(E)`` lines. Fits are compared against the reference constants shipped
in :data:`REFERENCE_FITS`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .risk import ACTIVITY_LEVELS, ActivityLevel

#: Separation used by every shipped table: six feet, converted exactly.
SIX_FEET_M = 1.8288


class TableParseError(ValueError):
    """A calibration fixture file could not be parsed."""


@dataclass(frozen=True)
class ObservationRow:
    """One exposure observation from a two-person room experiment."""

    duration_hours: float
    infection_fraction: float
    room_area_m2: float
    mean_separation_m: float
    activity: ActivityLevel

    def __post_init__(self) -> None:
        if self.duration_hours <= 0:
            raise ValueError("duration must be positive")
        if not 0.0 < self.infection_fraction < 1.0:
            raise ValueError(
                f"infection fraction must be strictly inside (0, 1), got {self.infection_fraction}"
            )
        if self.room_area_m2 <= 0 or self.mean_separation_m <= 0:
            raise ValueError("room area and separation must be positive")


@dataclass(frozen=True)
class CalibrationPoint:
    """(air intake, environment coefficient) pair feeding the k(E) fit."""

    air_intake_lph: float
    k: float


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    pearson_r: float
    r_score: float


def k_from_single(r_m: float, hours: float, fraction: float) -> float:
    """Invert the one-carrier hazard law for k (always negative)."""
    if r_m <= 0:
        raise ValueError("separation must be positive")
    if hours <= 0:
        raise ValueError("duration must be positive")
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be strictly inside (0, 1), got {fraction}")
    return r_m * r_m / hours * math.log1p(-fraction)


def k_from_pair(r1_m: float, r2_m: float, hours: float, fraction: float) -> float:
    """Invert the two-carrier hazard law for k.

    Reduces to ``k_from_single(r) / 2`` when both carriers sit at the same
    distance, and to the single-carrier value as the far carrier recedes.
    """
    if r1_m <= 0 or r2_m <= 0:
        raise ValueError("separations must be positive")
    if hours <= 0:
        raise ValueError("duration must be positive")
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be strictly inside (0, 1), got {fraction}")
    r1sq, r2sq = r1_m * r1_m, r2_m * r2_m
    return r1sq * r2sq / (hours * (r1sq + r2sq)) * math.log1p(-fraction)


def car_k_solve(minutes: float, fraction: float, r_m: float) -> float:
    """Coefficient implied by a mean time-to-infection inside a car.

    Direct solve of the single-carrier law at ``z = minutes / 60``. The
    shipped car preset uses the reference constant -2.729480 instead; this
    solver exists to audit it (it yields -2.709 for 23.5 min / 0.99 / 0.48 m).
    """
    return k_from_single(r_m, minutes / 60.0, fraction)


def build_dataset(groups: Iterable[Sequence[ObservationRow]]) -> list[CalibrationPoint]:
    """Flatten observation groups into unweighted (E, k) fit points."""
    points: list[CalibrationPoint] = []
    for group in groups:
        for row in group:
            points.append(
                CalibrationPoint(
                    air_intake_lph=row.activity.air_intake_lph,
                    k=k_from_single(row.mean_separation_m, row.duration_hours, row.infection_fraction),
                )
            )
    return points


def _moments(points: Sequence[CalibrationPoint]) -> tuple[float, float, float, float, float]:
    n = len(points)
    xm = sum(p.air_intake_lph for p in points) / n
    ym = sum(p.k for p in points) / n
    sxx = sum((p.air_intake_lph - xm) ** 2 for p in points)
    syy = sum((p.k - ym) ** 2 for p in points)
    sxy = sum((p.air_intake_lph - xm) * (p.k - ym) for p in points)
    return xm, ym, sxx, syy, sxy


def pearson(points: Sequence[CalibrationPoint]) -> float:
    """Pearson product-moment correlation between air intake and k."""
    if len(points) < 2:
        raise ValueError("correlation needs at least two points")
    _, _, sxx, syy, sxy = _moments(points)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for zero-variance data")
    return sxy / math.sqrt(sxx * syy)


def fit_line(points: Sequence[CalibrationPoint]) -> FitResult:
    """Ordinary least squares over the pooled points (each row one sample)."""
    if len(points) < 2:
        raise ValueError("fit needs at least two points")
    xm, ym, sxx, _, sxy = _moments(points)
    if sxx == 0.0:
        raise ValueError("fit is rank-deficient: all points share one air-intake value")
    slope = sxy / sxx
    r = pearson(points)
    return FitResult(slope=slope, intercept=ym - slope * xm, pearson_r=r, r_score=r * r)


#: Reference k(E) fit constants per environment, used by ``calibrate --check``.
REFERENCE_FITS: dict[str, FitResult] = {
    "open": FitResult(-0.00143853, 0.71455401, -0.93076, 0.866),
    "subway": FitResult(-0.00180107, 0.82402941, -0.925089, 0.856),
    "brt": FitResult(-0.00149112, 0.38875338, -0.997468, 0.995),
    "city_bus": FitResult(-0.00220276, 0.56565911, -0.997452, 0.995),
}

#: Reference activity-independent car coefficient.
REFERENCE_CAR_K = -2.729480

#: Absolute tolerances for comparing a recomputed fit to the reference.
CHECK_TOLERANCES = {"slope": 1e-7, "intercept": 1e-4, "pearson_r": 1e-4, "r_score": 1e-3}


def check_fit(fit: FitResult, reference: FitResult) -> dict[str, float]:
    """Absolute deviations of a fit from a reference, by field."""
    return {
        "slope": abs(fit.slope - reference.slope),
        "intercept": abs(fit.intercept - reference.intercept),
        "pearson_r": abs(fit.pearson_r - reference.pearson_r),
        "r_score": abs(fit.r_score - reference.r_score),
    }


def _parse_table(path: Path, area_m2: float, activity: ActivityLevel) -> list[ObservationRow]:
    rows: list[ObservationRow] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TableParseError(f"{path}:{lineno}: expected 'hours percent', got {raw!r}")
        try:
            hours, percent = float(parts[0]), float(parts[1])
        except ValueError:
            raise TableParseError(f"{path}:{lineno}: non-numeric row {raw!r}") from None
        try:
            rows.append(
                ObservationRow(
                    duration_hours=hours,
                    infection_fraction=percent / 100.0,
                    room_area_m2=area_m2,
                    mean_separation_m=SIX_FEET_M,
                    activity=activity,
                )
            )
        except ValueError as exc:
            raise TableParseError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise TableParseError(f"{path}: no data rows")
    return rows


def load_tables(directory: Path | str) -> dict[str, list[list[ObservationRow]]]:
    """Load all calibration tables listed in a directory's manifest.

    The manifest maps each table file to an environment and activity label
    and records the room area per environment. Returns observation groups
    (one group per table file) keyed by environment name.
    """
    directory = Path(directory)
    manifest = directory / "manifest.txt"
    if not manifest.exists():
        raise TableParseError(f"{manifest}: manifest not found")

    areas: dict[str, float] = {}
    entries: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(manifest.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "area":
            env, _, area = (part.strip() for part in value.partition(","))
            areas[env] = float(area)
        elif key == "table":
            parts = [part.strip() for part in value.split(",")]
            if len(parts) != 3:
                raise TableParseError(
                    f"{manifest}:{lineno}: table wants 'file, environment, activity'"
                )
            entries.append((parts[0], parts[1], parts[2]))
        elif key == "format":
            if value != "1":
                raise TableParseError(f"{manifest}:{lineno}: unsupported format {value!r}")
        elif key == "version":
            pass
        else:
            raise TableParseError(f"{manifest}:{lineno}: unknown key {key!r}")

    if not entries:
        raise TableParseError(f"{manifest}: no table entries")

    grouped: dict[str, list[list[ObservationRow]]] = {}
    for filename, env, activity_label in entries:
        if activity_label not in ACTIVITY_LEVELS:
            raise TableParseError(f"{manifest}: unknown activity {activity_label!r}")
        if env not in areas:
            raise TableParseError(f"{manifest}: no area recorded for environment {env!r}")
        table_path = directory / filename
        if not table_path.exists():
            raise TableParseError(f"{table_path}: listed in manifest but missing")
        rows = _parse_table(table_path, areas[env], ACTIVITY_LEVELS[activity_label])
        grouped.setdefault(env, []).append(rows)
    return grouped


def fit_all(directory: Path | str) -> dict[str, FitResult]:
    """Fit every environment's k(E) line from a fixture directory."""
    return {
        env: fit_line(build_dataset(groups))
        for env, groups in load_tables(directory).items()
    }

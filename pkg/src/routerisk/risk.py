"""Closed-form airborne infection-risk model.

The model treats infection as an exponential hazard: over an exposure of
``z`` hours under a constant hazard rate ``lam`` (per hour), the infection
probability is ``1 - exp(-lam * z)``. Independent exposures combine as
``1 - prod(1 - p_i)``, which makes the probability additive in hazard and
lets a journey be scored leg by leg.

The hazard rate of an environment is ``lam = -k(E) * n / r_mean**2`` where
``k(E)`` is a (negative) environment coefficient depending linearly on the
occupant's air intake ``E`` (liters/hour), ``n`` is the expected number of
infectious occupants and ``r_mean`` the mean separation between occupants.

Sign convention: coefficients ``k`` are stored negative, exactly as
calibrated; rates are stored as the non-negative ``lam = -k * n / r**2``.
All functions here are pure and all value types are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable


class Mode(str, Enum):
    """Travel environments with distinct infection-risk calibrations."""

    WALKING = "walking"
    SUBWAY = "subway"
    BRT = "brt"
    CITY_BUS = "city_bus"
    CAR = "car"


class CalibrationRangeError(ValueError):
    """k(E) was requested outside the range where the linear model is valid."""


class SingularityError(ValueError):
    """A pairwise distance of zero was fed into a 1/r**2 term."""


# Air-intake range (liters/hour) covered by the calibration data. Below the
# low end the fitted k(E) lines of some environments cross zero, which would
# flip the hazard sign; evaluation outside the range is rejected.
AIR_INTAKE_MIN_LPH = 300.0
AIR_INTAKE_MAX_LPH = 3180.0


@dataclass(frozen=True)
class ActivityLevel:
    """Physical activity intensity, expressed as air inhaled per hour."""

    label: str
    air_intake_lph: float

    def __post_init__(self) -> None:
        if self.air_intake_lph <= 0:
            raise ValueError(f"air intake must be positive, got {self.air_intake_lph}")


SITTING = ActivityLevel("sitting", 300.0)
LOW = ActivityLevel("low", 780.0)
MODERATE = ActivityLevel("moderate", 1740.0)
INTENSE = ActivityLevel("intense", 3180.0)

#: Built-in activity levels by label.
ACTIVITY_LEVELS: dict[str, ActivityLevel] = {
    a.label: a for a in (SITTING, LOW, MODERATE, INTENSE)
}


@dataclass(frozen=True)
class KLine:
    """Linear environment coefficient k(E) = slope * E + intercept."""

    slope: float  # per (liter/hour)
    intercept: float

    def at(self, air_intake_lph: float) -> float:
        return self.slope * air_intake_lph + self.intercept


@dataclass(frozen=True)
class FixedK:
    """Activity-independent environment coefficient (used for cars)."""

    k: float


@dataclass(frozen=True)
class PrevalenceModel:
    """Fraction of the population that is currently infectious."""

    active_cases: int
    population: int

    def __post_init__(self) -> None:
        if self.population <= 0:
            raise ValueError("population must be positive")
        if self.active_cases < 0:
            raise ValueError("active cases cannot be negative")
        if self.active_cases > self.population:
            raise ValueError("active cases cannot exceed the population")


@dataclass(frozen=True)
class EnvironmentProfile:
    """Physical and epidemiological constants of one travel environment.

    The canonical fields hold one published operating point: the mean
    separation, expected infectious count and resulting hazard rate at the
    environment's normal capacity. Scoring in *exact* mode uses
    ``canonical_rate_per_hour`` verbatim; *derived* mode recomputes the rate
    from the k model, the capacity and the prevalence (the two agree to
    within 1% but not exactly, because the canonical numbers carry their own
    intermediate rounding).
    """

    mode: Mode
    length_m: float
    width_m: float
    capacity: int
    k_model: KLine | FixedK
    canonical_r_mean_m: float
    canonical_n_infected: float
    canonical_rate_per_hour: float
    default_activity: ActivityLevel | None = None

    def __post_init__(self) -> None:
        if self.length_m <= 0 or self.width_m <= 0:
            raise ValueError("environment dimensions must be positive")
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if self.canonical_r_mean_m <= 0:
            raise ValueError("canonical mean separation must be positive")
        if self.canonical_n_infected < 0:
            raise ValueError("canonical infected count cannot be negative")
        if self.canonical_rate_per_hour < 0:
            raise ValueError("canonical rate cannot be negative")

    @property
    def density_per_m2(self) -> float:
        """Occupants per square meter at capacity."""
        return self.capacity / (self.length_m * self.width_m)


def combine_route_probabilities(probabilities: Iterable[float]) -> float:
    """Total infection probability over independent exposures.

    ``1 - prod(1 - p_i)``: the complement of escaping every exposure.
    An empty sequence gives 0. Order-independent.
    """
    survival = 1.0
    for p in probabilities:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of [0, 1]: {p}")
        survival *= 1.0 - p
    return 1.0 - survival


def hazard_probability(rate_per_hour: float, hours: float) -> float:
    """Infection probability after ``hours`` under a constant hazard rate."""
    if rate_per_hour < 0:
        raise ValueError(f"hazard rate cannot be negative: {rate_per_hour}")
    if hours < 0:
        raise ValueError(f"duration cannot be negative: {hours}")
    return -math.expm1(-rate_per_hour * hours)


def k_of_activity(profile: EnvironmentProfile, activity: ActivityLevel) -> float:
    """Environment coefficient for a given activity level (always negative).

    Fixed-k environments ignore the activity. For k-line environments the
    air intake must lie inside the calibrated range and the line must
    evaluate negative there; otherwise the linear model is being used
    outside its support and a :class:`CalibrationRangeError` is raised.
    """
    if isinstance(profile.k_model, FixedK):
        return profile.k_model.k
    e = activity.air_intake_lph
    if not AIR_INTAKE_MIN_LPH <= e <= AIR_INTAKE_MAX_LPH:
        raise CalibrationRangeError(
            f"air intake {e} L/h outside calibrated range "
            f"[{AIR_INTAKE_MIN_LPH}, {AIR_INTAKE_MAX_LPH}]"
        )
    k = profile.k_model.at(e)
    if k >= 0:
        raise CalibrationRangeError(
            f"k(E) = {k:.6g} is non-negative at E = {e} L/h for {profile.mode.value}; "
            "the linear calibration does not extend there"
        )
    return k


def environment_rate(
    profile: EnvironmentProfile,
    activity: ActivityLevel,
    n_infected: float,
    r_mean_m: float,
) -> float:
    """Hazard rate (per hour) of an environment: ``-k(E) * n / r_mean**2``."""
    if n_infected < 0:
        raise ValueError(f"infected count cannot be negative: {n_infected}")
    if r_mean_m == 0:
        raise SingularityError("mean separation of zero makes the hazard singular")
    if r_mean_m < 0:
        raise ValueError(f"mean separation cannot be negative: {r_mean_m}")
    return -k_of_activity(profile, activity) * n_infected / (r_mean_m * r_mean_m)


def prevalence_fraction(model: PrevalenceModel) -> float:
    """Probability that a random member of the population is infectious."""
    return model.active_cases / model.population


def expected_infected(capacity: int, prevalence: float) -> float:
    """Expected number of infectious occupants among ``capacity`` people.

    Kept real-valued: rounding to whole people would bias small-vehicle
    rates (a car carries an expected 0.035 infectious occupants, not 0).
    """
    if capacity < 0:
        raise ValueError("capacity cannot be negative")
    if not 0.0 <= prevalence <= 1.0:
        raise ValueError(f"prevalence out of [0, 1]: {prevalence}")
    return capacity * prevalence

"""Multi-modal route scoring by airborne infection risk.

Scores candidate journeys leg by leg under an exponential hazard model,
ranks them by total infection probability, re-derives the model's
calibration coefficients from raw exposure tables, and validates the closed
form with a grid-walk Monte Carlo simulation. Ships a CLI and a small HTTP
service on top of the library.
"""

from .calibration import (
    REFERENCE_CAR_K,
    REFERENCE_FITS,
    CalibrationPoint,
    FitResult,
    ObservationRow,
    build_dataset,
    car_k_solve,
    fit_line,
    k_from_pair,
    k_from_single,
    pearson,
)
from .geometry import Rectangle, mean_distance_closed, mean_distance_mc
from .gridsim import (
    Scene,
    WalkPath,
    build_scene,
    closed_form_path_probability,
    effective_rate,
    per_cell_probability,
    simulate,
    straight_path,
)
from .presets import PresetBundle, builtin_presets, load_presets
from .risk import (
    ACTIVITY_LEVELS,
    INTENSE,
    LOW,
    MODERATE,
    SITTING,
    ActivityLevel,
    CalibrationRangeError,
    EnvironmentProfile,
    FixedK,
    KLine,
    Mode,
    PrevalenceModel,
    SingularityError,
    combine_route_probabilities,
    environment_rate,
    expected_infected,
    hazard_probability,
    k_of_activity,
    prevalence_fraction,
)
from .routes import (
    DEFAULT_CONFIG,
    RiskReport,
    Route,
    ScoringConfig,
    Segment,
    SegmentScore,
    builtin_route_fixture,
    parse_routes,
    parse_routes_file,
    rank_routes,
    route_probability,
    segment_duration,
    segment_probability,
    serialize_routes,
    walking_sweep,
)

__version__ = "0.1.0"

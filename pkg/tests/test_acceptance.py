"""Acceptance suite: one test per release criterion, each printing a
PASS line with the measured numbers (run with -s to see them on success)."""

import math
import time
from pathlib import Path

import pytest

from routerisk import (
    LOW,
    Mode,
    Rectangle,
    builtin_presets,
    builtin_route_fixture,
    build_scene,
    closed_form_path_probability,
    combine_route_probabilities as combine,
    effective_rate,
    environment_rate,
    expected_infected,
    hazard_probability,
    k_from_single,
    mean_distance_closed,
    mean_distance_mc,
    rank_routes,
    simulate,
    straight_path,
    walking_sweep,
)
from routerisk.calibration import SIX_FEET_M, fit_all
from routerisk.routes import Route, Segment, route_probability, split_walk

DATA_DIR = Path(__file__).parent / "data"
TABLES_DIR = Path(__file__).parent.parent / "src" / "routerisk" / "data" / "calibration"

NESHAN_TOTALS = {
    "neshan-1": 0.0397,
    "neshan-2": 0.0833,
    "neshan-3": 0.0827,
    "neshan-4": 0.0262,
    "neshan-5": 0.0390,
    "neshan-6": 0.1730,
}
BALAD_TOTALS = {
    "balad-1": 0.0433,
    "balad-2": 0.0829,
    "balad-3": 0.1025,
    "balad-4": 0.0239,
    "balad-5": 0.1674,
}

REFERENCE_FIT_VALUES = {
    # environment: (slope, intercept, pearson, r_score)
    "open": (-0.00143853, 0.71455401, -0.93076, 0.866),
    "subway": (-0.00180107, 0.82402941, -0.925089, 0.856),
    "brt": (-0.00149112, 0.38875338, -0.997468, 0.995),
    "city_bus": (-0.00220276, 0.56565911, -0.997452, 0.995),
}


def test_golden_route_reproduction():
    """Published route totals within ±0.0005; both rankings pick route 4; < 1 s."""
    start = time.perf_counter()
    presets = builtin_presets()
    worst = 0.0
    for name, expected_totals in (("neshan", NESHAN_TOTALS), ("balad", BALAD_TOTALS)):
        routes = builtin_route_fixture(name)
        reports = {r.route_id: r for r in rank_routes(routes, presets)}
        assert len(reports) == len(expected_totals)
        for route_id, expected in expected_totals.items():
            got = reports[route_id].total
            assert got == pytest.approx(expected, abs=5e-4), route_id
            worst = max(worst, abs(got - expected))
        winner = rank_routes(routes, presets)[0].route_id
        assert winner == f"{name}-4"
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(
        f"[PASS] golden routes: 11 totals within ±0.0005 (worst |diff| {worst:.2e}), "
        f"winners neshan-4 and balad-4, {elapsed * 1000:.0f} ms"
    )


def test_calibration_reproduction():
    """Fitted k(E) lines match the published constants at stated tolerances; < 1 s."""
    start = time.perf_counter()
    fits = fit_all(TABLES_DIR)
    assert set(fits) == set(REFERENCE_FIT_VALUES)
    for env, (slope, intercept, pearson_r, r_score) in REFERENCE_FIT_VALUES.items():
        fit = fits[env]
        assert fit.slope == pytest.approx(slope, abs=1e-7), env
        assert fit.intercept == pytest.approx(intercept, abs=1e-4), env
        assert fit.pearson_r == pytest.approx(pearson_r, abs=1e-4), env
        assert fit.r_score == pytest.approx(r_score, abs=1e-3), env
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(
        f"[PASS] calibration: 4 environments match published slope/intercept/"
        f"pearson/r-score at 1e-7/1e-4/1e-4/1e-3, {elapsed * 1000:.0f} ms"
    )


def test_table_inversion():
    """All 116 published k values recompute from (hours, percent) via the
    inversion formula within ±5e-6 (documented anomaly row at ±2e-2)."""
    rows = []
    for raw in (DATA_DIR / "published_k.txt").read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        table, row, hours, percent, k_published = line.split()
        rows.append((table, int(row), float(hours), float(percent), float(k_published)))
    assert len(rows) == 116

    worst = 0.0
    for table, row, hours, percent, k_published in rows:
        recomputed = k_from_single(SIX_FEET_M, hours, percent / 100.0)
        tolerance = 2e-2 if (table, row) == ("t3", 2) else 5e-6
        assert recomputed == pytest.approx(k_published, abs=tolerance), (table, row)
        worst = max(worst, abs(recomputed - k_published))
    print(f"[PASS] table inversion: 116/116 rows within tolerance (worst |diff| {worst:.2e})")


def test_derived_vs_exact_presets():
    """Rates derived from (k model, capacity x prevalence, canonical r_mean)
    sit within 1% of the canonical rate constants for all five environments."""
    presets = builtin_presets()
    prevalence = 0.008656
    worst = 0.0
    for mode in Mode:
        profile = presets.profile(mode)
        activity = profile.default_activity or LOW
        n = expected_infected(profile.capacity, prevalence)
        derived = environment_rate(profile, activity, n, profile.canonical_r_mean_m)
        rel = abs(derived - profile.canonical_rate_per_hour) / profile.canonical_rate_per_hour
        assert rel < 0.01, mode
        worst = max(worst, rel)
    print(f"[PASS] derived vs exact presets: all 5 environments within 1% (worst {worst:.4%})")


def test_property_suite():
    """Combination, time-composition, subdivision scaling, segment splitting
    and monotonicity laws at their stated tolerances."""
    presets = builtin_presets()
    grid = [0.0, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0]

    for p in grid:
        for q in grid:
            assert combine([p, q]) == pytest.approx(p + q - p * q, abs=1e-12)
            assert combine([p, q]) == pytest.approx(combine([q, p]), abs=1e-12)
            for r in grid:
                assert combine([p, q, r]) == pytest.approx(
                    combine([combine([p, q]), r]), abs=1e-12
                )

    lambdas = [0.0012, 0.0899, 0.4071, 2.5]
    times = [0.01, 0.3, 1.6, 7.0]
    for lam in lambdas:
        for a in times:
            for b in times:
                whole = hazard_probability(lam, a + b)
                parts = combine([hazard_probability(lam, a), hazard_probability(lam, b)])
                assert parts == pytest.approx(whole, abs=1e-12)
            for pieces in (2, 3, 10):
                for z in times:
                    piece = hazard_probability(lam, z / pieces)
                    assert 1 - (1 - piece) ** pieces == pytest.approx(
                        hazard_probability(lam, z), abs=1e-10
                    )

    # strict monotonicity in exposure time and rate
    for lam in lambdas:
        probs = [hazard_probability(lam, z) for z in times]
        assert all(b > a for a, b in zip(probs, probs[1:]))
    for z in times:
        probs = [hazard_probability(lam, z) for lam in lambdas]
        assert all(b > a for a, b in zip(probs, probs[1:]))

    # splitting one walking leg leaves a route total unchanged
    segments = (
        Segment(Mode.WALKING, walk_distance_m=126.0),
        Segment(Mode.CITY_BUS, transit_stops=18),
        Segment(Mode.WALKING, walk_distance_m=1080.0),
    )
    whole = route_probability(Route("r", "", segments), presets).total
    for first in (1.0, 400.0, 1079.0):
        a, b = split_walk(segments[2], first)
        split_total = route_probability(Route("r", "", (segments[0], segments[1], a, b)), presets).total
        assert split_total == pytest.approx(whole, abs=1e-12)

    # monotone in crowd density at every corridor length
    points = walking_sweep(4.0, [4, 10, 20, 50, 100], [0.25, 0.5, 1.0, 2.0, 4.0], 1.0, presets=presets)
    by_length: dict[float, list[tuple[float, float]]] = {}
    for p in points:
        by_length.setdefault(p.length_m, []).append((p.density_per_m2, p.probability))
    for series in by_length.values():
        probs = [prob for _, prob in sorted(series)]
        assert all(b > a for a, b in zip(probs, probs[1:]))

    print(
        "[PASS] property suite: combination/time-composition at 1e-12, "
        "subdivision scaling k in {2,3,10} at 1e-10, segment splitting at 1e-12, "
        "monotone in time, rate and density"
    )


def test_grid_sim_validation():
    """Monte Carlo vs closed form within 3 standard errors on >=95% of 20
    seeded scenes (100k trials each); path rate invariant in exposure; < 30 s."""
    start = time.perf_counter()
    import numpy as np

    rng = np.random.default_rng(20210901)
    agree = 0
    scenes = 20
    for index in range(scenes):
        cols = int(rng.integers(20, 61))
        rows = int(rng.integers(10, 41))
        row = int(rng.integers(0, rows))
        exclude = tuple((c, row) for c in range(cols))
        scene = build_scene(cols, rows, 10, 1.0, seed=int(rng.integers(1 << 31)), exclude=exclude)
        path = straight_path(scene, 1.0, row=row)

        # scale k so the scene's closed-form probability is informative
        base_rate = effective_rate(scene, path, -1.0)
        target = float(rng.uniform(0.08, 0.6))
        k = math.log1p(-target) / base_rate
        closed = closed_form_path_probability(scene, path, k)
        assert 0.05 < closed < 0.65

        estimate, std_error = simulate(scene, path, k, 100_000, seed=index)
        if abs(estimate - closed) <= 3 * std_error:
            agree += 1

        r1 = effective_rate(scene, straight_path(scene, 0.4, row=row), k)
        r2 = effective_rate(scene, straight_path(scene, 3.7, row=row), k)
        assert r1 == pytest.approx(r2, abs=1e-12)

    elapsed = time.perf_counter() - start
    assert agree >= 0.95 * scenes, f"only {agree}/{scenes} scenes within 3 standard errors"
    assert elapsed < 30.0
    print(
        f"[PASS] grid simulation: {agree}/{scenes} scenes within 3 standard errors, "
        f"rate exposure-invariant at 1e-12, {elapsed:.1f} s"
    )


def test_geometry_oracle():
    """Closed form within 3 standard errors of Monte Carlo on 20 rectangles
    (aspect 1-50); unit square constant to ±0.001; the shipped walking
    preset's 4.95 m separation is canonical data, not the closed form."""
    import numpy as np

    rng = np.random.default_rng(52141)
    worst_sigma = 0.0
    for index in range(20):
        width = float(rng.uniform(0.5, 10.0))
        aspect = float(rng.uniform(1.0, 50.0))
        rect = Rectangle(width * aspect, width)
        estimate, std_error = mean_distance_mc(rect, 200_000, seed=index)
        sigma = abs(estimate - mean_distance_closed(rect)) / std_error
        assert sigma <= 3.0, (rect, sigma)
        worst_sigma = max(worst_sigma, sigma)

    unit, _ = mean_distance_mc(Rectangle(1, 1), 2_000_000, seed=99)
    assert mean_distance_closed(Rectangle(1, 1)) == pytest.approx(0.52141, abs=1e-3)
    assert unit == pytest.approx(0.52141, abs=1e-3)

    closed_walkway = mean_distance_closed(Rectangle(20, 12))
    assert abs(closed_walkway - 4.95) / 4.95 > 0.5
    print(
        f"[PASS] geometry: 20 rectangles within 3 standard errors (worst {worst_sigma:.2f}), "
        f"unit square {mean_distance_closed(Rectangle(1, 1)):.5f}, "
        f"closed form at 20x12 = {closed_walkway:.2f} vs canonical 4.95 (dual source confirmed)"
    )


def test_walking_sweep_shape():
    """At the lowest density the probability is flat from 20 m to 100 m
    (<10% relative) and strictly increases with density at every length."""
    lengths = [4.0, 10.0, 20.0, 50.0, 100.0]
    densities = [0.5, 1.0, 2.0, 3.0]
    points = walking_sweep(4.0, lengths, densities, 1.0)
    by_key = {(p.length_m, p.density_per_m2): p.probability for p in points}

    lowest = min(densities)
    p20 = by_key[(20.0, lowest)]
    p100 = by_key[(100.0, lowest)]
    rel = abs(p100 - p20) / p20
    assert rel < 0.10

    for length in lengths:
        series = [by_key[(length, d)] for d in densities]
        assert all(b > a for a, b in zip(series, series[1:])), length

    print(
        f"[PASS] walking sweep: plateau 20->100 m relative difference {rel:.2%} (< 10%), "
        f"strictly increasing in density at all {len(lengths)} lengths"
    )

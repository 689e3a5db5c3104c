import math

import pytest

from routerisk import (
    Scene,
    SingularityError,
    WalkPath,
    build_scene,
    closed_form_path_probability,
    combine_route_probabilities,
    effective_rate,
    hazard_probability,
    per_cell_probability,
    simulate,
    straight_path,
)
from routerisk.gridsim import (
    SceneFixture,
    format_scene_fixture,
    load_scene_fixture,
    parse_scene_fixture,
)

FIXTURE = "src/routerisk/data/crossing.scene"


def small_scene():
    return Scene(grid_cols=8, grid_rows=5, carriers=((2, 4), (6, 1)), cell_size_m=1.0)


class TestSceneAndPath:
    def test_rejects_duplicate_carriers(self):
        with pytest.raises(ValueError):
            Scene(4, 4, carriers=((1, 1), (1, 1)))

    def test_rejects_carrier_outside_grid(self):
        with pytest.raises(ValueError):
            Scene(4, 4, carriers=((4, 0),))

    def test_rejects_mismatched_dwell(self):
        with pytest.raises(ValueError):
            WalkPath(cells=((0, 0), (1, 0)), dwell_hours=(0.1,))

    def test_rejects_negative_dwell(self):
        with pytest.raises(ValueError):
            WalkPath(cells=((0, 0),), dwell_hours=(-0.1,))


class TestPerCell:
    def test_single_carrier_formula(self):
        scene = Scene(10, 1, carriers=((7, 0),), cell_size_m=2.0)
        r = 3 * 2.0
        k, dwell = -1.3, 0.4
        assert per_cell_probability(scene, (4, 0), k, dwell) == pytest.approx(
            1 - math.exp(k * dwell / r**2), rel=1e-12
        )

    def test_zero_dwell(self):
        assert per_cell_probability(small_scene(), (0, 0), -1.0, 0.0) == 0.0

    def test_two_equidistant_carriers_double_the_exponent(self):
        scene = Scene(7, 7, carriers=((0, 3), (6, 3)))
        k, dwell, r = -0.8, 0.5, 3.0
        assert per_cell_probability(scene, (3, 3), k, dwell) == pytest.approx(
            1 - math.exp(2 * k * dwell / r**2), rel=1e-12
        )

    def test_colocated_walker_is_singular(self):
        with pytest.raises(SingularityError):
            per_cell_probability(small_scene(), (2, 4), -1.0, 0.1)

    def test_rejects_nonnegative_k(self):
        with pytest.raises(ValueError):
            per_cell_probability(small_scene(), (0, 0), 0.5, 0.1)


class TestClosedForm:
    def test_single_cell_equals_per_cell(self):
        scene = small_scene()
        path = WalkPath(cells=((0, 0),), dwell_hours=(0.7,))
        assert closed_form_path_probability(scene, path, -0.9) == pytest.approx(
            per_cell_probability(scene, (0, 0), -0.9, 0.7), rel=1e-12
        )

    def test_uniform_dwell_collapses_to_exponential(self):
        scene = build_scene(30, 12, 6, 1.0, seed=5, exclude=tuple((c, 6) for c in range(30)))
        path = straight_path(scene, 1.3, row=6)
        k = -1.1
        exponent = sum(
            k * 1.3 / 30 * sum(1 / ((cx - col) ** 2 + (cy - 6) ** 2) for cx, cy in scene.carriers)
            for col in range(30)
        )
        assert closed_form_path_probability(scene, path, k) == pytest.approx(
            1 - math.exp(exponent), abs=1e-12
        )

    def test_split_path_combines_to_whole(self):
        scene = build_scene(40, 20, 8, 1.0, seed=9, exclude=tuple((c, 10) for c in range(40)))
        path = straight_path(scene, 2.0, row=10)
        k = -0.7
        first = WalkPath(path.cells[:17], path.dwell_hours[:17])
        second = WalkPath(path.cells[17:], path.dwell_hours[17:])
        combined = combine_route_probabilities(
            [
                closed_form_path_probability(scene, first, k),
                closed_form_path_probability(scene, second, k),
            ]
        )
        assert combined == pytest.approx(
            closed_form_path_probability(scene, path, k), abs=1e-12
        )

    def test_doubling_time_squares_survival(self):
        scene = build_scene(25, 9, 5, 1.0, seed=3, exclude=tuple((c, 4) for c in range(25)))
        k = -1.4
        f1 = closed_form_path_probability(scene, straight_path(scene, 0.8, row=4), k)
        f2 = closed_form_path_probability(scene, straight_path(scene, 1.6, row=4), k)
        assert f2 == pytest.approx(1 - (1 - f1) ** 2, abs=1e-12)

    def test_no_carriers_no_risk(self):
        scene = Scene(10, 4, carriers=())
        path = straight_path(scene, 1.0)
        assert closed_form_path_probability(scene, path, -2.0) == 0.0


class TestEffectiveRate:
    def test_single_cell_single_carrier(self):
        scene = Scene(9, 1, carriers=((8, 0),))
        path = WalkPath(cells=((4, 0),), dwell_hours=(0.25,))
        assert effective_rate(scene, path, -1.2) == pytest.approx(1.2 / 16, rel=1e-12)

    def test_independent_of_exposure_time(self):
        scene = build_scene(60, 40, 10, 1.0, seed=12, exclude=tuple((c, 20) for c in range(60)))
        k = -0.9
        r1 = effective_rate(scene, straight_path(scene, 0.5, row=20), k)
        r2 = effective_rate(scene, straight_path(scene, 5.0, row=20), k)
        assert r1 == pytest.approx(r2, abs=1e-12)

    def test_reproduces_closed_form_under_uniform_dwell(self):
        scene = build_scene(20, 10, 4, 1.5, seed=8, exclude=tuple((c, 5) for c in range(20)))
        path = straight_path(scene, 1.7, row=5)
        k = -2.2
        rate = effective_rate(scene, path, k)
        assert hazard_probability(rate, 1.7) == pytest.approx(
            closed_form_path_probability(scene, path, k), abs=1e-12
        )


class TestSimulate:
    def test_deterministic_per_seed(self):
        scene = small_scene()
        path = straight_path(scene, 1.0, row=0)
        assert simulate(scene, path, -1.0, 5000, seed=1) == simulate(
            scene, path, -1.0, 5000, seed=1
        )

    def test_rejects_tiny_trial_count(self):
        with pytest.raises(ValueError):
            simulate(small_scene(), straight_path(small_scene(), 1.0, row=0), -1.0, 999, seed=0)

    def test_vanishing_k_gives_vanishing_estimate(self):
        scene = small_scene()
        path = straight_path(scene, 1.0, row=0)
        estimate, _ = simulate(scene, path, -1e-9, 5000, seed=2)
        assert estimate == 0.0

    def test_matches_closed_form_on_reference_scene(self):
        fixture = load_scene_fixture(FIXTURE)
        closed = closed_form_path_probability(fixture.scene, fixture.path, fixture.k)
        estimate, std_error = simulate(fixture.scene, fixture.path, fixture.k, 100_000, seed=7)
        assert abs(estimate - closed) <= 3 * std_error


class TestBuildScene:
    def test_reference_scale(self):
        scene = build_scene(60, 40, 10, 1.0, seed=99)
        assert len(scene.carriers) == 10
        assert len(set(scene.carriers)) == 10

    def test_full_occupancy(self):
        scene = build_scene(4, 3, 12, 1.0, seed=0)
        assert len(scene.carriers) == 12

    def test_rejects_overfull_grid(self):
        with pytest.raises(ValueError):
            build_scene(4, 3, 13, 1.0, seed=0)

    def test_exclusion_zone_respected(self):
        exclude = tuple((c, 2) for c in range(10))
        scene = build_scene(10, 5, 30, 1.0, seed=4, exclude=exclude)
        assert not set(scene.carriers) & set(exclude)

    def test_exclusion_reduces_capacity(self):
        exclude = tuple((c, 2) for c in range(10))
        with pytest.raises(ValueError):
            build_scene(10, 5, 41, 1.0, seed=4, exclude=exclude)

    def test_empty_scene_scores_zero(self):
        scene = build_scene(10, 5, 0, 1.0, seed=4)
        path = straight_path(scene, 1.0)
        assert closed_form_path_probability(scene, path, -1.0) == 0.0

    def test_deterministic_per_seed(self):
        assert build_scene(30, 20, 7, 1.0, seed=5) == build_scene(30, 20, 7, 1.0, seed=5)
        assert build_scene(30, 20, 7, 1.0, seed=5) != build_scene(30, 20, 7, 1.0, seed=6)


class TestFixtureFormat:
    def test_round_trip(self):
        scene = build_scene(12, 6, 3, 0.5, seed=21, exclude=tuple((c, 3) for c in range(12)))
        fixture = SceneFixture(scene=scene, k=-1.25, path_row=3, exposure_hours=0.75)
        assert parse_scene_fixture(format_scene_fixture(fixture)) == fixture

    def test_shipped_fixture(self):
        fixture = load_scene_fixture(FIXTURE)
        assert fixture.scene.grid_cols == 60
        assert fixture.scene.grid_rows == 40
        assert len(fixture.scene.carriers) == 10
        # no carrier may sit on the walker's path
        assert not set(fixture.path.cells) & set(fixture.scene.carriers)

    def test_missing_key_is_reported(self):
        with pytest.raises(ValueError, match="missing keys"):
            parse_scene_fixture("format = 1\ngrid_cols = 3\n")

    def test_bad_carrier_line(self):
        text = "format = 1\ngrid_cols = 3\ngrid_rows = 3\ncell_size_m = 1\nk = -1\npath_row = 1\nexposure_hours = 1\ncarrier = nope\n"
        with pytest.raises(ValueError, match="carrier"):
            parse_scene_fixture(text)

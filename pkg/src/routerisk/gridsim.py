"""Grid-walk validation model for the exponential hazard law.

A susceptible walker crosses a rectangular lattice cell by cell while a
fixed set of infectious carriers sits in other cells. Each visited cell
contributes an independent infection chance driven by dwell time and the
inverse-square distances to every carrier; the closed-form path probability
must agree with a trial-by-trial Monte Carlo simulation of the same chances.

Cells are unit squares scaled by ``cell_size_m``; distances are measured
between cell centers. Coordinates are ``(col, row)`` integer pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path as FilePath

import numpy as np

from .risk import SingularityError

Cell = tuple[int, int]


@dataclass(frozen=True)
class Scene:
    """A lattice with fixed carrier positions."""

    grid_cols: int
    grid_rows: int
    carriers: tuple[Cell, ...]
    cell_size_m: float = 1.0
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.grid_cols <= 0 or self.grid_rows <= 0:
            raise ValueError("grid dimensions must be positive")
        if self.cell_size_m <= 0:
            raise ValueError("cell size must be positive")
        if len(set(self.carriers)) != len(self.carriers):
            raise ValueError("carrier positions must be distinct")
        for col, row in self.carriers:
            if not (0 <= col < self.grid_cols and 0 <= row < self.grid_rows):
                raise ValueError(f"carrier ({col}, {row}) outside the grid")


@dataclass(frozen=True)
class WalkPath:
    """The walker's visited cells with per-cell dwell times (hours)."""

    cells: tuple[Cell, ...]
    dwell_hours: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.cells) != len(self.dwell_hours):
            raise ValueError("one dwell time per cell required")
        if not self.cells:
            raise ValueError("path must visit at least one cell")
        if any(t < 0 for t in self.dwell_hours):
            raise ValueError("dwell times cannot be negative")

    @property
    def total_hours(self) -> float:
        return sum(self.dwell_hours)


def _inverse_square_sum(scene: Scene, cell: Cell) -> float:
    """Sum of 1/r**2 over all carriers, r center-to-center in meters."""
    col, row = cell
    total = 0.0
    scale = scene.cell_size_m * scene.cell_size_m
    for ccol, crow in scene.carriers:
        r2 = ((col - ccol) ** 2 + (row - crow) ** 2) * scale
        if r2 == 0.0:
            raise SingularityError(
                f"walker cell ({col}, {row}) coincides with a carrier"
            )
        total += 1.0 / r2
    return total


def per_cell_probability(scene: Scene, cell: Cell, k: float, dwell_hours: float) -> float:
    """Infection probability while dwelling in one cell.

    ``1 - exp(k * dwell * sum_i 1/r_i**2)`` with k negative.
    """
    if k >= 0:
        raise ValueError(f"environment coefficient k must be negative, got {k}")
    if dwell_hours < 0:
        raise ValueError("dwell time cannot be negative")
    return -math.expm1(k * dwell_hours * _inverse_square_sum(scene, cell))


def closed_form_path_probability(scene: Scene, path: WalkPath, k: float) -> float:
    """Whole-path infection probability: complement of escaping every cell.

    With uniform dwell z/m over m cells this collapses to
    ``1 - exp(sum_j sum_i k*z / (m * r_ij**2))``.
    """
    if k >= 0:
        raise ValueError(f"environment coefficient k must be negative, got {k}")
    survival = 1.0
    for cell, dwell in zip(path.cells, path.dwell_hours):
        survival *= math.exp(k * dwell * _inverse_square_sum(scene, cell))
    return 1.0 - survival


def effective_rate(scene: Scene, path: WalkPath, k: float) -> float:
    """Hazard rate (per hour) of the path under uniform dwell.

    ``-sum_j sum_i k / (m * r_ij**2)`` with m the number of path cells;
    independent of the total exposure time by construction.
    """
    if k >= 0:
        raise ValueError(f"environment coefficient k must be negative, got {k}")
    m = len(path.cells)
    return -k * sum(_inverse_square_sum(scene, cell) for cell in path.cells) / m


def simulate(
    scene: Scene,
    path: WalkPath,
    k: float,
    trials: int,
    seed: int,
    chunk: int = 20_000,
) -> tuple[float, float]:
    """Monte Carlo estimate of the whole-path infection probability.

    Each trial draws an independent Bernoulli per visited cell with that
    cell's probability; the trial counts as infected if any draw fires.
    Returns ``(estimate, standard_error)``. Deterministic for a given seed.
    """
    if trials < 1000:
        raise ValueError(f"need at least 1000 trials, got {trials}")
    probs = np.array(
        [per_cell_probability(scene, cell, k, dwell) for cell, dwell in zip(path.cells, path.dwell_hours)]
    )
    rng = np.random.default_rng(seed)
    infected = 0
    remaining = trials
    while remaining > 0:
        n = min(remaining, chunk)
        hits = rng.random((n, probs.size)) < probs
        infected += int(hits.any(axis=1).sum())
        remaining -= n
    estimate = infected / trials
    return estimate, math.sqrt(estimate * (1.0 - estimate) / trials)


def build_scene(
    grid_cols: int,
    grid_rows: int,
    n_carriers: int,
    cell_size_m: float,
    seed: int,
    exclude: tuple[Cell, ...] = (),
) -> Scene:
    """Place carriers uniformly at random, without replacement.

    ``exclude`` removes cells (typically the walker's path) from the draw
    so no carrier can sit on the walker.
    """
    if n_carriers < 0:
        raise ValueError("carrier count cannot be negative")
    available = grid_cols * grid_rows - len(set(exclude))
    if n_carriers > available:
        raise ValueError(
            f"cannot place {n_carriers} carriers in {available} available cells"
        )
    excluded = set(exclude)
    cells = [
        (col, row)
        for col in range(grid_cols)
        for row in range(grid_rows)
        if (col, row) not in excluded
    ]
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(cells), size=n_carriers, replace=False)
    carriers = tuple(cells[i] for i in sorted(picked))
    return Scene(grid_cols, grid_rows, carriers, cell_size_m, seed)


def straight_path(scene: Scene, exposure_hours: float, row: int | None = None) -> WalkPath:
    """Straight walk across every column of the grid with uniform dwell."""
    if exposure_hours < 0:
        raise ValueError("exposure time cannot be negative")
    if row is None:
        row = scene.grid_rows // 2
    if not 0 <= row < scene.grid_rows:
        raise ValueError(f"path row {row} outside the grid")
    cells = tuple((col, row) for col in range(scene.grid_cols))
    dwell = exposure_hours / scene.grid_cols
    return WalkPath(cells, (dwell,) * scene.grid_cols)


@dataclass(frozen=True)
class SceneFixture:
    """A serialized scenario: scene, straight-walk parameters, coefficient."""

    scene: Scene
    k: float
    path_row: int
    exposure_hours: float

    @property
    def path(self) -> WalkPath:
        return straight_path(self.scene, self.exposure_hours, row=self.path_row)


def format_scene_fixture(fixture: SceneFixture) -> str:
    """Render a fixture in the plain-text scene format (see parse)."""
    scene = fixture.scene
    lines = [
        "# routerisk scene fixture",
        "format = 1",
        f"grid_cols = {scene.grid_cols}",
        f"grid_rows = {scene.grid_rows}",
        f"cell_size_m = {scene.cell_size_m!r}",
        f"seed = {scene.seed if scene.seed is not None else ''}",
        f"k = {fixture.k!r}",
        f"path_row = {fixture.path_row}",
        f"exposure_hours = {fixture.exposure_hours!r}",
    ]
    lines += [f"carrier = {col}, {row}" for col, row in scene.carriers]
    return "\n".join(lines) + "\n"


def parse_scene_fixture(text: str, source: str = "<string>") -> SceneFixture:
    """Parse the plain-text scene format.

    One ``key = value`` pair per line plus repeated ``carrier = col, row``
    lines; ``#`` starts a comment. Required keys: format, grid_cols,
    grid_rows, cell_size_m, k, path_row, exposure_hours.
    """
    values: dict[str, str] = {}
    carriers: list[Cell] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "carrier":
            try:
                col, row = (int(part) for part in value.split(","))
            except ValueError:
                raise ValueError(f"{source}:{lineno}: carrier wants 'col, row'") from None
            carriers.append((col, row))
        elif key in values:
            raise ValueError(f"{source}:{lineno}: duplicate key {key!r}")
        else:
            values[key] = value

    required = ["format", "grid_cols", "grid_rows", "cell_size_m", "k", "path_row", "exposure_hours"]
    missing = [key for key in required if key not in values]
    if missing:
        raise ValueError(f"{source}: missing keys: {', '.join(missing)}")
    if values["format"] != "1":
        raise ValueError(f"{source}: unsupported format {values['format']!r}")

    seed = int(values["seed"]) if values.get("seed") else None
    scene = Scene(
        grid_cols=int(values["grid_cols"]),
        grid_rows=int(values["grid_rows"]),
        carriers=tuple(carriers),
        cell_size_m=float(values["cell_size_m"]),
        seed=seed,
    )
    path_row = int(values["path_row"])
    if not 0 <= path_row < scene.grid_rows:
        raise ValueError(f"{source}: path row {path_row} outside the grid")
    return SceneFixture(
        scene=scene,
        k=float(values["k"]),
        path_row=path_row,
        exposure_hours=float(values["exposure_hours"]),
    )


def load_scene_fixture(path: FilePath | str) -> SceneFixture:
    file = FilePath(path)
    return parse_scene_fixture(file.read_text(), source=str(file))

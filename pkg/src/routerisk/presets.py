"""Built-in environment presets, loaded from a versioned key-value file.

The file format is deliberately plain so alternate diseases or cities can be
configured without touching code: one ``key = value`` pair per line, ``#``
comments, dotted keys grouping fields per environment. See
``data/presets.txt`` for the documented schema and the shipped defaults.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .risk import (
    ACTIVITY_LEVELS,
    EnvironmentProfile,
    FixedK,
    KLine,
    Mode,
    PrevalenceModel,
)


class PresetParseError(ValueError):
    """A preset file could not be parsed."""


@dataclass(frozen=True)
class PresetBundle:
    """All presets from one file: environments plus the default prevalence."""

    version: str
    profiles: dict[Mode, EnvironmentProfile]
    prevalence: PrevalenceModel

    def profile(self, mode: Mode) -> EnvironmentProfile:
        try:
            return self.profiles[mode]
        except KeyError:
            raise KeyError(f"no preset for mode {mode.value!r}") from None


_REQUIRED_FIELDS = {
    "length_m",
    "width_m",
    "capacity",
    "r_mean_m",
    "n_infected",
    "rate_per_hour",
}


def parse_presets(text: str, source: str = "<string>") -> PresetBundle:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PresetParseError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in values:
            raise PresetParseError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value

    if values.get("format") != "1":
        raise PresetParseError(f"{source}: unsupported or missing format key")
    version = values.pop("version", "unversioned")
    values.pop("format")

    try:
        prevalence = PrevalenceModel(
            active_cases=int(values.pop("prevalence.active_cases")),
            population=int(values.pop("prevalence.population")),
        )
    except KeyError as exc:
        raise PresetParseError(f"{source}: missing {exc.args[0]}") from None

    grouped: dict[str, dict[str, str]] = {}
    for key, value in values.items():
        env, dot, field = key.partition(".")
        if not dot:
            raise PresetParseError(f"{source}: unknown top-level key {key!r}")
        grouped.setdefault(env, {})[field] = value

    profiles: dict[Mode, EnvironmentProfile] = {}
    for env, fields in grouped.items():
        try:
            mode = Mode(env)
        except ValueError:
            raise PresetParseError(f"{source}: unknown environment {env!r}") from None
        missing = _REQUIRED_FIELDS - fields.keys()
        if missing:
            raise PresetParseError(
                f"{source}: environment {env!r} missing fields: {', '.join(sorted(missing))}"
            )
        has_line = "k1" in fields and "k2" in fields
        has_fixed = "k" in fields
        if has_line == has_fixed:
            raise PresetParseError(
                f"{source}: environment {env!r} needs either k1+k2 or a fixed k"
            )
        k_model: KLine | FixedK
        if has_line:
            k_model = KLine(float(fields["k1"]), float(fields["k2"]))
        else:
            k_model = FixedK(float(fields["k"]))
        activity = None
        if "default_activity" in fields:
            label = fields["default_activity"]
            if label not in ACTIVITY_LEVELS:
                raise PresetParseError(f"{source}: unknown activity {label!r} for {env!r}")
            activity = ACTIVITY_LEVELS[label]
        known = _REQUIRED_FIELDS | {"k1", "k2", "k", "default_activity"}
        unknown = fields.keys() - known
        if unknown:
            raise PresetParseError(
                f"{source}: environment {env!r} has unknown fields: {', '.join(sorted(unknown))}"
            )
        try:
            profiles[mode] = EnvironmentProfile(
                mode=mode,
                length_m=float(fields["length_m"]),
                width_m=float(fields["width_m"]),
                capacity=int(fields["capacity"]),
                k_model=k_model,
                canonical_r_mean_m=float(fields["r_mean_m"]),
                canonical_n_infected=float(fields["n_infected"]),
                canonical_rate_per_hour=float(fields["rate_per_hour"]),
                default_activity=activity,
            )
        except ValueError as exc:
            raise PresetParseError(f"{source}: environment {env!r}: {exc}") from None

    if not profiles:
        raise PresetParseError(f"{source}: no environments defined")
    return PresetBundle(version=version, profiles=profiles, prevalence=prevalence)


def load_presets(path: Path | str) -> PresetBundle:
    file = Path(path)
    return parse_presets(file.read_text(), source=str(file))


def builtin_presets() -> PresetBundle:
    """The shipped presets (Tehran COVID-19 calibration)."""
    text = resources.files("routerisk.data").joinpath("presets.txt").read_text()
    return parse_presets(text, source="routerisk/data/presets.txt")

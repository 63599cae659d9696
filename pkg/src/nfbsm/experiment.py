"""Sweep configuration, the distance x frequency error sweep, and CSV
emission.

The default configuration mirrors the reference simulation setup: a
semicircular array of 4 microphones on a 0.1 m rigid sphere, ears at
azimuths 100/260 degrees, truncation order 30, source distances from
0.15 m to 3.2 m with 3.2 m as the far-field reference distance, and 128
log-spaced frequencies between 75 Hz and 10 kHz.

Truth model conventions
-----------------------
For each distance d the sweep builds a truth pair (V, h): the near-field
steering matrix at d and the reference HRTF set rescaled to d.  Far-field
filters are designed once from the plane-wave steering matrix and the
reference set; near-field filters are designed per distance on the truth
pair.  Both are scored with the normalized error at every frequency.

Under ``steering_normalization = normalized`` (the default) the source
amplitude is re-referenced per distance: the bulk spreading factor
e^{-ikd}/d is divided out of the steering matrix and compensated in the
distance rescaling of the targets, so both sides of the truth pair share
one amplitude convention and the pair converges to the far-field model as
d grows.  The reference distance itself represents the far-field
condition, so at d equal to the reference the truth pair is the far-field
model and the near-field design coincides with the far-field one.  Under
``raw`` both sides keep the physical spreading and the reference distance
is treated like any other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .bsm import (
    ArrayGeometry,
    BsmFilter,
    NoiseModel,
    SteeringMatrix,
    design_filter,
    evaluate_error,
    steering_matrix_farfield,
    steering_matrix_nearfield,
)
from .errors import ValidationError
from .field import RigidSphere
from .hrtf import (
    EarGeometry,
    HrtfSet,
    SourceModel,
    analytic_sphere_hrtf,
    load_hrtf,
    nearfield_transform,
)
from .sphmath import DEFAULT_MAX_ORDER, Direction

_GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

CSV_HEADER = "distance_m,frequency_hz,filter,ear,epsilon,epsilon_db"


def fibonacci_directions(count: int) -> tuple[Direction, ...]:
    """Nearly uniform full-sphere direction grid from a Fibonacci lattice."""
    if count < 1:
        raise ValidationError("direction count must be at least 1")
    dirs = []
    for i in range(count):
        z = 1.0 - (2.0 * i + 1.0) / count
        theta = math.acos(min(1.0, max(-1.0, z)))
        phi = (2.0 * math.pi * i / _GOLDEN_RATIO) % (2.0 * math.pi)
        dirs.append(Direction(theta, phi))
    return tuple(dirs)


def frequency_grid(
    min_hz: float, max_hz: float, count: int, spacing: str = "log"
) -> np.ndarray:
    if spacing == "log":
        return np.logspace(math.log10(min_hz), math.log10(max_hz), count)
    if spacing == "linear":
        return np.linspace(min_hz, max_hz, count)
    raise ValidationError(f"freq_spacing must be 'log' or 'linear', got {spacing!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one sweep; all fields have defaults."""

    sphere_radius_m: float = 0.1
    speed_of_sound_mps: float = 343.0
    mic_elevation_deg: tuple[float, ...] = (90.0, 90.0, 90.0, 90.0)
    mic_azimuth_deg: tuple[float, ...] = (30.0, 80.0, 280.0, 330.0)
    ear_elevation_deg: tuple[float, float] = (90.0, 90.0)
    ear_azimuth_deg: tuple[float, float] = (100.0, 260.0)
    order: int = 30
    distances_m: tuple[float, ...] = (0.15, 0.2, 0.3, 0.5, 1.0, 3.2)
    freq_min_hz: float = 75.0
    freq_max_hz: float = 10000.0
    freq_count: int = 128
    freq_spacing: str = "log"
    frequencies_hz: tuple[float, ...] | None = None
    sigma_s_sq: float = 1.0
    sigma_n_sq: float = 0.01
    design_grid_size: int = 240
    hrtf_source: str = "analytic"
    hrtf_path: str | None = None
    reference_distance_m: float = 3.2
    steering_normalization: str = "normalized"
    eval_mode: str = "grid"
    eval_direction_deg: tuple[float, float] | None = None
    seed: int = 0

    def validate(self) -> "ExperimentConfig":
        """Check every invariant, raising ValidationError naming the key."""
        if not self.sphere_radius_m > 0.0:
            raise ValidationError("sphere_radius_m must be positive")
        if not self.speed_of_sound_mps > 0.0:
            raise ValidationError("speed_of_sound_mps must be positive")
        if len(self.mic_elevation_deg) != len(self.mic_azimuth_deg):
            raise ValidationError(
                "mic_elevation_deg and mic_azimuth_deg must have equal length"
            )
        if len(self.mic_azimuth_deg) < 1:
            raise ValidationError("mic_azimuth_deg needs at least one microphone")
        for key in ("mic_elevation_deg", "ear_elevation_deg"):
            for v in getattr(self, key):
                if not 0.0 <= v <= 180.0:
                    raise ValidationError(f"{key} entries must lie in [0, 180]")
        if len(self.ear_elevation_deg) != 2 or len(self.ear_azimuth_deg) != 2:
            raise ValidationError("ear_elevation_deg and ear_azimuth_deg take 2 values")
        if not 0 <= self.order <= DEFAULT_MAX_ORDER:
            raise ValidationError(f"order must lie in [0, {DEFAULT_MAX_ORDER}]")
        if len(self.distances_m) < 1:
            raise ValidationError("distances_m must be non-empty")
        for d in self.distances_m:
            if not d > self.sphere_radius_m:
                raise ValidationError(
                    f"distances_m entries must exceed sphere_radius_m, got {d!r}"
                )
        if self.frequencies_hz is not None:
            if len(self.frequencies_hz) < 1:
                raise ValidationError("frequencies_hz must be non-empty")
            for f in self.frequencies_hz:
                if not f > 0.0:
                    raise ValidationError("frequencies_hz entries must be positive")
        else:
            if not 0.0 < self.freq_min_hz <= self.freq_max_hz:
                raise ValidationError("freq_min_hz must satisfy 0 < min <= max")
            if self.freq_count < 1:
                raise ValidationError("freq_count must be at least 1")
            if self.freq_spacing not in ("log", "linear"):
                raise ValidationError("freq_spacing must be 'log' or 'linear'")
        if not self.sigma_s_sq > 0.0:
            raise ValidationError("sigma_s_sq must be positive")
        if self.sigma_n_sq < 0.0:
            raise ValidationError("sigma_n_sq must be non-negative")
        if self.design_grid_size < 1:
            raise ValidationError("design_grid_size must be at least 1")
        if self.hrtf_source not in ("analytic", "file"):
            raise ValidationError("hrtf_source must be 'analytic' or 'file'")
        if self.hrtf_source == "file" and not self.hrtf_path:
            raise ValidationError("hrtf_path is required when hrtf_source is 'file'")
        if not self.reference_distance_m > self.sphere_radius_m:
            raise ValidationError(
                "reference_distance_m must exceed sphere_radius_m"
            )
        if self.steering_normalization not in ("normalized", "raw"):
            raise ValidationError(
                "steering_normalization must be 'normalized' or 'raw'"
            )
        if self.eval_mode not in ("grid", "single"):
            raise ValidationError("eval_mode must be 'grid' or 'single'")
        if self.eval_mode == "single":
            if self.eval_direction_deg is None or len(self.eval_direction_deg) != 2:
                raise ValidationError(
                    "eval_direction_deg = [theta, phi] is required in single mode"
                )
            if not 0.0 <= self.eval_direction_deg[0] <= 180.0:
                raise ValidationError("eval_direction_deg theta must lie in [0, 180]")
            if self.hrtf_source != "analytic":
                raise ValidationError(
                    "eval_mode 'single' requires hrtf_source 'analytic' "
                    "(file sets cannot be evaluated off their grid)"
                )
        return self

    # Object builders

    def sphere(self) -> RigidSphere:
        return RigidSphere(self.sphere_radius_m, self.speed_of_sound_mps)

    def array(self) -> ArrayGeometry:
        mics = tuple(
            Direction.from_degrees(th, ph)
            for th, ph in zip(self.mic_elevation_deg, self.mic_azimuth_deg)
        )
        return ArrayGeometry(self.sphere(), mics)

    def ears(self) -> EarGeometry:
        return EarGeometry(
            Direction.from_degrees(self.ear_elevation_deg[0], self.ear_azimuth_deg[0]),
            Direction.from_degrees(self.ear_elevation_deg[1], self.ear_azimuth_deg[1]),
        )

    def noise(self) -> NoiseModel:
        return NoiseModel(self.sigma_s_sq, self.sigma_n_sq)

    def frequency_axis(self) -> np.ndarray:
        if self.frequencies_hz is not None:
            return np.asarray(self.frequencies_hz, float)
        return frequency_grid(
            self.freq_min_hz, self.freq_max_hz, self.freq_count, self.freq_spacing
        )

    def design_directions(self) -> tuple[Direction, ...]:
        return fibonacci_directions(self.design_grid_size)


# Key-by-key config file format: `key = value` lines, lists as [a, b, c],
# '#' comments.  Unknown keys are rejected.

_LIST_KEYS = {
    "mic_elevation_deg",
    "mic_azimuth_deg",
    "ear_elevation_deg",
    "ear_azimuth_deg",
    "distances_m",
    "frequencies_hz",
    "eval_direction_deg",
}
_INT_KEYS = {"order", "freq_count", "design_grid_size", "seed"}
_STR_KEYS = {"freq_spacing", "hrtf_source", "hrtf_path", "steering_normalization", "eval_mode"}
_FREQ_GRID_KEYS = {"freq_min_hz", "freq_max_hz", "freq_count", "freq_spacing"}
_ALL_KEYS = {f.name for f in fields(ExperimentConfig)}


def _parse_value(key: str, text: str, lineno: int):
    def scalar(tok: str):
        if key in _STR_KEYS:
            return tok
        try:
            return int(tok) if key in _INT_KEYS else float(tok)
        except ValueError:
            raise ValidationError(
                f"line {lineno}: bad value {tok!r} for key {key!r}"
            ) from None

    if key in _LIST_KEYS:
        if not (text.startswith("[") and text.endswith("]")):
            raise ValidationError(
                f"line {lineno}: key {key!r} takes a list like [a, b, c]"
            )
        inner = text[1:-1].strip()
        items = [p.strip() for p in inner.split(",")] if inner else []
        return tuple(scalar(p) for p in items)
    return scalar(text)


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse configuration text; omitted keys take their defaults."""
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _ALL_KEYS:
            raise ValidationError(f"line {lineno}: unknown key {key!r}")
        if key in overrides:
            raise ValidationError(f"line {lineno}: duplicate key {key!r}")
        overrides[key] = _parse_value(key, value, lineno)
    if "frequencies_hz" in overrides and overrides.keys() & _FREQ_GRID_KEYS:
        raise ValidationError(
            "frequencies_hz conflicts with freq_min_hz/freq_max_hz/"
            "freq_count/freq_spacing"
        )
    return replace(ExperimentConfig(), **overrides).validate()


def parse_config(path) -> ExperimentConfig:
    """Parse and validate a configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def serialize_config(config: ExperimentConfig) -> str:
    """Render a config as text that parses back to an equal config."""

    def fmt(value):
        if isinstance(value, tuple):
            return "[" + ", ".join(fmt(v) for v in value) + "]"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    lines = []
    for f in fields(ExperimentConfig):
        value = getattr(config, f.name)
        if value is None:
            continue
        if config.frequencies_hz is not None and f.name in _FREQ_GRID_KEYS:
            continue
        lines.append(f"{f.name} = {fmt(value)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ErrorRecord:
    distance_m: float
    frequency_hz: float
    filter_kind: str  # "ff" | "nf"
    ear: str  # "left" | "right"
    epsilon: float
    epsilon_db: float


@dataclass(frozen=True)
class ErrorSurface:
    """Normalized errors over (distance, frequency, filter kind, ear)."""

    records: tuple[ErrorRecord, ...]

    def curve(self, filter_kind: str, ear: str, distance_m: float):
        """(frequencies, epsilons) for one filter/ear/distance, frequency-sorted."""
        rows = [
            r
            for r in self.records
            if r.filter_kind == filter_kind
            and r.ear == ear
            and r.distance_m == distance_m
        ]
        rows.sort(key=lambda r: r.frequency_hz)
        return (
            np.array([r.frequency_hz for r in rows]),
            np.array([r.epsilon for r in rows]),
        )

    def distances(self):
        return sorted({r.distance_m for r in self.records})


def reference_hrtf_set(config: ExperimentConfig):
    """Reference far-field HRTF set plus the grids the sweep runs over.

    Returns (set, directions, frequencies, reference_distance).  With a
    file source the file's direction grid, frequency grid, and reference
    distance replace the configured ones, since sets are never
    interpolated off their grid.
    """
    sphere = config.sphere()
    if config.hrtf_source == "file":
        hset = load_hrtf(config.hrtf_path)
        if not math.isfinite(hset.reference_distance_m):
            raise ValidationError(
                "HRTF file has an infinite reference distance; the sweep "
                "needs a finite far-field reference"
            )
        if not hset.reference_distance_m > sphere.radius_m:
            raise ValidationError(
                "HRTF file reference distance must exceed sphere_radius_m"
            )
        return hset, hset.directions, hset.frequencies_hz, hset.reference_distance_m
    directions = config.design_directions()
    freqs = config.frequency_axis()
    rf = config.reference_distance_m
    hset = analytic_sphere_hrtf(
        sphere,
        config.ears(),
        directions,
        freqs,
        SourceModel.point_source(rf),
        config.order,
    )
    return hset, directions, freqs, rf


def run_sweep(config: ExperimentConfig) -> ErrorSurface:
    """Design and score far-field and near-field filters on every
    (distance, frequency) cell of the configured axes.

    Returns one record per (distance, frequency, filter kind, ear); the
    output is a pure function of the configuration.  See
    :func:`reference_hrtf_set` for how file-sourced sets fix the grids.
    """
    config.validate()
    sphere = config.sphere()
    array = config.array()
    ears = config.ears()
    noise = config.noise()
    order = config.order
    normalized = config.steering_normalization == "normalized"

    h_ref, directions, freqs, rf = reference_hrtf_set(config)

    single = config.eval_mode == "single"
    if single:
        eval_dirs = (
            Direction.from_degrees(*config.eval_direction_deg),
        )
        h_ref_eval = analytic_sphere_hrtf(
            sphere, ears, eval_dirs, freqs, SourceModel.point_source(rf), order
        )
    else:
        eval_dirs = directions
        h_ref_eval = h_ref

    # Far-field design side is distance independent.
    k_values = [sphere.wavenumber(f) for f in freqs]
    v_ff = [steering_matrix_farfield(array, directions, k, order) for k in k_values]
    c_ff = [
        design_filter(v_ff[i], h_ref.left[:, i], h_ref.right[:, i], noise)
        for i in range(len(freqs))
    ]
    v_ff_eval = (
        [steering_matrix_farfield(array, eval_dirs, k, order) for k in k_values]
        if single
        else v_ff
    )

    records = []
    for d in config.distances_m:
        far_field_condition = normalized and d == rf
        if not far_field_condition:
            v_tru = [
                steering_matrix_nearfield(
                    array, directions, d, k, order, normalized=normalized
                )
                for k in k_values
            ]
            h_tru = nearfield_transform(
                h_ref, sphere, d, order, ears, compensate_spreading=normalized
            )
            if single:
                v_eval = [
                    steering_matrix_nearfield(
                        array, eval_dirs, d, k, order, normalized=normalized
                    )
                    for k in k_values
                ]
                h_eval = nearfield_transform(
                    h_ref_eval, sphere, d, order, ears,
                    compensate_spreading=normalized,
                )
            else:
                v_eval, h_eval = v_tru, h_tru
        else:
            v_tru, h_tru = v_ff, h_ref
            v_eval, h_eval = v_ff_eval, h_ref_eval

        for i, f in enumerate(freqs):
            if far_field_condition:
                c_nf = c_ff[i]
            else:
                c_nf = design_filter(
                    v_tru[i], h_tru.left[:, i], h_tru.right[:, i], noise
                )
            for kind, filt in (("ff", c_ff[i]), ("nf", c_nf)):
                err = evaluate_error(
                    filt, v_eval[i], h_eval.left[:, i], h_eval.right[:, i], noise
                )
                for ear, eps in (("left", err.left), ("right", err.right)):
                    eps_db = 10.0 * math.log10(eps) if eps > 0.0 else -math.inf
                    records.append(
                        ErrorRecord(float(d), float(f), kind, ear, float(eps), eps_db)
                    )
    return ErrorSurface(tuple(records))


def emit_csv(surface: ErrorSurface, path) -> None:
    """Write records sorted by (filter, ear, distance, frequency) with
    full shortest-round-trip decimal precision."""
    if not surface.records:
        raise ValidationError("cannot emit an empty error surface")
    rows = sorted(
        surface.records,
        key=lambda r: (r.filter_kind, r.ear, r.distance_m, r.frequency_hz),
    )
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.distance_m!r},{r.frequency_hz!r},{r.filter_kind},{r.ear},"
            f"{r.epsilon!r},{r.epsilon_db!r}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_csv(path) -> ErrorSurface:
    """Read a CSV written by :func:`emit_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValidationError("unrecognized CSV header")
    records = []
    for line in lines[1:]:
        if not line:
            continue
        d, f, kind, ear, eps, eps_db = line.split(",")
        records.append(
            ErrorRecord(float(d), float(f), kind, ear, float(eps), float(eps_db))
        )
    return ErrorSurface(tuple(records))

"""HRTF sets: analytic synthesis on the rigid sphere, near-field scaling
via the distance variation function, and a line-oriented file format.

Analytic sets place the ears directly on the sphere surface and normalize
so magnitudes approach 1 at low frequency: plane-wave responses are used
as-is (unit incident field at the origin), point-source responses are
divided by the free-field factor e^{-ik r_s}/r_s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DomainError, FormatError, SchemaError, ValidationError
from .field import RigidSphere, dvf_at_cosines, free_field_factor, pressure_at_cosines
from .sphmath import Direction, cos_angle_between

FAR_FIELD_PLANE_WAVE = "far_field_plane_wave"
NEAR_FIELD_POINT = "near_field_point"


@dataclass(frozen=True)
class EarGeometry:
    """Left/right ear positions on the sphere surface."""

    left: Direction = field(default_factory=lambda: Direction.from_degrees(90.0, 100.0))
    right: Direction = field(default_factory=lambda: Direction.from_degrees(90.0, 260.0))

    def directions(self) -> tuple[Direction, Direction]:
        return (self.left, self.right)


@dataclass(frozen=True)
class SourceModel:
    """Source type used when synthesizing an HRTF set."""

    kind: str
    distance_m: float | None = None

    def __post_init__(self):
        if self.kind not in (FAR_FIELD_PLANE_WAVE, NEAR_FIELD_POINT):
            raise ValidationError(f"unknown source model kind {self.kind!r}")
        if self.kind == NEAR_FIELD_POINT:
            if self.distance_m is None or not (
                self.distance_m > 0.0 and math.isfinite(self.distance_m)
            ):
                raise ValidationError("point source model needs a positive distance")
        elif self.distance_m is not None:
            raise ValidationError("plane wave model takes no distance")

    @classmethod
    def plane_wave(cls) -> "SourceModel":
        return cls(FAR_FIELD_PLANE_WAVE)

    @classmethod
    def point_source(cls, distance_m: float) -> "SourceModel":
        return cls(NEAR_FIELD_POINT, distance_m)


@dataclass(frozen=True, eq=False)
class HrtfSet:
    """Per-ear complex responses on a direction grid at a reference distance.

    ``left`` and ``right`` are Q x F tables over ``directions`` and
    ``frequencies_hz``.  The reference distance is the source distance the
    responses correspond to (infinity for plane-wave sets).
    """

    directions: tuple[Direction, ...]
    frequencies_hz: np.ndarray
    reference_distance_m: float
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "frequencies_hz", np.asarray(self.frequencies_hz, float))
        object.__setattr__(self, "left", np.asarray(self.left, complex))
        object.__setattr__(self, "right", np.asarray(self.right, complex))
        q, f = len(self.directions), len(self.frequencies_hz)
        if q == 0 or f == 0:
            raise ValidationError("HRTF set needs at least one direction and frequency")
        for name in ("left", "right"):
            table = getattr(self, name)
            if table.shape != (q, f):
                raise ValidationError(
                    f"{name} table shape {table.shape} does not match "
                    f"{q} directions x {f} frequencies"
                )
            if not np.all(np.isfinite(table.view(float))):
                raise DataError(f"{name} table contains non-finite values")
        if np.any(self.frequencies_hz <= 0.0):
            raise ValidationError("frequencies must be positive")
        if not self.reference_distance_m > 0.0:
            raise ValidationError("reference distance must be positive")

    @property
    def num_directions(self) -> int:
        return len(self.directions)

    @property
    def num_frequencies(self) -> int:
        return len(self.frequencies_hz)

    def ear_table(self, ear: str) -> np.ndarray:
        if ear not in ("left", "right"):
            raise ValidationError(f"ear must be 'left' or 'right', got {ear!r}")
        return getattr(self, ear)


def analytic_sphere_hrtf(
    sphere: RigidSphere,
    ears: EarGeometry,
    directions: list[Direction] | tuple[Direction, ...],
    frequencies_hz,
    model: SourceModel,
    order: int,
) -> HrtfSet:
    """Synthesize an HRTF set from the rigid-sphere field solution.

    Each entry is the total pressure at the ear point on the sphere
    surface for a source in the given direction.  Point-source responses
    are normalized by the free-field factor so that low-frequency
    magnitudes tend to 1; the set's reference distance is the model's
    source distance (infinity for plane waves).
    """
    directions = tuple(directions)
    freqs = np.asarray(frequencies_hz, dtype=float)
    if freqs.ndim != 1 or freqs.size == 0:
        raise ValidationError("frequencies must be a non-empty 1-D sequence")
    if np.any(freqs <= 0.0):
        raise ValidationError("frequencies must be positive")
    k = 2.0 * math.pi * freqs / sphere.speed_of_sound_mps

    tables = []
    for ear_dir in ears.directions():
        cosines = np.array([cos_angle_between(d, ear_dir) for d in directions])
        if model.kind == FAR_FIELD_PLANE_WAVE:
            table = pressure_at_cosines(sphere, cosines, k, sphere.radius_m, order)
        else:
            raw = pressure_at_cosines(
                sphere,
                cosines,
                k,
                sphere.radius_m,
                order,
                source_distance_m=model.distance_m,
            )
            table = raw / free_field_factor(k, model.distance_m)[None, :]
        tables.append(table)

    reference = math.inf if model.kind == FAR_FIELD_PLANE_WAVE else model.distance_m
    return HrtfSet(directions, freqs, reference, tables[0], tables[1])


def nearfield_transform(
    hset: HrtfSet,
    sphere: RigidSphere,
    target_distance_m: float,
    order: int,
    ears: EarGeometry | None = None,
    compensate_spreading: bool = False,
) -> HrtfSet:
    """Rescale a set from its reference distance to a target distance.

    Every entry is multiplied by the distance variation function between
    the target and reference distances, evaluated at the ear's own
    position on the sphere surface for the entry's source direction.  The
    returned set carries the target as its new reference distance.

    With ``compensate_spreading`` the bulk factor e^{-ikr}/r is divided
    out of the ratio, keeping only wavefront curvature and scatterer
    proximity effects; this is the variant used when microphone steering
    is normalized the same way, so that targets and array signals share a
    common source amplitude reference.
    """
    if not (target_distance_m > sphere.radius_m):
        raise DomainError("target distance must exceed the sphere radius")
    if not math.isfinite(hset.reference_distance_m):
        raise DomainError(
            "cannot transform a plane-wave set; its reference distance is infinite"
        )
    if ears is None:
        ears = EarGeometry()

    k = 2.0 * math.pi * hset.frequencies_hz / sphere.speed_of_sound_mps
    tables = {}
    for name, ear_dir in (("left", ears.left), ("right", ears.right)):
        cosines = np.array(
            [cos_angle_between(d, ear_dir) for d in hset.directions]
        )
        ratio = dvf_at_cosines(
            sphere, cosines, target_distance_m, hset.reference_distance_m, k, order
        )
        if compensate_spreading:
            ratio = ratio * (
                free_field_factor(k, hset.reference_distance_m)
                / free_field_factor(k, target_distance_m)
            )[None, :]
        tables[name] = hset.ear_table(name) * ratio
    return HrtfSet(
        hset.directions,
        hset.frequencies_hz,
        target_distance_m,
        tables["left"],
        tables["right"],
    )


# File format: `version 1` / `reference_distance_m v` / `num_directions Q` /
# `num_frequencies F` header, Q `dir` lines (degrees), F `freq` lines, then
# Q*F `h q f re_l im_l re_r im_r` lines in direction-major order.


def save_hrtf(hset: HrtfSet, path) -> None:
    """Write a set in the tabular text format (lossless round trip)."""
    lines = ["version 1"]
    lines.append(f"reference_distance_m {float(hset.reference_distance_m)!r}")
    lines.append(f"num_directions {hset.num_directions}")
    lines.append(f"num_frequencies {hset.num_frequencies}")
    for d in hset.directions:
        lines.append(f"dir {math.degrees(d.theta)!r} {math.degrees(d.phi)!r}")
    for f in hset.frequencies_hz:
        lines.append(f"freq {float(f)!r}")
    for q in range(hset.num_directions):
        for fi in range(hset.num_frequencies):
            hl = complex(hset.left[q, fi])
            hr = complex(hset.right[q, fi])
            lines.append(
                f"h {q} {fi} {hl.real!r} {hl.imag!r} {hr.real!r} {hr.imag!r}"
            )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_hrtf(path) -> HrtfSet:
    """Read a set written by :func:`save_hrtf`.

    Raises FormatError (with the offending line number) for malformed
    lines, SchemaError when declared and found dimensions disagree, and
    DataError for non-finite response values.
    """
    tokens = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.split("#", 1)[0].strip()
            if stripped:
                tokens.append((lineno, stripped.split()))

    pos = 0

    def next_line(expected: str):
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError(f"unexpected end of file, expected {expected!r}")
        lineno, parts = tokens[pos]
        pos += 1
        if parts[0] != expected:
            raise FormatError(
                f"expected {expected!r}, found {parts[0]!r}", line=lineno
            )
        return lineno, parts

    def parse_float(text, lineno, what):
        try:
            return float(text)
        except ValueError:
            raise FormatError(f"bad {what} value {text!r}", line=lineno) from None

    lineno, parts = next_line("version")
    if parts[1:] != ["1"]:
        raise FormatError(f"unsupported version {' '.join(parts[1:])!r}", line=lineno)
    lineno, parts = next_line("reference_distance_m")
    if len(parts) != 2:
        raise FormatError("reference_distance_m takes one value", line=lineno)
    reference = parse_float(parts[1], lineno, "reference distance")
    lineno, parts = next_line("num_directions")
    if len(parts) != 2 or not parts[1].isdigit():
        raise FormatError("num_directions takes one integer", line=lineno)
    num_dirs = int(parts[1])
    lineno, parts = next_line("num_frequencies")
    if len(parts) != 2 or not parts[1].isdigit():
        raise FormatError("num_frequencies takes one integer", line=lineno)
    num_freqs = int(parts[1])

    directions = []
    for _ in range(num_dirs):
        lineno, parts = next_line("dir")
        if len(parts) != 3:
            raise FormatError("dir lines take theta and phi in degrees", line=lineno)
        theta = parse_float(parts[1], lineno, "direction theta")
        phi = parse_float(parts[2], lineno, "direction phi")
        try:
            directions.append(Direction.from_degrees(theta, phi))
        except ValidationError as exc:
            raise FormatError(str(exc), line=lineno) from None

    frequencies = []
    for _ in range(num_freqs):
        lineno, parts = next_line("freq")
        if len(parts) != 2:
            raise FormatError("freq lines take one value", line=lineno)
        frequencies.append(parse_float(parts[1], lineno, "frequency"))

    left = np.zeros((num_dirs, num_freqs), dtype=complex)
    right = np.zeros((num_dirs, num_freqs), dtype=complex)
    expected_rows = num_dirs * num_freqs
    found_rows = len(tokens) - pos
    if found_rows != expected_rows:
        raise SchemaError(
            f"expected {expected_rows} data rows "
            f"({num_dirs} directions x {num_freqs} frequencies), found {found_rows}"
        )
    row = 0
    while pos < len(tokens):
        lineno, parts = next_line("h")
        if len(parts) != 7:
            raise FormatError("h lines take 6 values after the keyword", line=lineno)
        q, fi = int(parts[1]), int(parts[2])
        if q != row // num_freqs or fi != row % num_freqs:
            raise SchemaError(
                f"data row {row} out of direction-major order: "
                f"expected indices ({row // num_freqs}, {row % num_freqs}), "
                f"found ({q}, {fi})"
            )
        vals = [parse_float(p, lineno, "response") for p in parts[3:]]
        left[q, fi] = complex(vals[0], vals[1])
        right[q, fi] = complex(vals[2], vals[3])
        row += 1

    if not (
        np.all(np.isfinite(left.view(float))) and np.all(np.isfinite(right.view(float)))
    ):
        raise DataError("HRTF file contains non-finite response values")
    return HrtfSet(tuple(directions), np.array(frequencies), reference, left, right)

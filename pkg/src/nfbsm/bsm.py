"""Binaural signal matching: steering matrices, regularized MSE-optimal
filter design, and closed-form reproduction error with a Monte-Carlo
cross-check.

The narrowband model is x = V s + n with an M x Q steering matrix V,
i.i.d. source signals of power sigma_s^2 and white noise of power
sigma_n^2.  Target ear signals are p = h^T s; the estimate is c^H x.  The
MSE-optimal weights solve

    c = (V V^H + lambda I_M)^{-1} V h^*,    lambda = sigma_n^2 / sigma_s^2,

and the normalized reproduction error of any weight vector is

    eps = (sigma_s^2 ||V^T c^* - h||^2 + sigma_n^2 ||c||^2)
          / (sigma_s^2 ||h||^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import linalg as _linalg

from .errors import (
    ContractError,
    DegenerateTargetError,
    DomainError,
    NumericalRankError,
    ValidationError,
)
from .field import RigidSphere, free_field_factor, pressure_at_cosines
from .sphmath import Direction, cos_angle_between

FAR_FIELD = "far_field"
NEAR_FIELD = "near_field"

_DEFAULT_MIC_AZIMUTHS_DEG = (30.0, 80.0, 280.0, 330.0)


@dataclass(frozen=True)
class ArrayGeometry:
    """Microphones on the surface of a rigid sphere."""

    sphere: RigidSphere
    mic_directions: tuple[Direction, ...] = field(
        default_factory=lambda: tuple(
            Direction.from_degrees(90.0, az) for az in _DEFAULT_MIC_AZIMUTHS_DEG
        )
    )

    def __post_init__(self):
        object.__setattr__(self, "mic_directions", tuple(self.mic_directions))
        if len(self.mic_directions) < 1:
            raise ValidationError("array needs at least one microphone")

    @property
    def num_mics(self) -> int:
        return len(self.mic_directions)

    @classmethod
    def default(cls, speed_of_sound_mps: float = 343.0) -> "ArrayGeometry":
        """Semicircular 4-microphone array on a 0.1 m sphere."""
        return cls(RigidSphere(0.1, speed_of_sound_mps))


@dataclass(frozen=True)
class NoiseModel:
    """Signal and noise powers; their ratio acts as ridge regularization."""

    sigma_s_sq: float = 1.0
    sigma_n_sq: float = 0.01

    def __post_init__(self):
        if not (self.sigma_s_sq > 0.0 and math.isfinite(self.sigma_s_sq)):
            raise ValidationError("signal power must be positive")
        if self.sigma_n_sq < 0.0 or not math.isfinite(self.sigma_n_sq):
            raise ValidationError("noise power must be non-negative and finite")

    @property
    def regularization(self) -> float:
        """lambda = sigma_n^2 / sigma_s^2."""
        return self.sigma_n_sq / self.sigma_s_sq


@dataclass(frozen=True, eq=False)
class SteeringMatrix:
    """M x Q array response at one frequency."""

    entries: np.ndarray
    frequency_hz: float
    kind: str
    distance_m: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, complex))
        if self.entries.ndim != 2:
            raise ValidationError("steering entries must be a 2-D matrix")
        if not np.all(np.isfinite(self.entries.view(float))):
            raise ValidationError("steering entries must be finite")
        if self.kind not in (FAR_FIELD, NEAR_FIELD):
            raise ValidationError(f"unknown steering kind {self.kind!r}")
        if self.kind == NEAR_FIELD and self.distance_m is None:
            raise ValidationError("near-field steering needs a source distance")

    @property
    def num_mics(self) -> int:
        return self.entries.shape[0]

    @property
    def num_directions(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True, eq=False)
class BsmFilter:
    """Per-ear complex microphone weights at one frequency."""

    left: np.ndarray
    right: np.ndarray
    frequency_hz: float
    design_kind: str
    design_distance_m: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "left", np.asarray(self.left, complex))
        object.__setattr__(self, "right", np.asarray(self.right, complex))
        if self.left.ndim != 1 or self.left.shape != self.right.shape:
            raise ValidationError("filter weights must be equal-length vectors")
        for w in (self.left, self.right):
            if not np.all(np.isfinite(w.view(float))):
                raise ValidationError("filter weights must be finite")


class EarValues(NamedTuple):
    left: float
    right: float


def _mic_cosines(array: ArrayGeometry, directions) -> np.ndarray:
    return np.array(
        [
            [cos_angle_between(mic, d) for d in directions]
            for mic in array.mic_directions
        ]
    )


def steering_matrix_farfield(
    array: ArrayGeometry, directions, k: float, order: int
) -> SteeringMatrix:
    """Far-field steering matrix: entry (m, q) is the plane-wave response
    at microphone m for incidence direction q."""
    directions = tuple(directions)
    if k <= 0.0:
        raise DomainError("wavenumber must be positive")
    entries = pressure_at_cosines(
        array.sphere,
        _mic_cosines(array, directions),
        float(k),
        array.sphere.radius_m,
        order,
    )
    freq = k * array.sphere.speed_of_sound_mps / (2.0 * math.pi)
    return SteeringMatrix(entries, freq, FAR_FIELD)


def steering_matrix_nearfield(
    array: ArrayGeometry,
    directions,
    source_distance_m: float,
    k: float,
    order: int,
    normalized: bool = True,
) -> SteeringMatrix:
    """Near-field steering matrix for point sources at one distance.

    Entry (m, q) is the point-source response at microphone m for a source
    at (direction q, source_distance_m).  With ``normalized`` (default)
    the bulk spreading factor e^{-ik r_s}/r_s is divided out, so entries
    converge to the far-field steering matrix as the distance grows and
    the noise-to-signal regularization keeps the same meaning across
    distances; ``normalized=False`` yields the raw field values.
    """
    directions = tuple(directions)
    if k <= 0.0:
        raise DomainError("wavenumber must be positive")
    if source_distance_m <= array.sphere.radius_m:
        raise DomainError("source distance must exceed the sphere radius")
    entries = pressure_at_cosines(
        array.sphere,
        _mic_cosines(array, directions),
        float(k),
        array.sphere.radius_m,
        order,
        source_distance_m=source_distance_m,
    )
    if normalized:
        entries = entries / free_field_factor(float(k), source_distance_m)
    freq = k * array.sphere.speed_of_sound_mps / (2.0 * math.pi)
    return SteeringMatrix(entries, freq, NEAR_FIELD, distance_m=source_distance_m)


def _solve_weights(V: np.ndarray, h: np.ndarray, lam: float) -> np.ndarray:
    gram = V @ V.conj().T + lam * np.eye(V.shape[0])
    rhs = V @ h.conj()
    try:
        cho = _linalg.cho_factor(gram, lower=True)
        return _linalg.cho_solve(cho, rhs)
    except np.linalg.LinAlgError:
        pass
    if lam == 0.0 and np.linalg.matrix_rank(gram) < V.shape[0]:
        raise NumericalRankError(
            "V V^H is rank deficient; a positive noise-to-signal ratio is required"
        )
    return np.linalg.solve(gram, rhs)


def design_filter(
    V: SteeringMatrix,
    h_left,
    h_right,
    noise: NoiseModel,
) -> BsmFilter:
    """MSE-optimal per-ear weights for a steering matrix and HRTF rows.

    Solves the Hermitian positive-(semi)definite M x M normal equations
    (V V^H + lambda I) c = V h^* by Cholesky factorization, falling back
    to a pivoted solve; an unregularized rank-deficient system raises
    NumericalRankError.
    """
    h_left = np.asarray(h_left, complex)
    h_right = np.asarray(h_right, complex)
    for name, h in (("left", h_left), ("right", h_right)):
        if h.ndim != 1 or h.shape[0] != V.num_directions:
            raise ContractError(
                f"{name} HRTF row length {h.shape} does not match "
                f"{V.num_directions} steering directions"
            )
    lam = noise.regularization
    return BsmFilter(
        _solve_weights(V.entries, h_left, lam),
        _solve_weights(V.entries, h_right, lam),
        V.frequency_hz,
        V.kind,
        V.distance_m,
    )


def _error_one_ear(c, V, h, noise) -> float:
    resid = V.T @ c.conj() - h
    num = noise.sigma_s_sq * np.vdot(resid, resid).real + noise.sigma_n_sq * np.vdot(
        c, c
    ).real
    den = noise.sigma_s_sq * np.vdot(h, h).real
    if den == 0.0:
        raise DegenerateTargetError("target HRTF row has zero norm")
    return num / den


def evaluate_error(
    filt: BsmFilter,
    V_true: SteeringMatrix,
    h_left,
    h_right,
    noise: NoiseModel,
) -> EarValues:
    """Normalized reproduction error of a filter against a truth model.

    Returns the per-ear ratio of expected squared binaural error to
    expected target power; equals 1 exactly for zero weights.
    """
    h_left = np.asarray(h_left, complex)
    h_right = np.asarray(h_right, complex)
    if filt.left.shape[0] != V_true.num_mics:
        raise ContractError(
            f"filter length {filt.left.shape[0]} does not match "
            f"{V_true.num_mics} microphones"
        )
    for name, h in (("left", h_left), ("right", h_right)):
        if h.ndim != 1 or h.shape[0] != V_true.num_directions:
            raise ContractError(
                f"{name} HRTF row length {h.shape} does not match "
                f"{V_true.num_directions} steering directions"
            )
    return EarValues(
        _error_one_ear(filt.left, V_true.entries, h_left, noise),
        _error_one_ear(filt.right, V_true.entries, h_right, noise),
    )


def monte_carlo_mse(
    filt: BsmFilter,
    V_true: SteeringMatrix,
    h_left,
    h_right,
    noise: NoiseModel,
    trials: int,
    seed: int,
    chunk: int = 4096,
) -> EarValues:
    """Sample estimate of the normalized reproduction error.

    Draws i.i.d. circular complex Gaussian source and noise vectors, forms
    microphone signals x = V s + n, targets p = h^T s and estimates
    c^H x, and returns mean |p - p_hat|^2 / mean |p|^2 per ear.
    Deterministic for a given seed.
    """
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    h_left = np.asarray(h_left, complex)
    h_right = np.asarray(h_right, complex)
    V = V_true.entries
    m, q = V.shape
    rng = np.random.default_rng(seed)
    s_scale = math.sqrt(noise.sigma_s_sq / 2.0)
    n_scale = math.sqrt(noise.sigma_n_sq / 2.0)
    num = np.zeros(2)
    den = np.zeros(2)
    remaining = trials
    while remaining > 0:
        t = min(remaining, chunk)
        remaining -= t
        s = s_scale * (rng.standard_normal((q, t)) + 1j * rng.standard_normal((q, t)))
        n = n_scale * (rng.standard_normal((m, t)) + 1j * rng.standard_normal((m, t)))
        x = V @ s + n
        for i, (c, h) in enumerate(((filt.left, h_left), (filt.right, h_right))):
            p = h @ s
            p_hat = c.conj() @ x
            num[i] += np.sum(np.abs(p - p_hat) ** 2)
            den[i] += np.sum(np.abs(p) ** 2)
    if np.any(den == 0.0):
        raise DegenerateTargetError("sampled target power is zero")
    return EarValues(num[0] / den[0], num[1] / den[1])

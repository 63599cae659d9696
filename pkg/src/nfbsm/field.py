"""Acoustic pressure on and around a rigid sphere.

The total field for a point source at distance r_s from the center of a
rigid sphere of radius r_a, observed at radius r with r_a <= r <= r_s, is
the truncated series

    p = -i k sum_n (2n+1) h_n^{(2)}(k r_s) b_n(k r) P_n(cos Theta),

    b_n(k r) = j_n(k r) - j_n'(k r_a) / h_n^{(2)'}(k r_a) h_n^{(2)}(k r),

where Theta is the angle between the source and observation directions.
The degree sum over spherical harmonics has been collapsed with the
addition theorem; the explicit double sum costs O(N^2) per point and is
kept as a cross-check in the test suite.  Without the scatterer the series
sums to the free-field Green's form e^{-ikR}/R, which fixes the source
amplitude convention.

The corresponding unit-amplitude plane-wave field (incidence direction
pointing toward the source) is

    p = sum_n i^n (2n+1) b_n(k r) P_n(cos Theta),

obtained from the point source by the large-argument limit of
h_n^{(2)}(k r_s) after removing the spherical spreading e^{-ik r_s}/r_s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _special

from .errors import DegenerateFieldError, DomainError, ValidationError
from .sphmath import (
    DEFAULT_MAX_ORDER,
    Direction,
    cos_angle_between,
    legendre_basis,
    require_order,
)


@dataclass(frozen=True)
class RigidSphere:
    """Rigid scatterer approximating a human head."""

    radius_m: float
    speed_of_sound_mps: float = 343.0

    def __post_init__(self):
        if not (self.radius_m > 0.0 and math.isfinite(self.radius_m)):
            raise ValidationError("sphere radius must be positive")
        if not (self.speed_of_sound_mps > 0.0 and math.isfinite(self.speed_of_sound_mps)):
            raise ValidationError("speed of sound must be positive")

    def wavenumber(self, frequency_hz: float) -> float:
        """k = 2 pi f / c."""
        return 2.0 * math.pi * frequency_hz / self.speed_of_sound_mps


@dataclass(frozen=True)
class SourcePosition:
    """A point source at finite distance from the sphere center."""

    distance_m: float
    direction: Direction

    def __post_init__(self):
        if not (self.distance_m > 0.0 and math.isfinite(self.distance_m)):
            raise ValidationError("source distance must be positive")


@dataclass(frozen=True)
class FieldPoint:
    """An observation point at or outside the sphere surface."""

    radius_m: float
    direction: Direction

    def __post_init__(self):
        if not (self.radius_m > 0.0 and math.isfinite(self.radius_m)):
            raise ValidationError("field point radius must be positive")


def free_field_factor(k, distance_m):
    """Spherical spreading e^{-ikr}/r of a free-field point source."""
    return np.exp(-1j * np.asarray(k, float) * distance_m) / distance_m


def modal_coefficients(
    sphere: RigidSphere,
    k,
    field_radius_m: float,
    order: int,
    source_distance_m: float | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> np.ndarray:
    """Per-order coefficients a_n of the Legendre series of the field.

    The pressure at cosine c of the source/observation angle is
    sum_n a_n P_n(c).  With ``source_distance_m`` set the coefficients
    describe a point source, otherwise a unit-amplitude plane wave.

    Parameters
    ----------
    k : float or 1-D array
        Wavenumber(s) in rad/m, all > 0.
    field_radius_m : float
        Observation radius r, with sphere.radius_m <= r (and r <= source
        distance for point sources).
    order : int
        Truncation order N of the series.

    Returns
    -------
    ndarray
        Shape (order+1,) for scalar k, else (order+1, len(k)).
    """
    order = require_order(order, max_order)
    k = np.asarray(k, dtype=float)
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    if np.any(k <= 0.0) or not np.all(np.isfinite(k)):
        raise DomainError("wavenumber must be positive and finite")
    _check_field_radius(sphere, field_radius_m, source_distance_m)

    n = np.arange(order + 1)[:, None]
    kr = k[None, :] * field_radius_m
    kra = k[None, :] * sphere.radius_m
    jn_a_p = _special.spherical_jn(n, kra, derivative=True)
    h2_a_p = jn_a_p - 1j * _special.spherical_yn(n, kra, derivative=True)
    h2_r = _special.spherical_jn(n, kr) - 1j * _special.spherical_yn(n, kr)
    bn = _special.spherical_jn(n, kr) - (jn_a_p / h2_a_p) * h2_r

    if source_distance_m is None:
        coeffs = (1j**n) * (2 * n + 1) * bn
    else:
        krs = k[None, :] * source_distance_m
        h2_s = _special.spherical_jn(n, krs) - 1j * _special.spherical_yn(n, krs)
        coeffs = -1j * k[None, :] * (2 * n + 1) * h2_s * bn
    return coeffs[:, 0] if scalar else coeffs


def pressure_at_cosines(
    sphere: RigidSphere,
    cosines,
    k,
    field_radius_m: float,
    order: int,
    source_distance_m: float | None = None,
) -> np.ndarray:
    """Field evaluated at an array of source/observation angle cosines.

    Vectorized kernel shared by the steering and HRTF builders.  Returns
    shape ``cosines.shape`` for scalar k, or ``cosines.shape + (len(k),)``
    for a 1-D array of wavenumbers.
    """
    coeffs = modal_coefficients(
        sphere, k, field_radius_m, order, source_distance_m
    )
    c = np.asarray(cosines, dtype=float)
    basis = legendre_basis(c.ravel(), order)
    out = basis @ coeffs
    if coeffs.ndim == 1:
        return out.reshape(c.shape)
    return out.reshape(c.shape + (coeffs.shape[1],))


def point_source_pressure(
    sphere: RigidSphere,
    source: SourcePosition,
    point: FieldPoint,
    k: float,
    order: int,
) -> complex:
    """Total pressure at ``point`` due to a point source near the sphere.

    The source amplitude convention makes the free-field limit equal to
    e^{-ikR}/R with R the source/observation separation.

    Raises
    ------
    DomainError
        If the observation point lies inside the sphere or beyond the
        source radius (the interior expansion is invalid there), or k <= 0.
    """
    if source.distance_m <= sphere.radius_m:
        raise DomainError("source must lie strictly outside the sphere")
    cosine = cos_angle_between(source.direction, point.direction)
    return complex(
        pressure_at_cosines(
            sphere,
            cosine,
            float(k),
            point.radius_m,
            order,
            source_distance_m=source.distance_m,
        )
    )


def plane_wave_pressure(
    sphere: RigidSphere,
    incidence: Direction,
    point: FieldPoint,
    k: float,
    order: int,
) -> complex:
    """Total pressure at ``point`` for a unit plane wave arriving from
    ``incidence``.  Depends on the two directions only through their
    included angle."""
    cosine = cos_angle_between(incidence, point.direction)
    return complex(
        pressure_at_cosines(sphere, cosine, float(k), point.radius_m, order)
    )


def dvf(
    sphere: RigidSphere,
    near_distance_m: float,
    far_distance_m: float,
    eval_direction: Direction,
    source_direction: Direction,
    k: float,
    order: int,
) -> complex:
    """Pressure ratio on the sphere surface between a source at the near
    distance and one at the far distance, same observation point.

    Both distances must exceed the sphere radius; the observation point is
    on the surface (r = r_a).
    """
    cosine = cos_angle_between(source_direction, eval_direction)
    num, den = dvf_at_cosines(
        sphere, cosine, near_distance_m, far_distance_m, k, order, _split=True
    )
    return complex(num) / complex(den)


def dvf_at_cosines(
    sphere: RigidSphere,
    cosines,
    near_distance_m: float,
    far_distance_m: float,
    k,
    order: int,
    _split: bool = False,
):
    """Vectorized distance variation function over angle cosines.

    Shapes follow :func:`pressure_at_cosines`.  With ``_split`` the raw
    numerator and denominator fields are returned instead of their ratio.
    """
    for name, d in (("near", near_distance_m), ("far", far_distance_m)):
        if d <= sphere.radius_m:
            raise DomainError(
                f"{name} distance must exceed the sphere radius, got {d!r}"
            )
    num = pressure_at_cosines(
        sphere, cosines, k, sphere.radius_m, order, source_distance_m=near_distance_m
    )
    den = pressure_at_cosines(
        sphere, cosines, k, sphere.radius_m, order, source_distance_m=far_distance_m
    )
    if np.any(np.abs(den) < 1e-300):
        raise DegenerateFieldError(
            "far-source field vanished at an evaluation point"
        )
    if _split:
        return num, den
    return num / den


def _check_field_radius(sphere, field_radius_m, source_distance_m):
    # Interior expansion is valid for r_a <= r <= r_s only; reject instead
    # of extrapolating.
    if field_radius_m < sphere.radius_m * (1.0 - 1e-12):
        raise DomainError(
            "field point lies inside the sphere "
            f"(r={field_radius_m!r} < r_a={sphere.radius_m!r})"
        )
    if source_distance_m is not None:
        if source_distance_m <= sphere.radius_m:
            raise DomainError("source must lie strictly outside the sphere")
        if field_radius_m > source_distance_m * (1.0 + 1e-12):
            raise DomainError(
                "field point lies beyond the source radius "
                f"(r={field_radius_m!r} > r_s={source_distance_m!r})"
            )

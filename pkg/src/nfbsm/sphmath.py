"""Spherical Bessel/Hankel functions, their derivatives, and complex
orthonormal spherical harmonics.

Conventions
-----------
Time dependence is e^{+i omega t}, so outgoing waves carry the spherical
Hankel function of the second kind h_n^{(2)} = j_n - i y_n and a free-field
point source decays as e^{-ikr}/r.

Spherical harmonics are orthonormal and include the Condon-Shortley phase,

    Y_n^m(theta, phi) = sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!)
                        P_n^m(cos theta) e^{i m phi},

with theta the elevation measured from the +z axis and phi the azimuth
measured from +x toward +y.  Any consistent convention would do, since the
harmonics only ever enter through conjugate pairs Y_n^m(A)^* Y_n^m(B).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _special

from .errors import DomainError, UnsupportedOrderError, ValidationError

#: Highest order accepted by default.  The experiments need 30; the cap
#: guards against silent overflow of y_n at small arguments.
DEFAULT_MAX_ORDER = 64

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Direction:
    """A direction on the unit sphere.

    Parameters
    ----------
    theta : float
        Elevation in radians, measured from the +z axis, in [0, pi].
    phi : float
        Azimuth in radians from +x toward +y.  Stored normalized to
        [0, 2 pi).
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not math.isfinite(self.theta) or not math.isfinite(self.phi):
            raise ValidationError("direction angles must be finite")
        if self.theta < 0.0 or self.theta > math.pi:
            raise ValidationError(
                f"theta must lie in [0, pi], got {self.theta!r}"
            )
        object.__setattr__(self, "phi", self.phi % _TWO_PI)

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float) -> "Direction":
        return cls(math.radians(theta_deg), math.radians(phi_deg))

    def unit_vector(self) -> np.ndarray:
        """Cartesian unit vector (x, y, z) for this direction."""
        st = math.sin(self.theta)
        return np.array(
            [
                st * math.cos(self.phi),
                st * math.sin(self.phi),
                math.cos(self.theta),
            ]
        )


def cos_angle_between(a: Direction, b: Direction) -> float:
    """Cosine of the angle subtended by two directions."""
    c = math.cos(a.theta) * math.cos(b.theta) + math.sin(a.theta) * math.sin(
        b.theta
    ) * math.cos(a.phi - b.phi)
    return min(1.0, max(-1.0, c))


def require_order(n: int, max_order: int = DEFAULT_MAX_ORDER) -> int:
    """Validate an order index, returning it unchanged."""
    n = int(n)
    if n < 0:
        raise ValidationError(f"order must be non-negative, got {n}")
    if n > max_order:
        raise UnsupportedOrderError(
            f"order {n} exceeds the supported maximum {max_order}"
        )
    return n


def spherical_bessel_j(n: int, x, max_order: int = DEFAULT_MAX_ORDER):
    """Spherical Bessel function of the first kind j_n(x).

    Parameters
    ----------
    n : int
        Order, 0 <= n <= max_order.
    x : float or array_like
        Non-negative argument.

    Returns
    -------
    float or ndarray
        j_n(x); j_0(0) = 1 and j_n(0) = 0 for n > 0.
    """
    n = require_order(n, max_order)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("spherical_bessel_j requires x >= 0")
    out = _special.spherical_jn(n, x)
    return out if out.ndim else float(out)


def spherical_bessel_y(n: int, x, max_order: int = DEFAULT_MAX_ORDER):
    """Spherical Bessel function of the second kind y_n(x) for x > 0."""
    n = require_order(n, max_order)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("spherical_bessel_y is singular at x <= 0")
    out = _special.spherical_yn(n, x)
    return out if out.ndim else float(out)


def spherical_hankel2(n: int, x, max_order: int = DEFAULT_MAX_ORDER):
    """Spherical Hankel function of the second kind,
    h_n^{(2)}(x) = j_n(x) - i y_n(x), for x > 0."""
    n = require_order(n, max_order)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("spherical_hankel2 is singular at x <= 0")
    out = _special.spherical_jn(n, x) - 1j * _special.spherical_yn(n, x)
    return out if out.ndim else complex(out)


def spherical_bessel_j_prime(n: int, x, max_order: int = DEFAULT_MAX_ORDER):
    """Derivative j_n'(x) with respect to the argument, for x > 0.

    Uses the identity f_n'(x) = f_{n-1}(x) - (n+1)/x f_n(x), with
    j_{-1}(x) = cos(x)/x for the n = 0 case.
    """
    n = require_order(n, max_order)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("spherical_bessel_j_prime requires x > 0")
    out = _special.spherical_jn(n, x, derivative=True)
    return out if out.ndim else float(out)


def spherical_hankel2_prime(n: int, x, max_order: int = DEFAULT_MAX_ORDER):
    """Derivative of h_n^{(2)} with respect to the argument, for x > 0."""
    n = require_order(n, max_order)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("spherical_hankel2_prime requires x > 0")
    out = _special.spherical_jn(n, x, derivative=True) - 1j * _special.spherical_yn(
        n, x, derivative=True
    )
    return out if out.ndim else complex(out)


def sph_harm(
    n: int, m: int, theta, phi, max_order: int = DEFAULT_MAX_ORDER
):
    """Complex orthonormal spherical harmonic Y_n^m(theta, phi).

    Parameters
    ----------
    n, m : int
        Order and degree with |m| <= n.
    theta, phi : float or array_like
        Elevation from +z and azimuth from +x, in radians.

    Returns
    -------
    complex or ndarray
        Y_n^m including the Condon-Shortley phase, satisfying
        Y_n^{-m} = (-1)^m conj(Y_n^m).
    """
    n = require_order(n, max_order)
    m = int(m)
    if abs(m) > n:
        raise ValidationError(f"degree |m| <= n required, got n={n}, m={m}")
    out = _special.sph_harm_y(n, m, np.asarray(theta, float), np.asarray(phi, float))
    return out if out.ndim else complex(out)


def legendre_basis(cosines, order: int, max_order: int = DEFAULT_MAX_ORDER):
    """Legendre polynomials P_0..P_order evaluated at the given cosines.

    Returns an array of shape cosines.shape + (order+1,).  This is the
    angular factor after collapsing the degree sum of a product of
    spherical harmonics with the addition theorem,

        sum_m Y_n^m(A)^* Y_n^m(B) = (2n+1)/(4 pi) P_n(cos angle(A, B)).
    """
    order = require_order(order, max_order)
    c = np.asarray(cosines, dtype=float)
    if np.any(np.abs(c) > 1.0 + 1e-12):
        raise DomainError("cosines must lie in [-1, 1]")
    c = np.clip(c, -1.0, 1.0)
    return np.polynomial.legendre.legvander(c, order)

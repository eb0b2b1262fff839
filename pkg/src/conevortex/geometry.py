"""Classical kinematics in conical space.

A cone with deficit parameter eta < 1 deflects every classical trajectory
by the same angle omega regardless of impact parameter.  Depending on eta
the outgoing bundle either opens a shadow behind the scatterer or focuses
into a double-image region; the band structure in eta is governed by

    q = eta / (1 - eta),

with band edges at integer q (eta = 1/2, 2/3, 3/4, ...).  The same
arithmetic fixes how many image terms (integers l) contribute to the
distorted incident wave and to the short-wavelength amplitude.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import DegenerateGeometryError, DomainError

TWO_PI = 2.0 * math.pi

# Absolute guard band for float comparisons against band edges / interval
# endpoints; inputs given as Fractions are tested exactly instead.
GUARD = 1e-12


class RegionClass(str, enum.Enum):
    SHADOW = "Shadow"
    DOUBLE_IMAGE = "DoubleImage"
    FLAT = "Flat"


@dataclass(frozen=True)
class ConeGeometry:
    """Deficit parameter eta, strictly below 1 (arbitrarily negative)."""

    eta: float

    def __post_init__(self):
        if not float(self.eta) < 1.0:
            raise DomainError(f"deficit parameter must satisfy eta < 1, got {self.eta}")

    @property
    def q(self):
        """eta/(1-eta); exact when eta is Rational."""
        if isinstance(self.eta, Rational) and not isinstance(self.eta, float):
            return Fraction(self.eta) / (1 - Fraction(self.eta))
        return self.eta / (1.0 - self.eta)


@dataclass(frozen=True)
class RegionKind:
    kind: RegionClass
    omega: float  # classical scattering angle in [0, pi]


def _band_index(geom: ConeGeometry) -> int:
    """Band index m: -1 for eta<0, else floor(q) with q strictly between
    integers.  Integer q (band edge) is degenerate."""
    q = geom.q
    if isinstance(q, Fraction):
        if q.denominator == 1 and q != 0:
            raise DegenerateGeometryError(f"eta={geom.eta} lies on a band edge")
        return math.floor(q)
    if abs(q - round(q)) <= GUARD * max(1.0, abs(q)) and round(q) != 0:
        raise DegenerateGeometryError(f"eta={geom.eta} lies on a band edge (q={q})")
    return math.floor(q)


def scattering_angle(geom: ConeGeometry) -> RegionKind:
    """Deflection angle and region class for the given cone.

    Shadow bands (eta<0 and (2n-1)/2n < eta < 2n/(2n+1)) give
    omega = ((m+1) - q) pi; double-image bands (0<eta<1/2 and
    2n/(2n+1) < eta < (2n+1)/(2n+2)) give omega = (q - m) pi, where
    m is the band index and q = eta/(1-eta).  Flat space returns omega 0.
    """
    eta = float(geom.eta)
    if eta == 0.0:
        return RegionKind(RegionClass.FLAT, 0.0)
    m = _band_index(geom)
    q = float(geom.q)
    if m % 2 != 0:  # odd band index (including m = -1): shadow
        return RegionKind(RegionClass.SHADOW, ((m + 1) - q) * math.pi)
    return RegionKind(RegionClass.DOUBLE_IMAGE, (q - m) * math.pi)


def mode_count_table(geom: ConeGeometry) -> dict:
    """Admissible-l counts inside and outside the classical region.

    Shadow bands: (inside, outside) = (m+1, m+2); double-image bands:
    (m+2, m+1).  The count outside a shadow exceeds the inside count by
    one; outside a double image it is smaller by one.
    """
    if float(geom.eta) == 0.0:
        return {"kind": RegionClass.FLAT, "inside": 1, "outside": 1}
    m = _band_index(geom)
    if m % 2 != 0:
        return {"kind": RegionClass.SHADOW, "inside": m + 1, "outside": m + 2}
    return {"kind": RegionClass.DOUBLE_IMAGE, "inside": m + 2, "outside": m + 1}


def _exactable(*values) -> bool:
    return all(isinstance(v, Rational) and not isinstance(v, float) for v in values)


def _integers_in_open_interval(lo, hi, exact: bool) -> list[int]:
    """Strictly interior integers of (lo, hi); an endpoint sitting on an
    integer (within GUARD for floats, exactly for rationals) is degenerate."""
    if exact:
        for edge in (lo, hi):
            if Fraction(edge).denominator == 1:
                raise DegenerateGeometryError(
                    f"interval endpoint {edge} coincides with an integer mode")
        first = math.floor(lo) + 1
        last = math.ceil(hi) - 1
        return [l for l in range(first, last + 1) if lo < l < hi]
    for edge in (lo, hi):
        if abs(edge - round(edge)) <= GUARD * max(1.0, abs(edge)):
            raise DegenerateGeometryError(
                f"interval endpoint {edge} coincides with an integer mode")
    first = math.floor(lo) + 1
    last = math.ceil(hi) - 1
    return [l for l in range(first, last + 1) if lo < l < hi]


def l_range(geom: ConeGeometry, phi, phi_prime=0, which: str = "incident") -> list[int]:
    """Integers l admissible for the distorted incident wave ("incident")
    or for the short-wavelength amplitude ("shortwave", which fixes the
    incidence direction to zero and uses the relative angle phi).

    The open interval is
        (phi'-phi)/2pi - q/2  <  l  <  (phi'-phi)/2pi + 1 + q/2 .

    Angles are radians (floats) or exact multiples of pi (Rational:
    phi=Fraction(1,3) means pi/3), in which case endpoint coincidences are
    decided in exact rational arithmetic.
    """
    if which not in ("incident", "shortwave"):
        raise DomainError(f"which must be 'incident' or 'shortwave', got {which!r}")
    if which == "shortwave":
        phi_prime = 0
    exact = _exactable(geom.eta, phi, phi_prime)
    if exact:
        q = Fraction(geom.eta) / (1 - Fraction(geom.eta))
        c = (Fraction(phi_prime) - Fraction(phi)) / 2  # angles in pi units
        lo, hi = c - q / 2, c + 1 + q / 2
        return _integers_in_open_interval(lo, hi, exact=True)
    q = float(geom.q)
    c = (float(phi_prime) - float(phi)) / TWO_PI
    lo, hi = c - 0.5 * q, c + 1.0 + 0.5 * q
    return _integers_in_open_interval(lo, hi, exact=False)


def trajectories(geom: ConeGeometry, impact_params, extent: float,
                 n_points: int = 512) -> list[np.ndarray]:
    """Geodesic polylines past the vortex, one per impact parameter.

    Motion is free in the developed (unrolled) plane; mapping the
    developed polar angle back to the physical azimuth stretches it by
    1/(1-eta).  Each polyline is an (n_points, 2) array of (x1, x2)
    samples; the asymptotic outgoing direction differs from the incoming
    one by +/- omega.
    """
    _band_index(geom)  # reject band edges up front
    eta = float(geom.eta)
    beta = 1.0 / (1.0 - eta)
    out = []
    for b in np.atleast_1d(np.asarray(impact_params, dtype=float)):
        if b == 0.0:
            raise DomainError("impact parameter must be nonzero (apex hit)")
        t = np.linspace(-extent, extent, n_points)
        theta_dev = np.arctan2(b, t)          # developed-plane polar angle
        r = np.hypot(t, b)
        offset = math.copysign(math.pi * (1.0 - beta), b)
        phi = theta_dev * beta + offset
        out.append(np.column_stack([r * np.cos(phi), r * np.sin(phi)]))
    return out


def measured_deflection(polyline: np.ndarray) -> float:
    """Angle in [0, pi] between incoming and outgoing velocity directions
    of a trajectory polyline (first and last segments)."""
    v_in = polyline[1] - polyline[0]
    v_out = polyline[-1] - polyline[-2]
    a_in = math.atan2(v_in[1], v_in[0])
    a_out = math.atan2(v_out[1], v_out[0])
    d = (a_out - a_in) % TWO_PI
    return min(d, TWO_PI - d)

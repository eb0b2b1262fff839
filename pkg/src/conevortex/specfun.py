"""Bessel functions of real non-negative order for the partial-wave machinery.

Provides J_nu(x), Y_nu(x) and the cancellation-safe reflection ratio

    jh_ratio(nu, x) = J_nu(x) / (J_nu(x) + i Y_nu(x))

for nu >= 0, x > 0 inside the supported box nu <= 5000, x <= 5000.

The default evaluation path is SciPy's cephes/amos kernels, which were
measured to hold ~4e-12 relative accuracy over the supported box wherever
the values are representable in double precision; requesting a tighter
``rel_tol`` than that switches to an arbitrary-precision route (ascending
series in the small-argument region, capped by ``max_terms``, and the
J_{+nu}/J_{-nu} reflection combination for Y at non-integer order).

Overflow of Y (large order, small argument) and underflow of J below the
double-precision range are reported as RangeError, never as silent
infinities.  jh_ratio survives that regime through log-magnitude
evaluation: the ratio magnitude decays super-exponentially for nu >> x and
is returned faithfully down to (at least) 1e-300.

All functions are pure; concurrent use is unrestricted.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy import special

from .errors import DomainError, NonConvergenceError, RangeError

NU_MAX = 5000.0
X_MAX = 5000.0

# Empirical worst relative error of scipy jv/yv over the supported box
# (measured against 30-digit reference values).  Below this we cannot
# honour the contract with the fast path.
_SCIPY_TRUST_TOL = 1e-11

# |J| below this is treated as underflow of the double range (the function
# value, not a zero crossing: zero crossings occur only for x > nu where
# magnitudes are ~1/sqrt(x)).
_UNDERFLOW_FLOOR = 1e-305


@dataclass(frozen=True)
class SpecFunAccuracy:
    """Accuracy request: relative tolerance and a cap on series length."""

    rel_tol: float = 1e-11
    max_terms: int = 400

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1e-6):
            raise DomainError(f"rel_tol must lie in (0, 1e-6), got {self.rel_tol}")
        if self.max_terms < 50:
            raise DomainError(f"max_terms must be >= 50, got {self.max_terms}")


DEFAULT_ACCURACY = SpecFunAccuracy()


def _validate(nu: float, x: float) -> None:
    if nu < 0.0:
        raise DomainError(f"order must be non-negative, got nu={nu}")
    if x <= 0.0:
        raise DomainError(f"argument must be positive, got x={x}")
    if nu > NU_MAX or x > X_MAX:
        raise RangeError(f"(nu={nu}, x={x}) outside supported box "
                         f"nu<={NU_MAX}, x<={X_MAX}")


def _mp_dps(rel_tol: float) -> int:
    return int(np.ceil(-np.log10(rel_tol))) + 10


def _mp_series_j(nu, x, max_terms: int):
    """Ascending series sum_m (-1)^m (x/2)^(nu+2m) / (m! Gamma(nu+m+1)),
    evaluated at the current mpmath precision."""
    half = mp.mpf(x) / 2
    term = half ** mp.mpf(nu) / mp.gamma(mp.mpf(nu) + 1)
    total = term
    z = -(half * half)
    for m in range(1, max_terms + 1):
        term = term * z / (m * (mp.mpf(nu) + m))
        total += term
        if abs(term) < abs(total) * mp.mpf(10) ** (-mp.mp.dps):
            return total
    raise NonConvergenceError(
        f"ascending series for J_{nu}({x}) did not converge in {max_terms} terms")


def _mp_bessel(kind: str, nu: float, x: float, acc: SpecFunAccuracy):
    """High-accuracy route.  J in the series region goes through the capped
    ascending series; Y at non-integer order through the J reflection;
    everything else through the library evaluators."""
    with mp.workdps(_mp_dps(acc.rel_tol)):
        in_series_region = x <= max(10.0, nu / 2.0)
        if kind == "j":
            if in_series_region:
                return _mp_series_j(nu, x, acc.max_terms)
            return mp.besselj(nu, x)
        # Y: reflection J_nu cos(nu pi) - J_{-nu}, over sin(nu pi), away
        # from integer order; the near-integer limit is delegated to the
        # library's own limiting evaluation.
        if abs(nu - round(nu)) >= 1e-6 and in_series_region:
            jp = _mp_series_j(nu, x, acc.max_terms)
            half = mp.mpf(x) / 2
            # J_{-nu} series: same recursion with nu -> -nu
            term = half ** (-mp.mpf(nu)) / mp.gamma(1 - mp.mpf(nu))
            total = term
            z = -(half * half)
            for m in range(1, acc.max_terms + 1):
                term = term * z / (m * (m - mp.mpf(nu)))
                total += term
                if abs(term) < abs(total) * mp.mpf(10) ** (-mp.mp.dps):
                    break
            jm = total
            return (jp * mp.cospi(mp.mpf(nu)) - jm) / mp.sinpi(mp.mpf(nu))
        return mp.bessely(nu, x)


def bessel_j(nu: float, x: float, acc: SpecFunAccuracy = DEFAULT_ACCURACY) -> float:
    """J_nu(x) with relative error <= acc.rel_tol (nu <= 50; 100x looser
    above).  Underflow below the double range raises RangeError."""
    _validate(nu, x)
    if acc.rel_tol < _SCIPY_TRUST_TOL:
        val = float(_mp_bessel("j", nu, x, acc))
        if val == 0.0 and nu > 0:
            raise RangeError(f"J_{nu}({x}) underflows double precision")
        return val
    val = special.jv(nu, x)
    if not np.isfinite(val):
        raise RangeError(f"J_{nu}({x}) not representable (overflow path)")
    if val == 0.0 or (nu > x and abs(val) < _UNDERFLOW_FLOOR):
        raise RangeError(f"J_{nu}({x}) underflows double precision")
    return float(val)


def bessel_y(nu: float, x: float, acc: SpecFunAccuracy = DEFAULT_ACCURACY) -> float:
    """Y_nu(x) to the same accuracy contract as bessel_j.  The x -> 0
    divergence (and the large-order overflow) raise RangeError rather than
    returning an infinity."""
    _validate(nu, x)
    if acc.rel_tol < _SCIPY_TRUST_TOL:
        val = float(_mp_bessel("y", nu, x, acc))
        if not np.isfinite(val):
            raise RangeError(f"Y_{nu}({x}) overflows double precision")
        return val
    val = special.yv(nu, x)
    if not np.isfinite(val):
        raise RangeError(f"Y_{nu}({x}) overflows double precision")
    return float(val)


def _jh_ratio_logmag(nu: float, x: float) -> complex:
    """Reflection ratio via the signed quotient t = J/Y computed in
    arbitrary precision (arbitrary exponent range), for the regime where
    J underflows and/or Y overflows doubles.

        J/(J + iY) = t (t - i) / (1 + t^2),   t = J/Y  (real, |t| << 1)
    """
    with mp.workdps(25):
        t = mp.besselj(nu, x) / mp.bessely(nu, x)
        re = float(t * t / (1 + t * t))
        im = float(-t / (1 + t * t))
    return complex(re, im)


def jh_ratio(nu: float, x: float, acc: SpecFunAccuracy = DEFAULT_ACCURACY) -> complex:
    """J_nu(x) / (J_nu(x) + i Y_nu(x)), cancellation-safe.

    |result| <= 1 always (the Hankel modulus dominates J on the real
    axis).  For nu >> x the magnitude decays super-exponentially and is
    returned, not flushed to an error, down to at least 1e-300.
    """
    _validate(nu, x)
    J = special.jv(nu, x)
    Y = special.yv(nu, x)
    if np.isfinite(J) and np.isfinite(Y) and not (J == 0.0 and nu > 0):
        # Real J, Y: |J + iY|^2 = J^2 + Y^2, no cancellation possible.
        return complex(J / complex(J, Y))
    return _jh_ratio_logmag(nu, x)


def jh_ratio_many(nus: np.ndarray, x: float,
                  acc: SpecFunAccuracy = DEFAULT_ACCURACY) -> np.ndarray:
    """Vectorized jh_ratio over an array of orders at fixed argument.

    The fast path covers orders whose J and Y are double-representable;
    the handful of deep-tail orders (J underflowed / Y overflowed) fall
    back to the log-magnitude route.
    """
    nus = np.asarray(nus, dtype=float)
    if np.any(nus < 0):
        raise DomainError("orders must be non-negative")
    if x <= 0:
        raise DomainError(f"argument must be positive, got x={x}")
    if np.any(nus > NU_MAX) or x > X_MAX:
        raise RangeError("order/argument outside supported box")
    J = special.jv(nus, x)
    Y = special.yv(nus, x)
    out = np.zeros(nus.shape, dtype=complex)
    ok = np.isfinite(J) & np.isfinite(Y) & ~((J == 0.0) & (nus > 0))
    out[ok] = J[ok] / (J[ok] + 1j * Y[ok])
    for i in np.nonzero(~ok)[0]:
        out[i] = _jh_ratio_logmag(float(nus[i]), x)
    return out


def _jv_prime(nu, x):
    """dJ_nu/dx via the downward-safe recurrence (nu/x) J_nu - J_{nu+1}."""
    return (nu / x) * special.jv(nu, x) - special.jv(nu + 1, x)


def _yv_prime(nu, x):
    return (nu / x) * special.yv(nu, x) - special.yv(nu + 1, x)

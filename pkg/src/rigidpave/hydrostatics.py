"""Soil-water characteristic curve and equilibrium suction profile.

Suction heads are in cm of water throughout this module; kPa appears only
on :class:`MoistureState`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateStateError, NoRootError, ParameterError
from .units import cm_to_kpa

#: Suction (cm of water) at which the Fredlund-Xing curve reaches zero water content.
MAX_SUCTION_CM = 1.021e7

#: Saturation at or above which the saturation factor switches to 1/theta.
SATURATION_THRESHOLD = 0.999

_BISECTION_TOL = 1e-8
_BISECTION_MAXITER = 400


@dataclass(frozen=True)
class SwccParams:
    """Fredlund-Xing fitting parameters.

    ``a_f`` and ``h_r`` are in cm of water; ``theta_sat`` is the saturated
    volumetric water content.
    """

    a_f: float
    b_f: float
    c_f: float
    h_r: float
    theta_sat: float

    def __post_init__(self):
        for name in ("a_f", "b_f", "c_f", "h_r"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not 0 < self.theta_sat < 1:
            raise ParameterError(f"theta_sat must lie in (0, 1), got {self.theta_sat!r}")


@dataclass(frozen=True)
class SuctionProfile:
    """Equilibrium head anchored at the moisture-active-zone depth.

    ``z_ref`` is an elevation (cm, positive up) and ``h_ref`` the signed
    pressure head there (negative for suction).
    """

    z_ref: float
    h_ref: float

    def __post_init__(self):
        if self.h_ref > 0:
            raise ParameterError("h_ref is a suction head and must be <= 0")


@dataclass(frozen=True)
class MoistureState:
    theta: float
    saturation: float
    suction_kpa: float
    f: float

    @property
    def h_m(self) -> float:
        """Signed matric suction (kPa, negative) as it enters the suction-dependent modulus."""
        return -self.suction_kpa


def swcc_correction(h: float, h_r: float) -> float:
    """Correction factor C(h) forcing the curve to zero at 1.021e7 cm."""
    if not h_r > 0:
        raise ParameterError(f"h_r must be positive, got {h_r!r}")
    if h < 0:
        raise ParameterError(f"suction head must be >= 0, got {h!r}")
    return 1.0 - math.log1p(h / h_r) / math.log1p(MAX_SUCTION_CM / h_r)


def swcc_saturation(h: float, p: SwccParams) -> float:
    """Degree of saturation at suction head ``h`` (cm of water)."""
    if h < 0:
        raise ParameterError(f"suction head must be >= 0, got {h!r}")
    c = swcc_correction(h, p.h_r)
    # (h/a)^b overflows for extreme heads; log form keeps it finite
    if h == 0:
        core = 1.0
    else:
        x = p.b_f * (math.log(h) - math.log(p.a_f))
        inner = math.log(math.e + math.exp(x)) if x < 700 else x + math.log1p(math.e * math.exp(-x))
        core = inner ** (-p.c_f)
    return min(1.0, max(0.0, c * core))


def suction_at_elevation(profile: SuctionProfile, z: float) -> float:
    """Signed head at elevation ``z`` under hydrostatic equilibrium (slope -1)."""
    return profile.h_ref - (z - profile.z_ref)


def moisture_state(p: SwccParams, h: float, threshold: float = SATURATION_THRESHOLD) -> MoistureState:
    s = swcc_saturation(h, p)
    theta = s * p.theta_sat
    if s >= threshold:
        if theta <= 0:
            raise DegenerateStateError("saturation factor undefined for zero water content")
        f = 1.0 / theta
    else:
        f = 1.0
    return MoistureState(theta=theta, saturation=s, suction_kpa=cm_to_kpa(h), f=f)


def invert_swcc(target_s: float, p: SwccParams, tol: float = _BISECTION_TOL) -> float:
    """Suction head (cm) giving saturation ``target_s``.

    Plain bisection on [0, 1.021e7]; the curve is monotone so no derivative
    is needed.
    """
    if not 0 < target_s <= 1:
        raise NoRootError(f"target saturation must lie in (0, 1], got {target_s!r}")
    if target_s >= 1.0:
        return 0.0
    lo, hi = 0.0, MAX_SUCTION_CM
    s_hi = swcc_saturation(hi, p)
    if target_s < s_hi:
        raise NoRootError(f"saturation {target_s!r} is below the curve minimum {s_hi!r}")
    # log-space bisection above 1 cm so large heads converge as fast as small ones
    for _ in range(_BISECTION_MAXITER):
        mid = math.sqrt(lo * hi) if lo >= 1.0 else 0.5 * (lo + hi)
        if swcc_saturation(mid, p) > target_s:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    h = 0.5 * (lo + hi)
    if abs(swcc_saturation(h, p) - target_s) > tol:
        raise NoRootError(f"bisection stalled for target {target_s!r}")
    return h

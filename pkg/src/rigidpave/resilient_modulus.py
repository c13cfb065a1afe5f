"""Resilient modulus models for unbound base material.

Three forms are provided: the stress-dependent NCHRP 1-28A model, the
Pavement ME saturation-ratio adjustment, and the suction/water-content
model in which matric suction adds to the bulk stress.  Stresses and moduli
are in kPa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ParameterError
from .hydrostatics import MoistureState

ATMOSPHERIC_KPA = 101.325

#: Default evaluation stress state for sensitivity studies (kPa).
DEFAULT_BULK_STRESS = 208.0
DEFAULT_OCT_SHEAR = 48.6


@dataclass(frozen=True)
class MrCoefficients:
    k1: float
    k2: float
    k3: float

    def __post_init__(self):
        if not self.k1 > 0:
            raise ParameterError(f"k1 must be positive, got {self.k1!r}")


@dataclass(frozen=True)
class StressState:
    i1: float = DEFAULT_BULK_STRESS
    tau_oct: float = DEFAULT_OCT_SHEAR
    p_a: float = ATMOSPHERIC_KPA

    def __post_init__(self):
        if not self.p_a > 0:
            raise ParameterError("atmospheric pressure must be positive")
        if self.tau_oct < 0:
            raise ParameterError("octahedral shear stress must be >= 0")


@dataclass(frozen=True)
class MeMoistureParams:
    a: float
    b: float
    k_m: float
    s_opt: float
    mr_opt: float

    def __post_init__(self):
        if not (self.a < 0 < self.b):
            raise ParameterError(f"need a < 0 < b, got a={self.a!r}, b={self.b!r}")
        if not self.mr_opt > 0:
            raise ParameterError("mr_opt must be positive")


def _pow(base, expo, what):
    if base > 0:
        return base**expo
    if base == 0 and expo > 0:
        return 0.0
    if base < 0 and float(expo).is_integer():
        return base**expo
    raise DomainError(f"{what} term {base!r} cannot be raised to {expo!r}")


def mr_nchrp(c: MrCoefficients, s: StressState) -> float:
    """NCHRP 1-28A universal model, k1 Pa (I1/Pa)^k2 (tau/Pa + 1)^k3."""
    conf = _pow(s.i1 / s.p_a, c.k2, "bulk-stress")
    shear = (s.tau_oct / s.p_a + 1.0) ** c.k3
    return c.k1 * s.p_a * conf * shear


def mr_me_ratio(p: MeMoistureParams, s_now: float) -> float:
    """Pavement ME moisture-adjusted modulus.

    ``s_now`` and ``p.s_opt`` must be on the same scale (fraction or percent).
    """
    arg = math.log(-p.b / p.a) + p.k_m * (s_now - p.s_opt)
    # sigmoid written to stay finite for large |arg|
    if arg > 0:
        e = math.exp(-arg)
        frac = e / (1.0 + e)
    else:
        frac = 1.0 / (1.0 + math.exp(arg))
    return p.mr_opt * 10.0 ** (p.a + (p.b - p.a) * frac)


def mr_suction(
    c: MrCoefficients,
    s: StressState,
    m: MoistureState,
    shear_plus_one: bool = False,
) -> float:
    """Suction- and water-content-dependent modulus.

    The confinement term is ``I1 - 3 theta f h_m`` with ``h_m`` the signed
    (negative) suction in kPa, so drying raises the modulus when k2 > 0.
    The shear term has no "+1" unless ``shear_plus_one`` is set.
    """
    conf = s.i1 - 3.0 * m.theta * m.f * m.h_m
    if not conf > 0:
        raise DomainError(f"non-positive confinement term {conf!r} kPa")
    shear_arg = s.tau_oct / s.p_a + (1.0 if shear_plus_one else 0.0)
    if shear_arg == 0 and c.k3 < 0:
        raise DomainError("zero octahedral shear with negative k3 is singular")
    shear = shear_arg**c.k3 if shear_arg > 0 else (0.0 if c.k3 > 0 else 1.0)
    return c.k1 * s.p_a * (conf / s.p_a) ** c.k2 * shear

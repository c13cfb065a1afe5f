"""AREA-method backcalculation of the modulus of subgrade reaction.

The chain basin area -> effective relative stiffness length -> deflection
coefficient -> k runs in US customary units because its regression constants
are unit-bound (inches, lbf).  Inputs and outputs in SI are converted at the
boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .deflection import SENSOR_OFFSETS, DeflectionBasin, FwdLoad, full_structure_basin, LAYERED
from .errors import BasinError
from .hydrostatics import MoistureState
from .resilient_modulus import MrCoefficients, StressState, mr_suction
from .slab_structure import PavementSection
from .units import INCH, LBF, PCI

BACKCALC_LOAD_LBF = 9000.0


@dataclass(frozen=True)
class AreaConstants:
    k1: float = 36.0
    k2: float = 1812.597
    k3: float = 2.559
    inv_k4: float = 4.387
    a: float = 0.12450
    b: float = 0.14707
    c: float = 0.07565
    sensor_spacing: float = 12.0  # in


AREA = AreaConstants()


@dataclass(frozen=True)
class KResult:
    """Every intermediate of the chain.  Lengths in inches, k in pci and Pa/m."""

    basin_area: float
    l_e: float
    d_star: float
    k_pci: float

    @property
    def k_si(self) -> float:
        return self.k_pci * PCI


def _check_layout(offsets: Sequence[float], spacing_in: float):
    expected = [i * spacing_in * INCH for i in range(4)]
    if len(offsets) != 4 or any(abs(o - e) > 1e-6 for o, e in zip(offsets, expected)):
        raise BasinError(f"AREA method needs four sensors at 0/12/24/36 in, got {list(offsets)!r}")


def basin_area(deflections: Sequence[float], c: AreaConstants = AREA) -> float:
    """Normalised basin area (in) from four deflections in any consistent unit."""
    if len(deflections) != 4:
        raise BasinError(f"need exactly 4 deflections, got {len(deflections)}")
    d0, d1, d2, d3 = deflections
    if not d0 > 0:
        raise BasinError(f"centre deflection must be positive, got {d0!r}")
    return c.sensor_spacing / (2.0 * d0) * (d0 + 2.0 * (d1 + d2) + d3)


def effective_length(ba: float, c: AreaConstants = AREA) -> float:
    """Effective radius of relative stiffness (in).

    The log bracket is positive for every BA < 36, so only the upper bound is
    checked.
    """
    if not ba < c.k1:
        raise BasinError(f"basin area {ba!r} >= {c.k1} leaves the stiffness length undefined")
    return (math.log((c.k1 - ba) / c.k2) / -c.k3) ** c.inv_k4


def deflection_coefficient(l_e: float, c: AreaConstants = AREA) -> float:
    if l_e < 0:
        raise BasinError("effective length must be non-negative")
    return c.a * math.exp(-c.b * math.exp(-c.c * l_e))


def k_from_deflections_in(
    deflections_in: Sequence[float], load_lbf: float = BACKCALC_LOAD_LBF, c: AreaConstants = AREA
) -> KResult:
    """Chain on deflections already in inches at the stated load."""
    ba = basin_area(deflections_in, c)
    l_e = effective_length(ba, c)
    d_star = deflection_coefficient(l_e, c)
    k = load_lbf * d_star / (deflections_in[0] * l_e**2)
    return KResult(ba, l_e, d_star, k)


def k_from_basin(
    basin: DeflectionBasin,
    load_n: float | None = None,
    c: AreaConstants = AREA,
) -> KResult:
    """Modulus of subgrade reaction from an SI basin.

    If ``load_n`` is given the basin is first scaled linearly to the 9000 lbf
    backcalculation load, so a 40 kN forward solve is treated as exactly
    9000 lbf.
    """
    _check_layout(basin.offsets, c.sensor_spacing)
    scale = 1.0 if load_n is None else BACKCALC_LOAD_LBF * LBF / load_n
    d_in = [d * scale / INCH for d in basin.deflections]
    return k_from_deflections_in(d_in, BACKCALC_LOAD_LBF, c)


def base_modulus_pa(
    m: MoistureState,
    coefficients: MrCoefficients,
    stress: StressState = StressState(),
    shear_plus_one: bool = False,
) -> float:
    """Moisture-adjusted base modulus in Pa."""
    return 1e3 * mr_suction(coefficients, stress, m, shear_plus_one=shear_plus_one)


def modified_k(
    sec: PavementSection,
    m: MoistureState | None = None,
    load: FwdLoad = FwdLoad(),
    *,
    coefficients: MrCoefficients | None = None,
    stress: StressState = StressState(),
    model: str = LAYERED,
    tol: float = 1e-4,
) -> KResult:
    """Forward basin of the section, then the AREA chain.

    With a moisture state the base modulus is replaced by the suction-dependent
    resilient modulus (``coefficients`` required); otherwise the section's own
    base modulus is used.
    """
    e_base = None
    if m is not None:
        if coefficients is None:
            raise ValueError("resilient-modulus coefficients are required with a moisture state")
        e_base = base_modulus_pa(m, coefficients, stress)
    basin = full_structure_basin(sec, e_base, load, SENSOR_OFFSETS, model=model, tol=tol)
    return k_from_basin(basin, load.magnitude)

"""Transverse cracking and joint faulting for jointed plain concrete.

Calibration constants default to the usual MEPDG national values; they are
configuration, not derived here.  Stresses are psi and faulting inches, as
in the empirical models.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .deflection import FwdLoad, flexural_rigidity
from .errors import ClampWarning, DomainError, FixtureError, ParameterError

C1_DEFAULT = 2.0
C2_DEFAULT = 1.22
C34_DEFAULT = 0.005
#: additive constant of the fatigue transfer function
LOG_N_OFFSET = 0.4371
CRACK_EXPONENT = -1.68


@dataclass(frozen=True)
class FatigueCase:
    applied_n: float
    stress: float  # psi
    modulus_rupture: float  # psi
    label: str = ""

    def __post_init__(self):
        if self.applied_n < 0:
            raise ParameterError("applied load count must be >= 0")
        if not (self.stress > 0 and self.modulus_rupture > 0):
            raise ParameterError("stress and modulus of rupture must be positive")


@dataclass(frozen=True)
class FaultingMonth:
    faultmax: float  # in
    de: float
    label: str = ""

    def __post_init__(self):
        if self.faultmax < 0 or self.de < 0:
            raise ParameterError("FAULTMAX and DE must be >= 0")


@dataclass(frozen=True)
class CornerDeflections:
    loaded: float  # m
    unloaded: float  # m
    k: float  # Pa/m (any consistent unit gives DE in the matching unit)

    def __post_init__(self):
        if self.unloaded < 0 or self.k < 0:
            raise ParameterError("deflections and k must be >= 0")
        if self.loaded < self.unloaded:
            raise DomainError(
                f"loaded corner deflection {self.loaded!r} is below the unloaded {self.unloaded!r}"
            )


def crack_fraction(fd: float) -> float:
    """Cracked-slab fraction from fatigue damage; FD = 0 maps to the limit 0."""
    if fd < 0:
        raise ParameterError(f"fatigue damage must be >= 0, got {fd!r}")
    if fd == 0:
        return 0.0
    return 1.0 / (1.0 + fd**CRACK_EXPONENT)


def total_crack(bottom_up: float, top_down: float) -> float:
    """Percent slabs cracked, counting slabs with both crack types once."""
    for v in (bottom_up, top_down):
        if not 0.0 <= v <= 1.0:
            raise ParameterError(f"crack fractions must lie in [0, 1], got {v!r}")
    return (bottom_up + top_down - bottom_up * top_down) * 100.0


def allowable_loads(modulus_rupture: float, stress: float, c1: float = C1_DEFAULT, c2: float = C2_DEFAULT) -> float:
    if not stress > 0:
        raise ParameterError(f"stress must be positive, got {stress!r}")
    return 10.0 ** (c1 * (modulus_rupture / stress) ** c2 + LOG_N_OFFSET)


def miner_damage(cases: Iterable[FatigueCase], c1: float = C1_DEFAULT, c2: float = C2_DEFAULT) -> float:
    """Linear damage sum; ``math.fsum`` keeps it order-independent."""
    return math.fsum(c.applied_n / allowable_loads(c.modulus_rupture, c.stress, c1, c2) for c in cases)


def differential_energy(c: CornerDeflections) -> float:
    return c.k / 2.0 * (c.loaded**2 - c.unloaded**2)


def accumulate_faulting(
    months: Sequence[FaultingMonth], c34: float = C34_DEFAULT, initial: float = 0.0
) -> list[float]:
    """Cumulative faulting after each month.

    Each increment uses the previous month's faulting and FAULTMAX.  A step
    that would pass the envelope is clamped to it with a warning.
    """
    fault = initial
    series = []
    prev_max = months[0].faultmax if months else 0.0
    for i, m in enumerate(months):
        gap = prev_max - fault
        inc = c34 * gap * gap * m.de
        if fault + inc > m.faultmax:
            warnings.warn(
                f"month {i + 1}: faulting {fault + inc:.6g} exceeds FAULTMAX {m.faultmax:.6g}; clamped",
                ClampWarning,
                stacklevel=2,
            )
            inc = max(0.0, m.faultmax - fault)
        fault += inc
        series.append(fault)
        prev_max = m.faultmax
    return series


def winkler_corner_deflections(
    h: float,
    e: float,
    nu: float,
    k: float,
    load: FwdLoad,
    lte: float = 0.5,
) -> CornerDeflections:
    """Loaded/unloaded corner deflections from Westergaard's corner solution.

    The joint shares load by its load transfer efficiency
    ``lte = unloaded / loaded``; the loaded side carries P/(1+lte).  This is
    a screening approximation, not a slab-system finite-element analysis.
    """
    if not 0.0 <= lte <= 1.0:
        raise ParameterError("load transfer efficiency must lie in [0, 1]")
    ell = (flexural_rigidity(h, e, nu) / k) ** 0.25
    a1 = math.sqrt(2.0) * load.radius
    free = load.magnitude / (k * ell**2) * (1.1 - 0.88 * a1 / ell)
    loaded = free / (1.0 + lte)
    return CornerDeflections(loaded=loaded, unloaded=lte * loaded, k=k)


FATIGUE_COLUMNS = ("label", "applied_n", "stress_psi", "modulus_rupture_psi")
FAULTING_COLUMNS = ("label", "faultmax_in", "de")


def _rows(path, columns):
    with open(path, newline="") as fh:
        lines = [l for l in fh if not l.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != columns:
        raise FixtureError(f"{path}: columns {reader.fieldnames} do not match {list(columns)}")
    for n, row in enumerate(reader, start=2):
        try:
            yield row["label"], [float(row[c]) for c in columns[1:]]
        except (TypeError, ValueError) as exc:
            raise FixtureError(f"{path}: data row {n}: {exc}") from None


def read_fatigue_cases(path) -> list[FatigueCase]:
    return [FatigueCase(n, s, mr, label) for label, (n, s, mr) in _rows(path, FATIGUE_COLUMNS)]


def read_faulting_months(path) -> list[FaultingMonth]:
    return [FaultingMonth(fm, de, label) for label, (fm, de) in _rows(path, FAULTING_COLUMNS)]

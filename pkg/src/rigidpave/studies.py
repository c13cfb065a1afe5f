"""Section-level studies over the LTPP fixtures.

* bond sensitivity: k at no, table and full bond with equilibrium base moisture;
* moisture sensitivity: k at saturated, equilibrium and drier base moisture
  with the section's own bond ratio;
* validation: full-structure basin against a plate of equivalent thickness on
  springs of the backcalculated k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deflection import LAYERED, SENSOR_OFFSETS, FwdLoad, full_structure_basin, winkler_plate_basin
from .ingest import DRY_80, EQUILIBRIUM, SATURATED, SectionFixture, ScenarioFixture, expand_scenarios
from .kvalue import KResult, base_modulus_pa, k_from_basin
from .resilient_modulus import StressState
from .slab_structure import transformed_section


def percent_change(value: float, baseline: float) -> float:
    return (value - baseline) / baseline * 100.0


@dataclass(frozen=True)
class ScenarioK:
    section_id: str
    moisture: str
    delta: float
    e_base: float  # Pa
    k: KResult


def scenario_ks(
    section: SectionFixture,
    scenarios: list[ScenarioFixture],
    *,
    load: FwdLoad = FwdLoad(),
    stress: StressState = StressState(),
    model: str = LAYERED,
) -> list[ScenarioK]:
    """k for all nine (moisture, bond) runs of one section."""
    sec0 = section.to_section()
    out = []
    for run in expand_scenarios(section, scenarios):
        e_b = base_modulus_pa(run.state, run.coefficients, stress)
        sec = sec0.with_(delta=run.delta, e_base=e_b)
        basin = full_structure_basin(sec, None, load, SENSOR_OFFSETS, model=model)
        out.append(ScenarioK(section.section_id, run.moisture, run.delta, e_b, k_from_basin(basin, load.magnitude)))
    return out


def pick_run(runs, moisture, delta):
    for r in runs:
        if r.moisture == moisture and r.delta == delta:
            return r
    raise KeyError((moisture, delta))


@dataclass(frozen=True)
class BondSensitivity:
    section_id: str
    delta: float
    k_none: float
    k_partial: float
    k_full: float

    @property
    def partial_change(self) -> float:
        return percent_change(self.k_partial, self.k_none)

    @property
    def full_change(self) -> float:
        return percent_change(self.k_full, self.k_none)


@dataclass(frozen=True)
class MoistureSensitivity:
    section_id: str
    k_saturated: float
    k_equilibrium: float
    k_dry: float

    @property
    def equilibrium_change(self) -> float:
        return percent_change(self.k_equilibrium, self.k_saturated)

    @property
    def dry_change(self) -> float:
        return percent_change(self.k_dry, self.k_saturated)


def bond_sensitivity(section: SectionFixture, runs: list[ScenarioK]) -> BondSensitivity:
    """k-value change with bond, no bond as baseline (pci)."""
    ks = [pick_run(runs, EQUILIBRIUM, d).k.k_pci for d in (0.0, section.delta, 1.0)]
    return BondSensitivity(section.section_id, section.delta, *ks)


def moisture_sensitivity(section: SectionFixture, runs: list[ScenarioK]) -> MoistureSensitivity:
    """k-value change with drying, saturated base as baseline (pci)."""
    ks = [pick_run(runs, m, section.delta).k.k_pci for m in (SATURATED, EQUILIBRIUM, DRY_80)]
    return MoistureSensitivity(section.section_id, *ks)


@dataclass(frozen=True)
class ValidationResult:
    section_id: str
    k: KResult
    h_eq: float
    full: tuple
    winkler: tuple

    @property
    def deviation_pct(self) -> np.ndarray:
        return (np.asarray(self.winkler) / np.asarray(self.full) - 1.0) * 100.0

    def passes(self, near_limit: float = 10.0, far_limit: float = 25.0) -> bool:
        dev = np.abs(self.deviation_pct)
        return bool(np.all(dev[:-1] <= near_limit) and dev[-1] <= far_limit)


def validate_section(
    section: SectionFixture,
    runs: list[ScenarioK],
    *,
    load: FwdLoad = FwdLoad(),
    model: str = LAYERED,
) -> ValidationResult:
    """Compare the full structure with its equivalent plate on the backcalculated k.

    Uses the section's own bond ratio and equilibrium base moisture.
    """
    run = pick_run(runs, EQUILIBRIUM, section.delta)
    sec = section.to_section(delta=section.delta).with_(e_base=run.e_base)
    full = full_structure_basin(sec, None, load, SENSOR_OFFSETS, model=model)
    h_eq = transformed_section(sec).h_eq
    wink = winkler_plate_basin(h_eq, sec.e_slab, sec.nu_slab, run.k.k_si, load, SENSOR_OFFSETS)
    return ValidationResult(section.section_id, run.k, h_eq, full.deflections, wink.deflections)

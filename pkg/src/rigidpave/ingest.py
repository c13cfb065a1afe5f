"""LTPP section and moisture-scenario fixtures.

Both fixture files are CSV with a leading ``# rigidpave-fixture <kind> v1``
line that also states units.  ``sections.csv`` holds one row per section in
US customary units; ``scenarios.csv`` holds three moisture rows per section,
where the SWCC and resilient-modulus coefficients appear on the section's
first row only and blank cells repeat them.

The shipped files live in the package; set ``RIGIDPAVE_FIXTURES`` to a
directory to read a different pair.
"""

from __future__ import annotations

import csv
import os
import warnings
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import DataInconsistencyWarning, FixtureError, ParameterError
from .hydrostatics import MoistureState, SwccParams, invert_swcc, moisture_state, swcc_saturation
from .resilient_modulus import MrCoefficients
from .slab_structure import PavementSection
from .units import INCH, PSI, kpa_to_cm

FIXTURE_ENV = "RIGIDPAVE_FIXTURES"
FORMAT_VERSION = "v1"

SATURATED = "saturated"
EQUILIBRIUM = "equilibrium"
DRY_80 = "80pct-equilibrium"
MOISTURE_LEVELS = (SATURATED, EQUILIBRIUM, DRY_80)

#: Relative tolerance for rebuilt theta and S against the printed values.
CROSS_CHECK_RTOL = 0.02

#: Defaults for Poisson ratios, which the section table does not carry.
DEFAULT_NU = {"nu_slab": 0.15, "nu_base": 0.35, "nu_subgrade": 0.40}


def fixtures_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    return Path(env) if env else Path(__file__).with_name("fixtures")


@dataclass(frozen=True)
class SectionFixture:
    climate_zone: str
    state: str
    state_code: str
    shrp_id: str
    slab_thickness_in: float
    base_thickness_in: float
    slab_modulus_psi: float
    base_modulus_psi: float
    subgrade_modulus_psi: float
    delta: float

    @property
    def section_id(self) -> str:
        return f"{self.state_code}-{self.shrp_id}"

    def to_section(self, **overrides) -> PavementSection:
        """SI :class:`PavementSection`; keyword overrides replace Poisson ratios or delta."""
        kw = dict(DEFAULT_NU)
        kw.update(overrides)
        kw.setdefault("delta", self.delta)
        return PavementSection(
            h_s=self.slab_thickness_in * INCH,
            h_b=self.base_thickness_in * INCH,
            e_slab=self.slab_modulus_psi * PSI,
            e_base=self.base_modulus_psi * PSI,
            e_subgrade=self.subgrade_modulus_psi * PSI,
            **kw,
        )


@dataclass(frozen=True)
class ScenarioFixture:
    state_code: str
    shrp_id: str
    moisture: str
    delta: float
    a_f: float
    b_f: float
    c_f: float
    h_r: float
    theta: float
    s_pct: float
    neg_hm_kpa: float
    f: float
    k1: float
    k2: float
    k3: float
    mr_kpa: float

    @property
    def section_id(self) -> str:
        return f"{self.state_code}-{self.shrp_id}"


@dataclass(frozen=True)
class ScenarioRun:
    section_id: str
    moisture: str
    delta: float
    state: MoistureState
    coefficients: MrCoefficients


_SECTION_TEXT = {"climate_zone", "state", "state_code", "shrp_id"}
_SCENARIO_TEXT = {"state_code", "shrp_id", "moisture"}
# columns carried forward from a section's first scenario row
_SCENARIO_SHARED = ("a_f", "b_f", "c_f", "h_r", "k1", "k2", "k3")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _read(path: Path, kind: str, cls, text_cols, shared=()):
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise FixtureError(f"cannot open {path}: {exc}") from exc
    with fh:
        first = fh.readline()
        if not first.startswith(f"# rigidpave-fixture {kind} {FORMAT_VERSION}"):
            raise FixtureError(f"{path}:1: expected '# rigidpave-fixture {kind} {FORMAT_VERSION}' header")
        reader = csv.DictReader(fh)
        names = [f.name for f in fields(cls)]
        if reader.fieldnames != names:
            raise FixtureError(f"{path}:2: columns {reader.fieldnames} do not match {names}")
        out, carry = [], {}
        for line, raw in enumerate(reader, start=3):
            if None in raw or any(v is None for v in raw.values()):
                raise FixtureError(f"{path}:{line}: wrong number of cells")
            sid = (raw.get("state_code"), raw.get("shrp_id"))
            vals = {}
            for name in names:
                cell = raw[name].strip()
                if name in shared:
                    if cell:
                        carry[(sid, name)] = cell
                    elif (sid, name) in carry:
                        cell = carry[(sid, name)]
                if name in text_cols:
                    vals[name] = cell
                    continue
                try:
                    vals[name] = float(cell)
                except ValueError:
                    raise FixtureError(f"{path}:{line}: column {name!r}: not a number: {cell!r}") from None
            if not 0.0 <= vals["delta"] <= 1.0:
                raise ParameterError(f"{path}:{line}: bond ratio {vals['delta']!r} outside [0, 1]")
            out.append(cls(**vals))
    return out


def _write(path: Path, kind: str, units: str, rows, cls, shared=()):
    names = [f.name for f in fields(cls)]
    seen = set()
    with open(path, "w", newline="") as fh:
        fh.write(f"# rigidpave-fixture {kind} {FORMAT_VERSION}; {units}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for r in rows:
            first = r.section_id not in seen
            seen.add(r.section_id)
            w.writerow(["" if (n in shared and not first) else _fmt(getattr(r, n)) for n in names])


def read_sections(path=None) -> list[SectionFixture]:
    path = Path(path) if path else fixtures_dir() / "sections.csv"
    return _read(path, "sections", SectionFixture, _SECTION_TEXT)


def load_sections(path=None, **overrides) -> list[PavementSection]:
    """Sections in SI units, in file order."""
    return [s.to_section(**overrides) for s in read_sections(path)]


def read_scenarios(path=None) -> list[ScenarioFixture]:
    path = Path(path) if path else fixtures_dir() / "scenarios.csv"
    rows = _read(path, "scenarios", ScenarioFixture, _SCENARIO_TEXT, _SCENARIO_SHARED)
    for r in rows:
        if r.moisture not in MOISTURE_LEVELS:
            raise FixtureError(f"{path}: section {r.section_id}: unknown moisture label {r.moisture!r}")
    return rows


def write_sections(path, rows) -> None:
    units = "thickness in, moduli psi, delta dimensionless"
    _write(Path(path), "sections", units, rows, SectionFixture)


def write_scenarios(path, rows) -> None:
    units = (
        "a_f and h_r cm of water, theta volumetric, s_pct percent, neg_hm_kpa kPa, mr_kpa kPa; "
        "blank cells repeat the section's first row"
    )
    _write(Path(path), "scenarios", units, rows, ScenarioFixture, _SCENARIO_SHARED)


def scenario_rows(rows, section_id: str) -> dict[str, ScenarioFixture]:
    """The three moisture rows of one section keyed by moisture label."""
    sel = {r.moisture: r for r in rows if r.section_id == section_id}
    missing = set(MOISTURE_LEVELS) - set(sel)
    if missing:
        raise FixtureError(f"section {section_id}: missing scenario rows {sorted(missing)}")
    return sel


def swcc_for(rows: dict[str, ScenarioFixture]) -> SwccParams:
    """Curve parameters, with the saturated row's theta as theta_sat."""
    r = rows[SATURATED]
    return SwccParams(r.a_f, r.b_f, r.c_f, r.h_r, theta_sat=rows[SATURATED].theta)


def _cross_check(section_id, label, state: MoistureState, row: ScenarioFixture):
    for what, got, printed in (
        ("theta", state.theta, row.theta),
        ("S", 100.0 * state.saturation, row.s_pct),
    ):
        if abs(got - printed) > CROSS_CHECK_RTOL * abs(printed):
            warnings.warn(
                f"{section_id} {label}: rebuilt {what}={got:.4g} differs from fixture {printed:.4g}",
                DataInconsistencyWarning,
                stacklevel=3,
            )


def moisture_states(rows: dict[str, ScenarioFixture], section_id: str = "") -> dict[str, MoistureState]:
    """Rebuild the three moisture states from the curve.

    Saturated is zero suction; equilibrium takes the printed equilibrium
    suction; the drier state is the suction at 80 % of the equilibrium
    saturation.  Rebuilt theta and S are compared with the printed ones.
    """
    p = swcc_for(rows)
    eq = moisture_state(p, kpa_to_cm(rows[EQUILIBRIUM].neg_hm_kpa))
    dry = moisture_state(p, invert_swcc(0.8 * eq.saturation, p))
    out = {SATURATED: moisture_state(p, 0.0), EQUILIBRIUM: eq, DRY_80: dry}
    for label, st in out.items():
        _cross_check(section_id, label, st, rows[label])
    return out


def expand_scenarios(section: SectionFixture, rows) -> list[ScenarioRun]:
    """Nine (moisture, bond) runs: every moisture level at no, table and full bond."""
    sel = scenario_rows(rows, section.section_id)
    states = moisture_states(sel, section.section_id)
    coef = MrCoefficients(sel[SATURATED].k1, sel[SATURATED].k2, sel[SATURATED].k3)
    return [
        ScenarioRun(section.section_id, label, d, states[label], coef)
        for label in MOISTURE_LEVELS
        for d in (0.0, section.delta, 1.0)
    ]


def with_section_delta(sec: PavementSection, delta: float) -> PavementSection:
    return replace(sec, delta=delta)

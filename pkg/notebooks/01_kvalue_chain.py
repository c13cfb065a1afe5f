# %% [markdown]
# # From base moisture to a k-value
#
# Walk one LTPP section through the chain: suction at equilibrium moisture,
# base resilient modulus, full-structure FWD basin, and the AREA-method
# modulus of subgrade reaction.

# %%
import warnings

import numpy as np

from rigidpave import ingest, plots
from rigidpave.deflection import SENSOR_OFFSETS, FwdLoad, full_structure_basin, winkler_plate_basin
from rigidpave.kvalue import base_modulus_pa, k_from_basin
from rigidpave.resilient_modulus import MrCoefficients
from rigidpave.slab_structure import transformed_section
from rigidpave.units import INCH

sections = {s.section_id: s for s in ingest.read_sections()}
scenarios = ingest.read_scenarios()
fx = sections["21-4025"]

# %% [markdown]
# The curve parameters rebuild the three moisture states.  The printed table
# values differ from the rebuilt ones, so warnings are expected here.

# %%
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    states = ingest.moisture_states(ingest.scenario_rows(scenarios, fx.section_id))
for label, st in states.items():
    print(f"{label:>18}: S={st.saturation:.3f}  suction={st.suction_kpa:9.1f} kPa  f={st.f:.2f}")

# %%
row = ingest.scenario_rows(scenarios, fx.section_id)[ingest.SATURATED]
coef = MrCoefficients(row.k1, row.k2, row.k3)
e_base = base_modulus_pa(states[ingest.EQUILIBRIUM], coef)
sec = fx.to_section().with_(e_base=e_base)
print(f"base modulus at equilibrium: {e_base / 1e6:.0f} MPa")

# %%
load = FwdLoad()
basin = full_structure_basin(sec, None, load, SENSOR_OFFSETS)
k = k_from_basin(basin, load.magnitude)
print(f"BA={k.basin_area:.2f} in  l_e={k.l_e:.2f} in  k={k.k_pci:.1f} pci")

# %% [markdown]
# An equivalent single slab on springs of that k should give nearly the same basin.

# %%
h_eq = transformed_section(sec).h_eq
plate = winkler_plate_basin(h_eq, sec.e_slab, sec.nu_slab, k.k_si, load, SENSOR_OFFSETS)
dev = (np.asarray(plate.deflections) / np.asarray(basin.deflections) - 1) * 100
print("deviation per sensor (%):", np.round(dev, 1))
plots.line_chart(
    "kvalue_chain_basin.svg", f"{fx.section_id} basin", "offset (in)", "deflection (mils)",
    [o / INCH for o in SENSOR_OFFSETS],
    {"full structure": [-d / INCH * 1e3 for d in basin.deflections],
     "equivalent slab": [-d / INCH * 1e3 for d in plate.deflections]},
)

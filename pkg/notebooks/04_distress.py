# %% [markdown]
# # Cracking and faulting projections
#
# Calibration constants are the usual national defaults; stresses are user
# inputs rather than slab-system analyses.

# %%
import warnings

from rigidpave import distress, ingest, studies
from rigidpave.deflection import FwdLoad
from rigidpave.slab_structure import transformed_section
from rigidpave.units import INCH, LBF

cases = [distress.FatigueCase(2e5, 300.0, 650.0), distress.FatigueCase(1e6, 250.0, 650.0)]
fd = distress.miner_damage(cases)
crk = distress.crack_fraction(fd)
print(f"FD={fd:.3g}  CRK={crk:.3f}  TCRACK={distress.total_crack(crk, 0.0):.1f}%")

# %% [markdown]
# Differential energy from Westergaard corner deflections on the section's k,
# then twelve months of faulting against a constant envelope.

# %%
fx = next(s for s in ingest.read_sections() if s.section_id == "27-4034")
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    run = studies.pick_run(studies.scenario_ks(fx, ingest.read_scenarios()), ingest.EQUILIBRIUM, fx.delta)
sec = fx.to_section().with_(e_base=run.e_base)
c = distress.winkler_corner_deflections(transformed_section(sec).h_eq, sec.e_slab, sec.nu_slab, run.k.k_si,
                                        FwdLoad(22000 * LBF / 2, 0.15), lte=0.5)
de = run.k.k_pci / 2 * ((c.loaded / INCH) ** 2 - (c.unloaded / INCH) ** 2)
series = distress.accumulate_faulting([distress.FaultingMonth(0.12, de)] * 12)
print(f"DE={de:.3g}; faulting after 12 months {series[-1]:.3g} in")

# %% [markdown]
# # Bond and moisture studies on eight LTPP sections

# %%
import warnings

from rigidpave import ingest, plots, studies

sections, scenarios = ingest.read_sections(), ingest.read_scenarios()
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    runs = {s.section_id: (s, studies.scenario_ks(s, scenarios)) for s in sections}

# %% [markdown]
# Bond, with equilibrium base moisture and no bond as the baseline.

# %%
bond = [studies.bond_sensitivity(s, r) for s, r in runs.values()]
for b in bond:
    print(f"{b.section_id}: delta={b.delta:.2f}  partial {b.partial_change:+.2f}%  full {b.full_change:+.2f}%")
plots.bar_chart("bond.svg", "k change with bond", "change (%)", [b.section_id for b in bond],
                {"partial": [b.partial_change for b in bond], "full": [b.full_change for b in bond]})

# %% [markdown]
# Drying the base, with each section's own bond ratio and the saturated base as the baseline.

# %%
moist = [studies.moisture_sensitivity(s, r) for s, r in runs.values()]
for m in moist:
    print(f"{m.section_id}: equilibrium {m.equilibrium_change:+.3f}%  80% equilibrium {m.dry_change:+.3f}%")

# %% [markdown]
# Agreement between the full structure and the equivalent slab on the backcalculated k.

# %%
for s, r in runs.values():
    v = studies.validate_section(s, r)
    flag = "ok" if v.passes() else "outside limits"
    print(s.section_id, " ".join(f"{d:+6.1f}" for d in v.deviation_pct), flag)

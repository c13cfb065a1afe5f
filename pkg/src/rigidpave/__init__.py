"""Modified subgrade k-value of partially bonded rigid pavements.

Moisture-dependent base modulus, equivalent-slab mechanics, FWD basin
forward models, AREA backcalculation, a neural-network surrogate and
MEPDG-style distress models.
"""

__version__ = "0.1.0"

"""Partially bonded slab/base section mechanics and interface contact terms.

Lengths are metres and stresses pascals.  Depths are measured down from the
slab surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import GeometryError, ParameterError


@dataclass(frozen=True)
class PavementSection:
    """Slab over base over subgrade, with slab/base bond ratio ``delta``."""

    h_s: float
    h_b: float
    e_slab: float
    e_base: float
    e_subgrade: float
    nu_slab: float = 0.15
    nu_base: float = 0.35
    nu_subgrade: float = 0.40
    delta: float = 0.0

    def __post_init__(self):
        for name in ("h_s", "h_b", "e_slab", "e_base", "e_subgrade"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("nu_slab", "nu_base", "nu_subgrade"):
            if not 0 <= getattr(self, name) < 0.5:
                raise ParameterError(f"{name} must lie in [0, 0.5), got {getattr(self, name)!r}")
        if not 0 <= self.delta <= 1:
            raise ParameterError(f"bond ratio must lie in [0, 1], got {self.delta!r}")

    def with_(self, **changes) -> "PavementSection":
        return replace(self, **changes)


@dataclass(frozen=True)
class TransformedSection:
    i_slab: float
    i_base: float
    i_tr: float
    z_bar: float
    h_eq: float
    #: composite-action term sum(A_i d_i^2), about the fully composite neutral axis
    coupling: float
    #: neutral axis of the fully composite section
    z_composite: float


@dataclass(frozen=True)
class ContactParams:
    """Coulomb interface inputs.  ``mu`` is None for an unbonded interface."""

    mu: float | None
    n_pressure: float
    tau_max: float
    k_l: float
    f_slip: float

    @property
    def unbonded(self) -> bool:
        return self.mu is None


def transformed_section(sec: PavementSection) -> TransformedSection:
    """Moments of inertia and equivalent thickness per metre width.

    The base is transformed to slab material with n = E_base / E_slab.  The
    composite term is taken about the fully composite centroid and scaled by
    the bond ratio; the reported neutral axis moves linearly from the slab
    mid-depth (no bond) to the composite centroid (full bond).
    """
    n = sec.e_base / sec.e_slab
    a_slab, a_base = sec.h_s, n * sec.h_b
    y_slab, y_base = sec.h_s / 2.0, sec.h_s + sec.h_b / 2.0
    z_c = (a_slab * y_slab + a_base * y_base) / (a_slab + a_base)
    i_slab = sec.h_s**3 / 12.0
    i_base = n * sec.h_b**3 / 12.0
    coupling = a_slab * (y_slab - z_c) ** 2 + a_base * (y_base - z_c) ** 2
    i_tr = i_slab + i_base + sec.delta * coupling
    h_eq = (12.0 * i_tr * (1.0 - sec.nu_slab**2)) ** (1.0 / 3.0)
    z_bar = y_slab + sec.delta * (z_c - y_slab)
    return TransformedSection(i_slab, i_base, i_tr, z_bar, h_eq, coupling, z_c)


def equivalent_thickness(sec: PavementSection) -> float:
    return transformed_section(sec).h_eq


def contact_pressure(P: float, h_s: float, a: float) -> float:
    """Vertical pressure at the slab/base interface under point load ``P``."""
    if not h_s > 0:
        raise ParameterError("slab thickness must be positive")
    return 3.0 * P * h_s**3 / (2.0 * math.pi * (h_s**2 + a**2) ** 2.5)


def interface_shear_capacity(P, h_s, h_b, a, z_bar, delta) -> float:
    """Limiting interface shear stress at radial distance ``a``.

    ``z_bar`` must lie strictly between ``h_s/2`` and ``h_s + h_b/2``.
    """
    if delta == 0:
        return 0.0
    below, above = z_bar - h_s / 2.0, h_s + h_b / 2.0 - z_bar
    if not (below > 0 and above > 0):
        raise GeometryError(
            f"neutral axis {z_bar!r} outside ({h_s / 2.0!r}, {h_s + h_b / 2.0!r})"
        )
    radial = a * h_s**2 / (h_s**2 + a**2) ** 2.5
    return delta * 3.0 * P / (2.0 * math.pi) * radial * h_b * above / (h_s * below)


def shear_stiffness(e_base: float, nu_base: float, h_b: float) -> float:
    """Horizontal interface shear stiffness k_l = pi G / (l nu) (Pa/m)."""
    if not nu_base > 0:
        raise ParameterError("interface shear stiffness is singular for a zero Poisson ratio")
    g = e_base / (2.0 * (1.0 + nu_base))
    length = (4.0 * h_b**3 * nu_base / math.pi) ** (1.0 / 3.0)
    return math.pi * g / (length * nu_base)


def contact_params(sec: PavementSection, P: float, a: float) -> ContactParams:
    """Friction coefficient, shear limit, stiffness and elastic slip for the interface.

    The shear limit is evaluated about the fully composite neutral axis so that
    it, and the elastic slip, stay linear in the bond ratio.
    """
    k_l = shear_stiffness(sec.e_base, sec.nu_base, sec.h_b)
    n_press = contact_pressure(P, sec.h_s, a)
    z_c = transformed_section(sec).z_composite
    tau = interface_shear_capacity(P, sec.h_s, sec.h_b, a, z_c, sec.delta)
    mu = n_press / tau if tau > 0 else None
    return ContactParams(mu=mu, n_pressure=n_press, tau_max=tau, k_l=k_l, f_slip=tau / k_l)

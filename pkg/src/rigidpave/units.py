"""Exact unit conversion constants used at module boundaries."""

INCH = 0.0254  # m
LBF = 4.4482216  # N
PSI = LBF / INCH**2  # Pa
PCI = 271447.14  # Pa/m per lbf/in^3
KPA_TO_CM_WATER = 10.1972  # cm of water head per kPa
MPA = 1.0e6


def in_to_m(x):
    return x * INCH


def m_to_in(x):
    return x / INCH


def psi_to_pa(x):
    return x * PSI


def pa_to_psi(x):
    return x / PSI


def pci_to_si(k):
    """Modulus of subgrade reaction, pci -> Pa/m."""
    return k * PCI


def si_to_pci(k):
    return k / PCI


def kpa_to_cm(h):
    """Suction head, kPa -> cm of water."""
    return h * KPA_TO_CM_WATER


def cm_to_kpa(h):
    return h / KPA_TO_CM_WATER

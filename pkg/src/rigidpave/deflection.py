"""Forward solvers for FWD surface deflection basins.

Three axisymmetric models are provided, all linear in the applied load:

* :func:`winkler_plate_basin` -- thin plate on a dense-liquid foundation,
  solved by finite volumes on a stretched radial grid with nodal spring
  reactions and a clamped edge at 20 radii of relative stiffness.
* :func:`halfspace_plate_basin` -- thin plate on an elastic half-space, by
  Hankel-transform quadrature.
* :func:`layered_basin` -- multilayer elastic continuum with optional
  interface shear springs, by Hankel-transform quadrature of layer basis
  solutions.

:func:`full_structure_basin` composes a :class:`PavementSection` into one of
the latter two and is the forward model used to generate k-value targets.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import sparse, special
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.sparse.linalg import spsolve

from .errors import ParameterError, SolverError
from .slab_structure import PavementSection, shear_stiffness, transformed_section

SENSOR_OFFSETS = (0.0, 0.3048, 0.6096, 0.9144)

#: full_structure_basin model names
LAYERED = "layered"
EQUIVALENT_PLATE = "equivalent-plate"


@dataclass(frozen=True)
class FwdLoad:
    magnitude: float = 40000.0
    radius: float = 0.15

    def __post_init__(self):
        if not (self.magnitude > 0 and self.radius > 0):
            raise ParameterError("load magnitude and radius must be positive")

    @property
    def pressure(self) -> float:
        return self.magnitude / (math.pi * self.radius**2)

    def scaled(self, magnitude: float) -> "FwdLoad":
        return FwdLoad(magnitude, self.radius)


@dataclass(frozen=True)
class DeflectionBasin:
    """Radial sensor offsets (m) and downward deflections (m)."""

    offsets: tuple = SENSOR_OFFSETS
    deflections: tuple = field(default_factory=tuple)

    def __post_init__(self):
        off = tuple(float(x) for x in self.offsets)
        dfl = tuple(float(x) for x in self.deflections)
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "deflections", dfl)
        if len(off) != len(dfl):
            raise ParameterError("offsets and deflections differ in length")
        if off and (off[0] != 0.0 or any(b <= a for a, b in zip(off, off[1:]))):
            raise ParameterError("offsets must start at 0 and increase strictly")

    def __len__(self):
        return len(self.offsets)

    @property
    def d0(self) -> float:
        return self.deflections[0]

    def scaled(self, factor: float) -> "DeflectionBasin":
        return DeflectionBasin(self.offsets, tuple(d * factor for d in self.deflections))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["offset_m", "deflection_m"])
        for r, d in zip(self.offsets, self.deflections):
            w.writerow([repr(r), repr(d)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "DeflectionBasin":
        text = Path(source).read_text() if not isinstance(source, str) or "\n" not in source else source
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        if rows[0] != ["offset_m", "deflection_m"]:
            raise ParameterError(f"unexpected basin header {rows[0]!r}")
        off, dfl = zip(*[(float(a), float(b)) for a, b in rows[1:]])
        return cls(off, dfl)


# ---------------------------------------------------------------------------
# plate on dense liquid


def flexural_rigidity(h: float, e: float, nu: float) -> float:
    return e * h**3 / (12.0 * (1.0 - nu**2))


def _stretched_grid(radius_out: float, h0: float, n: int) -> np.ndarray:
    """Nodes r = c sinh(beta s), s uniform on [0, 1], first spacing ~h0."""
    ratio = radius_out / (h0 * n)
    if ratio <= 1.0:
        return np.linspace(0.0, radius_out, n + 1)
    beta = brentq(lambda b: math.sinh(b) / b - ratio, 1e-9, 700.0)
    s = np.linspace(0.0, 1.0, n + 1)
    return radius_out * np.sinh(beta * s) / math.sinh(beta)


def _disk_overlap(lo: np.ndarray, hi: np.ndarray, a: float) -> np.ndarray:
    """Area of annuli [lo, hi] inside the disk r < a."""
    return math.pi * (np.clip(hi, 0, a) ** 2 - np.clip(lo, 0, a) ** 2)


def _winkler_solve(r: np.ndarray, d_flex: float, k: float, load: FwdLoad) -> np.ndarray:
    n = len(r) - 1
    mid = 0.5 * (r[1:] + r[:-1])
    lo = np.concatenate([[0.0], mid])
    hi = np.concatenate([mid, [r[-1]]])
    area = math.pi * (hi**2 - lo**2)
    # face transmissibilities 2 pi r_f / dr
    t = 2.0 * math.pi * mid / np.diff(r)

    # Laplacian operator on nodes 0..n with zero flux at r=0 and at r=R (clamped slope)
    diag = np.zeros(n + 1)
    diag[:-1] -= t
    diag[1:] -= t
    lap = sparse.diags([t, diag, t], [-1, 0, 1], shape=(n + 1, n + 1), format="csr")

    load_force = load.pressure * _disk_overlap(lo, hi, load.radius)

    # unknowns: w_0..w_{n-1} (w_n = 0), m_0..m_n
    lap_w = lap[:, :n]
    eye_m = sparse.diags(area)
    top = sparse.hstack([-lap_w, eye_m])
    bottom = sparse.hstack([sparse.diags(k * area[:n]), d_flex * lap[:n, :]])
    a_mat = sparse.vstack([top, bottom], format="csc")
    rhs = np.concatenate([np.zeros(n + 1), load_force[:n]])
    sol = spsolve(a_mat, rhs)
    w = np.concatenate([sol[:n], [0.0]])
    if not np.all(np.isfinite(w)):
        raise SolverError("non-finite plate deflection")
    return w


def _sample(r: np.ndarray, w: np.ndarray, offsets: Sequence[float]) -> np.ndarray:
    spline = CubicSpline(r, w, bc_type=((1, 0.0), (1, 0.0)))
    return spline(np.asarray(offsets, dtype=float))


def winkler_plate_basin(
    h_eq: float,
    e_slab: float,
    nu: float,
    k: float,
    load: FwdLoad = FwdLoad(),
    offsets: Sequence[float] = SENSOR_OFFSETS,
    *,
    nodes: int = 400,
    tol: float = 1e-4,
    max_levels: int = 7,
    refine: bool = True,
    domain_factor: float = 20.0,
) -> DeflectionBasin:
    """Deflection basin of a plate on springs of modulus ``k`` (Pa/m).

    The grid is doubled until every sampled deflection changes by less than
    ``tol`` relative to the centre deflection.  With ``refine=False`` a
    single solve on ``nodes`` intervals is returned.
    """
    if not (h_eq > 0 and e_slab > 0 and k > 0):
        raise ParameterError("thickness, modulus and k must be positive")
    d_flex = flexural_rigidity(h_eq, e_slab, nu)
    ell = (d_flex / k) ** 0.25
    radius_out = max(domain_factor * ell, 1.5 * max(offsets), 2.0 * load.radius)
    h0 = min(load.radius, ell) / 20.0

    prev = None
    n = nodes
    change = math.inf
    for _ in range(max_levels if refine else 1):
        r = _stretched_grid(radius_out, h0 * nodes / n, n)
        cur = _sample(r, _winkler_solve(r, d_flex, k, load), offsets)
        if not refine:
            return DeflectionBasin(tuple(offsets), tuple(cur))
        if prev is not None:
            change = float(np.max(np.abs(cur - prev)) / abs(cur[0]))
            if change < tol:
                return DeflectionBasin(tuple(offsets), tuple(cur))
        prev = cur
        n *= 2
    raise SolverError("Winkler plate grid refinement did not converge", residual=change)


# ---------------------------------------------------------------------------
# Hankel-transform quadrature shared by the continuum models

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)

#: Quadrature nodes allowed before refinement gives up.
MAX_QUADRATURE_NODES = 2_000_000


def _panel_nodes(xi_max: float, n_panels: int):
    edges = np.linspace(0.0, xi_max, n_panels + 1)
    half = 0.5 * np.diff(edges)
    centre = 0.5 * (edges[1:] + edges[:-1])
    xi = (centre[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    wts = (half[:, None] * _GL_W[None, :]).ravel()
    return xi, wts


def _hankel_integrate(kernel, offsets, xi_max, period, tol, max_levels, what, baseline=0.0):
    """Integrate kernel(xi) * J0(xi r) * xi dxi on [0, xi_max] for each offset.

    Panels start at half the oscillation ``period`` and are halved until
    successive estimates agree to ``tol`` relative to the largest value of
    ``baseline + integral``.
    """
    r = np.asarray(offsets, dtype=float)
    n_panels = max(8, int(math.ceil(2.0 * xi_max / period)))
    prev = None
    change = math.inf
    for _ in range(max_levels):
        if n_panels * _GL_X.size > MAX_QUADRATURE_NODES:
            raise SolverError(f"{what} quadrature needs more than {MAX_QUADRATURE_NODES} nodes", residual=change)
        xi, wts = _panel_nodes(xi_max, n_panels)
        kern = kernel(xi) * xi * wts
        cur = special.j0(np.outer(r, xi)) @ kern
        if prev is not None:
            change = float(np.max(np.abs(cur - prev)) / np.max(np.abs(baseline + cur)))
            if change < tol:
                return cur
        prev = cur
        n_panels *= 2
    raise SolverError(f"{what} quadrature did not converge", residual=change)


def _load_transform(xi, load: FwdLoad):
    """Hankel transform (order 0) of a uniform circular pressure."""
    return load.pressure * load.radius * special.j1(xi * load.radius) / xi


def halfspace_plate_basin(
    h_eq: float,
    e_slab: float,
    nu: float,
    e_subgrade: float,
    nu_subgrade: float,
    load: FwdLoad = FwdLoad(),
    offsets: Sequence[float] = SENSOR_OFFSETS,
    *,
    tol: float = 1e-4,
    max_levels: int = 8,
) -> DeflectionBasin:
    """Plate of thickness ``h_eq`` bonded to nothing, resting on an elastic half-space."""
    if not (h_eq > 0 and e_slab > 0 and e_subgrade > 0):
        raise ParameterError("thickness and moduli must be positive")
    d_flex = flexural_rigidity(h_eq, e_slab, nu)
    e_red = e_subgrade / (2.0 * (1.0 - nu_subgrade**2))
    ell = (d_flex / e_red) ** (1.0 / 3.0)
    xi_max = 200.0 / ell
    period = 2.0 * math.pi / (max(offsets) + load.radius)

    def kernel(xi):
        return _load_transform(xi, load) / (d_flex * xi**4 + e_red * xi)

    w = _hankel_integrate(kernel, offsets, xi_max, period, tol, max_levels, "half-space plate")
    return DeflectionBasin(tuple(offsets), tuple(w))


@dataclass(frozen=True)
class Layer:
    """Elastic layer; ``thickness=None`` marks the bottom half-space."""

    modulus: float
    poisson: float
    thickness: float | None = None


def _basis_states(xi, g, nu, zeta, h):
    """State vectors [U, W, T, S] of the homogeneous layer solutions.

    Returns shape (n_xi, 4, 4) for a finite layer (two solutions decaying
    downward from the top, two decaying upward from the bottom) or
    (n_xi, 4, 2) for the half-space.  ``zeta`` is depth below the layer top.
    """
    lam = 2.0 * g * nu / (1.0 - 2.0 * nu)
    kap = 3.0 - 4.0 * nu
    families = [(-1.0, zeta)] if h is None else [(-1.0, zeta), (1.0, zeta - h)]
    cols = []
    for sgn, loc in families:
        e = np.exp(sgn * xi * loc)
        t = xi * loc
        for a_, b_ in ((1.0, 0.0), (0.0, 1.0)):
            u = (a_ + b_ * t) * e
            du = (b_ * xi + sgn * xi * (a_ + b_ * t)) * e
            if sgn < 0:
                wq = a_ + b_ * kap + b_ * t
                dwq = b_ * xi
            else:
                wq = -a_ + b_ * kap - b_ * t
                dwq = -b_ * xi
            w = wq * e
            dw = (dwq + sgn * xi * wq) * e
            tau = g * (du - xi * w)
            sig = (lam + 2.0 * g) * dw + lam * xi * u
            cols.append(np.stack([u, w, tau, sig], axis=-1))
    return np.stack(cols, axis=-1)


def _layered_surface_transform(xi, layers: Sequence[Layer], slip: Sequence[float], load: FwdLoad):
    """Transformed surface deflection W(xi, 0) of the layered system."""
    n_lay = len(layers)
    sizes = [4 if lay.thickness is not None else 2 for lay in layers]
    n_unk = sum(sizes)
    m = np.zeros((len(xi), n_unk, n_unk))
    rhs = np.zeros((len(xi), n_unk))
    e_ref = layers[0].modulus

    def states(i, zeta):
        lay = layers[i]
        g = lay.modulus / (2.0 * (1.0 + lay.poisson))
        return _basis_states(xi, g, lay.poisson, zeta, lay.thickness)

    top = states(0, 0.0)
    m[:, 0, : sizes[0]] = top[:, 2, :] / e_ref
    m[:, 1, : sizes[0]] = top[:, 3, :] / e_ref
    rhs[:, 1] = -_load_transform(xi, load) / e_ref
    row, col = 2, 0
    for i in range(n_lay - 1):
        bot = states(i, layers[i].thickness)
        nxt = states(i + 1, 0.0)
        c0, c1, c2 = col, col + sizes[i], col + sizes[i] + sizes[i + 1]
        m[:, row, c0:c1] = bot[:, 1, :]
        m[:, row, c1:c2] = -nxt[:, 1, :]
        for comp in (2, 3):
            m[:, row + comp - 1, c0:c1] = bot[:, comp, :] / e_ref
            m[:, row + comp - 1, c1:c2] = -nxt[:, comp, :] / e_ref
        ks = slip[i]
        if math.isinf(ks):
            m[:, row + 3, c0:c1] = bot[:, 0, :]
            m[:, row + 3, c1:c2] = -nxt[:, 0, :]
        else:
            # interface shear = ks * (u_lower - u_upper)
            m[:, row + 3, c0:c1] = (bot[:, 2, :] + ks * bot[:, 0, :]) / e_ref
            m[:, row + 3, c1:c2] = -ks * nxt[:, 0, :] / e_ref
        row += 4
        col = c1
    coef = np.linalg.solve(m, rhs[..., None])[..., 0]
    return np.einsum("nj,nj->n", top[:, 1, :], coef[:, : sizes[0]])


def _halfspace_surface(offsets, e, nu, load: FwdLoad) -> np.ndarray:
    """Closed-form surface deflection of a homogeneous half-space under a uniform disk load."""
    a, p = load.radius, load.pressure
    c = 4.0 * (1.0 - nu**2) * p / (math.pi * e)
    out = []
    for r in offsets:
        if r <= a:
            out.append(c * a * special.ellipe((r / a) ** 2))
        else:
            m = (a / r) ** 2
            out.append(c * r * (special.ellipe(m) - (1.0 - m) * special.ellipk(m)))
    return np.array(out)


def layered_basin(
    layers: Sequence[Layer],
    slip: Sequence[float] | None = None,
    load: FwdLoad = FwdLoad(),
    offsets: Sequence[float] = SENSOR_OFFSETS,
    *,
    tol: float = 1e-4,
    max_levels: int = 8,
) -> DeflectionBasin:
    """Surface basin of an axisymmetric layered elastic system.

    Parameters
    ----------
    layers
        Top to bottom; only the last layer may (and must) have
        ``thickness=None``.
    slip
        Interface shear stiffness (Pa/m) between consecutive layers;
        ``math.inf`` for a fully bonded interface and 0 for frictionless
        contact.  Defaults to all bonded.

    Notes
    -----
    The homogeneous half-space response of the top-layer material is
    subtracted from the transform and added back in closed form, leaving an
    integrand that decays like exp(-2 xi h1).
    """
    layers = list(layers)
    if not layers or layers[-1].thickness is not None:
        raise ParameterError("the last layer must be a half-space (thickness=None)")
    if any(lay.thickness is None or lay.thickness <= 0 for lay in layers[:-1]):
        raise ParameterError("finite layers need positive thickness")
    if any(not (lay.modulus > 0 and 0 <= lay.poisson < 0.5) for lay in layers):
        raise ParameterError("layer modulus must be positive and Poisson ratio in [0, 0.5)")
    slip = [math.inf] * (len(layers) - 1) if slip is None else list(slip)
    if len(slip) != len(layers) - 1 or any(s < 0 for s in slip):
        raise ParameterError("need one non-negative slip stiffness per interface")

    top = layers[0]
    w_top = _halfspace_surface(offsets, top.modulus, top.poisson, load)
    if len(layers) == 1:
        return DeflectionBasin(tuple(offsets), tuple(w_top))

    h_top = top.thickness
    xi_max = 20.0 / h_top
    coef_top = 2.0 * (1.0 - top.poisson**2) / top.modulus
    period = 2.0 * math.pi / (max(offsets) + load.radius)

    def kernel(xi):
        full = _layered_surface_transform(xi, layers, slip, load)
        return full - _load_transform(xi, load) * coef_top / xi

    corr = _hankel_integrate(
        kernel, offsets, xi_max, period, tol, max_levels, "layered", baseline=w_top
    )
    return DeflectionBasin(tuple(offsets), tuple(w_top + corr))


# ---------------------------------------------------------------------------


def interface_slip_stiffness(sec: PavementSection, e_base: float | None = None) -> float:
    """Slab/base shear spring: bond ratio times the interface shear stiffness."""
    e_b = sec.e_base if e_base is None else e_base
    return sec.delta * shear_stiffness(e_b, sec.nu_base, sec.h_b)


def full_structure_basin(
    sec: PavementSection,
    e_base: float | None = None,
    load: FwdLoad = FwdLoad(),
    offsets: Sequence[float] = SENSOR_OFFSETS,
    *,
    model: str = LAYERED,
    tol: float = 1e-4,
) -> DeflectionBasin:
    """Forward "full pavement" basin used to generate k-value targets.

    ``e_base`` overrides the section's base modulus (e.g. a moisture-adjusted
    resilient modulus, in Pa).

    ``model="layered"`` (default) treats slab, base and subgrade as elastic
    layers; the slab/base interface carries a shear spring of stiffness
    ``delta * k_l`` and the base/subgrade interface is bonded.
    ``model="equivalent-plate"`` instead puts a plate of the bond-dependent
    equivalent thickness on the subgrade half-space.
    """
    if e_base is not None:
        sec = sec.with_(e_base=e_base)
    if model == EQUIVALENT_PLATE:
        h_eq = transformed_section(sec).h_eq
        return halfspace_plate_basin(
            h_eq, sec.e_slab, sec.nu_slab, sec.e_subgrade, sec.nu_subgrade, load, offsets, tol=tol
        )
    if model != LAYERED:
        raise ParameterError(f"unknown forward model {model!r}")
    layers = [
        Layer(sec.e_slab, sec.nu_slab, sec.h_s),
        Layer(sec.e_base, sec.nu_base, sec.h_b),
        Layer(sec.e_subgrade, sec.nu_subgrade, None),
    ]
    slip = [interface_slip_stiffness(sec), math.inf]
    return layered_basin(layers, slip, load, offsets, tol=tol)

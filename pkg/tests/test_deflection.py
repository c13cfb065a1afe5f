import math

import numpy as np
import pytest
from scipy import special
from scipy.integrate import quad

from rigidpave.deflection import (
    EQUIVALENT_PLATE,
    LAYERED,
    SENSOR_OFFSETS,
    DeflectionBasin,
    FwdLoad,
    Layer,
    flexural_rigidity,
    full_structure_basin,
    halfspace_plate_basin,
    layered_basin,
    winkler_plate_basin,
)
from rigidpave.errors import ParameterError, SolverError
from rigidpave.slab_structure import PavementSection, transformed_section
from rigidpave.units import INCH, PSI


def kelvin_basin(h, e, nu, k, load, offsets):
    """Closed-form Winkler plate deflection under a uniform disk load."""
    ell = (flexural_rigidity(h, e, nu) / k) ** 0.25
    al, q = load.radius / ell, load.pressure
    out = []
    for r in offsets:
        rho = r / ell
        if r <= load.radius:
            w = q / k * (1 + al * (special.kerp(al) * special.ber(rho) - special.keip(al) * special.bei(rho)))
        else:
            w = q / k * al * (special.berp(al) * special.ker(rho) - special.beip(al) * special.kei(rho))
        out.append(w)
    return np.array(out)


@pytest.mark.parametrize("h, k", [(0.25, 5e7), (0.18, 2e7), (0.33, 1.5e8)])
def test_winkler_matches_kelvin(h, k):
    load = FwdLoad()
    offs = (0.0, 0.1, 0.15, 0.3048, 0.6096, 0.9144, 1.5)
    got = np.array(winkler_plate_basin(h, 3e10, 0.15, k, load, offs).deflections)
    ref = kelvin_basin(h, 3e10, 0.15, k, load, offs)
    assert np.max(np.abs(got - ref)) <= 1e-4 * ref[0]


def test_winkler_point_load_limit():
    h, e, nu, k = 0.25, 3e10, 0.15, 5e7
    ell = (flexural_rigidity(h, e, nu) / k) ** 0.25
    load = FwdLoad(40000.0, 0.01 * ell)
    w0 = winkler_plate_basin(h, e, nu, k, load, SENSOR_OFFSETS).d0
    assert w0 == pytest.approx(40000.0 / (8 * k * ell**2), rel=0.02)


def test_winkler_stiffer_foundation_and_far_field():
    b1 = winkler_plate_basin(0.25, 3e10, 0.15, 5e7)
    b2 = winkler_plate_basin(0.25, 3e10, 0.15, 1e8)
    assert b2.d0 < b1.d0
    far = winkler_plate_basin(0.25, 3e10, 0.15, 5e7, offsets=(0.0, 3.0))
    assert abs(far.deflections[1]) <= 0.05 * far.d0


def test_winkler_load_linearity_and_monotone_basin():
    b1 = winkler_plate_basin(0.25, 3e10, 0.15, 5e7, FwdLoad(40000.0))
    b2 = winkler_plate_basin(0.25, 3e10, 0.15, 5e7, FwdLoad(80000.0))
    assert np.allclose(b2.deflections, 2 * np.asarray(b1.deflections), rtol=1e-10, atol=0)
    assert np.all(np.diff(b1.deflections) < 0)


def test_winkler_non_convergence_reports_residual():
    with pytest.raises(SolverError) as err:
        winkler_plate_basin(0.25, 3e10, 0.15, 5e7, tol=1e-300, max_levels=2)
    assert err.value.residual is not None and "residual" in str(err.value)


def test_winkler_rejects_bad_input():
    with pytest.raises(ParameterError):
        winkler_plate_basin(0.25, 3e10, 0.15, 0.0)


def test_halfspace_surface_oracles():
    # homogeneous half-space: layered solver with one layer is the closed form
    e, nu, load = 1e8, 0.4, FwdLoad()
    q, a = load.pressure, load.radius
    b = layered_basin([Layer(e, nu)], None, load, (0.0, a, 50.0))
    assert b.deflections[0] == pytest.approx(2 * (1 - nu**2) * q * a / e, rel=1e-12)
    assert b.deflections[1] == pytest.approx(4 * (1 - nu**2) * q * a / (math.pi * e), rel=1e-12)
    assert b.deflections[2] == pytest.approx((1 - nu**2) * load.magnitude / (math.pi * e * 50.0), rel=1e-5)


def test_plate_on_half_space_against_adaptive_quadrature():
    # same transform integral, evaluated by adaptive Gauss-Kronrod between J1 zeros
    h, e, nu, es, nus, load = 0.25, 3e10, 0.15, 1e8, 0.4, FwdLoad()
    d = flexural_rigidity(h, e, nu)
    e_red = es / (2 * (1 - nus**2))
    ell = (d / e_red) ** (1 / 3)

    def integrand(xi):
        return load.pressure * load.radius * special.j1(xi * load.radius) / (d * xi**4 + e_red * xi)

    edges = np.concatenate([[0.0], special.jn_zeros(1, 400) / load.radius])
    edges = edges[edges < 400 / ell]
    w0 = sum(quad(integrand, lo, hi, epsabs=0, epsrel=1e-12)[0] for lo, hi in zip(edges, edges[1:]))
    got = halfspace_plate_basin(h, e, nu, es, nus, load, (0.0,), tol=1e-7).d0
    assert got == pytest.approx(w0, rel=1e-5)


def test_degenerate_plate_fails_cleanly():
    with pytest.raises(SolverError):
        halfspace_plate_basin(1e-4, 1e6, 0.15, 1e8, 0.4, FwdLoad())


def test_homogeneous_stack_equals_half_space():
    e, nu = 2e8, 0.35
    stack = layered_basin([Layer(e, nu, 0.25), Layer(e, nu, 0.15), Layer(e, nu)], [math.inf, math.inf])
    bare = layered_basin([Layer(e, nu)])
    assert np.allclose(stack.deflections, bare.deflections, rtol=1e-6)


def test_layered_thick_top_and_thin_top_limits():
    top, bot = Layer(3e9, 0.3, 50.0), Layer(1e8, 0.4)
    thick = np.asarray(layered_basin([top, bot]).deflections)
    bare = np.asarray(layered_basin([Layer(3e9, 0.3)]).deflections)
    # a deep soft layer only adds a near-uniform settlement of order P / (pi E_bottom H)
    shift = thick - bare
    assert 0 < shift.min() and shift.max() < 40000 / (math.pi * 1e8 * 50.0)
    assert np.ptp(shift) < 1e-3 * bare[0]
    thin = layered_basin([Layer(3e9, 0.3, 1e-4), bot])
    assert np.allclose(thin.deflections, layered_basin([bot]).deflections, rtol=2e-3)


def test_layered_slip_ordering_and_continuity():
    layers = [Layer(3e10, 0.15, 0.25), Layer(2e8, 0.35, 0.15), Layer(1e8, 0.4)]
    free = layered_basin(layers, [0.0, math.inf])
    part = layered_basin(layers, [1e9, math.inf])
    bond = layered_basin(layers, [math.inf, math.inf])
    huge = layered_basin(layers, [1e18, math.inf])
    assert np.all(np.asarray(free.deflections) > np.asarray(part.deflections))
    assert np.all(np.asarray(part.deflections) > np.asarray(bond.deflections))
    assert np.allclose(huge.deflections, bond.deflections, rtol=1e-6)


def test_layered_matches_plate_theory_away_from_load():
    # plate theory assumes a frictionless slab/support contact and no through-thickness strain
    layers = [Layer(3e10, 0.15, 0.2), Layer(1e8, 0.4)]
    cont = np.asarray(layered_basin(layers, [0.0]).deflections)
    plate = np.asarray(halfspace_plate_basin(0.2, 3e10, 0.15, 1e8, 0.4, FwdLoad()).deflections)
    rel = cont / plate - 1
    assert np.all(np.abs(rel) < 0.04)
    assert abs(rel[-1]) < 5e-3


def test_layered_validation():
    with pytest.raises(ParameterError):
        layered_basin([Layer(1e8, 0.3, 0.2)])
    with pytest.raises(ParameterError):
        layered_basin([Layer(1e8, 0.3, 0.2), Layer(1e8, 0.3)], [1.0, 2.0])


GOLDEN_38 = """offset_m,deflection_m
0.0,0.00010737482180766487
0.3048,9.744870761724019e-05
0.6096,8.3817152628459e-05
0.9144,7.037617822011043e-05
"""

SEC38 = PavementSection(8.5 * INCH, 3.8 * INCH, 6.1e6 * PSI, 30000 * PSI, 24000 * PSI, delta=0.37)


def test_full_structure_equivalent_plate_composition():
    h = transformed_section(SEC38).h_eq
    direct = halfspace_plate_basin(h, SEC38.e_slab, 0.15, SEC38.e_subgrade, 0.40, FwdLoad())
    comp = full_structure_basin(SEC38, model=EQUIVALENT_PLATE)
    assert comp.deflections == direct.deflections


@pytest.mark.parametrize("model", [LAYERED, EQUIVALENT_PLATE])
def test_full_structure_bond_and_stiffness_monotone(model):
    d0 = full_structure_basin(SEC38.with_(delta=0.0), model=model).d0
    d1 = full_structure_basin(SEC38.with_(delta=1.0), model=model).d0
    assert d1 < d0
    base = np.asarray(full_structure_basin(SEC38, model=model).deflections)
    for field_ in ("e_slab", "e_base", "e_subgrade"):
        stiffer = full_structure_basin(SEC38.with_(**{field_: 2 * getattr(SEC38, field_)}), model=model)
        assert np.all(np.asarray(stiffer.deflections) < base)
    assert np.all(np.diff(base) < 0)


def test_full_structure_load_linearity():
    b1 = full_structure_basin(SEC38)
    b2 = full_structure_basin(SEC38, load=FwdLoad(80000.0))
    assert np.allclose(b2.deflections, 2 * np.asarray(b1.deflections), rtol=1e-10, atol=0)


def test_full_structure_unknown_model():
    with pytest.raises(ParameterError):
        full_structure_basin(SEC38, model="abaqus")


def test_rigid_plate_flattens_basin():
    b = halfspace_plate_basin(0.25, 3e16, 0.15, 1e8, 0.4, FwdLoad())
    assert b.deflections[-1] / b.d0 > 0.99


def test_01_0606_basin_against_backcalculated_winkler():
    from rigidpave.kvalue import k_from_basin

    sec = PavementSection(10.3 * INCH, 6.3 * INCH, 7.89e6 * PSI, 22000 * PSI, 47000 * PSI, delta=0.5)
    for model in (LAYERED, EQUIVALENT_PLATE):
        full = full_structure_basin(sec, model=model)
        assert 3e-5 <= full.d0 <= 5e-4
        k = k_from_basin(full, FwdLoad().magnitude).k_si
        wink = winkler_plate_basin(transformed_section(sec).h_eq, sec.e_slab, 0.15, k)
        assert wink.d0 == pytest.approx(full.d0, rel=0.15)


def test_golden_basin_38_3006(tmp_path):
    # archived after the first verified run of the layered model
    golden = DeflectionBasin.from_csv(GOLDEN_38)
    got = full_structure_basin(SEC38)
    assert np.allclose(got.deflections, golden.deflections, rtol=1e-9, atol=0)
    path = tmp_path / "b.csv"
    got.to_csv(path)
    assert DeflectionBasin.from_csv(path) == got


def test_basin_validation():
    with pytest.raises(ParameterError):
        DeflectionBasin((0.0, 0.3), (1.0,))
    with pytest.raises(ParameterError):
        DeflectionBasin((0.1, 0.3), (1.0, 0.5))

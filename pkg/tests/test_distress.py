import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rigidpave import distress
from rigidpave.deflection import FwdLoad
from rigidpave.errors import ClampWarning, DomainError, FixtureError, ParameterError

# exact rational recursion of the faulting increments, written out by hand
def _fault_oracle(c34, faultmax, de, n):
    c34, fm, de = Fraction(c34), Fraction(faultmax), Fraction(de)
    fault, out = Fraction(0), []
    for _ in range(n):
        fault += c34 * (fm - fault) ** 2 * de
        out.append(fault)
    return out


def test_crack_fraction_spot_values():
    assert distress.crack_fraction(1.0) == 0.5
    assert distress.crack_fraction(0.0) == 0.0
    # 1 / (1 + 0.25**-1.68), evaluated to 20 digits
    assert distress.crack_fraction(0.25) == pytest.approx(0.0887515631573489680820, rel=1e-14)


def test_total_crack_spot_values():
    assert distress.total_crack(0.5, 0.5) == 75.0
    assert distress.total_crack(0.0, 0.0) == 0.0
    assert distress.total_crack(1.0, 0.3) == 100.0


def test_allowable_loads_oracle():
    # 10**(2 * 2**1.22 + 0.4371)
    assert distress.allowable_loads(1000.0, 500.0) == pytest.approx(124748.216659221988, rel=1e-12)


def test_differential_energy_examples():
    assert distress.differential_energy(distress.CornerDeflections(0.02, 0.02, 150.0)) == 0.0
    assert distress.differential_energy(distress.CornerDeflections(0.03, 0.01, 100.0)) == pytest.approx(0.04, rel=1e-12)
    de1 = distress.differential_energy(distress.CornerDeflections(0.03, 0.01, 100.0))
    de2 = distress.differential_energy(distress.CornerDeflections(0.03, 0.01, 200.0))
    assert de2 == pytest.approx(2 * de1, rel=1e-15)


def test_faulting_hand_recursion():
    months = [distress.FaultingMonth(0.1, 0.04)] * 3
    got = distress.accumulate_faulting(months, c34=0.005)
    want = _fault_oracle("0.005", "0.1", "0.04", 3)
    assert [float(w) for w in want] == pytest.approx([2e-06, 3.9999200008e-06, 5.99976000719984e-06], abs=1e-16)
    for g, w in zip(got, want):
        assert abs(g - float(w)) <= 1e-10


def test_faulting_zero_de_and_fixed_point():
    assert distress.accumulate_faulting([distress.FaultingMonth(0.1, 0.0)] * 4) == [0.0] * 4
    series = distress.accumulate_faulting([distress.FaultingMonth(0.1, 1.0)] * 3, initial=0.1)
    assert series == [0.1, 0.1, 0.1]


def test_faulting_overshoot_is_clamped():
    months = [distress.FaultingMonth(0.05, 5000.0)] * 2
    with pytest.warns(ClampWarning):
        series = distress.accumulate_faulting(months, c34=0.005)
    assert series[0] == pytest.approx(0.05)
    assert all(f <= 0.05 + 1e-15 for f in series)


@given(
    st.floats(0.01, 0.5),
    st.floats(0.0, 50.0),
    st.integers(1, 60),
)
def test_faulting_monotone_and_bounded(fm, de, n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClampWarning)
        s = distress.accumulate_faulting([distress.FaultingMonth(fm, de)] * n)
    assert all(b >= a for a, b in zip(s, s[1:]))
    assert s[-1] <= fm * (1 + 1e-12)


@given(st.floats(1e-6, 1e3), st.floats(1e-6, 1e3))
def test_crack_fraction_strictly_increasing(a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    assert distress.crack_fraction(lo) <= distress.crack_fraction(hi)
    assert 0.0 < distress.crack_fraction(lo) < 1.0


@given(st.floats(0, 1), st.floats(0, 1))
def test_total_crack_symmetric_and_dominant(a, b):
    t = distress.total_crack(a, b)
    assert t == distress.total_crack(b, a)
    assert t >= max(a, b) * 100.0 - 1e-12


@given(st.lists(st.tuples(st.floats(0, 1e6), st.floats(100, 900), st.floats(500, 1000)), min_size=1, max_size=12),
       st.randoms())
def test_miner_permutation_invariant_and_additive(rows, rnd):
    cases = [distress.FatigueCase(n, s, mr) for n, s, mr in rows]
    shuffled = cases[:]
    rnd.shuffle(shuffled)
    total = distress.miner_damage(cases)
    assert distress.miner_damage(shuffled) == pytest.approx(total, rel=1e-12, abs=1e-300)
    half = len(cases) // 2
    parts = distress.miner_damage(cases[:half]) + distress.miner_damage(cases[half:])
    assert parts == pytest.approx(total, rel=1e-12, abs=1e-300)


@given(st.floats(1e-4, 1.0), st.floats(0.0, 1.0), st.floats(0.1, 10.0))
def test_de_homogeneity(loaded, ratio, s):
    c = distress.CornerDeflections(loaded, loaded * ratio, 250.0)
    c2 = distress.CornerDeflections(loaded * s, loaded * ratio * s, 250.0)
    assert distress.differential_energy(c2) == pytest.approx(s * s * distress.differential_energy(c), rel=1e-9)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        distress.CornerDeflections(0.01, 0.02, 100.0)
    with pytest.raises(ParameterError):
        distress.crack_fraction(-0.1)
    with pytest.raises(ParameterError):
        distress.total_crack(1.2, 0.0)
    with pytest.raises(ParameterError):
        distress.FatigueCase(-1, 300, 650)
    with pytest.raises(ParameterError):
        distress.FaultingMonth(-0.1, 1.0)


def test_corner_deflections_split_by_lte():
    load = FwdLoad(magnitude=48930.0, radius=0.15)
    c = distress.winkler_corner_deflections(0.25, 3e10, 0.15, 5e7, load, lte=0.6)
    assert c.unloaded == pytest.approx(0.6 * c.loaded)
    free = distress.winkler_corner_deflections(0.25, 3e10, 0.15, 5e7, load, lte=0.0)
    assert c.loaded == pytest.approx(free.loaded / 1.6)
    ell = (3e10 * 0.25**3 / (12 * (1 - 0.15**2)) / 5e7) ** 0.25
    assert free.loaded == pytest.approx(48930.0 / (5e7 * ell**2) * (1.1 - 0.88 * math.sqrt(2) * 0.15 / ell))


def test_csv_readers(tmp_path):
    p = tmp_path / "cases.csv"
    p.write_text("# comment\nlabel,applied_n,stress_psi,modulus_rupture_psi\nA,1000,350,650\nB,2e5,420,650\n")
    cases = distress.read_fatigue_cases(p)
    assert [c.label for c in cases] == ["A", "B"] and cases[1].applied_n == 2e5
    q = tmp_path / "months.csv"
    q.write_text("label,faultmax_in,de\nm1,0.1,0.04\n")
    assert distress.read_faulting_months(q)[0].de == 0.04
    bad = tmp_path / "bad.csv"
    bad.write_text("label,n,stress\nA,1,2\n")
    with pytest.raises(FixtureError):
        distress.read_fatigue_cases(bad)
    bad.write_text("label,applied_n,stress_psi,modulus_rupture_psi\nA,x,350,650\n")
    with pytest.raises(FixtureError, match="row 2"):
        distress.read_fatigue_cases(bad)

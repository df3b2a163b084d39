import csv
import io
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from phi4waves.errors import DomainError, UnsupportedField
from phi4waves.evolve import (
    EvolveConfig,
    FieldState,
    Perturbation,
    advance,
    charge,
    dt_max,
    energy,
    make_perturbation,
    momentum,
    orbital_distance,
    parity_defect,
    run_experiment,
    step,
    wave_state,
    write_trace_csv,
    x_norm,
)
from phi4waves.fourier import grid
from phi4waves.stability import charge_integral_complex, momentum_integral_sn
from phi4waves.wave_families import Family, solve_family

PI = math.pi


def _state(phi1, phi2, L, real=True, t=0.0):
    return FieldState(t, L, phi1.size, np.asarray(phi1, complex), np.asarray(phi2, complex), real)


@pytest.fixture(scope="module")
def sn():
    return solve_family(Family.SN_SUBLUMINAL, 4 * PI, 0.5)


@pytest.fixture(scope="module")
def cx():
    return solve_family(Family.SN_COMPLEX_STANDING, 2 * PI, 1.0)


def _max_diff(a, b):
    return max(np.max(np.abs(a.phi1 - b.phi1)), np.max(np.abs(a.phi2 - b.phi2)))


# --- conserved quantities ------------------------------------------------

def test_energy_examples():
    L, N = 2 * PI, 64
    assert energy(_state(np.ones(N), np.zeros(N), L)) == 0.0
    assert energy(_state(np.zeros(N), np.zeros(N), L)) == pytest.approx(L / 4, rel=1e-15)
    # unit-modulus complex constant is also a vacuum
    assert energy(_state(np.full(N, np.exp(0.3j)), np.zeros(N), L, real=False)) == pytest.approx(0.0, abs=1e-15)


def test_momentum_matches_closed_form(sn):
    st_ = wave_state(sn, 256)
    assert momentum(st_) == pytest.approx(-sn.c * momentum_integral_sn(sn.c, sn.L), rel=1e-10)


def test_charge_matches_closed_form(cx):
    st_ = wave_state(cx, 256)
    assert charge(st_) == pytest.approx(cx.c * charge_integral_complex(cx.c, cx.L), rel=1e-10)
    assert charge(wave_state(solve_family(Family.SN_SUBLUMINAL, 4 * PI, 0.5), 64)) == 0.0


def test_momentum_needs_real_field(cx):
    with pytest.raises(UnsupportedField):
        momentum(wave_state(cx, 64))


# --- time stepping -------------------------------------------------------

def test_zero_field_is_fixed():
    N, L = 64, 2 * PI
    z = _state(np.zeros(N), np.zeros(N), L)
    out = advance(z, 0.01, 50)
    assert np.all(out.phi1 == 0) and np.all(out.phi2 == 0)
    assert out.t == pytest.approx(0.5)


def test_vacuum_stays_close():
    # the splitting moves the equilibrium by O(dt^2), nothing grows
    N, L, dt = 64, 2 * PI, 0.01
    out = advance(_state(np.ones(N), np.zeros(N), L), dt, 1000)
    assert max(np.max(np.abs(out.phi1 - 1)), np.max(np.abs(out.phi2))) < 0.2 * dt ** 2


@pytest.mark.parametrize("family, L, c", [(Family.SN_SUBLUMINAL, 4 * PI, 0.5), (Family.SN_COMPLEX_STANDING, 2 * PI, 1.0)])
def test_short_run_tracks_exact_solution(family, L, c):
    p = solve_family(family, L, c)
    out = advance(wave_state(p, 128), 0.01, 100)
    # second-order error, larger for the faster complex rotation
    assert _max_diff(out, wave_state(p, 128, t=1.0)) <= 2e-5 * p.omega


def test_second_order_convergence(sn):
    exact = wave_state(sn, 128, t=1.0)
    errs = []
    for dt in (0.01, 0.005, 0.0025):
        out = advance(wave_state(sn, 128), dt, int(round(1.0 / dt)))
        errs.append(_max_diff(out, exact))
    for a, b in zip(errs, errs[1:]):
        assert 3.5 < a / b < 4.5


def test_time_reversal(sn, cx):
    for p in (sn, cx):
        s0 = wave_state(p, 128)
        s0 = FieldState(0.0, s0.L, s0.N, s0.phi1 + 1e-3 * np.sin(2 * PI * s0.x / s0.L), s0.phi2, s0.real_field)
        back = advance(advance(s0, 0.01, 200), -0.01, 200)
        assert _max_diff(back, s0) <= 1e-10
        assert abs(back.t) < 1e-12


def test_negation_symmetry_is_exact(sn):
    s0 = wave_state(sn, 64)
    a = advance(s0.negated(), 0.01, 20)
    b = advance(s0, 0.01, 20).negated()
    assert np.array_equal(a.phi1, b.phi1) and np.array_equal(a.phi2, b.phi2)


def test_step_is_one_advance(sn):
    s0 = wave_state(sn, 64)
    assert _max_diff(step(s0, 0.01), advance(s0, 0.01, 1)) == 0.0


def test_dt_limit():
    assert dt_max(256, 4 * PI) == 0.01
    assert dt_max(1024, 4 * PI) == pytest.approx(0.5 * 4 * PI / 1024)
    N, L = 1024, 4 * PI
    z = _state(np.zeros(N), np.zeros(N), L)
    with pytest.raises(DomainError):
        advance(z, 0.01, 1)
    with pytest.raises(DomainError):
        advance(z, 0.0, 1)
    with pytest.raises(DomainError):
        advance(z, 0.001, -1)


def test_field_state_validation():
    with pytest.raises(DomainError):
        _state(np.zeros(48), np.zeros(48), 1.0)
    with pytest.raises(DomainError):
        FieldState(0.0, 1.0, 64, np.zeros(64, complex), np.zeros(32, complex), True)


# --- orbital distance ----------------------------------------------------

def test_distance_of_exact_wave(sn, cx):
    for p in (sn, cx):
        assert orbital_distance(wave_state(p, 256), p) <= 1e-10


def test_distance_ignores_translation(sn):
    shifted = wave_state(sn, 256, t=sn.L / (4 * sn.c))
    shifted = FieldState(0.0, shifted.L, shifted.N, shifted.phi1, shifted.phi2, True)
    assert orbital_distance(shifted, sn) <= 1e-8


def test_distance_ignores_phase(cx):
    rotated = wave_state(cx, 256, t=PI / 3)
    assert orbital_distance(rotated, cx) <= 1e-10


@settings(max_examples=15)
@given(st.floats(min_value=1e-6, max_value=1e-2))
def test_distance_of_small_perturbation(amp):
    p = solve_family(Family.SN_SUBLUMINAL, 4 * PI, 0.0)
    s0 = wave_state(p, 128)
    e1, e2 = make_perturbation(Perturbation(2, amp, "odd"), 128, p.L, False)
    d = orbital_distance(FieldState(0.0, p.L, 128, s0.phi1 + e1, s0.phi2 + e2, True), p)
    assert d <= amp * (1 + 1e-6)
    assert d >= 0.5 * amp


def test_distance_requires_same_torus(sn, cx):
    with pytest.raises(DomainError):
        orbital_distance(wave_state(cx, 64), sn)
    other = solve_family(Family.SN_SUBLUMINAL, 3 * PI, 0.5)
    with pytest.raises(DomainError):
        orbital_distance(wave_state(other, 64), sn)


# --- perturbations and experiments --------------------------------------

@pytest.mark.parametrize("parity", ["odd", "even", "generic"])
@pytest.mark.parametrize("complex_field", [False, True])
def test_perturbation_normalized(parity, complex_field):
    e1, e2 = make_perturbation(Perturbation(3, 1e-3, parity), 128, 4 * PI, complex_field)
    assert x_norm(e1, e2, 4 * PI) == pytest.approx(1e-3, rel=1e-12)
    if complex_field:
        assert np.max(np.abs(e1.real)) > 0 and np.max(np.abs(e1.imag)) > 0


def test_perturbation_parity_and_targets():
    N, L = 128, 4 * PI
    e1, e2 = make_perturbation(Perturbation(2, 1e-3, "odd"), N, L, False)
    st_ = FieldState(0.0, L, N, e1, e2, True)
    assert parity_defect(st_) <= 1e-15
    e1, e2 = make_perturbation(Perturbation(2, 1e-3, "odd", "phi2"), N, L, False)
    assert np.all(e1 == 0)
    g1 = make_perturbation(Perturbation(1, 1e-3, "generic"), N, L, False)
    g2 = make_perturbation(Perturbation(1, 1e-3, "generic"), N, L, False)
    assert np.array_equal(g1[0], g2[0])
    z = make_perturbation(Perturbation(1, 0.0), N, L, False)
    assert np.all(z[0] == 0) and np.all(z[1] == 0)


def test_config_validation():
    with pytest.raises(DomainError):
        EvolveConfig(dt=0.0)
    with pytest.raises(DomainError):
        EvolveConfig(record_every=0)
    with pytest.raises(DomainError):
        Perturbation(parity="diagonal")
    with pytest.raises(DomainError):
        Perturbation(mode=0)
    with pytest.raises(DomainError):
        Perturbation(target="phi3")


def test_parity_preserved_for_odd_data():
    p = solve_family(Family.SN_SUBLUMINAL, 4 * PI, 0.0)
    trace = run_experiment(p, EvolveConfig(dt=0.01, t_end=2.0, record_every=50, N=128,
                                           perturbation=Perturbation(1, 1e-3, "odd")))
    assert max(trace.parity_defect) <= 1e-10
    assert trace.relative_drift("energy") <= 1e-8


def test_run_experiment_rejects_large_step(sn):
    with pytest.raises(DomainError):
        run_experiment(sn, EvolveConfig(dt=0.01, t_end=0.1, N=1024))


def test_trace_csv(sn):
    trace = run_experiment(sn, EvolveConfig(dt=0.01, t_end=0.2, record_every=5, N=64,
                                            perturbation=Perturbation(1, 1e-4, "even")))
    assert all(math.isnan(v) for v in trace.parity_defect)
    buf = io.StringIO()
    write_trace_csv(trace, buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["t", "energy", "momentum", "charge", "orbital_distance"]
    assert len(rows) == 1 + len(trace.times) == 6
    assert float(rows[-1][0]) == pytest.approx(0.2)
    assert float(rows[1][1]) == trace.energy[0]

import dataclasses
import math

from hypothesis import assume, given, strategies as st
import numpy as np
import pytest

from phi4waves.elliptic import complete_K
from phi4waves.errors import ConvergenceError, DomainError, RegimeError
from phi4waves.wave_families import (
    Family,
    WaveParams,
    admissible_speeds,
    amplitude_interval,
    fit_integration_constant,
    ode_residual,
    period_of,
    profile,
    profile_derivative,
    quadrature_polynomial,
    quadrature_residual,
    shape_parameters,
    solve_family,
)

PI = math.pi
SN = Family.SN_SUBLUMINAL
CX = Family.SN_COMPLEX_STANDING
DN = Family.DN_SUPERLUMINAL
CN = Family.CN_SUPERLUMINAL

REPRESENTATIVE = [
    (SN, 4 * PI, 0.0),
    (SN, 4 * PI, 0.5),
    (DN, 2 * PI, 1.2),
    (CN, 2 * PI, 2.0),
    (CX, 2 * PI, 1.0),
    (CX, PI, 3.0),
]


@pytest.fixture(params=REPRESENTATIVE, ids=lambda t: f"{t[0].value}-L{t[1]:.3f}-c{t[2]}")
def wave(request):
    return solve_family(*request.param)


# --- speed intervals -----------------------------------------------------

def test_speed_interval_examples():
    iv = admissible_speeds(SN, 4 * PI)
    assert (iv.lo, iv.hi) == (0.0, 1.0)
    iv = admissible_speeds(DN, 2 * PI)
    assert iv.lo == 1.0 and iv.hi == pytest.approx(math.sqrt(3.0), rel=1e-15)
    iv = admissible_speeds(CX, PI / 2)
    assert iv.lo == pytest.approx(math.sqrt(15.0), rel=1e-15) and math.isinf(iv.hi)
    assert math.isinf(admissible_speeds(CN, 1.0).hi)


def test_standing_speed_needs_long_period():
    assert admissible_speeds(SN, 2 * PI + 1e-9).contains(0.0)
    assert not admissible_speeds(SN, 2 * PI).contains(0.0)
    assert admissible_speeds(CX, 2 * PI + 1e-9).contains(0.0)
    assert not admissible_speeds(CX, 2 * PI).contains(0.0)


@pytest.mark.parametrize("L", [0.0, -1.0])
def test_period_must_be_positive(L):
    with pytest.raises(DomainError):
        admissible_speeds(SN, L)


# --- solving -------------------------------------------------------------

def test_stationary_example_round_trips():
    p = solve_family(SN, 4 * PI, 0.0)
    assert 1.0 < p.beta1 < math.sqrt(2.0)
    # independent substitution: (4 sqrt 2 / beta1) K(kappa) with kappa from beta1
    kappa = math.sqrt(2.0 - p.beta1 ** 2) / p.beta1
    assert 4.0 * math.sqrt(2.0) / p.beta1 * complete_K(kappa) == pytest.approx(4 * PI, rel=1e-10)


def test_dn_example():
    p = solve_family(DN, 2 * PI, 1.2)
    kappa = math.sqrt(2.0 * (p.beta1 ** 2 - 1.0)) / p.beta1
    T = 2.0 * math.sqrt(2.0 * 0.44) / p.beta1 * complete_K(kappa)
    assert T == pytest.approx(2 * PI, rel=1e-10)


@pytest.mark.parametrize(
    "family, L, c",
    [(SN, 2 * PI, 0.0), (DN, 2 * PI, 0.5), (DN, 2 * PI, 1.8), (CN, 1.0, 0.9), (SN, 4 * PI, 1.0), (CX, PI, 1.0)],
)
def test_regime_errors(family, L, c):
    with pytest.raises(RegimeError) as info:
        solve_family(family, L, c)
    assert info.value.interval is not None
    assert info.value.interval.family is family


def test_near_degenerate_modulus_is_refused():
    with pytest.raises(ConvergenceError):
        solve_family(SN, 4 * PI, 0.99)


def test_type_invariants(wave):
    p = wave
    b1, b2 = p.beta1, p.beta2
    if p.family is DN:
        assert 1 < b1 < math.sqrt(2)
        assert b1 ** 2 + b2 ** 2 == pytest.approx(2.0)
        assert p.kappa ** 2 == pytest.approx(2 * (b1 ** 2 - 1) / b1 ** 2)
        assert p.ell ** 2 == pytest.approx(b1 ** 2 / (2 * p.omega))
        assert -4 * p.A == pytest.approx(b1 ** 2 * b2 ** 2)
    elif p.family is CN:
        assert b2 > math.sqrt(2)
        assert b2 ** 2 - b1 ** 2 == pytest.approx(2.0)
        assert p.kappa ** 2 == pytest.approx(b2 ** 2 / (2 * b2 ** 2 - 2))
        assert p.ell ** 2 == pytest.approx((b2 ** 2 - 1) / p.omega)
        assert 4 * p.A == pytest.approx(b1 ** 2 * b2 ** 2)
    elif p.family is SN:
        assert 1 < b1 < math.sqrt(2)
        assert b2 ** 2 == pytest.approx(2 - b1 ** 2)
        assert p.kappa == pytest.approx(b2 / b1)
        assert p.ell == pytest.approx(b1 / math.sqrt(2 * p.omega))
    else:
        assert math.sqrt(p.omega) < b1 < math.sqrt(2 * p.omega)
        assert b2 ** 2 == pytest.approx(2 * p.omega - b1 ** 2)
        assert p.kappa == pytest.approx(b2 / b1)
        assert p.ell == pytest.approx(b1 / math.sqrt(2))
    assert period_of(p.family, p.amplitude_parameter, p.c) == pytest.approx(p.L, rel=1e-10)


def test_omega_conventions():
    assert solve_family(DN, 2 * PI, 1.2).omega == pytest.approx(0.44)
    assert solve_family(SN, 4 * PI, 0.5).omega == pytest.approx(0.75)
    assert solve_family(CX, 2 * PI, 1.0).omega == pytest.approx(2.0)


@given(st.floats(min_value=0.01, max_value=0.9), st.floats(min_value=2 * PI + 0.5, max_value=6 * PI))
def test_negative_speed_symmetry(c, L):
    a = solve_family(SN, L, c)
    b = solve_family(SN, L, -c)
    assert (a.beta1, a.beta2, a.kappa, a.ell) == (b.beta1, b.beta2, b.kappa, b.ell)


@given(st.floats(min_value=0.0, max_value=0.9), st.floats(min_value=2 * PI + 0.5, max_value=6 * PI))
def test_json_round_trip_is_bit_exact(c, L):
    p = solve_family(SN, L, c)
    q = WaveParams.from_json(p.to_json())
    assert q == p
    assert q.family is SN


def test_family_parsing():
    assert Family.parse("sn-subluminal") is SN
    assert Family.parse("SnComplexStanding") is CX
    assert Family.parse("DnSuperluminal") is DN
    with pytest.raises(DomainError):
        Family.parse("kink")


# --- period maps ---------------------------------------------------------

def test_period_limits():
    c = 1.3
    w = c * c - 1
    assert period_of(DN, 1 + 1e-9, c) == pytest.approx(PI * math.sqrt(2 * w), rel=1e-6)
    c = 0.4
    w = 1 - c * c
    assert period_of(SN, math.sqrt(2) - 1e-12, c) == pytest.approx(2 * PI * math.sqrt(w), rel=1e-6)
    c = 1.5
    w = 1 + c * c
    assert period_of(CX, math.sqrt(2 * w) - 1e-12, c) == pytest.approx(2 * PI / math.sqrt(w), rel=1e-6)


@pytest.mark.parametrize("family, beta, c", [(SN, 1.0, 0.5), (SN, 1.2, 1.0), (DN, 1.2, 0.5), (CN, 1.0, 2.0), (CX, 0.1, 1.0)])
def test_period_domain(family, beta, c):
    with pytest.raises(DomainError):
        period_of(family, beta, c)


SLOPE_SIGN = {DN: +1, CN: -1, SN: -1, CX: -1}


@given(
    st.sampled_from(list(Family)),
    st.floats(min_value=0.001, max_value=0.999),
    st.floats(min_value=0.001, max_value=0.999),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_period_map_is_monotone(family, s, t, cpos):
    assume(abs(s - t) > 1e-6)
    if family.superluminal:
        c = 1.05 + 2.0 * cpos
    elif family is SN:
        c = 0.95 * cpos
    else:
        c = 3.0 * cpos
    lo, hi = amplitude_interval(family, c)
    if math.isinf(hi):
        hi = lo + 20.0
    b_s, b_t = lo + s * (hi - lo), lo + t * (hi - lo)
    diff = period_of(family, b_t, c) - period_of(family, b_s, c)
    assert SLOPE_SIGN[family] * diff * (b_t - b_s) > 0


def test_kappa_derivative_formula():
    c = 0.3
    for b1 in np.linspace(1.05, 1.40, 30):
        h = 1e-6
        kp = shape_parameters(SN, b1 + h, c)[2]
        km = shape_parameters(SN, b1 - h, c)[2]
        fd = (kp - km) / (2 * h)
        exact = -2.0 / (b1 ** 2 * math.sqrt(2 - b1 ** 2))
        assert fd == pytest.approx(exact, rel=1e-6)


def test_curve_is_continuous():
    for family, L, c in [(SN, 4 * PI, 0.5), (CX, 2 * PI, 1.0), (DN, 2 * PI, 1.4), (CN, 2 * PI, 2.0)]:
        base = solve_family(family, L, c).beta1
        jumps = [abs(solve_family(family, L, c + h).beta1 - base) for h in (1e-2, 1e-3, 1e-4)]
        assert jumps[0] > jumps[1] > jumps[2]
        assert jumps[2] < 1e-3


def test_beta1_direction_along_curves():
    cs = np.linspace(0.05, 0.9, 12)
    b = [solve_family(SN, 4 * PI, c).beta1 for c in cs]
    assert np.all(np.diff(b) < 0)
    cs = np.linspace(0.2, 3.0, 12)
    b = [solve_family(CX, 2 * PI, c).beta1 for c in cs]
    assert np.all(np.diff(b) > 0)


def test_kink_limit():
    p = solve_family(SN, 40.0, 0.0)
    x = np.linspace(-5, 5, 201)
    assert np.max(np.abs(profile(p, x).real - np.tanh(x / math.sqrt(2)))) <= 1e-3


def test_beta_cannot_round_trip_near_kink_limit():
    # documents why random acceptance samples avoid kappa > 1 - 1e-6
    p = solve_family(CX, 18.781701794311168, 2.93651814148401)
    assert p.kappa > 1 - 1e-7
    bumped = np.nextafter(p.beta1, 2 * p.beta1)
    rel = abs(period_of(CX, bumped, p.c) - period_of(CX, p.beta1, p.c)) / p.L
    assert rel > 1e-10


# --- profiles and residuals ----------------------------------------------

def test_profile_examples():
    p = solve_family(SN, 4 * PI, 0.5)
    assert abs(profile(p, 0.5 * 3.0, 3.0)) < 1e-15
    q = solve_family(DN, 2 * PI, 1.2)
    assert profile(q, 1.2 * 2.0, 2.0).real == pytest.approx(q.beta1, rel=1e-15)


def test_profile_is_periodic(wave):
    x = np.linspace(0, wave.L, 37)
    for t in (0.0, 1.3):
        assert np.max(np.abs(profile(wave, x + wave.L, t) - profile(wave, x, t))) <= 1e-10


def test_real_families_have_real_profiles(wave):
    u = profile(wave, np.linspace(0, wave.L, 11), 0.7)
    if wave.family is CX:
        assert np.max(np.abs(u.imag)) > 0
    else:
        assert np.all(u.imag == 0)


def test_complex_profile_rotates():
    p = solve_family(CX, 2 * PI, 1.0)
    x = np.linspace(0, p.L, 9)
    assert np.allclose(profile(p, x, 2.0), np.exp(2.0j) * profile(p, x, 0.0), atol=1e-15)


def test_residuals_small(wave):
    amp = max(1.0, wave.beta1 ** 3)
    assert ode_residual(wave, 256) <= 1e-8 * amp
    assert quadrature_residual(wave, 256) <= 1e-8 * amp


def test_profile_derivatives_match_spectral():
    from phi4waves.fourier import grid, spectral_derivative

    p = solve_family(SN, 4 * PI, 0.5)
    x = grid(256, p.L)
    phi = profile_derivative(p, x, order=0)
    assert np.allclose(spectral_derivative(phi, p.L), profile_derivative(p, x, order=1), atol=1e-9)
    assert np.allclose(spectral_derivative(phi, p.L, 2), profile_derivative(p, x, order=2), atol=1e-8)


def test_corrupted_beta_is_detected(wave):
    bad = dataclasses.replace(wave, beta1=wave.beta1 + 1e-3)
    assert ode_residual(bad, 256) > 1e-4


def test_residual_needs_samples(wave):
    with pytest.raises(DomainError):
        ode_residual(wave, 8)


def test_integration_constant_from_fit(wave):
    A = fit_integration_constant(wave)
    assert A == pytest.approx(wave.A, abs=1e-12)
    if wave.family is DN:
        assert -4 * A == pytest.approx(wave.beta1 ** 2 * wave.beta2 ** 2, rel=1e-10)
        assert 0 < -A < 0.25


def test_turning_point_is_a_root(wave):
    amp = wave.amplitude
    assert abs(quadrature_polynomial(wave, amp)) <= 1e-10 * max(1.0, amp ** 4)
    if wave.family is DN:
        # dn also turns at its minimum beta2
        assert abs(quadrature_polynomial(wave, wave.beta2)) <= 1e-10

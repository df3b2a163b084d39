"""Pseudospectral time stepping for phi_tt - phi_xx = phi - |phi|^2 phi on a torus.

The first-order system ``phi1_t = phi2``, ``phi2_t = phi1_xx + phi1 - |phi1|^2 phi1``
is split into a linear part, solved exactly per Fourier mode, and the
pointwise flow ``phi2_t = -|phi1|^2 phi1``, which is exact in one update since
phi1 does not move.  Strang composition gives second order.
"""
from dataclasses import dataclass, field, replace
import csv
from functools import lru_cache
import math

import numpy as np

from .errors import DomainError, UnsupportedField
from .fourier import fft, grid, ifft, is_power_of_two, spectral_derivative, wavenumbers
from .wave_families import Family, profile, profile_derivative

__all__ = [
    "FieldState",
    "Perturbation",
    "EvolveConfig",
    "OrbitalTrace",
    "dt_max",
    "wave_state",
    "energy",
    "momentum",
    "charge",
    "step",
    "advance",
    "x_norm",
    "parity_defect",
    "orbital_distance",
    "make_perturbation",
    "run_experiment",
    "write_trace_csv",
]

SERIES_CUTOFF = 1e-4
GENERIC_SEED = 20240607
GENERIC_BAND = 8


@dataclass(frozen=True)
class FieldState:
    t: float
    L: float
    N: int
    phi1: np.ndarray
    phi2: np.ndarray
    real_field: bool

    def __post_init__(self):
        if not is_power_of_two(self.N) or self.phi1.shape != (self.N,) or self.phi2.shape != (self.N,):
            raise DomainError("field samples must have length N, a power of two")

    @property
    def x(self):
        return grid(self.N, self.L)

    def negated(self):
        return replace(self, phi1=-self.phi1, phi2=-self.phi2)


def _make_state(t, L, fields, real_field):
    if real_field:
        fields = fields.real
    fields = np.asarray(fields, dtype=complex)
    return FieldState(float(t), float(L), fields.shape[-1], fields[0].copy(), fields[1].copy(), real_field)


def dt_max(N, L):
    """Largest step accepted by :func:`step` (an accuracy bound, not a stability one)."""
    return min(0.01, 0.5 * L / N)


def wave_state(params, N, t=0.0):
    """Exact wave data (phi1, phi2) at time t sampled on the N-point grid."""
    x = grid(N, params.L)
    phi1 = profile(params, x, t)
    if params.family is Family.SN_COMPLEX_STANDING:
        phi2 = 1j * params.c * phi1
        real = False
    else:
        phi2 = -params.c * profile_derivative(params, x, t, order=1) + 0j
        real = True
    return _make_state(t, params.L, np.stack([phi1, phi2]), real)


def _dx(state):
    return state.L / state.N


def energy(state):
    """(1/2) int (|phi2|^2 + |phi1_x|^2 + (1/2)(1 - |phi1|^2)^2) dx."""
    p1x = spectral_derivative(state.phi1, state.L)
    a1 = np.abs(state.phi1) ** 2
    dens = np.abs(state.phi2) ** 2 + np.abs(p1x) ** 2 + 0.5 * (1.0 - a1) ** 2
    return float(0.5 * np.sum(dens) * _dx(state))


def momentum(state):
    """int phi2 phi1_x dx (real fields only)."""
    if not state.real_field:
        raise UnsupportedField("momentum is defined for real fields only")
    p1x = spectral_derivative(state.phi1.real, state.L)
    return float(np.sum(state.phi2.real * p1x) * _dx(state))


def charge(state):
    """Im int conj(phi1) phi2 dx; identically zero for real fields."""
    if state.real_field:
        return 0.0
    return float(np.sum(np.conj(state.phi1) * state.phi2).imag * _dx(state))


@lru_cache(maxsize=16)
def _propagator(N, L, dt):
    """Per-mode coefficients of the exact flow of u_tt = (1 - xi^2) u over dt.

    Returns (C, S, sS) with u(dt) = C u + S v and v(dt) = sS u + C v.
    """
    s = 1.0 - wavenumbers(N, L) ** 2
    z = s * dt * dt
    C = np.empty(N)
    S = np.empty(N)
    small = np.abs(z) < SERIES_CUTOFF
    grow = (s > 0) & ~small
    osc = (s < 0) & ~small
    r = np.sqrt(s[grow])
    C[grow] = np.cosh(r * dt)
    S[grow] = np.sinh(r * dt) / r
    r = np.sqrt(-s[osc])
    C[osc] = np.cos(r * dt)
    S[osc] = np.sin(r * dt) / r
    zs = z[small]
    # Taylor series of cosh(sqrt z) and sinh(sqrt z)/sqrt z, error O(z^4)
    C[small] = 1.0 + zs / 2.0 * (1.0 + zs / 12.0 * (1.0 + zs / 30.0))
    S[small] = dt * (1.0 + zs / 6.0 * (1.0 + zs / 20.0 * (1.0 + zs / 42.0)))
    return C, S, s * S


def _linear(fields, C, S, sS):
    hat = fft(fields)
    u, v = hat[0], hat[1]
    out = np.stack([C * u + S * v, sS * u + C * v])
    return ifft(out)


def _kick(fields, tau):
    p1 = fields[0]
    fields[1] = fields[1] - tau * (p1.real ** 2 + p1.imag ** 2) * p1


def advance(state, dt, n_steps):
    """``n_steps`` Strang steps; adjacent half-kicks are merged."""
    if n_steps < 0:
        raise DomainError("n_steps must be non-negative")
    if not 0.0 < abs(dt) <= dt_max(state.N, state.L) * (1.0 + 1e-12):
        raise DomainError(f"|dt| must lie in (0, {dt_max(state.N, state.L)}], got {dt!r}")
    if n_steps == 0:
        return state
    C, S, sS = _propagator(state.N, state.L, float(dt))
    fields = np.stack([state.phi1, state.phi2])
    real = state.real_field
    _kick(fields, 0.5 * dt)
    for i in range(n_steps):
        fields = _linear(fields, C, S, sS)
        if real:
            fields = fields.real.astype(complex)
        _kick(fields, dt if i < n_steps - 1 else 0.5 * dt)
    return _make_state(state.t + n_steps * dt, state.L, fields, real)


def step(state, dt):
    """One Strang step: half nonlinear kick, exact linear flow, half kick."""
    return advance(state, dt, 1)


def _x_parts(f1, f2, L):
    return f1, spectral_derivative(f1, L), f2


def x_norm(f1, f2, L):
    """Discrete H1 x L2 norm of a pair of grid functions."""
    a, b, c = _x_parts(np.asarray(f1), np.asarray(f2), L)
    total = np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2) + np.sum(np.abs(c) ** 2)
    return float(math.sqrt(total * L / a.size))


def parity_defect(state):
    """max |f(x) + f(-x)| over both components; zero for odd fields."""
    idx = (-np.arange(state.N)) % state.N
    return float(max(np.max(np.abs(state.phi1 + state.phi1[idx])), np.max(np.abs(state.phi2 + state.phi2[idx]))))


def _shift(f, L, rho):
    """f(x - rho) by Fourier interpolation; real input stays real."""
    n = f.shape[-1]
    xi = wavenumbers(n, L)
    phase = np.exp(-1j * xi * rho)
    phase[n // 2] = math.cos(xi[n // 2] * rho)
    return ifft(fft(f) * phase).real


def _best_shift(u, w, L):
    """Translation rho maximizing the X inner product <u, w(. - rho)>."""
    n = u.shape[-1]
    xi = wavenumbers(n, L)
    weight = np.stack([1.0 + xi ** 2, np.ones(n)])
    G = np.sum(weight * fft(u) * np.conj(fft(w)), axis=0)
    corr = (n * ifft(G)).real
    j = int(np.argmax(corr))
    dx = L / n
    a, b, c = corr[j - 1], corr[j], corr[(j + 1) % n]
    denom = a - 2.0 * b + c
    rho = (j + (0.5 * (a - c) / denom if denom < 0.0 else 0.0)) * dx
    # Newton on g(rho) = Re sum G exp(i xi rho), a trigonometric polynomial
    for _ in range(8):
        e = G * np.exp(1j * xi * rho)
        g1 = float(np.sum(1j * xi * e).real)
        g2 = float(np.sum(-(xi ** 2) * e).real)
        if g2 >= 0.0:
            break
        delta = g1 / g2
        rho -= delta
        if abs(delta) < 1e-15 * L:
            break
    return rho % L


def orbital_distance(state, params):
    """Distance in H1 x L2 from the state to the orbit of the wave.

    Real families minimize over translations, the complex family over
    phase rotations (closed form).
    """
    if not math.isclose(state.L, params.L, rel_tol=1e-12):
        raise DomainError("state and wave live on different tori")
    ref = wave_state(params, state.N)
    if ref.real_field != state.real_field:
        raise DomainError("state and wave differ in field type")
    L = state.L
    if state.real_field:
        u = np.stack([state.phi1.real, state.phi2.real])
        w = np.stack([ref.phi1.real, ref.phi2.real])
        rho = _best_shift(u, w, L)
        ws = _shift(w, L, rho)
        return x_norm(u[0] - ws[0], u[1] - ws[1], L)
    xi2 = wavenumbers(state.N, L) ** 2
    h1 = fft(ref.phi1), fft(state.phi1)
    l2 = fft(ref.phi2), fft(state.phi2)
    inner = np.sum((1.0 + xi2) * np.conj(h1[0]) * h1[1]) + np.sum(np.conj(l2[0]) * l2[1])
    rot = np.exp(1j * np.angle(inner))
    return x_norm(state.phi1 - rot * ref.phi1, state.phi2 - rot * ref.phi2, L)


@dataclass(frozen=True)
class Perturbation:
    """Perturbation settings: ``parity`` odd (sine), even (cosine) or generic (random band)."""

    mode: int = 1
    amplitude: float = 1e-3
    parity: str = "odd"
    target: str = "both"

    def __post_init__(self):
        if self.parity not in ("odd", "even", "generic"):
            raise DomainError(f"unknown parity {self.parity!r}")
        if self.target not in ("phi1", "phi2", "both"):
            raise DomainError(f"unknown target {self.target!r}")
        if self.mode < 1:
            raise DomainError("perturbation mode must be >= 1")
        if not self.amplitude >= 0.0:
            raise DomainError("perturbation amplitude must be non-negative")


@dataclass(frozen=True)
class EvolveConfig:
    dt: float = 0.01
    t_end: float = 100.0
    record_every: int = 10
    perturbation: Perturbation = field(default_factory=Perturbation)
    N: int = 256

    def __post_init__(self):
        if not self.dt > 0.0:
            raise DomainError("dt must be positive")
        if not self.t_end >= 0.0:
            raise DomainError("t_end must be non-negative")
        if self.record_every < 1:
            raise DomainError("record_every must be >= 1")


@dataclass
class OrbitalTrace:
    times: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    momentum: list = field(default_factory=list)
    charge: list = field(default_factory=list)
    orbital_distance: list = field(default_factory=list)
    parity_defect: list = field(default_factory=list)

    def record(self, state, params, track_parity):
        self.times.append(state.t)
        self.energy.append(energy(state))
        self.momentum.append(momentum(state) if state.real_field else math.nan)
        self.charge.append(charge(state))
        self.orbital_distance.append(orbital_distance(state, params))
        self.parity_defect.append(parity_defect(state) if track_parity else math.nan)

    def relative_drift(self, name):
        vals = np.asarray(getattr(self, name))
        scale = max(abs(vals[0]), 1e-300)
        return float(np.max(np.abs(vals - vals[0])) / scale)


def make_perturbation(pert, N, L, complex_field):
    """Grid pair (eps1, eps2) with X-norm equal to ``pert.amplitude``."""
    x = grid(N, L)
    k = 2.0 * np.pi * pert.mode / L
    if pert.parity == "odd":
        shape = np.sin(k * x)
        shapes = (shape, shape)
    elif pert.parity == "even":
        shape = np.cos(k * x)
        shapes = (shape, shape)
    else:
        rng = np.random.default_rng(GENERIC_SEED)
        band = max(pert.mode, GENERIC_BAND)
        m = np.arange(1, band + 1)
        arg = 2.0 * np.pi * np.outer(m, x) / L
        shapes = tuple(rng.standard_normal(band) @ np.cos(arg) + rng.standard_normal(band) @ np.sin(arg) for _ in range(2))
    e1 = shapes[0] if pert.target in ("phi1", "both") else np.zeros(N)
    e2 = shapes[1] if pert.target in ("phi2", "both") else np.zeros(N)
    e1 = e1.astype(complex)
    e2 = e2.astype(complex)
    if complex_field:
        # rotate off the real axis so both real and imaginary parts are excited
        e1 = e1 * np.exp(0.25j * np.pi)
        e2 = e2 * np.exp(0.25j * np.pi)
    norm = x_norm(e1, e2, L)
    if norm == 0.0 or pert.amplitude == 0.0:
        return np.zeros(N, complex), np.zeros(N, complex)
    s = pert.amplitude / norm
    return s * e1, s * e2


def run_experiment(params, config):
    """Evolve the perturbed wave and record conserved quantities and orbital distance."""
    N = config.N
    if config.dt > dt_max(N, params.L) * (1.0 + 1e-12):
        raise DomainError(f"dt={config.dt!r} exceeds dt_max={dt_max(N, params.L)!r}")
    base = wave_state(params, N)
    e1, e2 = make_perturbation(config.perturbation, N, params.L, not base.real_field)
    state = _make_state(0.0, params.L, np.stack([base.phi1 + e1, base.phi2 + e2]), base.real_field)
    track_parity = parity_defect(state) <= 1e-12 * max(1.0, float(np.max(np.abs(state.phi1))))

    trace = OrbitalTrace()
    trace.record(state, params, track_parity)
    n_total = int(round(config.t_end / config.dt))
    done = 0
    while done < n_total:
        chunk = min(config.record_every, n_total - done)
        state = advance(state, config.dt, chunk)
        done += chunk
        trace.record(state, params, track_parity)
    return trace


TRACE_COLUMNS = ("t", "energy", "momentum", "charge", "orbital_distance")


def write_trace_csv(trace, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for row in zip(trace.times, trace.energy, trace.momentum, trace.charge, trace.orbital_distance):
        w.writerow([f"{v:.17g}" for v in row])

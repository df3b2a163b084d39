"""Stability index along the sub-luminal and complex-standing curves.

For the real sub-luminal family the action is ``d(c) = (E + c P)(wave)`` and
for the complex standing family ``d(c) = (E - c F)(wave)``.  In both cases
``d'(c) = -c * I(c)`` with a closed-form elliptic integral ``I``:

* sub-luminal: ``I = int phi_x^2 = 32/(3L) (E + (1 - beta1^2) K) K``
* complex:     ``I = int psi^2   = 32/L (K - E) K``

``d''`` is a central difference of ``d'`` with a Richardson self-check.
"""
from dataclasses import dataclass
import csv
import json
import math

import numpy as np

from .elliptic import complete_KE
from .errors import ConvergenceError, DomainError, RegimeError, UnsupportedFamily
from .fourier import grid, spectral_derivative, wavenumbers
from .linalg import eigh_symmetric
from .spectral import build_hill, restrict_odd, vector_block
from .wave_families import Family, admissible_speeds, profile_derivative, solve_family

__all__ = [
    "Verdict",
    "StabilityReport",
    "momentum_integral_sn",
    "charge_integral_complex",
    "momentum_integral_grid",
    "charge_integral_grid",
    "action",
    "d_prime",
    "d_second",
    "richardson_defect",
    "d_second_quadrature",
    "coercivity_constant",
    "coercivity_check",
    "coercivity_ratio",
    "classify",
    "sweep",
    "write_sweep_csv",
]

H_REL = 1e-4
RICHARDSON_TOL = 1e-4
CLASSIFY_N = 128
# The sub-luminal ground eigenvalue shrinks like exp(-2K(kappa)) as |c| -> 1
# (-5e-8 at c = 0.9, L = 4 pi), so counting uses a tolerance just above the
# discrete kernel noise rather than the verification tolerance.
COUNT_TOL = 1e-9


class Verdict:
    UNSTABLE = "Unstable"
    STABLE_ODD = "StableOddSector"
    STABLE_ODD_COMPLEX = "StableOddSectorComplex"
    UNCLASSIFIED = "Unclassified"


@dataclass
class StabilityReport:
    family: Family
    c: float
    L: float
    d_prime: float
    d_second: float
    n_restricted: int
    p_dsecond: int
    verdict: str
    coercivity: float = math.nan
    consistent: bool = True

    def to_dict(self):
        nan_to_none = lambda v: None if isinstance(v, float) and math.isnan(v) else v
        return {
            "family": self.family.value,
            "c": self.c,
            "L": self.L,
            "d_prime": nan_to_none(self.d_prime),
            "d_second": nan_to_none(self.d_second),
            "n_restricted": self.n_restricted,
            "p_dsecond": self.p_dsecond,
            "verdict": self.verdict,
            "coercivity": nan_to_none(self.coercivity),
            "consistent": self.consistent,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _family_for_index(family):
    family = Family.parse(family)
    if family.superluminal:
        raise UnsupportedFamily(f"no stability index is defined for {family.value} waves")
    return family


def momentum_integral_sn(c, L):
    """Closed-form ``int_0^L phi_x^2`` for the sub-luminal sn wave."""
    p = solve_family(Family.SN_SUBLUMINAL, L, c)
    K, E = complete_KE(p.kappa)
    return 32.0 / (3.0 * L) * (E + (1.0 - p.beta1 ** 2) * K) * K


def charge_integral_complex(c, L):
    """Closed-form ``int_0^L psi^2`` for the complex standing sn wave."""
    p = solve_family(Family.SN_COMPLEX_STANDING, L, c)
    K, E = complete_KE(p.kappa)
    return 32.0 / L * (K - E) * K


def momentum_integral_grid(c, L, N=256):
    """Same integral by the rectangle rule on an N-point grid (spectrally accurate)."""
    p = solve_family(Family.SN_SUBLUMINAL, L, c)
    dphi = profile_derivative(p, grid(N, L), order=1)
    return float(np.sum(dphi ** 2) * L / N)


def charge_integral_grid(c, L, N=256):
    p = solve_family(Family.SN_COMPLEX_STANDING, L, c)
    psi = profile_derivative(p, grid(N, L), order=0)
    return float(np.sum(psi ** 2) * L / N)


def action(family, c, L, N=256):
    """d(c) evaluated on the grid from the energy and momentum/charge densities."""
    family = _family_for_index(family)
    p = solve_family(family, L, c)
    x = grid(N, L)
    phi = profile_derivative(p, x, order=0)
    phi_x = profile_derivative(p, x, order=1)
    dx = L / N
    if family is Family.SN_SUBLUMINAL:
        v = -c * phi_x
        energy = 0.5 * np.sum(v ** 2 + phi_x ** 2 + 0.5 * (1.0 - phi ** 2) ** 2) * dx
        momentum = np.sum(v * phi_x) * dx
        return float(energy + c * momentum)
    # phi1 = psi, phi2 = i c psi
    energy = 0.5 * np.sum((c * phi) ** 2 + phi_x ** 2 + 0.5 * (1.0 - phi ** 2) ** 2) * dx
    charge = c * np.sum(phi ** 2) * dx
    return float(energy - c * charge)


def d_prime(family, c, L):
    """-c times the closed-form integral of the family."""
    family = _family_for_index(family)
    if family is Family.SN_SUBLUMINAL:
        return -c * momentum_integral_sn(c, L)
    return -c * charge_integral_complex(c, L)


def _default_h(family, L):
    iv = admissible_speeds(family, L)
    width = iv.hi - iv.lo
    return H_REL * min(1.0, width)


def _check_stencil(family, c, L, h):
    iv = admissible_speeds(family, L)
    for cc in (c - h, c + h):
        if not iv.contains(cc):
            raise RegimeError(
                f"finite-difference stencil c={c!r} +/- {h!r} leaves the admissible interval {iv}",
                interval=iv,
            )


def d_second(family, c, L, h=None):
    """Central difference ``(d'(c+h) - d'(c-h)) / 2h``."""
    family = _family_for_index(family)
    h = _default_h(family, L) if h is None else float(h)
    if not h > 0.0:
        raise DomainError("h must be positive")
    _check_stencil(family, c, L, h)
    return (d_prime(family, c + h, L) - d_prime(family, c - h, L)) / (2.0 * h)


def richardson_defect(family, c, L, h=None):
    """Relative change of d'' when the step is halved."""
    family = _family_for_index(family)
    h = _default_h(family, L) if h is None else float(h)
    coarse = d_second(family, c, L, h)
    fine = d_second(family, c, L, 0.5 * h)
    return abs(coarse - fine) / abs(fine)


def d_second_quadrature(family, c, L, h=None, N=256):
    """d'' from differencing grid quadratures instead of the closed forms."""
    family = _family_for_index(family)
    h = _default_h(family, L) if h is None else float(h)
    _check_stencil(family, c, L, h)
    integral = momentum_integral_grid if family is Family.SN_SUBLUMINAL else charge_integral_grid
    hi = -(c + h) * integral(c + h, L, N)
    lo = -(c - h) * integral(c - h, L, N)
    return (hi - lo) / (2.0 * h)


def coercivity_constant(L):
    """3 beta2^2 / (4 + 3 beta2^2) for the stationary sn wave of period L."""
    if not L > 2.0 * math.pi:
        raise RegimeError(f"the stationary sn wave needs L > 2 pi, got L={L!r}")
    b2sq = solve_family(Family.SN_SUBLUMINAL, L, 0.0).beta2 ** 2
    return 3.0 * b2sq / (4.0 + 3.0 * b2sq)


def _h1_norm_sq(v, L):
    vx = spectral_derivative(v, L)
    return float((v @ v + vx @ vx) * L / v.size)


def coercivity_check(L, n_samples=50, N=256, band=None, seed=0):
    """Smallest margin ``<L v, v> - lam^2 ||v||_H1^2`` over random odd v.

    Each sample is a random combination of ``sin(2 pi m x / L)`` for
    ``m = 1..band`` scaled to unit H1 norm, so the margin is directly
    comparable with an absolute tolerance.
    """
    lam_sq = coercivity_constant(L)
    p = solve_family(Family.SN_SUBLUMINAL, L, 0.0)
    _, mat = build_hill(p, "L_sn_real", N)
    band = N // 4 if band is None else band
    rng = np.random.default_rng(seed)
    x = grid(N, L)
    modes = np.sin(2.0 * np.pi * np.outer(np.arange(1, band + 1), x) / L)
    margins = []
    for _ in range(n_samples):
        v = rng.standard_normal(band) @ modes
        v /= math.sqrt(_h1_norm_sq(v, L))
        form = float(v @ (mat @ v)) * L / N
        margins.append(form - lam_sq)
    return min(margins), lam_sq


def coercivity_ratio(L, N=256):
    """Exact min of <L v, v> / ||v||_H1^2 over all odd grid functions.

    On the odd subspace the discrete H1 Gram matrix is diagonal in the sine
    basis, so the minimum is the lowest eigenvalue of a symmetric pencil
    reduced to standard form.
    """
    p = solve_family(Family.SN_SUBLUMINAL, L, 0.0)
    _, mat = build_hill(p, "L_sn_real", N)
    x = grid(N, L)
    m = np.arange(1, N // 2)
    xi = wavenumbers(N, L)[1:N // 2]
    # columns normalised so the discrete L2 Gram matrix is the identity
    basis = np.sin(2.0 * np.pi * np.outer(x, m) / L) * math.sqrt(2.0 / L)
    scale = 1.0 / np.sqrt(1.0 + xi ** 2)
    reduced = (basis.T @ mat @ basis) * (L / N)
    reduced = reduced * scale[:, None] * scale[None, :]
    return float(eigh_symmetric(0.5 * (reduced + reduced.T), vectors=False)[0])


def _count(mat, zero_tol=COUNT_TOL):
    w = eigh_symmetric(mat, vectors=False)
    return int(np.sum(w < -zero_tol)), int(np.sum(np.abs(w) <= zero_tol))


def classify(family, c, L, N=CLASSIFY_N):
    """StabilityReport with the verdict and the numbers behind it.

    ``n_restricted`` counts negative eigenvalues of the linearized vector
    operator, restricted to odd grid functions where the verdict concerns
    the odd sector.  ``consistent`` records whether those numbers agree with
    the verdict.
    """
    family = Family.parse(family)
    c = float(c)
    L = float(L)
    iv = admissible_speeds(family, L)
    if not iv.contains(c):
        raise RegimeError(f"speed c={c!r} is not admissible; |c| must lie in {iv}", interval=iv)

    if family.superluminal:
        return StabilityReport(family, c, L, math.nan, math.nan, None, None, Verdict.UNCLASSIFIED)

    dp = d_prime(family, c, L)
    h = _default_h(family, L)
    dpp = d_second(family, c, L, h)
    p_d = 1 if dpp > 0.0 else 0
    params = solve_family(family, L, c)

    if family is Family.SN_SUBLUMINAL and c != 0.0:
        n_neg, n_zero = _count(vector_block(params, "traveling", N))
        verdict = Verdict.UNSTABLE
        consistent = n_neg == 1 and p_d == 0 and n_zero == 1
        return StabilityReport(family, c, L, dp, dpp, n_neg, p_d, verdict, consistent=consistent)

    if family is Family.SN_SUBLUMINAL:
        _, mat = build_hill(params, "L_sn_real", N)
        n_neg, n_zero = _count(restrict_odd(mat, N))
        coer = coercivity_constant(L)
        consistent = n_neg == 0 and n_zero == 0 and coer > 0.0
        return StabilityReport(
            family, c, L, dp, dpp, n_neg, p_d, Verdict.STABLE_ODD, coercivity=coer, consistent=consistent
        )

    n_r, z_r = _count(restrict_odd(vector_block(params, "R", N), N, blocks=2))
    n_i, z_i = _count(restrict_odd(vector_block(params, "I", N), N, blocks=2))
    n_neg = n_r + n_i
    consistent = n_neg == p_d and z_r + z_i == 1
    return StabilityReport(family, c, L, dp, dpp, n_neg, p_d, Verdict.STABLE_ODD_COMPLEX, consistent=consistent)


def sweep(family, L, speeds, N=CLASSIFY_N):
    """Classify each speed, sorted by c.

    Speeds that fail give ``(c, exception)`` entries instead of reports.
    """
    rows = []
    for c in sorted(speeds):
        try:
            rows.append(classify(family, c, L, N))
        except (RegimeError, ConvergenceError) as exc:
            rows.append((float(c), exc))
    return rows


SWEEP_COLUMNS = ("family", "c", "L", "d_prime", "d_second", "n_restricted", "verdict")


def write_sweep_csv(rows, fh, family, L):
    """CSV with one line per speed; failures name the exception in the verdict column."""
    family = Family.parse(family)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    fmt = lambda v: "" if v is None else (f"{v:.17g}" if isinstance(v, float) else str(v))
    for row in rows:
        if isinstance(row, tuple):
            c, exc = row
            w.writerow([family.value, fmt(c), fmt(float(L)), "", "", "", type(exc).__name__])
        else:
            w.writerow([fmt(getattr(row, k)) if k != "family" else row.family.value for k in SWEEP_COLUMNS])

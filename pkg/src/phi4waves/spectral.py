"""Linearized operators around the waves and their discrete spectra.

Scalar operators have the Hill form ``-a d^2/dx^2 - shift + V(x)`` and are
discretized with the dense Fourier differentiation matrix.  After rescaling
``y = ell x`` the sub-luminal and complex-standing potentials become Lamé
potentials ``n(n+1) kappa^2 sn^2(y)`` (n = 2 for ``3 phi^2``, n = 1 for
``psi^2``), whose lowest periodic eigenpairs are known in closed form.  Those
closed forms are the oracles here.

Vector (two-component) operators are kept as separate 2x2 blocks:

* ``R``:  [[-d^2 - 1 + 3 psi^2, -c], [-c, 1]]  acting on (Re phi1, Im phi2)
* ``I``:  [[-d^2 - 1 + psi^2,    c], [ c, 1]]  acting on (Im phi1, Re phi2)
* ``traveling``: [[-d^2 - 1 + 3 phi^2, -c d], [c d, 1]] for real traveling waves
"""
from dataclasses import dataclass, field
import json
import math

import numpy as np

from .errors import ConvergenceError, DomainError, VerificationError
from .fourier import first_derivative_matrix, grid, is_power_of_two, second_derivative_matrix
from .linalg import eigh_symmetric
from .wave_families import Family, profile_derivative

__all__ = [
    "LABELS",
    "HillSpec",
    "SpectrumReport",
    "build_hill",
    "hill_matrix",
    "flat_hill",
    "flat_spectrum",
    "eigensolve",
    "compute_spectrum",
    "lame_eigenvalues",
    "kernel_residual",
    "verify_sn_real_spectrum",
    "verify_complex_spectra",
    "vector_eigenvalue_from_scalar",
    "scalar_eigenvalue_from_vector",
    "sigma_lambda_map",
    "lambda_sigma_map",
    "vector_block",
    "odd_projector",
    "restrict_odd",
    "sign_changes",
]

ZERO_TOL = 1e-6
VALUE_TOL = 1e-5
VECTOR_TOL = 1e-5
CORRELATION_MIN = 0.9999
RESIDUAL_TOL = 1e-9
ORTHO_TOL = 1e-10
MIN_N = 64

LABELS = {
    "L_sn_real": Family.SN_SUBLUMINAL,
    "L_sn_R": Family.SN_COMPLEX_STANDING,
    "L_sn_I": Family.SN_COMPLEX_STANDING,
    "L_dn": Family.DN_SUPERLUMINAL,
    "L_cn": Family.CN_SUPERLUMINAL,
}


@dataclass
class HillSpec:
    a: float
    shift: float
    potential: np.ndarray
    L: float
    label: str

    @property
    def N(self):
        return self.potential.size


@dataclass
class SpectrumReport:
    label: str
    N: int
    eigenvalues: np.ndarray
    negative_count: int
    zero_tol: float
    zero_modes: list = field(default_factory=list)
    oracle_errors: dict = field(default_factory=dict)
    eigenvectors: np.ndarray = None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        return {
            "label": self.label,
            "N": int(self.N),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "negative_count": int(self.negative_count),
            "zero_tol": float(self.zero_tol),
            "oracle_errors": {k: float(v) for k, v in self.oracle_errors.items()},
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _check_n(N):
    if not (is_power_of_two(N) and N >= MIN_N):
        raise DomainError(f"N must be a power of two >= {MIN_N}, got {N}")


def hill_matrix(spec):
    """Dense symmetric matrix of ``-a d^2 - shift + V``."""
    n = spec.N
    m = -spec.a * second_derivative_matrix(n, spec.L)
    m[np.diag_indices(n)] += spec.potential - spec.shift
    return m


def build_hill(params, label, N=256):
    """Hill operator ``label`` linearized around the wave ``params``.

    ``L_dn`` and ``L_cn`` use ``a = 1 - c^2`` (negative for superluminal
    speeds), the same moving-frame convention as ``L_sn_real``.
    """
    _check_n(N)
    if label not in LABELS:
        raise DomainError(f"unknown operator label {label!r}")
    if LABELS[label] is not params.family:
        raise DomainError(f"operator {label} does not apply to the {params.family.value} family")
    x = grid(N, params.L)
    phi = profile_derivative(params, x, order=0)
    c2 = params.c ** 2
    if label == "L_sn_R":
        spec = HillSpec(1.0, 1.0 + c2, 3.0 * phi ** 2, params.L, label)
    elif label == "L_sn_I":
        spec = HillSpec(1.0, 1.0 + c2, phi ** 2, params.L, label)
    else:
        spec = HillSpec(1.0 - c2, 1.0, 3.0 * phi ** 2, params.L, label)
    return spec, hill_matrix(spec)


def flat_hill(L, N, v0, a=1.0, shift=0.0):
    """Hill operator with constant potential (debug and test oracle)."""
    _check_n(N)
    spec = HillSpec(a, shift, np.full(N, float(v0)), float(L), "flat")
    return spec, hill_matrix(spec)


def flat_spectrum(L, N, v0, a=1.0, shift=0.0):
    """Exact eigenvalues of :func:`flat_hill`, ascending.

    The Nyquist mode is kept, matching the discrete second derivative.
    """
    m = np.arange(N)
    m = np.where(m <= N // 2, m, m - N)
    xi = 2.0 * np.pi * m / L
    return np.sort(a * xi ** 2 + v0 - shift)


def _orient(v):
    # largest-magnitude entry positive
    i = int(np.argmax(np.abs(v)))
    return v if v[i] >= 0 else -v


def eigensolve(matrix, m=None, zero_tol=ZERO_TOL, label="", vectors=True):
    """The ``m`` lowest eigenpairs of a symmetric matrix as a SpectrumReport."""
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise DomainError("eigensolve needs a square matrix")
    m = n if m is None else int(m)
    if not 1 <= m <= n:
        raise DomainError(f"m must lie in [1, {n}], got {m}")
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > 1e-12 * scale:
        raise DomainError("eigensolve needs a symmetric matrix")

    if not vectors:
        w = eigh_symmetric(a, vectors=False)
        return SpectrumReport(label, n, w[:m], int(np.sum(w < -zero_tol)), zero_tol)

    w_all, v = eigh_symmetric(a)
    w = w_all[:m]
    v = v[:, :m]
    v = np.column_stack([_orient(v[:, j]) for j in range(m)])
    resid = np.linalg.norm(a @ v - v * w, axis=0)
    if np.any(resid > RESIDUAL_TOL * scale):
        raise ConvergenceError(f"eigenpair residual {resid.max():.3e} above tolerance")
    ortho = np.max(np.abs(v.T @ v - np.eye(m)))
    if ortho > ORTHO_TOL:
        raise ConvergenceError(f"eigenvectors lost orthogonality ({ortho:.3e})")
    negative = int(np.sum(w_all < -zero_tol))
    zero = [(float(w[j]), v[:, j]) for j in range(m) if abs(w[j]) <= zero_tol]
    return SpectrumReport(label, n, w, negative, zero_tol, zero, eigenvectors=v)


def compute_spectrum(params, label, N=256, m=8, zero_tol=ZERO_TOL):
    """Spectrum of any Hill operator, without pass/fail checks."""
    _, mat = build_hill(params, label, N)
    rep = eigensolve(mat, N, zero_tol, label)
    rep.eigenvalues = rep.eigenvalues[:m]
    rep.eigenvectors = rep.eigenvectors[:, :m]
    return rep


def sigma_lambda_map(params, label, sigma):
    """Operator eigenvalue for a Lamé eigenvalue ``sigma`` of the rescaled problem."""
    ell2 = params.ell ** 2
    if label == "L_sn_real":
        return params.omega * ell2 * sigma - 1.0
    if label in ("L_sn_R", "L_sn_I"):
        return ell2 * sigma - params.omega
    raise DomainError(f"no Lamé reduction for {label!r}")


def lambda_sigma_map(params, label, lam):
    """Inverse of :func:`sigma_lambda_map`."""
    ell2 = params.ell ** 2
    if label == "L_sn_real":
        return (1.0 + lam) / (params.omega * ell2)
    if label in ("L_sn_R", "L_sn_I"):
        return (params.omega + lam) / ell2
    raise DomainError(f"no Lamé reduction for {label!r}")


def lame_eigenvalues(params, label):
    """Closed-form lowest eigenvalues, in ascending order, keyed by name."""
    k2 = params.kappa ** 2
    if label in ("L_sn_real", "L_sn_R"):
        root = math.sqrt(1.0 - k2 + k2 * k2)
        sigmas = {
            "ground": 2.0 * (1.0 + k2) - 2.0 * root,
            "cn_dn": 1.0 + k2,
            "sn_dn": 1.0 + 4.0 * k2,
            "sn_cn": 4.0 + k2,
            "upper": 2.0 * (1.0 + k2) + 2.0 * root,
        }
    elif label == "L_sn_I":
        sigmas = {"dn": k2, "cn": 1.0, "sn": 1.0 + k2}
    else:
        raise DomainError(f"no Lamé reduction for {label!r}")
    return {name: sigma_lambda_map(params, label, s) for name, s in sigmas.items()}


def sign_changes(v, rel_floor=1e-8):
    """Number of sign changes of a periodic sample vector (tiny entries skipped)."""
    v = np.asarray(v, dtype=float)
    keep = v[np.abs(v) > rel_floor * np.max(np.abs(v))]
    if keep.size < 2:
        return 0
    s = np.sign(keep)
    return int(np.sum(s != np.roll(s, 1)))


def _correlation(v, y):
    return min(1.0, abs(float(v @ y)) / (np.linalg.norm(v) * np.linalg.norm(y)))


def _vector_match(v, y):
    """Max-norm distance between unit vectors up to sign."""
    v = v / np.linalg.norm(v)
    y = y / np.linalg.norm(y)
    return float(min(np.max(np.abs(v - y)), np.max(np.abs(v + y))))


def kernel_residual(params, N=256):
    """max |L phi'| / max |phi'| for the operator whose kernel contains phi' (or psi')."""
    label = "L_sn_real" if params.family is Family.SN_SUBLUMINAL else "L_sn_R"
    _, mat = build_hill(params, label, N)
    dphi = profile_derivative(params, grid(N, params.L), order=1)
    return float(np.max(np.abs(mat @ dphi)) / np.max(np.abs(dphi)))


def _lame_shapes(params, N):
    from .elliptic import jacobi_sncndn

    sn, cn, dn = jacobi_sncndn(params.ell * grid(N, params.L), params.kappa)
    return sn, cn, dn


def verify_sn_real_spectrum(params, N=256, m=8, zero_tol=ZERO_TOL):
    """Check the sub-luminal spectrum: one negative, simple zero, exact third eigenvalue.

    Raises
    ------
    VerificationError
        Carries the report when any check fails.
    """
    if params.family is not Family.SN_SUBLUMINAL:
        raise DomainError("verify_sn_real_spectrum needs a sub-luminal sn wave")
    rep = compute_spectrum(params, "L_sn_real", N, max(m, 5), zero_tol)
    w, v = rep.eigenvalues, rep.eigenvectors
    exact = lame_eigenvalues(params, "L_sn_real")
    for j, (name, val) in enumerate(exact.items()):
        rep.oracle_errors[f"lambda{j}_{name}"] = abs(w[j] - val)

    sn, cn, dn = _lame_shapes(params, N)
    dphi = profile_derivative(params, grid(N, params.L), order=1)
    rep.oracle_errors["kernel_vs_dphi"] = _vector_match(v[:, 1], dphi)
    rep.oracle_errors["Y1_cn_dn_corr_defect"] = 1.0 - _correlation(v[:, 1], cn * dn)
    rep.oracle_errors["Y2_sn_dn_corr_defect"] = 1.0 - _correlation(v[:, 2], sn * dn)

    rep.checks = {
        "one_negative": rep.negative_count == 1,
        "zero_second": abs(w[1]) <= zero_tol,
        "kernel_is_dphi": rep.oracle_errors["kernel_vs_dphi"] <= VECTOR_TOL,
        "third_value": abs(w[2] - 3.0 * (1.0 - 0.5 * params.beta1 ** 2)) <= VALUE_TOL,
        "Y1_correlation": 1.0 - rep.oracle_errors["Y1_cn_dn_corr_defect"] > CORRELATION_MIN,
        "ground_no_sign_change": sign_changes(v[:, 0]) == 0,
        "floquet_counts": sign_changes(v[:, 1]) == 2 and sign_changes(v[:, 2]) == 2,
    }
    _trim(rep, m)
    if not rep.passed:
        raise VerificationError(f"sub-luminal spectrum check failed: {_failed(rep)}", rep)
    return rep


def verify_complex_spectra(params, N=256, m=8, zero_tol=ZERO_TOL):
    """Check the real-part and imaginary-part operators of the standing wave.

    Returns ``(report_R, report_I)``.
    """
    if params.family is not Family.SN_COMPLEX_STANDING:
        raise DomainError("verify_complex_spectra needs a complex standing sn wave")
    x = grid(N, params.L)
    psi = profile_derivative(params, x, order=0)
    dpsi = profile_derivative(params, x, order=1)
    sn, cn, dn = _lame_shapes(params, N)
    b1sq, b2sq = params.beta1 ** 2, params.beta2 ** 2

    rr = compute_spectrum(params, "L_sn_R", N, max(m, 5), zero_tol)
    w, v = rr.eigenvalues, rr.eigenvectors
    for j, (name, val) in enumerate(lame_eigenvalues(params, "L_sn_R").items()):
        rr.oracle_errors[f"lambda{j}_{name}"] = abs(w[j] - val)
    rr.oracle_errors["kernel_vs_dpsi"] = _vector_match(v[:, 1], dpsi)
    third = 3.0 * params.omega - 1.5 * b1sq
    rr.checks = {
        "one_negative": rr.negative_count == 1,
        "zero_second": abs(w[1]) <= zero_tol,
        "kernel_is_dpsi": rr.oracle_errors["kernel_vs_dpsi"] <= VECTOR_TOL,
        "third_value": abs(w[2] - third) <= VALUE_TOL,
        "ground_no_sign_change": sign_changes(v[:, 0]) == 0,
    }

    ri = compute_spectrum(params, "L_sn_I", N, max(m, 3), zero_tol)
    w, v = ri.eigenvalues, ri.eigenvectors
    for j, (name, val) in enumerate(lame_eigenvalues(params, "L_sn_I").items()):
        ri.oracle_errors[f"lambda{j}_{name}"] = abs(w[j] - val)
    ri.oracle_errors["dn_corr_defect"] = 1.0 - _correlation(v[:, 0], dn)
    ri.oracle_errors["cn_corr_defect"] = 1.0 - _correlation(v[:, 1], cn)
    ri.oracle_errors["kernel_vs_psi"] = _vector_match(v[:, 2], psi)
    ri.checks = {
        "two_negative": ri.negative_count == 2,
        "first_value": abs(w[0] + 0.5 * b1sq) <= VALUE_TOL,
        "second_value": abs(w[1] + 0.5 * b2sq) <= VALUE_TOL,
        "dn_shaped": 1.0 - ri.oracle_errors["dn_corr_defect"] > CORRELATION_MIN,
        "cn_shaped": 1.0 - ri.oracle_errors["cn_corr_defect"] > CORRELATION_MIN,
        "cn_two_zeros": sign_changes(v[:, 1]) == 2,
        "zero_third": abs(w[2]) <= zero_tol,
        "kernel_is_psi": ri.oracle_errors["kernel_vs_psi"] <= VECTOR_TOL,
    }
    for rep in (rr, ri):
        _trim(rep, m)
    for rep in (rr, ri):
        if not rep.passed:
            raise VerificationError(f"{rep.label} spectrum check failed: {_failed(rep)}", (rr, ri))
    return rr, ri


def _trim(rep, m):
    rep.eigenvalues = rep.eigenvalues[:m]
    rep.eigenvectors = rep.eigenvectors[:, :m]


def _failed(rep):
    return ", ".join(k for k, ok in rep.checks.items() if not ok)


def vector_eigenvalue_from_scalar(mu_sq, c):
    """Positive root lambda^2 of ``lambda^4 + (1 + c^2 - mu^2) lambda^2 - mu^2 = 0``.

    If the scalar operator has eigenvalue ``-mu^2``, the matching 2x2 vector
    block has eigenvalue ``-lambda^2``.
    """
    mu_sq = float(mu_sq)
    if not mu_sq > 0.0:
        raise DomainError(f"mu_sq must be positive, got {mu_sq!r}")
    b = 1.0 + c * c - mu_sq
    root = math.sqrt(b * b + 4.0 * mu_sq)
    if b > 0.0:
        # avoids cancellation in (-b + root) / 2
        return 2.0 * mu_sq / (b + root)
    return 0.5 * (root - b)


def scalar_eigenvalue_from_vector(lam_sq, c):
    """mu^2 = lambda^2 (1 + c^2 / (1 + lambda^2))."""
    return lam_sq * (1.0 + c * c / (1.0 + lam_sq))


def vector_block(params, which, N=256):
    """Dense 2N x 2N matrix of a vector operator (see module docstring)."""
    _check_n(N)
    c = params.c
    eye = np.eye(N)
    if which in ("R", "I"):
        if params.family is not Family.SN_COMPLEX_STANDING:
            raise DomainError("R and I blocks belong to the complex standing family")
        label = "L_sn_R" if which == "R" else "L_sn_I"
        spec, _ = build_hill(params, label, N)
        top = -second_derivative_matrix(N, params.L) - eye
        top[np.diag_indices(N)] += spec.potential
        coupling = (-c if which == "R" else c) * eye
    elif which == "traveling":
        if params.family is Family.SN_COMPLEX_STANDING:
            raise DomainError("the traveling block needs a real family")
        phi = profile_derivative(params, grid(N, params.L), order=0)
        top = -second_derivative_matrix(N, params.L) - eye
        top[np.diag_indices(N)] += 3.0 * phi ** 2
        # the off-diagonal block is -c d/dx; d/dx is antisymmetric so the full matrix is symmetric
        coupling = -c * first_derivative_matrix(N, params.L)
    else:
        raise DomainError(f"unknown vector block {which!r}")
    return np.block([[top, coupling], [coupling.T, eye]])


def odd_projector(N):
    """Orthonormal basis (columns) of grid functions with f(-x) = -f(x)."""
    P = np.zeros((N, N // 2 - 1))
    s = 1.0 / math.sqrt(2.0)
    for j in range(1, N // 2):
        P[j, j - 1] = s
        P[N - j, j - 1] = -s
    return P


def restrict_odd(matrix, N, blocks=1):
    """``P^T M P`` with P the odd projector repeated on each of ``blocks`` components."""
    P = odd_projector(N)
    if blocks > 1:
        P = np.kron(np.eye(blocks), P)
    return P.T @ np.asarray(matrix) @ P

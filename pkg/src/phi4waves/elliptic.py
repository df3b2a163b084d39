"""Complete elliptic integrals and Jacobi elliptic functions.

K and E come from the arithmetic-geometric mean; sn, cn and dn from the
descending Landen (Gauss) transformation after reducing the argument modulo
the real period 4K.  Everything works in binary64 and is vectorised over
the argument ``u``; the modulus ``k`` is a scalar.

The modulus convention is the one used throughout the package: ``k`` is the
modulus itself, not the parameter ``m = k**2`` used by scipy and Abramowitz
& Stegun.
"""
from collections import namedtuple
import math

import numpy as np

from .errors import DomainError

__all__ = [
    "EllipticEval",
    "complete_K",
    "complete_E",
    "complete_KE",
    "elliptic_derivatives",
    "jacobi_sncndn",
]

AGM_RTOL = 1e-15
AGM_MAXITER = 40
# Landen descent stops once |a - b| <= LANDEN_TOL * a; the neglected terms
# are O(LANDEN_TOL**2).
LANDEN_TOL = 1e-8
SMALL_ARG = 1e-5

EllipticEval = namedtuple("EllipticEval", ["K", "E", "dK", "dE"])


def _check_modulus(k, allow_one):
    k = float(k)
    if not math.isfinite(k) or k < 0.0 or k > 1.0 or (k == 1.0 and not allow_one):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise DomainError(f"elliptic modulus k={k!r} outside {bound}")
    return k


def complete_KE(k):
    """Return ``(K(k), E(k))`` from one AGM sweep.

    Uses ``K = pi / (2 agm(1, k'))`` and
    ``E = K (1 - sum_n 2**(n-1) c_n**2)`` with ``c_0 = k``.
    """
    k = _check_modulus(k, allow_one=False)
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    weight = 0.5
    s = weight * k * k
    for _ in range(AGM_MAXITER):
        if abs(a - b) <= AGM_RTOL * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        weight *= 2.0
        s += weight * c * c
    K = math.pi / (2.0 * a)
    return K, K * (1.0 - s)


def complete_K(k):
    """Complete elliptic integral of the first kind.

    Parameters
    ----------
    k : float
        Modulus, ``0 <= k < 1``.

    Returns
    -------
    float
        ``int_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta)``.
    """
    return complete_KE(k)[0]


def complete_E(k):
    """Complete elliptic integral of the second kind, ``0 <= k <= 1``."""
    k = _check_modulus(k, allow_one=True)
    if k == 1.0:
        return 1.0
    return complete_KE(k)[1]


def elliptic_derivatives(k):
    """K, E and their derivatives with respect to the modulus.

    ``dE = (E - K) / k`` and ``dK = (E - (1 - k^2) K) / (k (1 - k^2))``.
    Both formulas are singular at the endpoints, so ``k`` must lie in the
    open interval (0, 1).
    """
    k = _check_modulus(k, allow_one=False)
    if k == 0.0:
        raise DomainError("elliptic_derivatives needs 0 < k < 1")
    K, E = complete_KE(k)
    kc2 = (1.0 - k) * (1.0 + k)
    dE = (E - K) / k
    dK = (E - kc2 * K) / (k * kc2)
    return EllipticEval(K=K, E=E, dK=dK, dE=dE)


def jacobi_sncndn(u, k):
    """Jacobi elliptic functions sn, cn, dn.

    Parameters
    ----------
    u : float or array_like
        Argument.
    k : float
        Modulus in [0, 1].  ``k = 1`` returns the hyperbolic limit
        ``(tanh u, sech u, sech u)``.

    Returns
    -------
    sn, cn, dn : ndarray or float
        Same shape as ``u``.
    """
    k = _check_modulus(k, allow_one=True)
    u_arr = np.asarray(u, dtype=float)
    scalar = u_arr.ndim == 0
    u_arr = np.atleast_1d(u_arr)

    if k == 1.0:
        sn = np.tanh(u_arr)
        cn = 1.0 / np.cosh(u_arr)
        dn = cn.copy()
    elif k == 0.0:
        sn, cn, dn = np.sin(u_arr), np.cos(u_arr), np.ones_like(u_arr)
    else:
        sn, cn, dn = _landen(u_arr, k)

    if scalar:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn


def _landen(u, k):
    period = 4.0 * complete_K(k)
    u = u - period * np.round(u / period)

    # descending sequence of moduli
    emc = (1.0 - k) * (1.0 + k)
    a = 1.0
    em, en = [], []
    for _ in range(AGM_MAXITER):
        em.append(a)
        emc = math.sqrt(emc)
        en.append(emc)
        c = 0.5 * (a + emc)
        if abs(a - emc) <= LANDEN_TOL * a:
            break
        emc *= a
        a = c

    uc = u * c
    sn = np.sin(uc)
    cn = np.cos(uc)
    dn = np.ones_like(u)

    # tiny arguments would overflow cn/sn below; the Taylor terms dropped
    # there are O(u^5)
    tiny = np.abs(u) < SMALL_ARG
    if np.any(tiny):
        ut = u[tiny]
        u2 = ut * ut
        sn[tiny] = ut * (1.0 - (1.0 + k * k) * u2 / 6.0)
        cn[tiny] = 1.0 - 0.5 * u2
        dn[tiny] = 1.0 - 0.5 * k * k * u2

    nz = ~tiny
    if np.any(nz):
        s = sn[nz]
        ratio = cn[nz] / s
        cc = c * ratio
        d = np.ones_like(s)
        for b, e in zip(reversed(em), reversed(en)):
            ratio = ratio * cc
            cc = cc * d
            d = (e + ratio) / (b + ratio)
            ratio = cc / b
        mag = 1.0 / np.sqrt(cc * cc + 1.0)
        s_new = np.where(s >= 0.0, mag, -mag)
        sn[nz] = s_new
        cn[nz] = cc * s_new
        dn[nz] = d
    return sn, cn, dn

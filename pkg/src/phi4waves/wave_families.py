"""Explicit periodic waves of the phi^4 equation in Jacobi elliptic form.

Four families live on a torus of length L:

========================  ===================================  ==================
family                    profile                              amplitude parameter
========================  ===================================  ==================
``dn``  (superluminal)    beta1 dn(ell (x - c t); kappa)       beta1 in (1, sqrt 2)
``cn``  (superluminal)    beta2 cn(ell (x - c t); kappa)       beta2 in (sqrt 2, inf)
``sn-subluminal``         beta2 sn(ell (x - c t); kappa)       beta1 in (1, sqrt 2)
``sn-complex`` (standing) beta2 exp(i c t) sn(ell x; kappa)    beta1 in (sqrt w, sqrt 2w)
========================  ===================================  ==================

For fixed speed the period is strictly monotone in the amplitude parameter,
so matching the period to L is a one-dimensional bracketed root problem.
"""
from dataclasses import asdict, dataclass, replace
from enum import Enum
import json
import math

import numpy as np

from .elliptic import complete_K, jacobi_sncndn
from .errors import ConvergenceError, DomainError, RegimeError
from .fourier import grid

__all__ = [
    "Family",
    "WaveParams",
    "SpeedInterval",
    "omega_of",
    "amplitude_interval",
    "shape_parameters",
    "period_of",
    "admissible_speeds",
    "solve_family",
    "profile",
    "profile_derivative",
    "ode_residual",
    "quadrature_polynomial",
    "quadrature_residual",
    "fit_integration_constant",
]

SQRT2 = math.sqrt(2.0)
BRACKET_INSET = 1e-9
BISECT_WIDTH = 1e-14
BISECT_MAXITER = 200
KAPPA_CEILING = 1.0 - 1e-10


class Family(str, Enum):
    DN_SUPERLUMINAL = "dn"
    CN_SUPERLUMINAL = "cn"
    SN_SUBLUMINAL = "sn-subluminal"
    SN_COMPLEX_STANDING = "sn-complex"

    @classmethod
    def parse(cls, name):
        """Accept the CLI names and the CamelCase tags."""
        if isinstance(name, cls):
            return name
        aliases = {
            "dnsuperluminal": cls.DN_SUPERLUMINAL,
            "cnsuperluminal": cls.CN_SUPERLUMINAL,
            "snsubluminal": cls.SN_SUBLUMINAL,
            "sncomplexstanding": cls.SN_COMPLEX_STANDING,
            "sncomplex": cls.SN_COMPLEX_STANDING,
        }
        try:
            return cls(name)
        except ValueError:
            key = str(name).replace("-", "").replace("_", "").lower()
            if key in aliases:
                return aliases[key]
            raise DomainError(f"unknown wave family {name!r}") from None

    @property
    def superluminal(self):
        return self in (Family.DN_SUPERLUMINAL, Family.CN_SUPERLUMINAL)


@dataclass(frozen=True)
class WaveParams:
    """One point on a wave-family curve.

    ``A`` is the integration constant of the first-order (quadrature) form of
    the profile equation.  It is redundant given the betas and is kept so the
    root relations can be checked independently.
    """

    family: Family
    c: float
    L: float
    beta1: float
    beta2: float
    kappa: float
    ell: float
    omega: float
    A: float

    @property
    def amplitude_parameter(self):
        """The parameter the period is solved for (beta2 for cn, beta1 otherwise)."""
        if self.family is Family.CN_SUPERLUMINAL:
            return self.beta2
        return self.beta1

    @property
    def amplitude(self):
        """Maximum of |profile|."""
        if self.family is Family.DN_SUPERLUMINAL:
            return self.beta1
        return self.beta2

    def to_dict(self):
        d = asdict(self)
        d["family"] = self.family.value
        return d

    @classmethod
    def from_dict(cls, d):
        fields = {k: float(d[k]) for k in ("c", "L", "beta1", "beta2", "kappa", "ell", "omega", "A")}
        return cls(family=Family.parse(d["family"]), **fields)

    def to_json(self):
        # repr() of a float is the shortest string that round-trips exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SpeedInterval:
    """Admissible speeds |c| in (lo, hi) for a family on a torus of length L.

    For the sub-luminal and complex families the endpoint ``lo = 0`` is a
    genuine member (the standing wave) whenever L > 2 pi; :meth:`contains`
    applies the exact existence condition rather than the open interval.
    """

    lo: float
    hi: float
    family: Family
    L: float

    def contains(self, c):
        c2 = float(c) ** 2
        a = abs(float(c))
        two_pi_sq = 4.0 * math.pi ** 2
        fam = self.family
        if fam is Family.DN_SUPERLUMINAL:
            return 1.0 < a and 2.0 * math.pi ** 2 * (c2 - 1.0) < self.L ** 2
        if fam is Family.CN_SUPERLUMINAL:
            return 1.0 < a < math.inf
        if fam is Family.SN_SUBLUMINAL:
            return a < 1.0 and (1.0 - c2) * two_pi_sq < self.L ** 2
        return two_pi_sq < (1.0 + c2) * self.L ** 2

    def __contains__(self, c):
        return self.contains(c)

    def __str__(self):
        hi = "inf" if math.isinf(self.hi) else f"{self.hi:.17g}"
        return f"({self.lo:.17g}, {hi})"


def omega_of(family, c):
    """Frequency-like coefficient: c^2-1, 1-c^2 or 1+c^2 by family."""
    family = Family.parse(family)
    c2 = float(c) ** 2
    if family.superluminal:
        return c2 - 1.0
    if family is Family.SN_SUBLUMINAL:
        return 1.0 - c2
    return 1.0 + c2


def _check_speed_regime(family, c):
    a = abs(float(c))
    if family.superluminal and not a > 1.0:
        raise RegimeError(f"{family.value} waves need |c| > 1, got c={c!r}")
    if family is Family.SN_SUBLUMINAL and not a < 1.0:
        raise RegimeError(f"sub-luminal waves need |c| < 1, got c={c!r}")


def amplitude_interval(family, c):
    """Open interval of the amplitude parameter for a given speed."""
    family = Family.parse(family)
    if family is Family.CN_SUPERLUMINAL:
        return SQRT2, math.inf
    if family is Family.SN_COMPLEX_STANDING:
        w = omega_of(family, c)
        return math.sqrt(w), math.sqrt(2.0 * w)
    return 1.0, SQRT2


def shape_parameters(family, beta, c):
    """(beta1, beta2, kappa, ell, omega, A) for an amplitude parameter and speed."""
    family = Family.parse(family)
    _check_speed_regime(family, c)
    lo, hi = amplitude_interval(family, c)
    beta = float(beta)
    if not lo < beta < hi:
        raise DomainError(f"amplitude parameter {beta!r} outside ({lo}, {hi}) for {family.value}")
    w = omega_of(family, c)
    if family is Family.DN_SUPERLUMINAL:
        b1 = beta
        b2 = math.sqrt(2.0 - b1 * b1)
        kappa = math.sqrt(2.0 * (b1 * b1 - 1.0)) / b1
        ell = b1 / math.sqrt(2.0 * w)
        A = -0.25 * b1 * b1 * b2 * b2
    elif family is Family.CN_SUPERLUMINAL:
        b2 = beta
        b1 = math.sqrt(b2 * b2 - 2.0)
        kappa = b2 / math.sqrt(2.0 * b2 * b2 - 2.0)
        ell = math.sqrt((b2 * b2 - 1.0) / w)
        A = 0.25 * b1 * b1 * b2 * b2
    elif family is Family.SN_SUBLUMINAL:
        b1 = beta
        b2 = math.sqrt(2.0 - b1 * b1)
        kappa = b2 / b1
        ell = b1 / math.sqrt(2.0 * w)
        A = -0.25 * b1 * b1 * b2 * b2
    else:
        b1 = beta
        b2 = math.sqrt(2.0 * w - b1 * b1)
        kappa = b2 / b1
        ell = b1 / SQRT2
        A = 0.25 * b1 * b1 * b2 * b2
    return b1, b2, kappa, ell, w, A


def _period_from_shape(family, kappa, ell):
    quarter = complete_K(kappa)
    # dn has period 2K; sn and cn have period 4K
    cycles = 2.0 if family is Family.DN_SUPERLUMINAL else 4.0
    return cycles * quarter / ell


def period_of(family, beta, c):
    """Fundamental period of the wave with amplitude parameter ``beta`` and speed ``c``."""
    family = Family.parse(family)
    _, _, kappa, ell, _, _ = shape_parameters(family, beta, c)
    return _period_from_shape(family, kappa, ell)


def admissible_speeds(family, L):
    """Interval of |c| for which a wave of the family with period L exists."""
    family = Family.parse(family)
    L = float(L)
    if not L > 0.0:
        raise DomainError(f"period must be positive, got L={L!r}")
    if family is Family.DN_SUPERLUMINAL:
        return SpeedInterval(1.0, math.sqrt(1.0 + L * L / (2.0 * math.pi ** 2)), family, L)
    if family is Family.CN_SUPERLUMINAL:
        return SpeedInterval(1.0, math.inf, family, L)
    if family is Family.SN_SUBLUMINAL:
        lo = math.sqrt(max(0.0, 1.0 - L * L / (4.0 * math.pi ** 2)))
        return SpeedInterval(lo, 1.0, family, L)
    lo = math.sqrt(max(0.0, 4.0 * math.pi ** 2 / (L * L) - 1.0))
    return SpeedInterval(lo, math.inf, family, L)


def _bisect(fn, lo, hi):
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ConvergenceError("period map does not bracket the target period")
    for _ in range(BISECT_MAXITER):
        if hi - lo <= BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_family(family, L, c):
    """The unique wave of the family with speed ``c`` and fundamental period ``L``.

    Raises
    ------
    RegimeError
        ``c`` is not admissible for this family and period.
    ConvergenceError
        The root sits so close to the degenerate modulus that K(kappa) is
        not trustworthy (kappa > 1 - 1e-10), or the bracket failed.
    """
    family = Family.parse(family)
    L = float(L)
    c = float(c)
    interval = admissible_speeds(family, L)
    if not interval.contains(c):
        raise RegimeError(
            f"speed c={c!r} is not admissible for {family.value} with L={L!r}; "
            f"|c| must lie in {interval}",
            interval=interval,
        )

    lo, hi = amplitude_interval(family, c)
    lo += BRACKET_INSET
    if math.isinf(hi):
        hi = 2.0 * lo
        while period_of(family, hi, c) > L:
            hi *= 2.0
            if hi > 1e12:
                raise ConvergenceError("could not bracket the cnoidal amplitude")
    else:
        hi -= BRACKET_INSET

    try:
        beta = _bisect(lambda b: period_of(family, b, c) - L, lo, hi)
    except ConvergenceError:
        raise ConvergenceError(
            f"no {family.value} wave with L={L!r}, c={c!r} inside the bracket; "
            "the solution would sit too close to the degenerate modulus kappa = 1"
        ) from None
    b1, b2, kappa, ell, w, A = shape_parameters(family, beta, c)
    if kappa > KAPPA_CEILING:
        raise ConvergenceError(f"solution has near-degenerate modulus kappa={kappa!r}")
    return WaveParams(family, c, L, b1, b2, kappa, ell, w, A)


def _phase(params, x, t):
    x = np.asarray(x, dtype=float)
    if params.family is Family.SN_COMPLEX_STANDING:
        return params.ell * x
    return params.ell * (x - params.c * t)


def profile(params, x, t=0.0):
    """Wave value u(t, x) (complex dtype; real families have zero imaginary part)."""
    sn, cn, dn = jacobi_sncndn(_phase(params, x, t), params.kappa)
    fam = params.family
    if fam is Family.DN_SUPERLUMINAL:
        u = params.beta1 * dn
    elif fam is Family.CN_SUPERLUMINAL:
        u = params.beta2 * cn
    else:
        u = params.beta2 * sn
    u = np.asarray(u, dtype=complex)
    if fam is Family.SN_COMPLEX_STANDING:
        u = u * np.exp(1j * params.c * t)
    return u


def profile_derivative(params, x, t=0.0, order=1):
    """Exact x-derivative (order 0, 1 or 2) of the real spatial profile.

    For the standing family this differentiates ``psi(x)`` without the
    time-dependent phase.  Derivatives come from the identities
    sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn.
    """
    k = params.kappa
    k2 = k * k
    sn, cn, dn = jacobi_sncndn(_phase(params, x, t), k)
    fam = params.family
    ell = params.ell
    if fam is Family.DN_SUPERLUMINAL:
        amp = params.beta1
        derivs = (dn, -k2 * sn * cn, -k2 * dn * (cn * cn - sn * sn))
    elif fam is Family.CN_SUPERLUMINAL:
        amp = params.beta2
        derivs = (cn, -sn * dn, -cn * (dn * dn - k2 * sn * sn))
    else:
        amp = params.beta2
        derivs = (sn, cn * dn, -sn * (dn * dn + k2 * cn * cn))
    if order not in (0, 1, 2):
        raise DomainError("profile_derivative supports order 0, 1, 2")
    return amp * ell ** order * np.asarray(derivs[order], dtype=float)


def _samples(params, n_samples):
    if n_samples < 16:
        raise DomainError("need at least 16 samples")
    return grid(n_samples, params.L)


def _from_roots(params):
    """Copy of ``params`` with kappa and ell rebuilt from the turning points.

    The residual checks evaluate this copy so that a corrupted beta1 or
    beta2 shows up even though the profile formula reads only one of them.
    """
    b1, b2, w = params.beta1, params.beta2, params.omega
    fam = params.family
    if fam is Family.DN_SUPERLUMINAL:
        kappa = math.sqrt(max(b1 * b1 - b2 * b2, 0.0)) / b1
        ell = b1 / math.sqrt(2.0 * w)
    elif fam is Family.CN_SUPERLUMINAL:
        kappa = b2 / math.sqrt(b1 * b1 + b2 * b2)
        ell = math.sqrt((b2 * b2 - 1.0) / w)
    elif fam is Family.SN_SUBLUMINAL:
        kappa = b2 / b1
        ell = b1 / math.sqrt(2.0 * w)
    else:
        kappa = b2 / b1
        ell = b1 / SQRT2
    return replace(params, kappa=kappa, ell=ell)


def ode_residual(params, n_samples=256):
    """Max residual of the second-order profile equation over one period.

    Returns ``inf`` when the betas do not even define a valid modulus.
    """
    x = _samples(params, n_samples)
    params = _from_roots(params)
    if not 0.0 <= params.kappa <= 1.0:
        return math.inf
    phi = profile_derivative(params, x, order=0)
    phi_xx = profile_derivative(params, x, order=2)
    fam = params.family
    if fam.superluminal:
        r = params.omega * phi_xx - (phi - phi ** 3)
    elif fam is Family.SN_SUBLUMINAL:
        r = -params.omega * phi_xx - (phi - phi ** 3)
    else:
        r = phi_xx + params.omega * phi - phi ** 3
    return float(np.max(np.abs(r)))


def quadrature_polynomial(params, z, A=None):
    """The quartic F whose roots are the turning points of the profile."""
    A = params.A if A is None else A
    z = np.asarray(z, dtype=float)
    if params.family is Family.SN_COMPLEX_STANDING:
        return z ** 4 - 2.0 * params.omega * z ** 2 + 4.0 * A
    return z ** 4 - 2.0 * z ** 2 - 4.0 * A


def _quadrature_rhs(params, phi, A=None):
    F = quadrature_polynomial(params, phi, A)
    fam = params.family
    if fam.superluminal:
        return -F / (2.0 * params.omega)
    if fam is Family.SN_SUBLUMINAL:
        return F / (2.0 * params.omega)
    return 0.5 * F


def quadrature_residual(params, n_samples=256):
    """Max deviation of (phi')^2 from the first-order form of the profile equation."""
    x = _samples(params, n_samples)
    params = _from_roots(params)
    if not 0.0 <= params.kappa <= 1.0:
        return math.inf
    phi = profile_derivative(params, x, order=0)
    phi_x = profile_derivative(params, x, order=1)
    return float(np.max(np.abs(phi_x ** 2 - _quadrature_rhs(params, phi))))


def fit_integration_constant(params, n_samples=256):
    """Least-squares estimate of A from sampled (phi, phi').

    Uses only the sampled profile, not ``params.A``, so it checks the
    root relations between A and the betas.
    """
    x = _samples(params, n_samples)
    phi = profile_derivative(params, x, order=0)
    phi_x = profile_derivative(params, x, order=1)
    fam = params.family
    w = params.omega
    if fam.superluminal:
        # (phi')^2 = (2 phi^2 - phi^4 + 4A) / (2w)
        four_a = 2.0 * w * phi_x ** 2 - 2.0 * phi ** 2 + phi ** 4
    elif fam is Family.SN_SUBLUMINAL:
        # (phi')^2 = (phi^4 - 2 phi^2 - 4A) / (2w)
        four_a = phi ** 4 - 2.0 * phi ** 2 - 2.0 * w * phi_x ** 2
    else:
        # (phi')^2 = (phi^4 - 2w phi^2 + 4A) / 2
        four_a = 2.0 * phi_x ** 2 - phi ** 4 + 2.0 * w * phi ** 2
    return float(np.mean(four_a) / 4.0)

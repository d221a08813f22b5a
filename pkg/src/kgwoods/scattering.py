"""Continuum solution: transmission and reflection through the symmetric potential.

On each half-line the Klein-Gordon equation maps onto the hypergeometric
equation in ``z = -(p/q) exp(alpha (x + L))`` (left) or
``y = -(p/q) exp(-alpha (x - L))`` (right).  Both variables equal ``t0`` at
the origin, where the value and derivative are matched.  The 2F1 values at
``t0`` (``M1..M4``) are continued to ``1/t0`` with the two-term connection
formula, giving the ``S`` (gamma ratios) and ``N`` (series at ``1/t0``)
factors.

Powers of the negative number ``t0`` are taken as powers of ``-t0 > 0``: it
is the branch in which ``z**mu`` is a unit-modulus plane wave for imaginary
``mu``, and the only one that conserves probability.
"""

import cmath
import math
from dataclasses import dataclass

from . import numerics
from .errors import (DomainError, MatchingPointError, PoleError,
                     ResonanceDenominatorError)
from .potential import NATURAL
from .results import ScatteringResult
from .settings import DEFAULT_SETTINGS

RESONANCE_FLOOR = 1e-300
POLE_TOL = 1e-10


@dataclass(frozen=True)
class WaveCoefficients:
    energy: float
    mu: complex
    k: float
    nu: complex
    lambda_: complex
    t0: float
    omega0_sq: complex
    omega1_sq: complex
    omega2_sq: complex

    @property
    def log_abs_t0(self):
        return math.log(-self.t0)


def omegas(E, M, side, units=NATURAL):
    """Coefficients of ``omega0^2 + omega1^2 z + omega2^2 z^2``."""
    scale = (side.alpha * units.hbar_c) ** 2
    mc2 = units.rest_energy(M)
    w0 = (E * E - mc2 * mc2) / scale
    g = 2.0 * (E + mc2) / scale
    q, p = side.q, side.p
    w1 = -2.0 * w0 + g * ((side.V1 - 2.0 * side.V2 / q) / q
                          - side.xi * (side.A / q - side.B / p)
                          - 2.0 * side.eta * side.C / q * (side.C / q - side.D / p))
    w2 = w0 - g * ((side.V1 - side.V2 / q) / q
                   - side.xi * (side.A / q - side.B / p)
                   - side.eta * (side.C ** 2 / q ** 2 - side.D ** 2 / p ** 2))
    return w0, w1, w2


def nu_lambda(E, M, side, units=NATURAL, nu_sign=1):
    """``nu`` (exponent at z = 1) and ``lambda`` (at infinity).

    ``lambda = i*omega2``; ``omega2^2`` carries the ``V0`` offset, so this is
    not the same as the V0-free radical sometimes quoted for it.
    """
    scale = (side.alpha * units.hbar_c) ** 2
    mc2 = units.rest_energy(M)
    g = 2.0 * (E + mc2) / scale
    q, p = side.q, side.p
    well = ((side.V2 + side.eta * side.C ** 2) / q ** 2
            - side.eta * side.D / p * (2.0 * side.C / q - side.D / p))
    nu = 0.5 + nu_sign * cmath.sqrt(0.25 + g * well)
    _, _, w2 = omegas(E, M, side, units)
    lam = 1j * cmath.sqrt(w2)
    return nu, lam


def wave_coefficients(E, M, params, units=NATURAL, nu_sign=1):
    mc2 = units.rest_energy(M)
    if not E > mc2:
        raise DomainError(f"E={E} is not above the continuum threshold Mc^2={mc2}")
    side = params.right
    w0, w1, w2 = omegas(E, M, side, units)
    k = math.sqrt(E * E - mc2 * mc2) / (side.alpha * units.hbar_c)
    nu, lam = nu_lambda(E, M, side, units, nu_sign)
    return WaveCoefficients(energy=E, mu=1j * k, k=k, nu=nu, lambda_=lam,
                            t0=side.t0, omega0_sq=w0, omega1_sq=w1, omega2_sq=w2)


def _check_t0(coeffs):
    if coeffs.t0 >= 0:
        raise MatchingPointError(
            f"t0={coeffs.t0:.6g} is not negative: p/q < 0 puts the singular point "
            "z = 1 inside the physical range")
    if abs(coeffs.t0) <= 1.0:
        raise MatchingPointError(
            f"|t0|={abs(coeffs.t0):.6g} <= 1: the 1/t0 continuation does not apply")


def n_functions(coeffs, settings=DEFAULT_SETTINGS, which=range(8)):
    """N1..N8: the 2F1 series at ``1/t0`` left by the connection formula."""
    _check_t0(coeffs)
    mu, nu, lam = coeffs.mu, coeffs.nu, coeffs.lambda_
    x = 1.0 / coeffs.t0
    params = (
        (mu + nu + lam, -mu + nu + lam, 1 + 2 * lam),
        (mu + nu - lam, -mu + nu - lam, 1 - 2 * lam),
        (-mu + nu + lam, mu + nu + lam, 1 + 2 * lam),
        (-mu + nu - lam, mu + nu - lam, 1 - 2 * lam),
        (1 + mu + nu + lam, -mu + nu + lam, 1 + 2 * lam),
        (1 + mu + nu - lam, -mu + nu - lam, 1 - 2 * lam),
        (1 - mu + nu + lam, mu + nu + lam, 1 + 2 * lam),
        (1 - mu + nu - lam, mu + nu - lam, 1 - 2 * lam),
    )
    return tuple(numerics.hyp2f1(*params[i], x, tol=settings.series_tol,
                                 max_terms=settings.series_max_terms)
                 for i in which)


def _s_arguments(mu, nu, lam):
    """(numerator, denominator) gamma arguments of S1..S8."""
    return (
        ((1 + 2 * mu, -2 * lam), (mu + nu - lam, 1 + mu - nu - lam)),
        ((1 + 2 * mu, 2 * lam), (mu + nu + lam, 1 + mu - nu + lam)),
        ((1 - 2 * mu, -2 * lam), (-mu + nu - lam, 1 - mu - nu - lam)),
        ((1 - 2 * mu, 2 * lam), (-mu + nu + lam, 1 - mu - nu + lam)),
        ((2 + 2 * mu, -2 * lam), (1 + mu + nu - lam, 1 + mu - nu - lam)),
        ((2 + 2 * mu, 2 * lam), (1 + mu + nu + lam, 1 + mu - nu + lam)),
        ((2 - 2 * mu, -2 * lam), (1 - mu + nu - lam, 1 - mu - nu - lam)),
        ((2 - 2 * mu, 2 * lam), (1 - mu + nu + lam, 1 - mu - nu + lam)),
    )


def log_s_functions(coeffs, which=range(8)):
    """Logarithms of S1..S8 (or the 0-based subset ``which``).

    A ``-inf`` real part marks an exact zero.
    """
    args = _s_arguments(coeffs.mu, coeffs.nu, coeffs.lambda_)
    out = []
    for i in which:
        numer, denom = args[i]
        for arg in numer:
            if numerics.near_nonpositive_integer(arg, POLE_TOL):
                raise PoleError(f"S{i + 1}: Gamma({arg}) in the numerator is at a pole",
                                argument=arg)
        out.append(numerics.log_gamma_ratio(numer, denom))
    return tuple(out)


def s_functions(coeffs):
    """S1..S8, the gamma-function prefactors of the connection formula.

    A denominator pole gives an exact zero.
    """
    return tuple(numerics._exp(w) for w in log_s_functions(coeffs))


def _m_exponents(mu, nu, lam):
    """Exponents of ``(-1)^w t0^w`` paired with S1..S8."""
    return (-mu - nu - lam, -mu - nu + lam, mu - nu - lam, mu - nu + lam,
            -1 - mu - nu - lam, -1 - mu - nu + lam, -1 + mu - nu - lam,
            -1 + mu - nu + lam)


def _log_phase_power(w, log_abs_t0, branch):
    """log of the product ``(-1)^w t0^w``."""
    if branch == "abs":
        return w * log_abs_t0
    # literal principal powers of -1 and of t0, for the negative control
    return w * (log_abs_t0 + 2j * math.pi)


def _log_t0_power(w, log_abs_t0, branch):
    """log of a bare ``t0^w``."""
    if branch == "abs":
        return w * log_abs_t0
    return w * (log_abs_t0 + 1j * math.pi)


def _m_terms(coeffs, settings, which=range(8)):
    """Logs of the eight ``S (-1)^w t0^w`` factors and the matching N's."""
    which = tuple(which)
    logs = log_s_functions(coeffs, which)
    ns = n_functions(coeffs, settings, which)
    exps = _m_exponents(coeffs.mu, coeffs.nu, coeffs.lambda_)
    log_t = coeffs.log_abs_t0
    term_logs = [ls + _log_phase_power(exps[i], log_t, settings.branch)
                 for ls, i in zip(logs, which)]
    return term_logs, ns


def _assemble_m(term_logs, ns, log_scale):
    vals = [numerics._exp(tl + log_scale) * n for tl, n in zip(term_logs, ns)]
    return (vals[0] + vals[1], vals[2] + vals[3], vals[4] + vals[5], vals[6] + vals[7])


def m_functions(coeffs, settings=DEFAULT_SETTINGS, log_scale=0.0):
    """M1..M4 = 2F1 values (and derivative partners) at the matching point.

    ``log_scale`` multiplies all four by ``exp(log_scale)``; ratios of the
    M's are unchanged and large exponents stay representable.
    """
    term_logs, ns = _m_terms(coeffs, settings)
    return _assemble_m(term_logs, ns, log_scale)


def normalised_m_functions(coeffs, settings=DEFAULT_SETTINGS):
    """M1..M4 rescaled by a common positive factor so the largest term is O(1)."""
    term_logs, ns = _m_terms(coeffs, settings)
    finite = [tl.real for tl in term_logs if tl.real != -math.inf]
    log_scale = -max(finite) if finite else 0.0
    return _assemble_m(term_logs, ns, log_scale)


def derivative_brackets(coeffs, ms):
    """The two brackets built from the derivative continuity condition.

    ``(mu/t0 - nu/(1-t0)) M1 + ((mu+nu)^2 - lam^2)/(1+2mu) M3`` and its
    ``mu -> -mu`` partner built from M2, M4.
    """
    mu, nu, lam, t0 = coeffs.mu, coeffs.nu, coeffs.lambda_, coeffs.t0
    m1, m2, m3, m4 = ms
    p1 = (mu / t0 - nu / (1 - t0)) * m1 + ((mu + nu) ** 2 - lam ** 2) / (1 + 2 * mu) * m3
    p2 = (-mu / t0 - nu / (1 - t0)) * m2 + ((-mu + nu) ** 2 - lam ** 2) / (1 - 2 * mu) * m4
    return p1, p2


def amplitude_ratios(coeffs, settings=DEFAULT_SETTINGS):
    """Return ``(D1/A1, B1/A1)`` for an incident wave of unit amplitude."""
    ms = normalised_m_functions(coeffs, settings)
    p1, p2 = derivative_brackets(coeffs, ms)
    m1, m2 = ms[0], ms[1]
    for name, value in (("M2", m2), ("derivative bracket", p2)):
        if abs(value) < RESONANCE_FLOOR:
            raise ResonanceDenominatorError(
                f"{name} vanishes at E={coeffs.energy}; perturb the energy")
    prefactor = numerics._exp(_log_t0_power(2 * coeffs.mu, coeffs.log_abs_t0,
                                            settings.branch))
    r_value = m1 / m2
    r_slope = p1 / p2
    d1 = 0.5 * prefactor * (r_value - r_slope)
    b1 = -0.5 * prefactor * (r_value + r_slope)
    return d1, b1


def transmission_reflection(E, M, params, units=NATURAL, settings=DEFAULT_SETTINGS):
    if not params.symmetric:
        raise DomainError("the scattering matrix is implemented for symmetric potentials only")
    coeffs = wave_coefficients(E, M, params, units, settings.nu_sign)
    _check_t0(coeffs)
    d1, b1 = amplitude_ratios(coeffs, settings)
    return ScatteringResult(energy=E, T=abs(d1) ** 2, R=abs(b1) ** 2,
                            d1_over_a1=d1, b1_over_a1=b1)


def _branch_solution(log_abs, one_minus, sign, coeffs, settings, z):
    """``|z|^(sign mu) (1-z)^nu 2F1(sign mu + nu + lam, sign mu + nu - lam; 1 + 2 sign mu; z)``."""
    mu, nu, lam = sign * coeffs.mu, coeffs.nu, coeffs.lambda_
    if settings.branch == "abs":
        zpow = cmath.exp(mu * log_abs)
    else:
        zpow = cmath.exp(mu * (log_abs + 1j * math.pi))
    hyp = numerics.hyp2f1(mu + nu + lam, mu + nu - lam, 1 + 2 * mu, z,
                          tol=settings.series_tol, max_terms=settings.series_max_terms)
    return zpow * cmath.exp(nu * math.log(one_minus)) * hyp


def scattering_wavefunction(x, coeffs, ratios, params, settings=DEFAULT_SETTINGS):
    """phi(x) with unit incident amplitude (A1 = 1, C1 = 0)."""
    d1, b1 = ratios
    if x < 0:
        side = params.left
        s = side.alpha * (x + side.L)
        sign_out = 1
    else:
        side = params.right
        s = -side.alpha * (x - side.L)
        sign_out = -1
    log_abs = math.log(side.p / side.q) + s
    z = -math.exp(log_abs)
    one_minus = 1.0 - z
    if x < 0:
        return (_branch_solution(log_abs, one_minus, 1, coeffs, settings, z)
                + b1 * _branch_solution(log_abs, one_minus, -1, coeffs, settings, z))
    return d1 * _branch_solution(log_abs, one_minus, sign_out, coeffs, settings, z)

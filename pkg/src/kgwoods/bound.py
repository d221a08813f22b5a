"""Bound states of the symmetric well.

For ``-Mc^2 < E < Mc^2`` the exponent at ``z = 0`` is real, ``mu = K > 0``,
and the solution that decays at ``x -> -inf`` is
``|z|^K (1-z)^nu 2F1(K+nu+lam, K+nu-lam; 1+2K; z)``.  With a symmetric
potential the right half is the same function of ``y`` times the parity
sign, so the matching conditions at the origin separate:

* odd states: the value vanishes, ``M1 = 0``;
* even states: the slope vanishes,
  ``(mu/t0 - nu/(1-t0)) M1 + ((mu+nu)^2 - lam^2)/(1+2mu) M3 = 0``.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import (ComplexResidualError, DomainError, NoBracketError,
                     NonConvergedRootError, NumericsError)
from .potential import NATURAL, evaluate
from .results import EVEN, ODD, BoundState, Spectrum
from .scattering import _check_t0, _m_terms, nu_lambda, omegas
from .settings import DEFAULT_SETTINGS

IMAG_REL_TOL = 1e-6
IMAG_ABS_TOL = 1e-12
NODE_NOISE = 1e-9

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class BoundCoefficients:
    energy: float
    K: float
    mu: complex
    nu: complex
    lambda_: complex
    t0: float
    omega0_sq: float
    omega1_sq: float
    omega2_sq: float

    @property
    def log_abs_t0(self):
        return math.log(-self.t0)


@dataclass(frozen=True)
class BoundContext:
    """Everything the condition functions need besides the energy."""

    params: object
    mass: float
    units: object = NATURAL
    settings: object = DEFAULT_SETTINGS


def bound_coefficients(E, M, params, units=NATURAL, nu_sign=1):
    mc2 = units.rest_energy(M)
    if not -mc2 < E < mc2:
        raise DomainError(f"E={E} outside the bound-state interval (-{mc2}, {mc2})")
    side = params.right
    w0, w1, w2 = omegas(E, M, side, units)
    K = math.sqrt(mc2 * mc2 - E * E) / (side.alpha * units.hbar_c)
    nu, lam = nu_lambda(E, M, side, units, nu_sign)
    return BoundCoefficients(energy=E, K=K, mu=complex(K), nu=nu, lambda_=lam,
                             t0=side.t0, omega0_sq=w0, omega1_sq=w1, omega2_sq=w2)


def _real_residual(value, scale, what, E):
    if scale == 0:
        return 0.0
    value = value / scale
    if abs(value.imag) > IMAG_REL_TOL * abs(value.real) + IMAG_ABS_TOL:
        raise ComplexResidualError(
            f"{what} condition at E={E} is not real: {value!r}")
    return value.real


def _decaying_terms(E, ctx):
    if not ctx.params.symmetric:
        raise DomainError("bound-state quantization needs a symmetric potential")
    coeffs = bound_coefficients(E, ctx.mass, ctx.params, ctx.units, ctx.settings.nu_sign)
    _check_t0(coeffs)
    # only the decaying-solution terms: S1, S2 (M1) and S5, S6 (M3)
    term_logs, ns = _m_terms(coeffs, ctx.settings, which=(0, 1, 4, 5))
    shift = -max((tl.real for tl in term_logs if tl.real != -math.inf), default=0.0)
    t = [numerics._exp(tl + shift) * n for tl, n in zip(term_logs, ns)]
    return coeffs, t


def odd_condition(E, ctx):
    """Normalised value of M1 at the origin; zero on odd eigenvalues."""
    _, t = _decaying_terms(E, ctx)
    return _real_residual(t[0] + t[1], abs(t[0]) + abs(t[1]), ODD, E)


def even_condition(E, ctx):
    """Normalised slope bracket at the origin; zero on even eigenvalues."""
    coeffs, t = _decaying_terms(E, ctx)
    mu, nu, lam, t0 = coeffs.mu, coeffs.nu, coeffs.lambda_, coeffs.t0
    w1 = mu / t0 - nu / (1 - t0)
    w3 = ((mu + nu) ** 2 - lam ** 2) / (1 + 2 * mu)
    pieces = (w1 * t[0], w1 * t[1], w3 * t[2], w3 * t[3])
    return _real_residual(sum(pieces), sum(abs(p) for p in pieces), EVEN, E)


CONDITIONS = {EVEN: even_condition, ODD: odd_condition}


def _safe(fn, E, ctx, nudge=1e-9):
    try:
        return fn(E, ctx)
    except NumericsError:
        # measure-zero pole of the closed form; step off it, towards the band centre
        return fn(E - math.copysign(nudge, E), ctx)


def _refine(fn, lo, hi, f_lo, f_hi, ctx):
    s = ctx.settings
    while hi - lo > s.bisect_width:
        mid = 0.5 * (lo + hi)
        f_mid = _safe(fn, mid, ctx)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    E = 0.5 * (lo + hi)
    h = s.newton_step
    for _ in range(s.newton_max_iter):
        f = _safe(fn, E, ctx)
        # stencil clamped to the bracket: a root near the band edge must not probe past it
        a, b = max(lo, E - h), min(hi, E + h)
        slope = (_safe(fn, b, ctx) - _safe(fn, a, ctx)) / (b - a)
        if f == 0:
            return E
        if slope == 0 or not math.isfinite(slope):
            break
        step = f / slope
        new = E - step
        if not lo <= new <= hi:
            # Newton left the bracket: fall back to a bisection step
            mid = 0.5 * (lo + hi)
            f_mid = _safe(fn, mid, ctx)
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi, f_hi = mid, f_mid
            new = 0.5 * (lo + hi)
        if abs(new - E) < s.root_tol:
            return new
        E = new
    raise NonConvergedRootError(
        f"root refinement did not converge in [{lo}, {hi}]", bracket=(lo, hi), last=E)


def potential_minimum(params, n=4001):
    lt, rt = params.left, params.right
    xs = np.linspace(-(lt.L + 10 / lt.alpha), rt.L + 10 / rt.alpha, n)
    return float(np.min(evaluate(params, xs)))


def scan_grid(M, units, settings):
    mc2 = units.rest_energy(M)
    eps = settings.band_margin * mc2
    lo, hi = -mc2 + eps, mc2 - eps
    n = int(math.floor((hi - lo) / settings.scan_step))
    grid = lo + settings.scan_step * np.arange(n + 1)
    if grid[-1] < hi:
        grid = np.append(grid, hi)
    return grid


def find_roots(params, M, units=NATURAL, settings=DEFAULT_SETTINGS):
    """Return sorted ``(energy, parity, residual)`` for every bracketed root."""
    ctx = BoundContext(params, M, units, settings)
    grid = scan_grid(M, units, settings)
    roots = []
    for parity, fn in CONDITIONS.items():
        vals = [_safe(fn, float(E), ctx) for E in grid]
        for i in range(len(grid) - 1):
            a, b = vals[i], vals[i + 1]
            if a == 0:
                roots.append((float(grid[i]), parity, 0.0))
            elif (a > 0) != (b > 0) and b != 0:
                E = _refine(fn, float(grid[i]), float(grid[i + 1]), a, b, ctx)
                roots.append((E, parity, _safe(fn, E, ctx)))
    roots.sort()
    return roots


def scan_spectrum(params, M, units=NATURAL, settings=DEFAULT_SETTINGS, with_nodes=True):
    """Locate every bound state in ``(-Mc^2, Mc^2)``.

    A potential that is nowhere negative holds no bound states, and gets an
    empty spectrum.  A well in which no root is bracketed raises
    ``NoBracketError``.
    """
    if potential_minimum(params) >= 0:
        return Spectrum(states=(), params=params, mass=M)
    roots = find_roots(params, M, units, settings)
    if not roots:
        raise NoBracketError("no sign change of either quantization condition")
    states = []
    for i, (E, parity, res) in enumerate(roots):
        nodes = -1
        if with_nodes:
            state = BoundState(E, parity, -1, res, i)
            xs = node_grid(params)
            nodes = count_nodes(xs, wavefunction_grid(state, xs, params, M, units, settings))
        states.append(BoundState(energy=E, parity=parity, nodes=nodes,
                                 condition_residual=res, index=i))
    return Spectrum(states=tuple(states), params=params, mass=M)


def node_grid(params, n=2001, margin=10.0):
    lt, rt = params.left, params.right
    return np.linspace(-(lt.L + margin / lt.alpha), rt.L + margin / rt.alpha, n)


def _decaying_solution(x, coeffs, params, settings):
    """Left-half decaying solution at ``x`` (mirrored for ``x > 0``)."""
    side = params.left if x < 0 else params.right
    s = side.alpha * (-abs(x) + side.L)
    log_abs = math.log(side.p / side.q) + s
    z = -math.exp(log_abs)
    mu, nu, lam = coeffs.mu, coeffs.nu, coeffs.lambda_
    pref = cmath.exp(mu * log_abs + nu * math.log1p(-z))
    hyp = numerics.hyp2f1(mu + nu + lam, mu + nu - lam, 1 + 2 * mu, z,
                          tol=settings.series_tol, max_terms=settings.series_max_terms)
    return pref * hyp, abs(pref)


def bound_wavefunction(state, x, params, M, units=NATURAL, settings=DEFAULT_SETTINGS):
    """Unnormalised real eigenfunction; the left half is fixed to +1 amplitude."""
    coeffs = bound_coefficients(state.energy, M, params, units, settings.nu_sign)
    value, scale = _decaying_solution(x, coeffs, params, settings)
    if x > 0 and state.parity == ODD:
        value = -value
    if abs(value.imag) > 1e-8 * max(abs(value), scale):
        raise ComplexResidualError(f"eigenfunction not real at x={x}: {value!r}")
    return value.real


def wavefunction_grid(state, xs, params, M, units=NATURAL, settings=DEFAULT_SETTINGS,
                      normalize=False):
    phi = np.array([bound_wavefunction(state, float(x), params, M, units, settings)
                    for x in xs])
    if normalize:
        phi = phi / math.sqrt(_trapezoid(phi * phi, xs))
    return phi


def count_nodes(xs, phi=None):
    """Strict sign changes of sampled ``phi``, ignoring a small noise band.

    Accepts either two sequences or a single sequence of ``(x, phi)`` pairs.
    """
    if phi is None:
        pairs = np.asarray(xs, dtype=float)
        phi = pairs[:, 1] if pairs.size else pairs
    phi = np.asarray(phi, dtype=float)
    if phi.size == 0:
        return 0
    cut = NODE_NOISE * np.max(np.abs(phi))
    kept = phi[np.abs(phi) > cut]
    return int(np.count_nonzero(np.signbit(kept[1:]) != np.signbit(kept[:-1])))

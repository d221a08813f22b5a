"""Direct numerical solution of the Klein-Gordon equation.

    phi'' + Q(x) phi = 0,   Q = [(E^2 - M^2 c^4) - 2 (E + Mc^2) V(x)] / (hbar c)^2

integrated with fixed-step classical RK4.  This is the cross-check for the
closed-form path: it uses nothing but the potential itself, so it shares no
special-function code with ``scattering`` or ``bound``.

Every integration is batched over energies (numpy arrays), and the bound
search also batches the two inward integrations from either side.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoBracketError, StepSizeError
from .potential import NATURAL, PotentialParams, evaluate
from .results import EVEN, NO_PARITY, ODD, BoundState, ScatteringResult, Spectrum
from .settings import DEFAULT_SETTINGS

CUTOFF = 20.0           # asymptotic region starts this many 1/alpha past L
EDGE_STEPS = 0.01       # step * alpha bound
WAVE_STEPS = 0.05       # step * k_local bound (precondition)
DEFAULT_WAVE_STEPS = 0.02
NODE_NOISE = 1e-9
RESCALE_AT = 1e100
RESCALE_EVERY = 16


@dataclass(frozen=True)
class OdeSolution:
    grid: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    energy: float
    params: object = field(repr=False)

    def __post_init__(self):
        if not np.all(np.diff(self.grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not (np.all(np.isfinite(self.phi)) and np.all(np.isfinite(self.dphi))):
            raise ValueError("non-finite samples in the solution")

    def wronskian(self, other):
        return self.phi * other.dphi - self.dphi * other.phi


def _potential_fn(params):
    if isinstance(params, PotentialParams):
        return lambda x: evaluate(params, x)
    return params


def _max_alpha(params):
    if isinstance(params, PotentialParams):
        return max(params.left.alpha, params.right.alpha)
    return 0.0


def _q_coeffs(energies, M, units):
    """Q = a - b V, per energy."""
    E = np.asarray(energies, dtype=float)
    mc2 = units.rest_energy(M)
    s = units.hbar_c ** 2
    return (E * E - mc2 * mc2) / s, 2.0 * (E + mc2) / s


def _max_step(a, b, v, alpha):
    """Largest step the precondition allows for the sampled potential ``v``."""
    vmin, vmax = float(np.min(v)), float(np.max(v))
    q_abs = max(np.max(np.abs(a - b * vmin)), np.max(np.abs(a - b * vmax)))
    limits = []
    if q_abs > 0:
        limits.append(WAVE_STEPS / math.sqrt(q_abs))
    if alpha > 0:
        limits.append(EDGE_STEPS / alpha)
    return min(limits) if limits else math.inf


def _default_step(a, b, v, alpha):
    # a fixed fraction finer than the precondition
    return _max_step(a, b, v, alpha) * DEFAULT_WAVE_STEPS / WAVE_STEPS


def _grid(x_start, x_end, step):
    n = max(1, int(math.ceil(abs(x_end - x_start) / step * (1 - 1e-12))))
    h = (x_end - x_start) / n
    return n, h, x_start + 0.5 * h * np.arange(2 * n + 1)


def _propagate(a, b, v, h, y, d, record=False):
    """RK4 for ``y' = d, d' = -(a - b v) y``.

    ``v`` holds the potential at every half step (``2n + 1`` rows); each row
    broadcasts against ``a``, ``b``, ``y`` and ``d``.  With ``record`` the
    state after every whole step is returned too.  Otherwise the state is
    rescaled whenever it grows past ``RESCALE_AT`` (the equation is linear),
    and the returned ``log_scale`` holds the natural log of the factor removed.
    """
    n = (len(v) - 1) // 2
    half = 0.5 * h
    sixth = h / 6.0
    ys = ds = None
    log_scale = np.zeros(np.shape(y * a))
    if record:
        ys = np.empty((n + 1,) + np.shape(y), dtype=np.result_type(y, d, float))
        ds = np.empty_like(ys)
        ys[0], ds[0] = y, d
    q1 = a - b * v[0]
    for i in range(n):
        q0 = q1
        qm = a - b * v[2 * i + 1]
        q1 = a - b * v[2 * i + 2]
        k1y, k1d = d, -q0 * y
        y2 = y + half * k1y
        d2 = d + half * k1d
        k2y, k2d = d2, -qm * y2
        y3 = y + half * k2y
        d3 = d + half * k2d
        k3y, k3d = d3, -qm * y3
        y4 = y + h * k3y
        d4 = d + h * k3d
        k4y, k4d = d4, -q1 * y4
        y = y + sixth * (k1y + 2 * k2y + 2 * k3y + k4y)
        d = d + sixth * (k1d + 2 * k2d + 2 * k3d + k4d)
        if record:
            ys[i + 1], ds[i + 1] = y, d
        elif i % RESCALE_EVERY == 0:
            size = np.abs(y) + np.abs(d)
            if np.max(size) > RESCALE_AT:
                size = np.maximum(size, 1.0)
                y, d = y / size, d / size
                log_scale = log_scale + np.log(size)
    return y, d, ys, ds, log_scale


def integrate_kg(E, M, params, units=NATURAL, x_start=None, x_end=None, step=None,
                 initial=None):
    """Integrate from ``x_start`` to ``x_end`` (either direction).

    ``params`` is a ``PotentialParams`` or any vectorised callable ``V(x)``.
    ``initial`` is ``(phi, dphi)`` at ``x_start``; by default a unit plane
    wave ``e^{ikx}`` above threshold, or the solution decaying away from
    ``x_start`` below it.  Raises ``StepSizeError`` when ``step`` is too
    coarse for the potential edge or the shortest local wavelength.
    """
    if x_start is None or x_end is None:
        if not isinstance(params, PotentialParams):
            raise TypeError("x_start and x_end are required for a callable potential")
        lo, hi = _cutoffs(params)
        x_start = lo if x_start is None else x_start
        x_end = hi if x_end is None else x_end
    if x_start == x_end:
        raise ValueError("x_start and x_end coincide")
    vfn = _potential_fn(params)
    a, b = _q_coeffs(E, M, units)
    alpha = _max_alpha(params)
    probe = vfn(np.linspace(min(x_start, x_end), max(x_start, x_end), 4001))
    limit = _max_step(a, b, probe, alpha)
    if step is None:
        step = _default_step(a, b, probe, alpha)
    elif not 0 < step <= limit:
        raise StepSizeError(f"step {step} exceeds the stable limit {limit:.6g}")
    n, h, xs = _grid(x_start, x_end, step)
    v = vfn(xs)
    if initial is None:
        initial = _asymptotic_start(a, x_start, forward=h > 0)
    y0, d0 = (complex(c) for c in initial)
    _, _, ys, ds, _ = _propagate(float(a), float(b), v, h, y0, d0, record=True)
    grid = xs[::2]
    if h < 0:
        grid, ys, ds = grid[::-1], ys[::-1], ds[::-1]
    return OdeSolution(grid=np.ascontiguousarray(grid), phi=np.ascontiguousarray(ys),
                       dphi=np.ascontiguousarray(ds), energy=float(E), params=params)


def _asymptotic_start(a, x0, forward):
    if a > 0:
        k = math.sqrt(a)
        w = complex(math.cos(k * x0), math.sin(k * x0))
        return w, 1j * k * w
    kappa = math.sqrt(-a)
    # grows along the direction of integration, i.e. decays outward
    return 1.0, (kappa if forward else -kappa)


def _cutoffs(params):
    lt, rt = params.left, params.right
    return -(lt.L + CUTOFF / lt.alpha), rt.L + CUTOFF / rt.alpha


def _transmission_batch(energies, M, params, units, step):
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    mc2 = units.rest_energy(M)
    if np.any(energies <= mc2):
        raise ValueError(f"energies must exceed Mc^2 = {mc2}")
    a, b = _q_coeffs(energies, M, units)
    x_lo, x_hi = _cutoffs(params)
    vfn = _potential_fn(params)
    probe = vfn(np.linspace(x_lo, x_hi, 4001))
    alpha = _max_alpha(params)
    if step is None:
        step = _default_step(a, b, probe, alpha)
    elif step > _max_step(a, b, probe, alpha):
        raise StepSizeError(f"step {step} too coarse for this energy range")
    n, h, xs = _grid(x_hi, x_lo, step)
    v = vfn(xs)
    k = np.sqrt(a)
    # pure outgoing wave e^{ikx} on the far right, integrated backward
    y = np.exp(1j * k * x_hi)
    d = 1j * k * y
    y, d, _, _, log_scale = _propagate(a, b, v, h, y, d)
    incident = 0.5 * (y + d / (1j * k)) * np.exp(-1j * k * x_lo)
    reflected = 0.5 * (y - d / (1j * k)) * np.exp(1j * k * x_lo)
    # the true incident amplitude is ``incident * e^log_scale``
    t_amp = np.exp(-log_scale) / incident
    r_amp = reflected / incident
    return [ScatteringResult(energy=float(E), T=float(abs(t) ** 2), R=float(abs(r) ** 2),
                             d1_over_a1=complex(t), b1_over_a1=complex(r))
            for E, t, r in zip(energies, t_amp, r_amp)]


def oracle_transmission(E, M, params, units=NATURAL, step=None):
    """T and R from backward integration of a pure transmitted wave.

    Integrates from ``L + 20/alpha`` to ``-L - 20/alpha`` and splits the
    result there into incident and reflected plane waves.
    """
    return _transmission_batch([E], M, params, units, step)[0]


def oracle_transmission_many(energies, M, params, units=NATURAL, step=None):
    """Batched ``oracle_transmission`` on one shared step grid."""
    return _transmission_batch(energies, M, params, units, step)


class _Shooter:
    """Inward integrations from both decaying tails, batched over energy."""

    def __init__(self, params, M, units, step=None):
        self.params, self.M, self.units = params, M, units
        x_lo, x_hi = _cutoffs(params)
        mc2 = units.rest_energy(M)
        vfn = _potential_fn(params)
        probe = vfn(np.linspace(x_lo, x_hi, 4001))
        a, b = _q_coeffs(np.array([-mc2, mc2]), M, units)
        alpha = _max_alpha(params)
        if step is None:
            step = _default_step(a, b, probe, alpha)
        elif step > _max_step(a, b, probe, alpha):
            raise StepSizeError(f"step {step} too coarse for the bound-state band")
        # same step count on both sides; the right run goes backward
        n = max(1, int(math.ceil(max(-x_lo, x_hi) / step)))
        j = 0.5 * np.arange(2 * n + 1)
        self.h_left, self.h_right = -x_lo / n, -x_hi / n
        self.v_left = vfn(x_lo + self.h_left * j)
        self.v_right = vfn(x_hi + self.h_right * j)
        self.n = n

    def ends(self, energies, record=False):
        """``(phi, dphi)`` at the origin from the left and from the right."""
        E = np.asarray(energies, dtype=float)
        a, b = _q_coeffs(E, self.M, self.units)
        kappa = np.sqrt(np.maximum(-a, 0.0))
        ones = np.ones_like(E)
        out = []
        for v, h, sign in ((self.v_left, self.h_left, 1.0), (self.v_right, self.h_right, -1.0)):
            y, d, ys, ds, _ = _propagate(a, b, v[:, None] if E.ndim else v, h,
                                         ones, sign * kappa, record=record)
            out.append((y, d, ys, ds))
        return out

    def wronskian(self, energies):
        (yl, dl, _, _), (yr, dr, _, _) = self.ends(energies)
        w = yl * dr - dl * yr
        # sign-preserving normalisation keeps the scan well scaled
        return w / ((np.abs(yl) + np.abs(dl)) * (np.abs(yr) + np.abs(dr)))


def _potential_min(params):
    x_lo, x_hi = _cutoffs(params)
    return float(np.min(evaluate(params, np.linspace(x_lo, x_hi, 8001))))


def _band_grid(M, units, settings):
    mc2 = units.rest_energy(M)
    eps = settings.band_margin * mc2
    lo, hi = -mc2 + eps, mc2 - eps
    n = int(math.floor((hi - lo) / settings.scan_step))
    grid = lo + settings.scan_step * np.arange(n + 1)
    if grid[-1] < hi:
        grid = np.append(grid, hi)
    return grid


def _count_nodes(phi):
    phi = np.asarray(phi, dtype=float)
    kept = phi[np.abs(phi) > NODE_NOISE * np.max(np.abs(phi))]
    return int(np.count_nonzero(np.signbit(kept[1:]) != np.signbit(kept[:-1])))


def oracle_spectrum(params, M, units=NATURAL, settings=DEFAULT_SETTINGS, step=None):
    """Bound spectrum by shooting: Wronskian of the two decaying solutions at 0.

    Sign changes of the Wronskian on the energy scan grid are bisected (all
    brackets at once) down to ``settings.root_tol``.
    """
    if _potential_min(params) >= 0:
        return Spectrum(states=(), params=params, mass=M)
    shooter = _Shooter(params, M, units, step)
    grid = _band_grid(M, units, settings)
    w = shooter.wronskian(grid)
    idx = np.nonzero(np.signbit(w[1:]) != np.signbit(w[:-1]))[0]
    if idx.size == 0:
        raise NoBracketError("the shooting Wronskian never changes sign")
    lo, hi = grid[idx].copy(), grid[idx + 1].copy()
    w_lo = w[idx].copy()
    while np.max(hi - lo) > settings.root_tol:
        mid = 0.5 * (lo + hi)
        w_mid = shooter.wronskian(mid)
        same = np.signbit(w_mid) == np.signbit(w_lo)
        lo = np.where(same, mid, lo)
        w_lo = np.where(same, w_mid, w_lo)
        hi = np.where(same, hi, mid)
    energies = 0.5 * (lo + hi)
    residuals = shooter.wronskian(energies)
    states = _classify(shooter, energies, residuals, params)
    return Spectrum(states=tuple(states), params=params, mass=M)


def _classify(shooter, energies, residuals, params):
    (yl, dl, ysl, dsl), (yr, dr, ysr, dsr) = shooter.ends(energies, record=True)
    a, b = _q_coeffs(energies, shooter.M, shooter.units)
    v0 = float(evaluate(params, 0.0))
    k_scale = np.sqrt(np.abs(a - b * v0)) + 1e-300
    states = []
    for j, E in enumerate(energies):
        # match the right solution to the left one at the origin
        if abs(yr[j]) * k_scale[j] > abs(dr[j]):
            c = yl[j] / yr[j]
        else:
            c = dl[j] / dr[j]
        phi = np.concatenate([ysl[:, j], c * ysr[::-1, j][1:]])
        if params.symmetric:
            parity = EVEN if abs(dl[j]) < abs(yl[j]) * k_scale[j] else ODD
        else:
            parity = NO_PARITY
        states.append(BoundState(energy=float(E), parity=parity, nodes=_count_nodes(phi),
                                 condition_residual=float(residuals[j]), index=j))
    return states

"""The q-deformed multi-parameter Woods-Saxon potential.

Each half-line carries its own twelve free parameters plus a derived
offset ``V0`` chosen so the potential vanishes at infinity::

    V(x>0) = V0 - V1/d + V2/d**2 + xi*(A + B*u)/d + eta*((C + D*u)/d)**2
    d = q + p*u,  u = exp(-alpha*(x - L))

and the mirror expression with tilde parameters and ``u = exp(alpha*(x+L))``
for ``x < 0``.
"""

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import ConfigError

FREE_KEYS = ("alpha", "L", "V1", "V2", "A", "B", "C", "D", "q", "p", "xi", "eta")

TABLE_I = dict(alpha=2.0, L=4.0, V1=1.0, V2=0.2, A=0.1, B=1.0, C=0.1,
               D=10.0, q=0.8, p=8.0, xi=5.0, eta=10.0)
TABLE_I_WELL = dict(TABLE_I, A=3.5)


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0):
            raise ValueError("hbar and c must be positive")

    @property
    def hbar_c(self):
        return self.hbar * self.c

    def rest_energy(self, mass):
        return mass * self.c ** 2


NATURAL = UnitSystem()


@dataclass(frozen=True)
class SideParams:
    """The twelve free parameters of one half of the potential."""

    alpha: float
    L: float
    V1: float = 0.0
    V2: float = 0.0
    A: float = 0.0
    B: float = 0.0
    C: float = 0.0
    D: float = 0.0
    q: float = 1.0
    p: float = 1.0
    xi: float = 0.0
    eta: float = 0.0
    V0: float = field(init=False)

    def __post_init__(self):
        for f in fields(self):
            if f.init and not math.isfinite(getattr(self, f.name)):
                raise ValueError(f"parameter {f.name} must be finite")
        if self.q == 0:
            raise ZeroDivisionError("q must be nonzero")
        if self.p == 0:
            raise ValueError("p must be nonzero")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.L >= 0:
            raise ValueError("L must be non-negative")
        object.__setattr__(self, "V0", _v0(self))

    def free(self):
        return {k: getattr(self, k) for k in FREE_KEYS}

    @property
    def plateau(self):
        """Limit of the half-potential deep inside the barrier (u -> inf)."""
        return self.V0 + self.xi * self.B / self.p + self.eta * self.D ** 2 / self.p ** 2

    @property
    def t0(self):
        """Matching point ``-(p/q) exp(alpha L)`` in the transformed variable."""
        return -(self.p / self.q) * math.exp(self.alpha * self.L)

    def value(self, s):
        """Half-potential as a function of the exponent ``s`` (u = e^s)."""
        s = np.asarray(s, dtype=float)
        # exact rewrite in w = 1/u for s > 0, so nothing overflows
        big = s > 0
        e = np.exp(np.where(big, -s, s))
        u = np.where(big, 1.0, e)
        w = np.where(big, e, 1.0)
        d = self.q * w + self.p * u
        out = (self.V0 - self.V1 * w / d + self.V2 * (w / d) ** 2
               + self.xi * (self.A * w + self.B * u) / d
               + self.eta * ((self.C * w + self.D * u) / d) ** 2)
        return out


def _v0(side):
    return ((side.V1 - side.xi * side.A) / side.q
            - (side.V2 + side.eta * side.C ** 2) / side.q ** 2)


def derive_v0(params):
    """Return ``(V0_left, V0_right)`` that make V vanish at both infinities."""
    return _v0(params.left), _v0(params.right)


@dataclass(frozen=True)
class PotentialParams:
    """Both halves of the potential; ``left`` holds the tilde parameters."""

    left: SideParams
    right: SideParams

    @property
    def symmetric(self):
        return self.left.free() == self.right.free()

    @property
    def V0_left(self):
        return self.left.V0

    @property
    def V0_right(self):
        return self.right.V0

    def mirrored(self):
        return PotentialParams(left=self.right, right=self.left)

    def with_(self, **changes):
        """Copy with the same change applied to both halves."""
        return PotentialParams(left=replace(self.left, **changes),
                               right=replace(self.right, **changes))

    def evaluate(self, x):
        return evaluate(self, x)


def make_symmetric(**free):
    """Build a symmetric potential from the twelve untilded parameters."""
    unknown = set(free) - set(FREE_KEYS)
    if unknown:
        raise TypeError(f"unknown parameters: {sorted(unknown)}")
    side = SideParams(**free)
    return PotentialParams(left=side, right=side)


def table_i(**overrides):
    return make_symmetric(**dict(TABLE_I, **overrides))


def evaluate(params, x):
    """V(x); scalars in, float out, arrays in, arrays out.

    At ``x = 0`` the two branches are averaged.
    """
    x_arr = np.asarray(x, dtype=float)
    lt, rt = params.left, params.right
    v_left = lt.value(lt.alpha * (x_arr + lt.L))
    v_right = rt.value(-rt.alpha * (x_arr - rt.L))
    out = np.where(x_arr < 0, v_left, np.where(x_arr > 0, v_right,
                                                0.5 * (v_left + v_right)))
    if np.ndim(x) == 0:
        return float(out)
    return out


def parse_config(text):
    """Parse flat ``key = value`` text into ``(params, mass)``.

    Keys are the twelve free parameters, ``mass``, and optional
    ``tilde_<key>`` overrides for the left half.  ``#`` starts a comment.
    """
    values = {}
    seen = {}
    allowed = set(FREE_KEYS) | {"mass"} | {f"tilde_{k}" for k in FREE_KEYS}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = (s.strip() for s in line.partition("="))
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first on line {seen[key]})", lineno)
        try:
            values[key] = float(val)
        except ValueError:
            raise ConfigError(f"value for {key!r} is not a number: {val!r}", lineno) from None
        seen[key] = lineno
    missing = [k for k in FREE_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    right = {k: values[k] for k in FREE_KEYS}
    left = {k: values.get(f"tilde_{k}", values[k]) for k in FREE_KEYS}
    try:
        params = PotentialParams(left=SideParams(**left), right=SideParams(**right))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from None
    mass = values.get("mass")
    if mass is not None and not mass > 0:
        raise ConfigError("mass must be positive", seen["mass"])
    return params, mass


def format_config(params, mass=None):
    lines = [f"{k} = {getattr(params.right, k)!r}" for k in FREE_KEYS]
    if mass is not None:
        lines.append(f"mass = {mass!r}")
    if not params.symmetric:
        lines += [f"tilde_{k} = {getattr(params.left, k)!r}" for k in FREE_KEYS
                  if getattr(params.left, k) != getattr(params.right, k)]
    return "\n".join(lines) + "\n"

"""Complex log-gamma and Gauss hypergeometric function.

Everything here works on Python ``complex`` scalars.  The hypergeometric
engine sums the Gauss series directly inside the unit disc and reaches the
rest of the cut plane through the Pfaff, Euler, ``1/z`` and ``1 - z``
transformations, picking whichever gives the smallest series argument.
"""

import cmath
import decimal
import math
from fractions import Fraction

from .errors import (BranchCutError, ConvergenceError, DegenerateParamsError,
                     DomainError, PoleError)

POLE_TOL = 1e-12
DEGENERATE_TOL = 1e-10
SERIES_TOL = 1e-16
SERIES_MAX_TERMS = 10000
SERIES_MARGIN = 0.05
CANCEL_DIGITS = 2       # digits the double sum may lose to cancellation
EXTRA_DIGITS = 30       # decimal digits kept beyond the measured loss
MAX_DIGITS = 4000
INNER_RADIUS = 0.95
OUTER_RADIUS = 1.05

_LOG_ZERO = complex(-math.inf, 0.0)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _bernoulli(n_max):
    # Akiyama-Tanigawa; exact rationals
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


_B = _bernoulli(30)
# Stirling coefficients B_2k / (2k (2k-1)), k = 1..15
_STIRLING = [float(_B[2 * k] / (2 * k * (2 * k - 1))) for k in range(1, 16)]
_STIRLING_MIN_RE = 10.0


def near_integer(x, tol=DEGENERATE_TOL):
    x = complex(x)
    return abs(x.imag) <= tol and abs(x.real - round(x.real)) <= tol


def near_nonpositive_integer(x, tol=POLE_TOL):
    x = complex(x)
    return near_integer(x, tol) and round(x.real) <= 0


def ln_gamma(z):
    """Principal branch of log Gamma(z).

    Stirling series after shifting the argument to ``Re z >= 10`` with the
    recurrence; the shift is undone with a sum of principal logarithms, which
    keeps the result analytic off the negative real axis.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"ln_gamma of non-finite argument {z!r}")
    if near_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z!r}", argument=z)
    shift = 0j
    w = z
    while w.real < _STIRLING_MIN_RE:
        shift += cmath.log(w)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for coeff in _STIRLING:
        term = coeff * power
        series += term
        if abs(term) < 1e-17 * abs(series):
            break
        power *= inv2
    return (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + series - shift


def log_gamma_ratio(numer, denom):
    """log of prod Gamma(numer) / prod Gamma(denom).

    A pole in the denominator makes the ratio exactly zero (1/Gamma is entire),
    reported as ``-inf``.  A pole in the numerator raises ``PoleError``.
    """
    total = 0j
    for x in numer:
        total += ln_gamma(x)
    for x in denom:
        if near_nonpositive_integer(x):
            return _LOG_ZERO
        total -= ln_gamma(x)
    return total


def gamma_ratio(numer, denom):
    return _exp(log_gamma_ratio(numer, denom))


def _exp(w):
    if w.real == -math.inf:
        return 0j
    return cmath.exp(w)


def principal_log(z):
    z = complex(z)
    # normalise -0.0 so Log(-1) is +i*pi, never -i*pi
    return cmath.log(complex(z.real + 0.0, z.imag + 0.0))


def principal_pow(base, exponent):
    """``exp(exponent * Log(base))`` with ``Im Log`` in ``(-pi, pi]``."""
    base = complex(base)
    exponent = complex(exponent)
    if base == 0:
        if exponent.real > 0:
            return 0j
        raise DomainError(f"0 ** {exponent!r} is undefined")
    return cmath.exp(exponent * principal_log(base))


def _check_c(c):
    if near_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter c={c!r} is a non-positive integer",
                        argument=c)


def hyp2f1_series(a, b, c, z, *, tol=SERIES_TOL, max_terms=SERIES_MAX_TERMS,
                  margin=SERIES_MARGIN, full_output=False):
    """Sum the Gauss series for 2F1(a, b; c; z) with ``|z| < 1 - margin``.

    Large parameters make the terms swell far above the sum and cancel; when
    more than ``CANCEL_DIGITS`` digits are lost (or a term overflows) the
    series is re-summed in decimal arithmetic sized to the loss.  With
    ``full_output=True`` returns ``(value, n_terms)``.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    _check_c(c)
    if abs(z) >= 1.0 - margin:
        raise DomainError(f"|z|={abs(z):.6g} outside the series disc")
    total = 1 + 0j
    term = 1 + 0j
    peak = 1.0
    small = 0
    n = 0
    while n < max_terms:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        if term == 0:
            break
        m = abs(term)
        if not math.isfinite(m):
            return _series_extended(a, b, c, z, tol, max_terms, full_output)
        if m > peak:
            peak = m
        if m <= tol * abs(total):
            small += 1
            if small == 2:
                break
        else:
            small = 0
    else:
        raise ConvergenceError(
            f"2F1 series not converged after {max_terms} terms "
            f"(a={a}, b={b}, c={c}, z={z})")
    if not (math.isfinite(total.real) and math.isfinite(total.imag)) or (
            peak > abs(total) * 10.0 ** CANCEL_DIGITS):
        return _series_extended(a, b, c, z, tol, max_terms, full_output)
    return (total, n) if full_output else total


def _log10_peak(a, b, c, z, max_terms):
    """log10 of the largest series term, accumulated in logs (never overflows)."""
    lg = peak = 0.0
    tail = 2.0 * max(abs(a), abs(b), abs(c)) + 10.0
    for n in range(max_terms):
        r = abs((a + n) * (b + n) / ((c + n) * (n + 1)) * z)
        if r == 0:
            break
        lg += math.log10(r)
        peak = max(peak, lg)
        if n > tail and r < 1.0:
            break
    return peak


def _decimal_sum(a, b, c, z, tol, max_terms, digits):
    """Series in ``digits``-digit decimal arithmetic; the float inputs are exact."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        D = decimal.Decimal
        ar, ai, br, bi = D(a.real), D(a.imag), D(b.real), D(b.imag)
        cr, ci, zr, zi = D(c.real), D(c.imag), D(z.real), D(z.imag)
        tr, ti = D(1), D(0)
        sr, si = D(1), D(0)
        peak2 = D(1)
        tol2 = D(tol) ** 2
        small = 0
        for n in range(max_terms):
            # numerator (a + n)(b + n) z
            pr = (ar + n) * (br + n) - ai * bi
            pi = (ar + n) * bi + ai * (br + n)
            pr, pi = pr * zr - pi * zi, pr * zi + pi * zr
            # denominator (c + n)(n + 1)
            qr, qi = (cr + n) * (n + 1), ci * (n + 1)
            q2 = qr * qr + qi * qi
            rr, ri = (pr * qr + pi * qi) / q2, (pi * qr - pr * qi) / q2
            tr, ti = tr * rr - ti * ri, tr * ri + ti * rr
            sr, si = sr + tr, si + ti
            m2 = tr * tr + ti * ti
            peak2 = max(peak2, m2)
            if m2 == 0:
                break
            if m2 <= tol2 * (sr * sr + si * si):
                small += 1
                if small == 2:
                    break
            else:
                small = 0
        else:
            raise ConvergenceError(
                f"2F1 series not converged after {max_terms} terms "
                f"(a={a}, b={b}, c={c}, z={z})")
        s2 = sr * sr + si * si
        lost = math.inf if s2 == 0 else float((peak2 / s2).log10()) / 2
        return complex(float(sr), float(si)), n + 1, lost


def _series_extended(a, b, c, z, tol, max_terms, full_output):
    digits = EXTRA_DIGITS + max(0, math.ceil(_log10_peak(a, b, c, z, max_terms)))
    while digits <= MAX_DIGITS:
        total, n, lost = _decimal_sum(a, b, c, z, tol, max_terms, digits)
        need = EXTRA_DIGITS + math.ceil(lost)
        if need <= digits:
            if not (math.isfinite(total.real) and math.isfinite(total.imag)):
                raise ConvergenceError(
                    f"2F1 value overflows a double (a={a}, b={b}, c={c}, z={z})")
            return (total, n) if full_output else total
        digits = need + 10
    raise ConvergenceError(
        f"2F1 series cancels beyond {MAX_DIGITS} digits (a={a}, b={b}, c={c}, z={z})")


def hyp2f1_euler(a, b, c, z, **kw):
    """2F1 through ``(1-z)^(c-a-b) 2F1(c-a, c-b; c; z)``."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    kw.setdefault("margin", 0.0)
    inner = hyp2f1_series(c - a, c - b, c, z, **kw)
    return principal_pow(1 - z, c - a - b) * inner


def hyp2f1_pfaff(a, b, c, z, **kw):
    """2F1 through ``(1-z)^(-a) 2F1(a, c-b; c; z/(z-1))``."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    kw.setdefault("margin", 0.0)
    inner = hyp2f1_series(a, c - b, c, z / (z - 1), **kw)
    return principal_pow(1 - z, -a) * inner


def hyp2f1_inverse(a, b, c, z, **kw):
    """Two-term ``1/z`` connection formula for ``z`` off the cut ``[1, inf)``."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if near_integer(b - a):
        raise DegenerateParamsError(
            f"b - a = {b - a!r} is an integer; the 1/z formula needs a limit case")
    kw.setdefault("margin", 0.0)
    log_mz = principal_log(-z)
    total = 0j
    for p, q in ((a, b), (b, a)):
        log_pref = log_gamma_ratio((c, q - p), (q, c - p))
        if log_pref.real == -math.inf:
            continue
        inner = hyp2f1_series(p, 1 + p - c, 1 + p - q, 1 / z, **kw)
        total += _exp(log_pref - p * log_mz) * inner
    return total


def hyp2f1_one_minus(a, b, c, z, **kw):
    """Two-term ``1 - z`` connection formula."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    s = c - a - b
    if near_integer(s):
        raise DegenerateParamsError(
            f"c - a - b = {s!r} is an integer; the 1-z formula needs a limit case")
    kw.setdefault("margin", 0.0)
    w = 1 - z
    total = 0j
    log_pref = log_gamma_ratio((c, s), (c - a, c - b))
    if log_pref.real != -math.inf:
        total += _exp(log_pref) * hyp2f1_series(a, b, 1 - s, w, **kw)
    log_pref = log_gamma_ratio((c, -s), (a, b))
    if log_pref.real != -math.inf:
        total += (_exp(log_pref + s * principal_log(w))
                  * hyp2f1_series(c - a, c - b, 1 + s, w, **kw))
    return total


def _on_cut(z):
    return abs(z.imag) <= 1e-14 * max(1.0, abs(z)) and z.real >= 1.0


def hyp2f1(a, b, c, z, *, tol=SERIES_TOL, max_terms=SERIES_MAX_TERMS):
    """Gauss hypergeometric 2F1(a, b; c; z) on the cut plane.

    ``|z| < 0.95`` sums the series directly.  Elsewhere every applicable
    transformation is ranked by the modulus of its series argument and the
    smallest non-degenerate one is used.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    _check_c(c)
    if z == 0 or a == 0 or b == 0:
        return 1 + 0j
    kw = dict(tol=tol, max_terms=max_terms)
    r = abs(z)
    if r < INNER_RADIUS:
        return hyp2f1_series(a, b, c, z, **kw)
    if _on_cut(z):
        raise BranchCutError(f"z={z!r} lies on the branch cut [1, inf)")

    candidates = [(abs(z / (z - 1)), hyp2f1_pfaff)]
    if r <= OUTER_RADIUS and r < 1.0:
        euler_smaller = abs((c - a) * (c - b)) < abs(a * b)
        candidates.append((r, hyp2f1_euler if euler_smaller else _series_any))
    if r > 1.0:
        candidates.append((1.0 / r, hyp2f1_inverse))
    candidates.append((abs(1 - z), hyp2f1_one_minus))
    candidates.sort(key=lambda item: item[0])

    degenerate = None
    for radius, method in candidates:
        if radius >= 1.0:
            break
        try:
            return method(a, b, c, z, **kw)
        except DegenerateParamsError as exc:
            degenerate = exc
    if degenerate is not None:
        raise degenerate
    raise ConvergenceError(f"no convergent representation for 2F1 at z={z!r}")


def _series_any(a, b, c, z, **kw):
    kw.setdefault("margin", 0.0)
    return hyp2f1_series(a, b, c, z, **kw)


def hyp2f1_derivative(a, b, c, z, **kw):
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    _check_c(c)
    if a == 0 or b == 0:
        return 0j
    return a * b / c * hyp2f1(a + 1, b + 1, c + 1, z, **kw)

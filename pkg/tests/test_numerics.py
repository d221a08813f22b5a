import cmath
import math

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kgwoods import numerics
from kgwoods.errors import (BranchCutError, ConvergenceError, DegenerateParamsError,
                            DomainError, PoleError)
from kgwoods.potential import table_i
from kgwoods.scattering import wave_coefficients

# Lanczos approximation, g = 7, n = 9: an independent log-gamma oracle
_LANCZOS = [0.99999999999980993, 676.5203681218851, -1259.1392167224028,
            771.32342877765313, -176.61502916214059, 12.507343278686905,
            -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7]


def lanczos_gamma(z):
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * lanczos_gamma(1 - z))
    z -= 1
    x = _LANCZOS[0]
    for i in range(1, 9):
        x += _LANCZOS[i] / (z + i)
    t = z + 7.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


finite = st.floats(-3, 3, allow_nan=False)
cplx = st.builds(complex, finite, finite)


# ---- ln_gamma ----

def test_ln_gamma_half():
    assert abs(numerics.ln_gamma(0.5) - 0.5723649429247001) < 1e-14


def test_ln_gamma_one_and_two():
    assert abs(numerics.ln_gamma(1)) < 1e-15
    assert abs(numerics.ln_gamma(2)) < 1e-15


def test_ln_gamma_against_lanczos():
    z = 1 + 1j
    assert abs(cmath.exp(numerics.ln_gamma(z)) - lanczos_gamma(z)) < 1e-12


@pytest.mark.parametrize("z", [0.1 + 0.2j, 3 - 4j, -2.5 + 0.5j, 17.3 + 60j, 99 + 1j,
                               -70.5 + 3j, 0.5 - 99j, 1e-3 + 0j])
def test_ln_gamma_matches_mpmath(z):
    ref = complex(mpmath.loggamma(z))
    got = numerics.ln_gamma(z)
    # same branch (principal log-gamma), not just the same exponential
    assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", [0, -1, -7, -3 + 1e-13])
def test_ln_gamma_poles(z):
    with pytest.raises(PoleError):
        numerics.ln_gamma(z)


@settings(max_examples=50, deadline=None)
@given(cplx)
def test_gamma_reflection(z):
    assume(abs(z.imag) > 0.05 or abs(z.real - round(z.real)) > 0.05)
    lhs = cmath.exp(numerics.ln_gamma(z) + numerics.ln_gamma(1 - z))
    assert rel(lhs, math.pi / cmath.sin(math.pi * z)) < 1e-11


def test_log_gamma_ratio_denominator_pole_is_zero():
    assert numerics.gamma_ratio([2.5], [-3.0]) == 0
    assert numerics.log_gamma_ratio([2.5], [0.0]).real == -math.inf


def test_log_gamma_ratio_numerator_pole_raises():
    with pytest.raises(PoleError):
        numerics.log_gamma_ratio([-2.0], [1.5])


# ---- series ----

def test_series_at_zero():
    assert numerics.hyp2f1_series(0.3 + 1j, -2, 4.5, 0) == 1


def test_series_log_closed_form():
    assert abs(numerics.hyp2f1_series(1, 1, 2, 0.5) - 2 * math.log(2)) < 1e-14


def test_series_a_zero():
    assert numerics.hyp2f1_series(0, 3.3, 1.7 + 2j, 0.9 * 0.99) == 1


def test_series_outside_disc():
    with pytest.raises(DomainError):
        numerics.hyp2f1_series(1, 1, 2, 0.96)


def test_series_term_cap():
    with pytest.raises(ConvergenceError):
        numerics.hyp2f1_series(1, 1, 2, 0.9, max_terms=5)


def test_series_c_pole():
    with pytest.raises(PoleError):
        numerics.hyp2f1_series(1, 1, -2, 0.1)


def test_series_terminates_for_negative_integer_a():
    # (1 - z)^3
    v, n = numerics.hyp2f1_series(-3, 1, 1, 0.4, full_output=True)
    assert abs(v - 0.6 ** 3) < 1e-15 and n <= 4


@pytest.mark.parametrize("a, b, c, z", [
    # N-function parameters for alpha = 0.3 at 34.75: terms peak ~1e23 above the sum
    (98.36 + 115.64j, 98.36 - 115.64j, -9.1037, -1 / 33.2),
    (30 + 0j, -40.5 + 0j, 1.5 + 0j, -0.6),
    (200 + 50j, 180 - 70j, 3 + 1j, 0.3j),
])
def test_series_cancellation_resummed(a, b, c, z):
    mpmath.mp.dps = 80
    ref = complex(mpmath.hyp2f1(a, b, c, z))
    assert abs(numerics.hyp2f1_series(a, b, c, z) - ref) < 1e-13 * abs(ref)


def test_series_term_overflow_resummed():
    # alpha = 0.03 N-function: double terms overflow before the peak
    a, b, c, z = 979.1149 + 1156.4133j, 979.1149 - 1156.4133j, -100.0363, -0.088692
    mpmath.mp.dps = 50
    ref = complex(mpmath.hyp2f1(a, b, c, z))
    assert abs(numerics.hyp2f1_series(a, b, c, z) - ref) < 1e-12 * abs(ref)


def test_series_well_conditioned_stays_double(monkeypatch):
    def fail(*args, **kw):
        raise AssertionError("extended path used")
    monkeypatch.setattr(numerics, "_series_extended", fail)
    assert abs(numerics.hyp2f1_series(1, 1, 2, 0.5) - 2 * math.log(2)) < 1e-15


# ---- continued 2F1 ----

def test_hyp2f1_minus_three():
    assert abs(numerics.hyp2f1(1, 1, 2, -3) - 0.4620981203732969) < 1e-13


def test_hyp2f1_zero_argument():
    assert numerics.hyp2f1(2 + 1j, -3.5, 0.25, 0) == 1


def test_hyp2f1_table_i_matching_point():
    c = wave_coefficients(34.75, 2.0, table_i(), nu_sign=1)
    z = 1 / c.t0
    assert abs(z + 3.3546e-5) < 1e-8
    a, b, cc = c.mu + c.nu + c.lambda_, -c.mu + c.nu + c.lambda_, 1 + 2 * c.lambda_
    v, n = numerics.hyp2f1_series(a, b, cc, z, full_output=True)
    assert n < 10
    assert rel(v, complex(mpmath.hyp2f1(a, b, cc, z))) < 1e-14
    # near unity, off by about the first series term (a, b ~ 16 here)
    first = abs(a * b / cc * z)
    assert abs(v - 1) < 1.1 * first < 0.05
    assert abs(numerics.hyp2f1(a, b, cc, z) - v) == 0


def test_hyp2f1_branch_cut():
    with pytest.raises(BranchCutError):
        numerics.hyp2f1(0.5, 0.25, 1.5, 2.0)


def test_hyp2f1_refuses_degenerate_limit_case():
    # b - a = 0 and c - a - b = 0; no convergent non-degenerate route at 2 + i
    with pytest.raises(DegenerateParamsError):
        numerics.hyp2f1(1, 1, 2, 2 + 1j)


def test_inverse_refuses_integer_b_minus_a():
    with pytest.raises(DegenerateParamsError):
        numerics.hyp2f1_inverse(1, 3, 2.5, -4)


@pytest.mark.parametrize("z", [-3.0, -30 + 2j, -1 + 3j, 0.99j, -1.0, 0.97, 0.3 - 0.96j])
def test_hyp2f1_log_family(z):
    expected = -cmath.log(1 - z) / z
    assert rel(numerics.hyp2f1(1, 1, 2, z), expected) < 1e-10


@pytest.mark.parametrize("x", [1.5, 3.0, 10.0, 300.0])
def test_inverse_connection_atan(x):
    # 2F1(1/2, 1; 3/2; -x^2) = atan(x)/x, b - a = 1/2
    assert rel(numerics.hyp2f1_inverse(0.5, 1, 1.5, -x * x), math.atan(x) / x) < 1e-10


def test_one_minus_connection():
    # 2F1(a, b; c; 1) Gauss sum approached from inside
    a, b, c = 0.3 + 0.2j, -0.4, 1.9
    z = 0.999
    ref = complex(mpmath.hyp2f1(a, b, c, z))
    assert rel(numerics.hyp2f1_one_minus(a, b, c, z), ref) < 1e-12


@settings(max_examples=60, deadline=None)
@given(cplx, cplx, cplx, st.floats(0.0, 4.0), st.floats(-math.pi, math.pi))
def test_hyp2f1_against_mpmath(a, b, c, r, theta):
    c = c + 3.5
    z = cmath.rect(r, theta)
    assume(abs(r - 1) > 0.1 and abs(theta) > 0.05)
    assume(abs(abs(theta) - math.pi / 3) > 0.1 or r < 0.8)
    try:
        got = numerics.hyp2f1(a, b, c, z)
    except DegenerateParamsError:
        assume(False)
    ref = complex(mpmath.hyp2f1(a, b, c, z))
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


@settings(max_examples=50, deadline=None)
@given(cplx, cplx, cplx, st.floats(0.0, 3.0), st.floats(-math.pi, math.pi))
def test_symmetry_in_a_and_b(a, b, c, r, theta):
    c = c + 3.5
    z = cmath.rect(r, theta)
    assume(abs(r - 1) > 0.1 and abs(theta) > 0.05)
    try:
        ab = numerics.hyp2f1(a, b, c, z)
        ba = numerics.hyp2f1(b, a, c, z)
    except (DegenerateParamsError, ConvergenceError):
        assume(False)
    assert rel(ab, ba) < 1e-13 or abs(ab - ba) < 1e-13


@settings(max_examples=50, deadline=None)
@given(st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)),
       st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)),
       st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)),
       st.floats(0.5, 0.94), st.floats(-math.pi, math.pi))
def test_series_matches_euler(a, b, c, r, theta):
    c = c + 2.5
    z = cmath.rect(r, theta)
    direct = numerics.hyp2f1_series(a, b, c, z)
    assert rel(numerics.hyp2f1_euler(a, b, c, z), direct) < 1e-11


def test_pfaff_matches_series():
    a, b, c, z = 0.7 - 0.2j, 1.3, 2.2 + 0.5j, -0.6 + 0.3j
    assert rel(numerics.hyp2f1_pfaff(a, b, c, z), numerics.hyp2f1_series(a, b, c, z)) < 1e-13


# ---- principal_pow ----

def test_principal_pow_minus_one():
    w = 0.7
    assert abs(numerics.principal_pow(-1, 1j * w) - math.exp(-math.pi * w)) < 1e-15


def test_principal_pow_sqrt():
    assert abs(numerics.principal_pow(4, 0.5) - 2) < 1e-15


def test_principal_pow_negative_zero_imag():
    # -1 - 0j must still use Log(-1) = +i pi
    assert abs(numerics.principal_pow(complex(-1, -0.0), 0.5) - 1j) < 1e-15


def test_principal_pow_t0():
    t0, k = -29809.579, 17.346
    got = numerics.principal_pow(t0, 2j * k)
    expected = cmath.exp(2j * k * math.log(-t0)) * math.exp(-2 * math.pi * k)
    assert rel(got, expected) < 1e-12


def test_principal_pow_zero():
    assert numerics.principal_pow(0, 2) == 0
    with pytest.raises(DomainError):
        numerics.principal_pow(0, -0.5 + 1j)


# ---- derivative ----

def test_derivative_at_zero():
    assert abs(numerics.hyp2f1_derivative(1, 1, 2, 0) - 0.5) < 1e-16


def test_derivative_log_family():
    # d/dz [-ln(1-z)/z] = 1/(z(1-z)) + ln(1-z)/z^2 = 4 - 4 ln 2 at z = 1/2
    expected = 4 - 4 * math.log(2)
    got = numerics.hyp2f1_derivative(1, 1, 2, 0.5)
    assert abs(got - expected) < 1e-14
    h = 1e-6
    fd = (numerics.hyp2f1(1, 1, 2, 0.5 + h) - numerics.hyp2f1(1, 1, 2, 0.5 - h)) / (2 * h)
    assert rel(got, fd) < 1e-8


def test_derivative_a_zero():
    assert numerics.hyp2f1_derivative(0, 2, 3, -7.5) == 0


@settings(max_examples=30, deadline=None)
@given(st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)),
       st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)),
       st.floats(0.0, 3.0), st.floats(-math.pi, math.pi))
def test_derivative_matches_finite_difference(a, b, r, theta):
    c = 2.7 + 0.3j
    z = cmath.rect(r, theta)
    assume(abs(r - 1) > 0.1 and abs(theta) > 0.05)
    h = 1e-6 * max(1.0, abs(z))
    try:
        fd = (numerics.hyp2f1(a, b, c, z + h) - numerics.hyp2f1(a, b, c, z - h)) / (2 * h)
        d = numerics.hyp2f1_derivative(a, b, c, z)
    except (DegenerateParamsError, ConvergenceError):
        assume(False)
    assert rel(d, fd) < 1e-5 or abs(d - fd) < 1e-8

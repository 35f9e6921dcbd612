import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hker.specfun import (
    DomainError,
    PoleError,
    SeriesValue,
    SpecialFunctionError,
    ToleranceSpec,
    gamma_ratio,
    gauss_sum_closed,
    hyp2f1_terminating,
    hyp_pfq,
    kummer_sum_closed,
    log_gamma,
    pochhammer,
    pochhammer_shift,
)

reals = lambda lo, hi: st.floats(lo, hi, allow_nan=False, allow_infinity=False)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


# --- pochhammer -----------------------------------------------------------

@pytest.mark.parametrize("a", [0.0, 3.7, -2.5, 1 + 2j])
def test_pochhammer_empty_product(a):
    assert pochhammer(a, 0) == 1


def test_pochhammer_by_hand():
    assert pochhammer(3, 4) == 360
    assert pochhammer(0.5, 3) == 1.875


def test_pochhammer_overflow_carries_arguments():
    with pytest.raises(SpecialFunctionError, match="pochhammer overflow") as info:
        pochhammer(1e200, 3)
    assert info.value.details == {"a": 1e200 + 0j, "n": 3}


@pytest.mark.parametrize("a", [0.3, -4.7, 2.25, 0.5 + 1.5j, -3.1 - 0.2j])
def test_pochhammer_recurrence(a):
    for n in range(31):
        assert rel(pochhammer(a, n + 1), pochhammer(a, n) * (a + n)) <= 1e-14


def test_pochhammer_integers_match_exact_rising_factorial():
    for m in range(21):
        for n in range(m + 1):
            assert pochhammer(-m, n) == math.prod(range(-m, -m + n))


# --- the two shift identities used when reindexing -------------------------

def test_pochhammer_shift_examples():
    assert pochhammer_shift(0.5, 5, 2) == pytest.approx(1.875, rel=1e-14)
    assert pochhammer_shift(2, 3, 0) == 24
    # (-1)^4 (0.3)_6 / (1-0.3-6)_4, by direct products
    direct = math.prod(0.3 + j for j in range(6)) / math.prod(-5.3 + j for j in range(4))
    assert direct == pytest.approx(0.39, rel=1e-13)
    assert pochhammer_shift(0.3, 6, 4) == pytest.approx(0.39, rel=1e-13)


def test_pochhammer_shift_pole():
    # 1 - a - m = -2: factors -2, -1, 0
    with pytest.raises(PoleError, match="pochhammer shift pole"):
        pochhammer_shift(-2, 5, 3)
    # fallback route stays available
    assert pochhammer(-2, 2) == 2


@settings(max_examples=300, deadline=None)
@given(reals(-8, 8), reals(-1, 1), st.integers(0, 25), st.data())
def test_pochhammer_shift_matches_direct(re, im, m, data):
    a = complex(re, im)
    n = data.draw(st.integers(0, m))
    if any(abs(1 - a - m + j) < 1e-6 for j in range(n)):
        return
    assert rel(pochhammer_shift(a, m, n), pochhammer(a, m - n)) <= 1e-12


def test_factorial_shift_identity_exact():
    for m in range(21):
        for n in range(m + 1):
            rising = math.prod(range(-m, -m + n))  # (-m)_n
            assert (-1) ** n * math.factorial(m) // rising == math.factorial(m - n)
            assert (-1) ** n * math.factorial(m) % rising == 0


# --- gamma -------------------------------------------------------------------

def test_log_gamma_by_hand():
    assert abs(log_gamma(1)) < 1e-14
    assert log_gamma(0.5).real == pytest.approx(0.5723649429247001, rel=1e-14)
    assert log_gamma(4).real == pytest.approx(math.log(6), rel=1e-14)


@pytest.mark.parametrize("z", [0, -1, -7, -3 + 1e-9])
def test_log_gamma_pole(z):
    with pytest.raises(PoleError, match="gamma pole at nonpositive integer"):
        log_gamma(z)


@settings(max_examples=400, deadline=None)
@given(reals(0.5, 40), reals(-30, 30))
def test_log_gamma_right_half_plane_against_mpmath(x, y):
    z = complex(x, y)
    ref = complex(mpmath.loggamma(mpmath.mpc(x, y)))
    assert abs(log_gamma(z) - ref) <= 1e-13 * max(1.0, abs(ref))


@settings(max_examples=400, deadline=None)
@given(reals(-30, 0.5), reals(-20, 20))
def test_log_gamma_reflection_branch_against_mpmath(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    ref = complex(mpmath.loggamma(mpmath.mpc(x, y)))
    assert abs(log_gamma(z) - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=300, deadline=None)
@given(reals(0.1, 10), reals(-5, 5))
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    assert rel(cmath.exp(log_gamma(z + 1)), z * cmath.exp(log_gamma(z))) <= 1e-12


def test_gamma_ratio_examples():
    # Gamma(2) Gamma(1) / Gamma(1.5)^2 with Gamma(1.5) = sqrt(pi)/2
    assert gamma_ratio([2, 1], [1.5, 1.5]) == pytest.approx(4 / math.pi, rel=1e-13)
    for x in (0.3, 7.5, -2.5, 1 + 1j):
        assert gamma_ratio([x], [x]) == pytest.approx(1, rel=1e-15)
    assert gamma_ratio([1], [0]) == 0


def test_gamma_ratio_numerator_pole():
    with pytest.raises(PoleError, match="gamma ratio pole"):
        gamma_ratio([-2, 1.5], [3])
    with pytest.raises(PoleError, match="gamma ratio pole"):
        gamma_ratio([-2 + 1e-10], [3])


def test_gamma_ratio_cancelling_poles():
    # Gamma(-2+e)/Gamma(-3+e) -> -3 as e -> 0
    assert gamma_ratio([-2], [-3]) == pytest.approx(-3, rel=1e-14)
    assert gamma_ratio([-2, 0.5], [-2, 0.5]) == pytest.approx(1, rel=1e-15)


# --- hypergeometric series ---------------------------------------------------

def test_hyp_pfq_examples():
    assert hyp_pfq([2], [2], 0.5).value == pytest.approx(cmath.exp(0.5), rel=1e-14)
    # 0F1(; 1/2; z) = cosh(2 sqrt z); independent partial sums of z^n / ((1/2)_n n!)
    partial = math.fsum(1 / (math.prod(0.5 + j for j in range(n)) * math.factorial(n)) for n in range(40))
    assert partial == pytest.approx(math.cosh(2), rel=1e-15)
    assert hyp_pfq([], [0.5], 1).value == pytest.approx(math.cosh(2), rel=1e-14)


@pytest.mark.parametrize("num,den", [([0.3, 1.2], [2.5]), ([7.0], [0.1, 4.0]), ([], [1.5]), ([-0.5, 3], [-2.5])])
def test_hyp_pfq_at_zero(num, den):
    r = hyp_pfq(num, den, 0)
    assert r.value == 1 and r.converged


def test_hyp_pfq_series_pole():
    with pytest.raises(PoleError, match="series pole"):
        hyp_pfq([1.5], [-2], 0.5)
    # the series terminates (degree 2) before reaching the denominator zero at n = 4
    r = hyp_pfq([-2, 1.5], [-4], 0.5)
    expected = 1 + (-2 * 1.5) / (-4) * 0.5 + (-2 * -1 * 1.5 * 2.5) / (-4 * -3 * 2) * 0.25
    assert r.value == pytest.approx(expected, rel=1e-15)


def test_hyp_pfq_nonconvergence_is_reported():
    tol = ToleranceSpec(max_terms=5)
    r = hyp_pfq([1.0], [1.5], 10.0, tol)
    assert not r.converged
    assert r.terms_used <= 5


def test_hyp_pfq_divergent_series_rejected():
    with pytest.raises(DomainError):
        hyp_pfq([1, 1], [1.5], 1.5)
    with pytest.raises(DomainError):
        hyp_pfq([1, 1, 1], [1.5], 0.1)
    with pytest.raises(DomainError):
        hyp_pfq([1, 1], [1.5], 1.0)  # Re(c-a-b) < 0


@settings(max_examples=200, deadline=None)
@given(reals(-3, 3), reals(0.1, 4), reals(-5, 5))
def test_converged_series_value_respects_its_tail_estimate(a, b, z):
    tol = ToleranceSpec()
    r = hyp_pfq([a], [b], z, tol)
    assert r.terms_used <= tol.max_terms
    if r.converged:
        assert r.est_tail <= tol.rel_tol * abs(r.value) + tol.abs_tol


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 30), reals(-3, 3), reals(0.2, 5), reals(-1, 1))
def test_hyp_pfq_terminating_matches_polynomial(m, b, c, z):
    # scale by the sum of |terms|: the polynomial can vanish exactly
    scale = sum(abs(pochhammer(-m, n) * pochhammer(b, n) / (pochhammer(c, n) * math.factorial(n)) * z ** n)
                for n in range(m + 1))
    assert abs(hyp_pfq([-m, b], [c], z).value - hyp2f1_terminating(m, b, c, z)) <= 1e-13 * scale


def test_hyp2f1_terminating_examples():
    assert hyp2f1_terminating(0, 0.3, 1.7, 12.0) == 1
    assert hyp2f1_terminating(1, 2, 3, 0.5) == pytest.approx(2 / 3, rel=1e-15)
    # five-term brute force with pochhammer as the oracle
    brute = sum(pochhammer(-4, n) * pochhammer(0.7, n) / (pochhammer(-3.2, n) * math.factorial(n)) * 0.6 ** n
                for n in range(5))
    assert brute == pytest.approx(3.1305872159090909091, rel=1e-14)
    assert hyp2f1_terminating(4, 0.7, -3.2, 0.6) == pytest.approx(3.1305872159090909091, rel=1e-14)


def test_hyp2f1_terminating_pole():
    with pytest.raises(PoleError, match="terminating series pole"):
        hyp2f1_terminating(4, 0.7, -2.0, 0.6)
    with pytest.raises(PoleError, match="terminating series pole"):
        hyp2f1_terminating(4, 0.7, -2.0 + 5e-9, 0.6)
    # zero in (c)_n beyond n = m is never reached
    assert hyp2f1_terminating(2, 0.7, -3.0, 0.6) == pytest.approx(
        1 + (-2 * 0.7) / (-3) * 0.6 + (-2 * -1 * 0.7 * 1.7) / (-3 * -2 * 2) * 0.36, rel=1e-15)


# --- classical summation theorems ------------------------------------------

def test_gauss_examples():
    assert gauss_sum_closed(0.5, 0.5, 2) == pytest.approx(4 / math.pi, rel=1e-13)
    series = hyp_pfq([0.5, 0.5], [2], 1.0, ToleranceSpec(rel_tol=1e-12))
    assert series.converged and rel(series.value, 4 / math.pi) <= 1e-10
    assert gauss_sum_closed(0, 0.8, 2) == pytest.approx(1, rel=1e-14)
    assert gauss_sum_closed(-1, 1, 3) == pytest.approx(2 / 3, rel=1e-14)


def test_gauss_domain_violation():
    with pytest.raises(DomainError, match="gauss domain violation"):
        gauss_sum_closed(1, 1, 1.5)
    with pytest.raises(DomainError, match="gauss domain violation"):
        gauss_sum_closed(-3, -2, -1)


def test_kummer_examples():
    assert kummer_sum_closed(1, 0.5) == pytest.approx(math.pi / 4, rel=1e-13)
    series = hyp_pfq([1, 0.5], [1.5], -1.0, ToleranceSpec(rel_tol=1e-12))
    assert series.converged and rel(series.value, math.pi / 4) <= 1e-10
    assert kummer_sum_closed(0, 0.3) == pytest.approx(1, rel=1e-14)
    assert kummer_sum_closed(0, 2.5) == pytest.approx(1, rel=1e-14)
    for a in (0.4, 1.7, 3.2):
        assert kummer_sum_closed(a, 0) == pytest.approx(1, rel=1e-14)


def test_kummer_domain_violation():
    with pytest.raises(DomainError, match="kummer domain violation"):
        kummer_sum_closed(-2, 0.3)


@settings(max_examples=100, deadline=None)
@given(reals(0.05, 2.5), reals(0.05, 2.5), reals(0.3, 3), reals(-0.3, 0.3))
def test_gauss_closed_matches_series(a, b, margin, im):
    a = complex(a, im)
    c = a.real + b + margin
    closed = gauss_sum_closed(a, b, c)
    series = hyp_pfq([a, b], [c], 1.0, ToleranceSpec(rel_tol=1e-12))
    assert series.converged
    assert rel(closed, series.value) <= 1e-8


@settings(max_examples=100, deadline=None)
@given(reals(0.1, 3), reals(0.05, 0.7))
def test_kummer_closed_matches_alternating_series(a, b):
    closed = kummer_sum_closed(a, b)
    series = hyp_pfq([a, b], [1 + a - b], -1.0, ToleranceSpec(rel_tol=1e-12))
    assert series.converged
    assert rel(closed, series.value) <= 1e-9


@given(reals(-2, 3), reals(-2, 3), reals(0.3, 4))
def test_gauss_symmetric_in_numerators(a, b, margin):
    c = a + b + margin
    try:
        left = gauss_sum_closed(a, b, c)
    except SpecialFunctionError:
        return
    assert left == gauss_sum_closed(b, a, c)


def test_unit_argument_sum_reports_extrapolated_path():
    r = hyp_pfq([0.3, 0.7], [1.3], 1.0, ToleranceSpec(rel_tol=1e-12))
    assert isinstance(r, SeriesValue) and r.path == "unit-extrapolated"
    assert rel(r.value, complex(mpmath.hyp2f1(0.3, 0.7, 1.3, 1))) <= 1e-12

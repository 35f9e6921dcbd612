"""Humbert's confluent double series phi2 and Psi2.

    phi2(a, b; c; x, y) = sum_{n,k} (a)_n (b)_k / (c)_{n+k} x^n y^k / (n! k!)
    Psi2(a; b, c; x, y) = sum_{m,n} (a)_{m+n} / ((b)_m (c)_n) x^m y^n / (m! n!)

Each function has a direct evaluator (anti-diagonal summation of the double
series) and a single-series evaluator whose terms are terminating 2F1
polynomials in y/x. The closed-form special cases of phi2 reduce to 1F1,
1F2 and 0F1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import (
    DEFAULT_TOL,
    DomainError,
    Number,
    PoleError,
    SeriesValue,
    SpecialFunctionError,
    ToleranceSpec,
    as_scalar,
    hyp_pfq,
    nonpositive_integer_index,
    terminating_2f1_terms,
)

_EPS = 2.220446049250313e-16
# fraction of the digits that may be lost to cancellation before a sum is distrusted
_CANCELLATION_LIMIT = math.sqrt(_EPS)


@dataclass(frozen=True)
class Phi2Params:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if nonpositive_integer_index(self.c) is not None:
            raise DomainError("c at nonpositive integer", c=self.c)

    def swapped(self) -> "Phi2Params":
        return Phi2Params(self.b, self.a, self.c)


@dataclass(frozen=True)
class Psi2Params:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        for name in ("b", "c"):
            if nonpositive_integer_index(getattr(self, name)) is not None:
                raise DomainError(f"{name} at nonpositive integer", **{name: getattr(self, name)})

    def swapped(self) -> "Psi2Params":
        return Psi2Params(self.a, self.c, self.b)


def _with_path(sv: SeriesValue, path: str) -> SeriesValue:
    return SeriesValue(sv.value, sv.terms_used, sv.est_tail, sv.converged, path)


# ---------------------------------------------------------------------------
# Direct double series

class _DoubleSeries:
    """Terms u_n(x) v_k(y) w_{n+k} with each factor built by recurrence."""

    def __init__(self, u_step, v_step, w_step, x: complex, y: complex):
        self.u_step, self.v_step, self.w_step = u_step, v_step, w_step
        self.x, self.y = x, y
        self.u = [1.0 + 0.0j]
        self.v = [1.0 + 0.0j]
        self.w = [1.0 + 0.0j]

    def extend(self, n: int) -> None:
        while len(self.u) <= n:
            j = len(self.u) - 1
            self.u.append(self.u[j] * self.u_step(j) * self.x / (j + 1))
            self.v.append(self.v[j] * self.v_step(j) * self.y / (j + 1))
        while len(self.w) <= n:
            j = len(self.w) - 1
            self.w.append(self.w[j] * self.w_step(j))

    def diagonal(self, N: int) -> complex:
        self.extend(N)
        u, v = self.u, self.v
        s = 0.0 + 0.0j
        for k in range(N + 1):
            s += u[N - k] * v[k]
        return s * self.w[N]

    def term(self, n: int, k: int) -> complex:
        self.extend(n + k)
        return self.u[n] * self.v[k] * self.w[n + k]


def _phi2_terms(p: Phi2Params, x: complex, y: complex) -> _DoubleSeries:
    a, b, c = p.a, p.b, p.c
    return _DoubleSeries(lambda j: a + j, lambda j: b + j, lambda j: 1.0 / (c + j), x, y)


def _psi2_terms(p: Psi2Params, x: complex, y: complex) -> _DoubleSeries:
    a, b, c = p.a, p.b, p.c
    return _DoubleSeries(lambda j: 1.0 / (b + j), lambda j: 1.0 / (c + j), lambda j: a + j, x, y)


def _sum_diagonals(series: _DoubleSeries, tol: ToleranceSpec) -> SeriesValue:
    partial = series.diagonal(0)
    small = 0
    tail = 0.0
    N = 0
    while N + 1 < tol.max_terms:
        N += 1
        d = series.diagonal(N)
        partial += d
        if not (math.isfinite(partial.real) and math.isfinite(partial.imag)):
            raise SpecialFunctionError("series overflow", diagonals=N + 1)
        tail = 2.0 * abs(d)
        if tail <= tol.threshold(partial):
            small += 1
            if small >= tol.consecutive_small:
                return SeriesValue(partial, N + 1, tail, True, "direct")
        else:
            small = 0
    return SeriesValue(partial, N + 1, tail, False, "direct")


def _rectangular(series: _DoubleSeries, n_max: int) -> complex:
    re, im = [], []
    for n in range(n_max + 1):
        for k in range(n_max + 1):
            t = series.term(n, k)
            re.append(t.real)
            im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


def phi2_direct(p: Phi2Params, x: Number, y: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """phi2 from its defining double series, summed by anti-diagonals n+k = N."""
    x, y = as_scalar(x), as_scalar(y)
    return _sum_diagonals(_phi2_terms(p, x, y), tol)


def psi2_direct(p: Psi2Params, x: Number, y: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    x, y = as_scalar(x), as_scalar(y)
    return _sum_diagonals(_psi2_terms(p, x, y), tol)


def phi2_rectangular(p: Phi2Params, x: Number, y: Number, n_max: int = 60) -> complex:
    """Brute-force square truncation 0 <= n, k <= n_max (no stopping rule)."""
    return _rectangular(_phi2_terms(p, as_scalar(x), as_scalar(y)), n_max)


def psi2_rectangular(p: Psi2Params, x: Number, y: Number, n_max: int = 60) -> complex:
    return _rectangular(_psi2_terms(p, as_scalar(x), as_scalar(y)), n_max)


# ---------------------------------------------------------------------------
# Single series of terminating 2F1 polynomials

def _sum_polynomial_series(coef_step, inner, x: complex, tol: ToleranceSpec, path: str) -> SeriesValue:
    """sum_m coef_m * inner(m) with coef_{m+1} = coef_m * coef_step(m) * x / (m+1)."""
    coef = 1.0 + 0.0j
    value, mag = inner(0)
    partial = coef * value
    magnitude = abs(coef) * mag
    small = 0
    tail = 0.0
    m = 0
    converged = False
    while m + 1 < tol.max_terms:
        coef *= coef_step(m) * x / (m + 1)
        m += 1
        value, mag = inner(m)
        t = coef * value
        partial += t
        magnitude += abs(coef) * mag
        if not (math.isfinite(partial.real) and math.isfinite(partial.imag) and math.isfinite(magnitude)):
            return SeriesValue(complex(0.0), m + 1, math.inf, False, path)
        tail = 2.0 * abs(t)
        if tail <= tol.threshold(partial):
            small += 1
            if small >= tol.consecutive_small:
                converged = True
                break
        else:
            small = 0
    # terms far larger than the sum mean most digits cancelled away
    if _EPS * magnitude > _CANCELLATION_LIMIT * abs(partial):
        converged = False
    return SeriesValue(partial, m + 1, tail, converged, path)


def phi2_f21_series(p: Phi2Params, x: Number, y: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """phi2 as sum_m (a)_m/(c)_m 2F1(-m, b; 1-a-m; y/x) x^m/m!.

    At x = 0 the ratio y/x is undefined and the limit 1F1(b; c; y) is
    returned. A nonpositive-integer ``a`` makes some inner denominator
    vanish and raises PoleError; use ``phi2_direct`` there.
    """
    x, y = as_scalar(x), as_scalar(y)
    if x == 0:
        return _with_path(hyp_pfq([p.b], [p.c], y, tol), "axis")
    if nonpositive_integer_index(p.a) is not None:
        raise PoleError("terminating series pole", a=p.a)
    a, b, c = p.a, p.b, p.c
    z = y / x
    return _sum_polynomial_series(
        lambda m: (a + m) / (c + m),
        lambda m: terminating_2f1_terms(m, b, 1.0 - a - m, z),
        x, tol, "f21-series",
    )


def psi2_f21_series(p: Psi2Params, x: Number, y: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """Psi2 as sum_n (a)_n/(b)_n 2F1(-n, 1-b-n; c; y/x) x^n/n!; 1F1(a; c; y) at x = 0."""
    x, y = as_scalar(x), as_scalar(y)
    if x == 0:
        return _with_path(hyp_pfq([p.a], [p.c], y, tol), "axis")
    a, b, c = p.a, p.b, p.c
    z = y / x
    return _sum_polynomial_series(
        lambda n: (a + n) / (b + n),
        lambda n: terminating_2f1_terms(n, 1.0 - b - n, c, z),
        x, tol, "f21-series",
    )


# ---------------------------------------------------------------------------
# Closed-form reductions of phi2

def _guard(value: complex, name: str) -> None:
    if nonpositive_integer_index(value) is not None:
        raise DomainError(f"{name} at nonpositive integer", **{name: value})


def phi2_equal_args(a: Number, b: Number, c: Number, x: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """phi2(a, b; c; x, x) = 1F1(a+b; c; x)."""
    a, b, c = as_scalar(a), as_scalar(b), as_scalar(c)
    _guard(c, "c")
    return _with_path(hyp_pfq([a + b], [c], x, tol), "equal-args")


def phi2_antisym(a: Number, c: Number, x: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """phi2(a, a; c; x, -x) = 1F2(a; c/2, c/2 + 1/2; x^2/4)."""
    a, c, x = as_scalar(a), as_scalar(c), as_scalar(x)
    _guard(c, "c")
    _guard(0.5 * c, "c/2")
    _guard(0.5 * c + 0.5, "c/2+1/2")
    return _with_path(hyp_pfq([a], [0.5 * c, 0.5 * c + 0.5], 0.25 * x * x, tol), "antisym")


def phi2_antisym_2a(a: Number, x: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """phi2(a, a; 2a; x, -x) = 0F1(; a + 1/2; x^2/4)."""
    a, x = as_scalar(a), as_scalar(x)
    _guard(a, "a")
    _guard(a + 0.5, "a+1/2")
    _guard(2.0 * a, "2a")
    return _with_path(hyp_pfq([], [a + 0.5], 0.25 * x * x, tol), "antisym-2a")


# ---------------------------------------------------------------------------
# Dispatch

def phi2_auto(p: Phi2Params, x: Number, y: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """Pick the cheapest trustworthy evaluator; the chosen route is in ``.path``.

    Closed forms apply only on exact parameter coincidence. Otherwise the
    2F1 series runs with |y/x| <= 1, exchanging (a, x) and (b, y) when
    needed, and falls back to the direct double series on poles or
    non-convergence.
    """
    x, y = as_scalar(x), as_scalar(y)
    if y == x:
        return phi2_equal_args(p.a, p.b, p.c, x, tol)
    if p.a == p.b and y == -x:
        if p.c == 2.0 * p.a:
            return phi2_antisym_2a(p.a, x, tol)
        return phi2_antisym(p.a, p.c, x, tol)
    if x == 0:
        return _with_path(hyp_pfq([p.b], [p.c], y, tol), "axis")
    if y == 0:
        return _with_path(hyp_pfq([p.a], [p.c], x, tol), "axis")
    q, u, v = (p.swapped(), y, x) if abs(y) > abs(x) else (p, x, y)
    try:
        result = phi2_f21_series(q, u, v, tol)
        if result.converged:
            return result
    except SpecialFunctionError:
        pass
    return phi2_direct(p, x, y, tol)


def psi2_auto(p: Psi2Params, x: Number, y: Number, tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    x, y = as_scalar(x), as_scalar(y)
    if x == 0:
        return _with_path(hyp_pfq([p.a], [p.c], y, tol), "axis")
    if y == 0:
        return _with_path(hyp_pfq([p.a], [p.b], x, tol), "axis")
    q, u, v = (p.swapped(), y, x) if abs(y) > abs(x) else (p, x, y)
    try:
        result = psi2_f21_series(q, u, v, tol)
        if result.converged:
            return result
    except SpecialFunctionError:
        pass
    return psi2_direct(p, x, y, tol)

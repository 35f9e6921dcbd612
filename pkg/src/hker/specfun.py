"""Scalar special-function kernel.

Gamma machinery, Pochhammer symbols and the truncated / terminating
generalized hypergeometric series that the Humbert evaluators are built on.
Every public routine works in the complex field; real inputs are simply
complex numbers with a zero imaginary part.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

Number = complex | float | int

#: arguments closer than this to a Gamma pole / vanishing Pochhammer factor are rejected
POLE_RADIUS = 1e-8

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
_EPS = 2.220446049250313e-16

# B_{2k} / (2k (2k-1)), k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN_ABS = 12.0


class SpecialFunctionError(ValueError):
    """Raised when an evaluation cannot produce a trustworthy finite value.

    ``message`` is the short machine-matchable reason; keyword details
    (offending arguments and the like) are kept in ``details``.
    """

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self) -> str:
        if not self.details:
            return self.message
        extra = ", ".join(f"{k}={v!r}" for k, v in self.details.items())
        return f"{self.message} ({extra})"


class PoleError(SpecialFunctionError):
    pass


class DomainError(SpecialFunctionError):
    pass


@dataclass(frozen=True)
class ToleranceSpec:
    """Truncation policy shared by every series evaluator."""

    rel_tol: float = 1e-14
    abs_tol: float = 1e-300
    max_terms: int = 10000
    consecutive_small: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise ValueError(f"abs_tol must be nonnegative, got {self.abs_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")
        if self.consecutive_small < 1:
            raise ValueError(f"consecutive_small must be >= 1, got {self.consecutive_small}")

    def threshold(self, value: complex) -> float:
        return self.rel_tol * abs(value) + self.abs_tol


DEFAULT_TOL = ToleranceSpec()


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    terms_used: int
    est_tail: float
    converged: bool
    path: str = "series"


def as_scalar(z: Number) -> complex:
    """Coerce to ``complex`` and reject NaN / infinite components."""
    try:
        w = complex(z)
    except (TypeError, ValueError) as exc:
        raise DomainError("not a scalar", value=z) from exc
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError("non-finite scalar", value=z)
    return w


def _check_finite(w: complex) -> bool:
    return math.isfinite(w.real) and math.isfinite(w.imag)


def nonpositive_integer_index(z: complex, radius: float = POLE_RADIUS) -> int | None:
    """Return k if z lies within ``radius`` of -k (k >= 0), else None."""
    r = round(z.real)
    if r > 0:
        return None
    if abs(z - r) <= radius:
        return -int(r)
    return None


def is_exact_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------------------
# Pochhammer symbols

def pochhammer(a: Number, n: int) -> complex:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    if n < 0:
        raise ValueError(f"pochhammer order must be nonnegative, got {n}")
    a = as_scalar(a)
    result = 1.0 + 0.0j
    for j in range(n):
        result *= a + j
    if not _check_finite(result):
        raise SpecialFunctionError("pochhammer overflow", a=a, n=n)
    return result


def pochhammer_shift(a: Number, m: int, n: int) -> complex:
    """(a)_{m-n} computed as (-1)^n (a)_m / (1-a-m)_n.

    Raises PoleError when a factor of (1-a-m)_n vanishes; callers then fall
    back to ``pochhammer(a, m - n)``.
    """
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got m={m}, n={n}")
    a = as_scalar(a)
    # factor j of (1-a-m)_n is -(a + (m-1-j)); the integer offset keeps it exact near a = 0
    factors = [-(a + (m - 1 - j)) for j in range(n)]
    if any(abs(f) <= POLE_RADIUS for f in factors):
        raise PoleError("pochhammer shift pole", a=a, m=m, n=n)
    den = 1.0 + 0.0j
    for f in factors:
        den *= f
    sign = -1.0 if n % 2 else 1.0
    return sign * pochhammer(a, m) / den


# ---------------------------------------------------------------------------
# Gamma function

def _log_gamma_right(z: complex) -> complex:
    # Stirling series after upward recurrence; Re(z) >= 0.5 keeps every
    # shifted factor off the branch cut so the sum of logs is the analytic branch.
    shift = 0.0 + 0.0j
    while abs(z) < _STIRLING_MIN_ABS:
        shift += cmath.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    corr = 0.0 + 0.0j
    for c in reversed(_STIRLING):
        corr = corr * inv2 + c
    corr *= inv
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + corr - shift


def _log_sinpi(z: complex) -> complex:
    # log sin(pi z) modulo 2 pi i; the real part of z is reduced first so that
    # arguments near integers keep full relative accuracy
    r = round(z.real)
    x = z.real - r
    y = z.imag
    if abs(y) < 20.0:
        s = complex(math.sin(math.pi * x) * math.cosh(math.pi * y),
                    math.cos(math.pi * x) * math.sinh(math.pi * y))
        out = cmath.log(s)
    else:
        # |sin(pi z)| ~ exp(pi |y|) / 2; drop the exponentially small part
        sgn = 1.0 if y > 0 else -1.0
        w = complex(x, y)
        out = -sgn * 1j * math.pi * w - math.log(2.0) + sgn * 1j * (math.pi / 2)
    return out + 1j * math.pi * r


def _branch_reference(z: complex) -> complex:
    # Downward recurrence from the right half plane: L(z) = L(z+N) - sum Log(z+k).
    acc = 0.0 + 0.0j
    w = z
    while w.real < 0.5:
        acc += cmath.log(w) if w.imag != 0.0 or w.real > 0 else complex(math.log(-w.real), math.pi)
        w += 1.0
    return _log_gamma_right(w) - acc


def log_gamma(z: Number) -> complex:
    """Principal branch of log Gamma(z).

    Positive reals go to ``math.lgamma``. Elsewhere the Stirling series with
    upward recurrence covers Re(z) >= 0.5 and the reflection formula the
    rest. The imaginary part follows the branch
    that is continuous off the negative real axis (the same one as
    ``scipy.special.loggamma``).
    """
    z = as_scalar(z)
    if nonpositive_integer_index(z) is not None:
        raise PoleError("gamma pole at nonpositive integer", z=z)
    if z.imag == 0.0 and z.real > 0.0:
        # libm is good to a few ulps here; the recurrence below loses ~4e-15 absolute
        return complex(math.lgamma(z.real), 0.0)
    if z.real >= 0.5:
        return _log_gamma_right(z)
    refl = _LOG_PI - _log_sinpi(z) - _log_gamma_right(1.0 - z)
    ref = _branch_reference(z)
    k = round((ref.imag - refl.imag) / (2.0 * math.pi))
    return complex(refl.real, refl.imag + 2.0 * math.pi * k)


def gamma_ratio(numerators: Sequence[Number], denominators: Sequence[Number]) -> complex:
    """prod Gamma(numerators) / prod Gamma(denominators), evaluated in log space.

    Denominator arguments that are exactly nonpositive integers make the
    ratio exactly zero. Poles on both sides cancel pairwise in the limit
    where every argument approaches its pole at the same rate, using the
    residue (-1)^k / k! of Gamma at -k.
    """
    nums = [as_scalar(v) for v in numerators]
    dens = [as_scalar(v) for v in denominators]

    def split(args, side):
        poles, regular = [], []
        for v in args:
            k = nonpositive_integer_index(v)
            if k is None:
                regular.append(v)
            elif is_exact_nonpositive_integer(v):
                poles.append(k)
            else:
                raise PoleError("gamma ratio pole", argument=v, side=side)
        return poles, regular

    num_poles, num_reg = split(nums, "numerator")
    den_poles, den_reg = split(dens, "denominator")
    if len(num_poles) > len(den_poles):
        raise PoleError("gamma ratio pole", numerators=nums, denominators=dens)
    if len(num_poles) < len(den_poles):
        return 0.0 + 0.0j

    # fixed summation order keeps the ratio invariant under argument permutations
    key = lambda v: (v.real, v.imag)
    log_val = (sum((log_gamma(v) for v in sorted(num_reg, key=key)), 0j)
               - sum((log_gamma(v) for v in sorted(den_reg, key=key)), 0j))
    # residue ratio for cancelled pole pairs
    for k in num_poles:
        log_val -= math.lgamma(k + 1)
    for k in den_poles:
        log_val += math.lgamma(k + 1)
    sign = (-1) ** ((sum(num_poles) + sum(den_poles)) % 2)
    if log_val.real > 709.0:
        raise SpecialFunctionError("gamma ratio overflow", numerators=nums, denominators=dens)
    return sign * cmath.exp(log_val)


# ---------------------------------------------------------------------------
# Hypergeometric series

def _terminating_degree(num: Sequence[complex]) -> int | None:
    degree = None
    for v in num:
        if is_exact_nonpositive_integer(v):
            k = -int(v.real)
            degree = k if degree is None else min(degree, k)
    return degree


def _guard_denominators(den: Sequence[complex], degree: int | None, message: str) -> None:
    # term n+1 carries (d+n) in the denominator for n < degree
    for d in den:
        k = nonpositive_integer_index(d)
        if k is not None and (degree is None or k < degree):
            raise PoleError(message, parameter=d)


def _polynomial(num, den, z, degree: int) -> complex:
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for n in range(degree):
        ratio = z / (n + 1)
        for v in num:
            ratio *= v + n
        for d in den:
            ratio /= d + n
        term *= ratio
        total += term
    if not _check_finite(total):
        raise SpecialFunctionError("series overflow", degree=degree, z=z)
    return total


def _safety_factor(ratio: float) -> float:
    # geometric tail bound |t| / (1 - r); never below 2
    if ratio <= 0.5:
        return 2.0
    if ratio < 1.0:
        return 1.0 / (1.0 - ratio)
    return math.inf


def _plain_sum(num, den, z, tol: ToleranceSpec) -> SeriesValue:
    partial = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small = 0
    n = 0
    last_tail = 2.0
    while n + 1 < tol.max_terms:
        ratio = z / (n + 1)
        for v in num:
            ratio *= v + n
        for d in den:
            ratio /= d + n
        term *= ratio
        partial += term
        n += 1
        if not _check_finite(partial):
            raise SpecialFunctionError("series overflow", terms=n + 1, z=z)
        last_tail = _safety_factor(abs(ratio)) * abs(term)
        if last_tail <= tol.threshold(partial):
            small += 1
            if small >= tol.consecutive_small:
                return SeriesValue(partial, n + 1, last_tail, True)
        else:
            small = 0
    return SeriesValue(partial, n + 1, last_tail, False)


def _unit_argument_sum(num, den, z, tol: ToleranceSpec) -> SeriesValue:
    """Sum a (q+1)Fq series at z = +1 or -1 by extrapolating partial sums.

    The partial sums S_N behave like S + N^-rho (e0 + e1/N + ...) with rho =
    sum(den) - sum(num) at z = 1 and one more at z = -1 (even N only), so a
    Richardson table over N = 16, 32, 64, ... with those known exponents
    removes the algebraic tail.
    """
    rho = sum(den, 0j) - sum(num, 0j)
    if z.real < 0:
        rho += 1.0
    if rho.real <= 0:
        raise DomainError("series diverges at unit argument", rho=rho, z=z)

    checkpoints = []
    N = 16
    while N < tol.max_terms:
        checkpoints.append(N)
        N *= 2
    if not checkpoints:
        checkpoints = [tol.max_terms - tol.max_terms % 2 or 1]

    re_terms: list[float] = []
    im_terms: list[float] = []
    term = 1.0 + 0.0j
    n = 0
    table: list[list[complex]] = []
    # each level already improves on the last superlinearly; two agreeing levels suffice
    needed = min(tol.consecutive_small, 2)
    small = 0
    best = None
    last_diff = math.inf
    for N in checkpoints:
        while n < N:
            re_terms.append(term.real)
            im_terms.append(term.imag)
            ratio = z / (n + 1)
            for v in num:
                ratio *= v + n
            for d in den:
                ratio /= d + n
            term *= ratio
            n += 1
        row = [complex(math.fsum(re_terms), math.fsum(im_terms))]
        if not _check_finite(row[0]):
            raise SpecialFunctionError("series overflow", terms=n, z=z)
        if table:
            prev = table[-1]
            for j in range(1, len(prev) + 1):
                f = 2.0 ** (rho + (j - 1))
                row.append(row[j - 1] + (row[j - 1] - prev[j - 1]) / (f - 1.0))
        table.append(row)
        if best is not None:
            last_diff = 2.0 * abs(row[-1] - best)
            if last_diff <= tol.threshold(row[-1]):
                small += 1
                if small >= needed:
                    return SeriesValue(row[-1], n, last_diff, True, "unit-extrapolated")
            else:
                small = 0
        best = row[-1]
    return SeriesValue(best, n, last_diff, False, "unit-extrapolated")


def hyp_pfq(num_params: Sequence[Number], den_params: Sequence[Number], z: Number,
            tol: ToleranceSpec = DEFAULT_TOL) -> SeriesValue:
    """Generalized hypergeometric series pFq(num; den; z).

    Terms follow t_{n+1} = t_n * prod(num+n) / prod(den+n) * z / (n+1).
    Terminating series (a numerator equal to -m) are summed exactly.
    For p = q+1 at z = +-1 the algebraically convergent series is summed
    with extrapolation in the truncation order; elsewhere the stopping rule
    of ``tol`` applies. Non-convergence is reported, not raised.
    """
    num = [as_scalar(v) for v in num_params]
    den = [as_scalar(v) for v in den_params]
    z = as_scalar(z)
    degree = _terminating_degree(num)
    _guard_denominators(den, degree, "series pole")

    if z == 0:
        return SeriesValue(1.0 + 0.0j, 1, 0.0, True)
    if degree is not None:
        return SeriesValue(_polynomial(num, den, z, degree), degree + 1, 0.0, True, "terminating")
    p, q = len(num), len(den)
    if p > q + 1:
        raise DomainError("series diverges", p=p, q=q)
    if p == q + 1:
        if abs(z) > 1.0:
            raise DomainError("series diverges", p=p, q=q, z=z)
        if z == 1 or z == -1:
            return _unit_argument_sum(num, den, z, tol)
    return _plain_sum(num, den, z, tol)


def terminating_2f1_terms(m: int, b: complex, c: complex, z: complex) -> tuple[complex, float]:
    """2F1(-m, b; c; z) together with the sum of |terms| (for cancellation checks)."""
    for j in range(m):
        if abs(c + j) <= POLE_RADIUS:
            raise PoleError("terminating series pole", c=c, m=m)
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    mag = 1.0
    for n in range(m):
        term *= (n - m) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        mag += abs(term)
    return total, mag


def hyp2f1_terminating(m: int, b: Number, c: Number, z: Number) -> complex:
    """2F1(-m, b; c; z) as the exact degree-m polynomial."""
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    b, c, z = as_scalar(b), as_scalar(c), as_scalar(z)
    total, _ = terminating_2f1_terms(m, b, c, z)
    if not _check_finite(total):
        raise SpecialFunctionError("series overflow", m=m, b=b, c=c, z=z)
    return total


# ---------------------------------------------------------------------------
# Classical summation theorems

def gauss_sum_closed(a: Number, b: Number, c: Number) -> complex:
    """2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))."""
    a, b, c = as_scalar(a), as_scalar(b), as_scalar(c)
    s = c - (a + b)
    if not s.real > 0 or nonpositive_integer_index(c) is not None:
        raise DomainError("gauss domain violation", a=a, b=b, c=c)
    return gamma_ratio([c, s], [c - a, c - b])


def kummer_sum_closed(a: Number, b: Number) -> complex:
    """2F1(a, b; 1+a-b; -1) = Gamma(1+a/2) Gamma(1+a-b) / (Gamma(1+a) Gamma(1+a/2-b))."""
    a, b = as_scalar(a), as_scalar(b)
    nums = [1.0 + 0.5 * a, 1.0 + a - b]
    if any(nonpositive_integer_index(v) is not None for v in nums):
        raise DomainError("kummer domain violation", a=a, b=b)
    return gamma_ratio(nums, [1.0 + a, 1.0 + 0.5 * a - b])

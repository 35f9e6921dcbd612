"""Randomized identity sweeps.

Each registered identity pairs two evaluators that reach the same quantity
by different routes. A sweep samples valid parameters from a
:class:`ParamDomain`, evaluates both sides and condenses the relative errors
into an :class:`IdentityReport`.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import humbert as hb
from . import specfun as sf
from .specfun import SeriesValue, SpecialFunctionError, ToleranceSpec

GENERATOR = "numpy.random.Philox"
MAX_CONSECUTIVE_REJECTIONS = 1000
REL_ERR_FLOOR = 1e-300


@dataclass(frozen=True)
class ParamDomain:
    """Sampling box plus the pole guards every sampled tuple must satisfy.

    ``ranges`` maps parameter name to a closed interval; names listed in
    ``integer_params`` are drawn as integers. ``nonpositive_guarded`` names
    keep ``exclusion_radius`` away from 0, -1, -2, ...; when
    ``integer_avoidance`` is on, ``integer_guarded`` names keep that distance
    from every integer. ``min_abs`` imposes |value| >= bound and
    ``constraint`` is an arbitrary extra predicate on the whole tuple.
    """

    ranges: dict[str, tuple[float, float]]
    exclusion_radius: float = 0.05
    integer_avoidance: bool = True
    integer_guarded: tuple[str, ...] = ("a", "b")
    nonpositive_guarded: tuple[str, ...] = ("c",)
    integer_params: tuple[str, ...] = ()
    min_abs: dict[str, float] = field(default_factory=dict)
    complex_parts: bool = False
    complex_params: tuple[str, ...] = ()
    constraint: Callable[[dict], bool] | None = None

    def __post_init__(self):
        for name, (lo, hi) in self.ranges.items():
            if not lo <= hi:
                raise ValueError(f"empty interval for {name}: [{lo}, {hi}]")
        if self.exclusion_radius < 0:
            raise ValueError("exclusion_radius must be nonnegative")

    def with_ranges(self, **overrides: tuple[float, float]) -> "ParamDomain":
        unknown = set(overrides) - set(self.ranges)
        if unknown:
            raise ValueError(f"unknown parameter(s) in domain override: {sorted(unknown)}")
        return replace(self, ranges={**self.ranges, **overrides})

    def accepts(self, point: dict) -> bool:
        r = self.exclusion_radius
        for name in self.nonpositive_guarded:
            if name in point:
                z = complex(point[name])
                k = min(0, round(z.real))
                if abs(z - k) < r:
                    return False
        if self.integer_avoidance:
            for name in self.integer_guarded:
                if name in point:
                    z = complex(point[name])
                    if abs(z - round(z.real)) < r:
                        return False
        for name, bound in self.min_abs.items():
            if abs(point[name]) < bound:
                return False
        if self.constraint is not None and not self.constraint(point):
            return False
        return True


def sample_params(domain: ParamDomain, count: int, seed: int) -> list[dict]:
    """Draw ``count`` guarded parameter tuples, deterministically in ``seed``."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.Generator(np.random.Philox(seed))
    names = sorted(domain.ranges)
    points: list[dict] = []
    rejected = 0
    while len(points) < count:
        point: dict = {}
        for name in names:
            lo, hi = domain.ranges[name]
            if name in domain.integer_params:
                point[name] = int(rng.integers(math.ceil(lo), math.floor(hi) + 1))
            else:
                point[name] = float(rng.uniform(lo, hi))
        if domain.complex_parts:
            for name in domain.complex_params:
                point[name] = complex(point[name], float(rng.uniform(-0.5, 0.5)))
        if domain.accepts(point):
            points.append(point)
            rejected = 0
        else:
            rejected += 1
            if rejected >= MAX_CONSECUTIVE_REJECTIONS:
                raise sf.DomainError("domain too constrained", ranges=domain.ranges)
    return points


# ---------------------------------------------------------------------------
# Identity registry

Evaluator = Callable[[dict, ToleranceSpec], "SeriesValue | complex"]


@dataclass(frozen=True)
class Identity:
    name: str
    description: str
    domain: ParamDomain
    lhs: Evaluator
    rhs: Evaluator
    default_tol: float
    default_samples: int = 100
    derive: Callable[[dict], dict] | None = None


def _with_y(point: dict) -> dict:
    # y is sampled as a fraction t of x so that |y| <= |x|
    return {**point, "y": point["t"] * point["x"]}


def _with_n(point: dict) -> dict:
    m = point["m"]
    return {**point, "n": min(m, int(point["u"] * (m + 1)))}


def _phi2(p: dict) -> hb.Phi2Params:
    return hb.Phi2Params(p["a"], p["b"], p["c"])


def _psi2(p: dict) -> hb.Psi2Params:
    return hb.Psi2Params(p["a"], p["b"], p["c"])


def _theorem1_lhs(p, tol):
    return hb.phi2_f21_series(_phi2(p), p["x"], p["y"], tol)


def _theorem1_rhs(p, tol):
    return hb.phi2_direct(_phi2(p), p["x"], p["y"], tol)


def _gauss_lhs(p, tol):
    return sf.gauss_sum_closed(p["a"], p["b"], p["c"])


def _gauss_rhs(p, tol):
    return sf.hyp_pfq([p["a"], p["b"]], [p["c"]], 1.0, tol)


def _gauss_margin(p):
    return (complex(p["c"]) - p["a"] - p["b"]).real >= 0.3


def _kummer_lhs(p, tol):
    return sf.kummer_sum_closed(p["a"], p["b"])


def _kummer_rhs(p, tol):
    return sf.hyp_pfq([p["a"], p["b"]], [1.0 + p["a"] - p["b"]], -1.0, tol)


def _equal_lhs(p, tol):
    return hb.phi2_equal_args(p["a"], p["b"], p["c"], p["x"], tol)


def _equal_rhs(p, tol):
    return hb.phi2_direct(_phi2(p), p["x"], p["x"], tol)


def _antisym_lhs(p, tol):
    return hb.phi2_antisym(p["a"], p["c"], p["x"], tol)


def _antisym_rhs(p, tol):
    return hb.phi2_direct(hb.Phi2Params(p["a"], p["a"], p["c"]), p["x"], -p["x"], tol)


def _antisym2a_lhs(p, tol):
    return hb.phi2_antisym_2a(p["a"], p["x"], tol)


def _antisym2a_rhs(p, tol):
    a = p["a"]
    return hb.phi2_direct(hb.Phi2Params(a, a, 2 * a), p["x"], -p["x"], tol)


def _psi2_lhs(p, tol):
    return hb.psi2_f21_series(_psi2(p), p["x"], p["y"], tol)


def _psi2_rhs(p, tol):
    return hb.psi2_direct(_psi2(p), p["x"], p["y"], tol)


def _shift_lhs(p, tol):
    return sf.pochhammer_shift(p["a"], p["m"], p["n"])


def _shift_rhs(p, tol):
    return sf.pochhammer(p["a"], p["m"] - p["n"])


def _diag_lhs(p, tol):
    return hb.phi2_direct(_phi2(p), p["x"], p["y"], tol)


def _diag_rhs(p, tol):
    return hb.phi2_rectangular(_phi2(p), p["x"], p["y"], n_max=60)


REGISTRY: dict[str, Identity] = {}


def register(identity: Identity) -> Identity:
    REGISTRY[identity.name] = identity
    return identity


register(Identity(
    "theorem1", "phi2 as a series of terminating 2F1 vs the double series",
    ParamDomain({"a": (0.1, 3.0), "b": (0.1, 3.0), "c": (0.6, 4.0), "x": (-2.0, 2.0), "t": (-1.0, 1.0)},
                min_abs={"x": 0.05}, complex_params=("a", "b", "c", "x")),
    _theorem1_lhs, _theorem1_rhs, 1e-10, derive=_with_y,
))
register(Identity(
    "gauss", "Gauss closed form vs extrapolated 2F1(a,b;c;1) partial sums",
    ParamDomain({"a": (0.1, 1.0), "b": (0.1, 1.0), "c": (2.5, 4.0)},
                complex_params=("a", "b"), constraint=_gauss_margin),
    _gauss_lhs, _gauss_rhs, 1e-8, default_samples=50,
))
register(Identity(
    "kummer", "Kummer closed form vs 2F1(a,b;1+a-b;-1) alternating sums",
    ParamDomain({"a": (0.1, 2.0), "b": (0.1, 0.4)}, complex_params=("a", "b")),
    _kummer_lhs, _kummer_rhs, 1e-9, default_samples=50,
))
register(Identity(
    "equal-args", "phi2(a,b;c;x,x) = 1F1(a+b;c;x)",
    ParamDomain({"a": (0.1, 3.0), "b": (0.1, 3.0), "c": (0.6, 4.0), "x": (-2.0, 2.0)},
                complex_params=("a", "b", "c", "x")),
    _equal_lhs, _equal_rhs, 1e-10, default_samples=50,
))
register(Identity(
    "antisym", "phi2(a,a;c;x,-x) = 1F2(a; c/2, c/2+1/2; x^2/4)",
    ParamDomain({"a": (0.1, 3.0), "c": (0.6, 4.0), "x": (-2.0, 2.0)},
                complex_params=("a", "c", "x")),
    _antisym_lhs, _antisym_rhs, 1e-10, default_samples=50,
))
register(Identity(
    "antisym-2a", "phi2(a,a;2a;x,-x) = 0F1(; a+1/2; x^2/4)",
    ParamDomain({"a": (0.3, 3.0), "x": (-2.0, 2.0)}, complex_params=("a", "x")),
    _antisym2a_lhs, _antisym2a_rhs, 1e-10, default_samples=50,
))
register(Identity(
    "psi2-b", "Psi2 as a series of terminating 2F1 vs the double series",
    ParamDomain({"a": (0.1, 3.0), "b": (0.6, 4.0), "c": (0.6, 4.0), "x": (-2.0, 2.0), "t": (-1.0, 1.0)},
                integer_guarded=("a",), nonpositive_guarded=("b", "c"), min_abs={"x": 0.05},
                complex_params=("a", "b", "c", "x")),
    _psi2_lhs, _psi2_rhs, 1e-10, derive=_with_y,
))
register(Identity(
    "poch-shift", "(a)_{m-n} = (-1)^n (a)_m / (1-a-m)_n",
    ParamDomain({"a": (-6.0, 6.0), "m": (0, 20), "u": (0.0, 1.0)},
                integer_guarded=("a",), nonpositive_guarded=(), integer_params=("m",),
                complex_params=("a",)),
    _shift_lhs, _shift_rhs, 1e-12, default_samples=500, derive=_with_n,
))
register(Identity(
    "diag-reindex", "anti-diagonal vs rectangular summation of the phi2 double series",
    ParamDomain({"a": (0.1, 3.0), "b": (0.1, 3.0), "c": (0.6, 4.0), "x": (-1.0, 1.0), "y": (-1.0, 1.0)},
                complex_params=("a", "b", "c", "x", "y")),
    _diag_lhs, _diag_rhs, 1e-12, default_samples=20,
))


# ---------------------------------------------------------------------------
# Sweeps

@dataclass(frozen=True)
class Failure:
    index: int
    point: dict
    rel_err: float | None
    diagnostic: str


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    samples: int
    seed: int
    generator: str
    check_tol: float
    max_rel_err: float
    worst_point: dict | None
    failures: list[Failure]
    passed: bool

    def to_record(self) -> dict:
        return {
            "identity": self.identity_name,
            "samples": self.samples,
            "seed": self.seed,
            "generator": self.generator,
            "check_tol": self.check_tol,
            "max_rel_err": self.max_rel_err,
            "worst_point": _point_record(self.worst_point),
            "failures": [
                {"index": f.index, "point": _point_record(f.point), "rel_err": f.rel_err,
                 "diagnostic": f.diagnostic}
                for f in self.failures
            ],
            "pass": self.passed,
        }


def _point_record(point: dict | None) -> dict | None:
    if point is None:
        return None
    out = {}
    for k in sorted(point):
        v = point[k]
        out[k] = {"re": v.real, "im": v.imag} if isinstance(v, complex) else v
    return out


def evaluation_tolerance(check_tol: float) -> ToleranceSpec:
    """Truncation policy for sweeps: three digits tighter than the check, never below 1e-14."""
    return ToleranceSpec(rel_tol=max(1e-14, check_tol * 1e-3))


def _value(result) -> tuple[complex, bool]:
    if isinstance(result, SeriesValue):
        return result.value, result.converged
    return complex(result), True


def evaluate_point(identity: Identity, index: int, point: dict, check_tol: float):
    """Return (index, rel_err or None, diagnostic or None) for one sample."""
    tol = evaluation_tolerance(check_tol)
    try:
        lhs, lhs_ok = _value(identity.lhs(point, tol))
        rhs, rhs_ok = _value(identity.rhs(point, tol))
    except SpecialFunctionError as exc:
        return index, None, f"evaluation error: {exc.message}"
    if not (lhs_ok and rhs_ok):
        return index, None, "non-converged"
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), REL_ERR_FLOOR)
    if not math.isfinite(rel):
        return index, None, "non-finite result"
    if rel > check_tol:
        return index, rel, "exceeds tolerance"
    return index, rel, None


def _evaluate_registered(args):
    name, index, point, check_tol = args
    return evaluate_point(REGISTRY[name], index, point, check_tol)


def check_identity(identity_name: str, domain: ParamDomain | None = None, count: int | None = None,
                   seed: int = 0, check_tol: float | None = None, jobs: int = 1) -> IdentityReport:
    """Sweep one registered identity and condense the outcome.

    Results are identical for any ``jobs``: samples are drawn serially and
    aggregated in sample order.
    """
    if identity_name not in REGISTRY:
        raise ValueError(f"unknown identity: {identity_name}")
    identity = REGISTRY[identity_name]
    domain = identity.domain if domain is None else domain
    count = identity.default_samples if count is None else count
    check_tol = identity.default_tol if check_tol is None else check_tol

    points = sample_params(domain, count, seed)
    if identity.derive is not None:
        points = [identity.derive(p) for p in points]

    tasks = [(identity_name, i, p, check_tol) for i, p in enumerate(points)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_evaluate_registered, tasks, chunksize=max(1, count // (4 * jobs))))
    else:
        outcomes = [evaluate_point(identity, i, p, check_tol) for i, p in enumerate(points)]
    outcomes.sort(key=lambda o: o[0])

    max_rel = 0.0
    worst = None
    failures = []
    for index, rel, diagnostic in outcomes:
        if rel is not None and rel > max_rel:
            max_rel, worst = rel, points[index]
        if diagnostic is not None:
            failures.append(Failure(index, points[index], rel, diagnostic))
    if worst is None and points:
        worst = points[0]
    passed = not failures and max_rel <= check_tol
    return IdentityReport(identity_name, count, seed, GENERATOR, check_tol, max_rel, worst, failures, passed)

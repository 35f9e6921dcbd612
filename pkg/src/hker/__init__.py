"""Humbert phi2 / Psi2 evaluation by direct double series and by series of 2F1."""
from .specfun import (
    DEFAULT_TOL,
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
from .humbert import (
    Phi2Params,
    Psi2Params,
    phi2_antisym,
    phi2_antisym_2a,
    phi2_auto,
    phi2_direct,
    phi2_equal_args,
    phi2_f21_series,
    phi2_rectangular,
    psi2_auto,
    psi2_direct,
    psi2_f21_series,
    psi2_rectangular,
)
from .verify import IdentityReport, ParamDomain, check_identity, sample_params

__version__ = "0.1.0"

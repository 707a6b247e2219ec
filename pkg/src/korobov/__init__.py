"""Worst-case L2 / L-infinity approximation in weighted Korobov spaces:
exact spectra, information complexity and tractability verdicts."""

from .complexity import (
    ComplexityResult,
    info_complexity,
    initial_error,
    minimal_error_all,
    optimize_spline_lambda,
    qpt_lower_bound,
    spline_error_bound,
    spline_n_sufficient,
)
from .errors import (
    CapExceeded,
    DegenerateInput,
    DomainError,
    InsufficientData,
    UnsupportedClass,
    UnsupportedCriterion,
    UnsupportedFamily,
)
from .numerics import fit_loglog_slope, is_prime, next_prime, riemann_zeta, zeta
from .spectrum import (
    ProblemSpec,
    SpectrumCursor,
    count_above,
    decay_value,
    eigenvalue,
    head_sum,
    sum_above,
    total_sum,
)
from .tractability import TractabilityReport, Verdict, classify
from .weights import Constant, Explicit, GeometricDecay, PolynomialDecay, parse_family

__version__ = "0.1.0"

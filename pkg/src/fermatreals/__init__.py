"""Fermat reals: exact nilpotent-infinitesimal arithmetic.

The ring elements are truncated fractional-power polynomials
``std + sum(c_i * t**e_i)`` with rational exponents in (0, 1]; powers of t
above 1 vanish.  The package provides the ring with its dictionary order,
Taylor extension of smooth functions, the leading-term slice solver with
solution families, intermediate-value-property criteria, and the omega /
order / Euclidean topology computations with their counterexample
sequences, plus an expression DSL and CLI on top.
"""

__version__ = "0.1.0"

from .core import (
    FermatReal,
    Ordering,
    add,
    compare,
    eval_representative,
    format_fermat,
    mul,
    negate,
    nilpotency_index,
    normalize,
    order_omega,
    pow_nat,
    real,
    scale,
    subtract,
    t,
    t_power,
)
from .errors import (
    BackendMismatch,
    ComparisonUndecided,
    ExactBackendRootNeeded,
    FermatError,
    NoFiniteM,
    NoRealPreimage,
    NoRealRoot,
    NotInSliceImage,
    ParseError,
    RootNotExact,
    SolverDiverged,
    StepCapExceeded,
    UnknownName,
    UnresolvedClassification,
)
from .extension import (
    QSFunction,
    eval_qs,
    expand_parametric,
    extract_derivative,
    fermat_extend,
    fermat_extend_multi,
    integrate_qs,
    separating_exponents,
)
from .oracles import (
    CallableOracle,
    CallablePartialOracle,
    CosOracle,
    DeclaredIntegral,
    DerivativeOracle,
    ExpNegInvOracle,
    ExpOracle,
    IntegralOracle,
    LogOracle,
    MultiPolynomialOracle,
    PartialOracle,
    PolynomialIntegral,
    PolynomialOracle,
    SinOracle,
    oracle_from_descriptor,
    power_oracle,
)
from .polyroots import AlgebraicPoint
from .scalars import BIGFLOAT, EXACT, field_by_name, get_precision, set_precision
from .solver import (
    ExtremaResult,
    Monotonicity,
    SliceClass,
    SolutionFamily,
    SplitResult,
    classify_monotone_global,
    classify_slice,
    extrema_on_interval,
    isolate_real_roots,
    ivp_criterion_at,
    ivp_solve,
    qs_slice_image_contains,
    qs_solve_slice,
    refine_to_fundamental,
    slice_image_contains,
    solution_family,
    solve_slice,
    split_domain,
)
from .topology import (
    ConvergenceVerdict,
    SequencePrefix,
    catalog_names,
    cauchy_check_prefix,
    d_omega,
    euclid_inner,
    euclid_norm,
    euclid_norm_sq,
    in_fermat_open,
    in_order_interval,
    make_counterexample,
    omega_limit_decompose,
    order_limit_decompose,
)

__all__ = [name for name in dir() if not name.startswith("_")]

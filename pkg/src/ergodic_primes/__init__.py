"""Prime-weighted polynomial averages on Z^Gamma, their circle-method multipliers,
and the jump/oscillation seminorms used to measure them."""

from .errors import (
    EmptyAverageError,
    ErgodicPrimesError,
    InvalidClassError,
    KernelDomainError,
    ParameterError,
    PeriodTooSmallError,
    QuadratureError,
    ResourceError,
)
from .primes import (
    PrimeTable,
    ResidueClass,
    chebyshev_theta,
    euler_totient,
    mobius,
    sieve_primes,
    siegel_walfisz_error,
    units_mod,
)
from .lattice import (
    GammaSet,
    LatticeConfig,
    Region,
    ball,
    build_gamma,
    canonical_map,
    chebyshev_omega,
    cube,
    custom_region,
    ellipsoid,
    make_config,
    weighted_points,
)
from .signals import Signal, random_signal, read_signal, write_signal
from .operators import (
    CZKernel,
    RealPolynomial,
    apply_multiplier,
    average_A,
    cotlar_H,
    riesz_kernel,
    twisted_average,
    validate_kernel,
)
from .seminorms import (
    IncreasingSequence,
    SampledCurve,
    jump_count,
    jump_functional,
    oscillation,
    rademacher_menshov_check,
    seminorm_S_p,
    variation,
)
from .expsums import (
    DiscreteMultiplier,
    ReducedFraction,
    approximation_error,
    continuous_multiplier,
    discrete_multiplier,
    gauss_sum,
    weyl_sum,
)
from .circle import (
    FractionSet,
    ParameterPlan,
    annuli_multiplier,
    composite_multiplier,
    fractions_annulus,
    fractions_leq,
    support_radius_check,
)
from .harness import ExperimentReport, recompute_verdicts, run_experiment, validate_report

__version__ = "0.1.0"

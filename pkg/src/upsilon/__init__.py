"""Master function sums over semiprimes, two independent summation paths, and
numerical checks of the identities and asymptotics built on them."""
from .analytics import (
    EvalGrid,
    TrendSeries,
    cor1_majorant,
    cor1_sum,
    cor2_integral_remainder,
    cor2_sum,
    cor3_sum,
    li,
    moment_sum,
    rosser_identity_check,
    trend_series,
)
from .errors import CapacityError, DomainError, SizingError, UpsilonError
from .master import (
    SummationReport,
    UpsilonValue,
    sum_upsilon,
    sum_upsilon_direct,
    sum_upsilon_identity,
    upsilon,
    verify_identity,
)
from .primecount import PrimeCountTable, build_prime_count_table, lookup, pi
from .sieve import PrimeList, SieveSegment, omega_segment, pi_two, primes_up_to, theta, theta_at_points

__version__ = "0.1.0"

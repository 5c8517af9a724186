"""The master function and its partial sums.

``upsilon(n)`` is ``log p`` when ``n = p*p``, ``log n`` when ``n = p*q`` with
distinct primes, and 0 otherwise.  Its partial sum is computed two ways:

* direct: an Omega scan over ``n <= x`` adding ``log n`` for distinct
  semiprimes and ``log p`` for prime squares;
* identity: ``sum over primes p with 2p <= x of pi(x // p) * log p`` with all
  ``pi`` values read from one :class:`~upsilon.primecount.PrimeCountTable`.
"""
import enum
import math
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import config
from ._summation import fsum
from .errors import DomainError
from .primecount import build_prime_count_table
from .sieve import DEFAULT_SEGMENT_SIZE, iter_omega_blocks, map_prime_blocks, small_primes

__all__ = [
    "Kind",
    "UpsilonValue",
    "SummationReport",
    "big_omega",
    "is_prime",
    "upsilon",
    "sum_upsilon_direct",
    "sum_upsilon_identity",
    "sum_upsilon",
    "verify_identity",
    "DIRECT_CROSSOVER",
    "IDENTITY_TOLERANCE",
]

# sum_upsilon() uses the direct scan up to here and the identity path above
DIRECT_CROSSOVER = 10**7
IDENTITY_TOLERANCE = 1e-8

_MAX_N = 2**63 - 1
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class Kind(str, enum.Enum):
    PRIME_SQUARE = "prime-square"
    DISTINCT_SEMIPRIME = "distinct-semiprime"
    ZERO = "zero"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class UpsilonValue:
    n: int
    value: float
    kind: Kind
    omega: int


@dataclass(frozen=True)
class SummationReport:
    """Both partial-sum paths at one ``x``.

    ``reference`` is ``x log log x`` (NaN for ``x < 3``, where it is not
    positive) and ``ratio = direct / reference``.
    """

    x: int
    direct: float
    identity: float
    abs_diff: float
    rel_diff: float
    reference: float
    ratio: float
    tolerance: float = IDENTITY_TOLERANCE

    @property
    def passed(self):
        return self.rel_diff <= self.tolerance


def is_prime(n):
    """Deterministic Miller-Rabin; exact for every ``n < 3.3e24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, n)
        if y == 1 or y == n - 1:
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def _icbrt(n):
    c = round(n ** (1 / 3))
    while c * c * c > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


def big_omega(n):
    """Omega(n), prime factors counted with multiplicity, for ``1 <= n < 2**63``.

    Trial division by the primes up to the cube root leaves a cofactor whose
    prime factors all exceed the cube root, so it is 1, a prime, or a product
    of two primes.
    """
    if n < 1 or n > _MAX_N:
        raise DomainError(f"n must satisfy 1 <= n < 2**63, got {n}")
    ps = small_primes(_icbrt(n))
    count = 0
    m = n
    if ps.size:
        for p in ps[np.int64(n) % ps == 0].tolist():
            while m % p == 0:
                m //= p
                count += 1
    if m == 1:
        return count
    return count + (1 if is_prime(m) else 2)


def upsilon(n):
    """Evaluate the master function at ``n``; ``n`` in {0, 1} gives zero.

    >>> upsilon(9).kind.value, round(upsilon(9).value, 12) == round(math.log(3), 12)
    ('prime-square', True)
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n < 2:
        return UpsilonValue(n, 0.0, Kind.ZERO, 0)
    omega = big_omega(n)
    if omega == 2:
        r = isqrt(n)
        if r * r == n:
            return UpsilonValue(n, math.log(r), Kind.PRIME_SQUARE, 2)
        return UpsilonValue(n, math.log(n), Kind.DISTINCT_SEMIPRIME, 2)
    return UpsilonValue(n, 0.0, Kind.ZERO, omega)


def _direct_block(lo, omega):
    idx = np.flatnonzero(omega == 2)
    if idx.size == 0:
        return 0.0
    n = lo + idx.astype(np.int64)
    weights = np.log(n)
    hi = lo + omega.size
    ps = small_primes(isqrt(hi - 1))
    squares = ps[ps * ps >= lo] ** 2
    if squares.size:
        pos = np.searchsorted(n, squares)
        weights[pos] = 0.5 * np.log(squares)
    return fsum(weights)


def sum_upsilon_direct(x, threads=None, segment_size=DEFAULT_SEGMENT_SIZE):
    """Partial sum of upsilon over ``n <= x`` by a segmented Omega scan."""
    if x < 4:
        return 0.0
    partials = iter_omega_blocks(2, x + 1, threads, segment_size, fn=_direct_block)
    return fsum(partials)


def sum_upsilon_identity(x, threads=None, segment_size=DEFAULT_SEGMENT_SIZE, table=None):
    """Partial sum of upsilon over ``n <= x`` as ``sum_{2p <= x} pi(x // p) log p``."""
    if x < 4:
        return 0.0
    if table is None:
        table = build_prime_count_table(x)
    elif table.x != x:
        raise ValueError(f"table was built for x={table.x}, not {x}")

    def block(ps):
        if ps.size == 0:
            return 0.0
        return fsum(table.lookup_array(x // ps) * np.log(ps))

    return fsum(map_prime_blocks(block, 2, x // 2 + 1, threads, segment_size))


def sum_upsilon(x, threads=None):
    """Partial sum of upsilon, routed to the direct path up to DIRECT_CROSSOVER."""
    if x <= DIRECT_CROSSOVER:
        return sum_upsilon_direct(x, threads=threads)
    return sum_upsilon_identity(x, threads=threads)


def loglog_reference(x):
    """``x log log x``, or NaN where ``log log x`` is not positive (x < 3)."""
    if x < 3:
        return math.nan
    return x * math.log(math.log(x))


def verify_identity(x, tolerance=IDENTITY_TOLERANCE, threads=None):
    """Evaluate both partial-sum paths at ``x`` and compare them.

    A mismatch beyond ``tolerance`` does not raise; the returned report has
    ``passed == False`` and carries both values.
    """
    if x < 2:
        raise DomainError(f"x must be >= 2, got {x}")
    config.check_capacity(x, "direct")
    direct = sum_upsilon_direct(x, threads=threads)
    identity = sum_upsilon_identity(x, threads=threads)
    abs_diff = abs(direct - identity)
    reference = loglog_reference(x)
    return SummationReport(
        x=x,
        direct=direct,
        identity=identity,
        abs_diff=abs_diff,
        rel_diff=abs_diff / max(direct, 1.0),
        reference=reference,
        ratio=direct / reference if reference > 0 else math.nan,
        tolerance=tolerance,
    )

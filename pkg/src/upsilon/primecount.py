"""pi(v) at every distinct value of floor(x / k), via the sieve DP over those values.

Indexing convention: ``v <= isqrt(x)`` is served from ``small[v]``; larger
``v`` from ``large[x // v]``.  The boundary point ``isqrt(x)`` lives in
``small``.
"""
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import config
from .errors import DomainError
from .sieve import count_primes

__all__ = ["PrimeCountTable", "build_prime_count_table", "lookup", "pi", "hyperbola_points"]


def hyperbola_points(x):
    """The distinct values of ``floor(x / k)`` for ``k >= 1``, ascending."""
    if x < 1:
        return np.zeros(0, dtype=np.int64)
    r = isqrt(x)
    low = np.arange(1, r + 1, dtype=np.int64)
    high = x // low[::-1]
    return np.unique(np.concatenate((low, high)))


@dataclass(frozen=True)
class PrimeCountTable:
    x: int
    small: np.ndarray  # small[v] = pi(v), 0 <= v <= isqrt(x)
    large: np.ndarray  # large[k] = pi(x // k), 1 <= k <= isqrt(x); large[0] unused

    @property
    def root(self):
        return len(self.small) - 1

    def covers(self, v):
        if v < 0 or v > self.x:
            return False
        return v <= self.root or self.x // (self.x // v) == v

    def lookup(self, v):
        v = int(v)
        if not self.covers(v):
            raise DomainError(f"{v} is not of the form floor({self.x}/k)")
        if v <= self.root:
            return int(self.small[v])
        return int(self.large[self.x // v])

    def lookup_array(self, v):
        """Vectorised :meth:`lookup` without the coverage check."""
        v = np.asarray(v, dtype=np.int64)
        r = self.root
        is_small = v <= r
        out = np.empty(v.shape, dtype=np.int64)
        out[is_small] = self.small[v[is_small]]
        out[~is_small] = self.large[self.x // v[~is_small]]
        return out


def build_prime_count_table(x):
    """Build the :class:`PrimeCountTable` for ``x`` in about x**0.75 steps.

    Starts from S(v) = v - 1 on every hyperbola point and, for each prime
    ``q <= sqrt(x)`` in turn, removes the integers whose least prime factor
    is ``q``: ``S(v) -= S(v // q) - S(q - 1)`` for ``v >= q*q``.

    Raises
    ------
    CapacityError
        If ``x`` exceeds the identity-path cap.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    config.check_capacity(x, "identity")
    r = isqrt(x)
    small = np.arange(-1, r, dtype=np.int64)
    small[0] = 0
    k_all = np.arange(0, r + 1, dtype=np.int64)
    large = np.zeros(r + 1, dtype=np.int64)
    large[1:] = x // k_all[1:] - 1

    for q in range(2, r + 1):
        if small[q] == small[q - 1]:
            continue
        q2 = q * q
        if q2 > x:
            break
        below = small[q - 1]
        kmax = min(r, x // q2)
        # k*q <= r reads large[k*q]; otherwise small[x // (k*q)]
        m = min(kmax, r // q)
        upd = np.empty(kmax, dtype=np.int64)
        upd[:m] = large[q : q * m + 1 : q]
        if kmax > m:
            upd[m:] = small[x // (k_all[m + 1 : kmax + 1] * q)]
        large[1 : kmax + 1] -= upd - below
        if q2 <= r:
            small[q2:] -= small[k_all[q2:] // q] - below

    small.setflags(write=False)
    large.setflags(write=False)
    return PrimeCountTable(x=x, small=small, large=large)


def lookup(table, v):
    """pi(v) for a hyperbola point ``v`` of ``table.x``; raises DomainError otherwise."""
    return table.lookup(v)


def pi(x, threads=None):
    """Exact prime count pi(x).

    Below :data:`config.PI_CROSSOVER` the primes are counted by a segmented
    sieve; above it the hyperbola table is built and ``large[1]`` returned.
    """
    if x < 2:
        return 0
    if x < config.PI_CROSSOVER:
        return count_primes(x, threads=threads)
    return int(build_prime_count_table(x).large[1])

"""Segmented prime generation, per-integer Omega classification and theta.

Every routine walks the integers in fixed half-open windows of
``segment_size`` integers.  Window boundaries depend only on the inputs, never
on the worker count, so per-window partial sums reduce to identical totals in
serial and threaded runs.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from ._parallel import ordered_map, resolve_threads
from ._summation import CompensatedSum, fsum
from .errors import SizingError

DEFAULT_SEGMENT_SIZE = 1 << 20

__all__ = [
    "DEFAULT_SEGMENT_SIZE",
    "PrimeList",
    "SieveSegment",
    "ThresholdSweepResult",
    "StepSweep",
    "primes_up_to",
    "iter_prime_blocks",
    "count_primes",
    "omega_segment",
    "theta",
    "pi_two",
    "theta_at_points",
    "step_sweep",
    "map_prime_blocks",
    "map_indexed_prime_blocks",
]


@dataclass(frozen=True)
class PrimeList:
    """All primes ``<= limit`` in ascending order."""

    limit: int
    primes: np.ndarray

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def __getitem__(self, i):
        return self.primes[i]


@dataclass(frozen=True)
class SieveSegment:
    """Window ``[lo, hi)`` with ``omega[n - lo] == Omega(n)``."""

    lo: int
    hi: int
    omega: np.ndarray

    def __len__(self):
        return self.hi - self.lo


@dataclass(frozen=True)
class ThresholdSweepResult:
    x: int
    divisors: tuple
    theta_values: dict


@dataclass(frozen=True)
class StepSweep:
    """Prefix quantities of the prime step functions at sorted thresholds.

    For each threshold ``t``:

    * ``theta[i]``  -- sum of ``log p`` over primes ``p <= t``;
    * ``last_prime[i]`` -- largest prime ``<= t`` (0 when there is none);
    * ``integral[i]`` -- ``sum theta(p_j) * (1/log p_j - 1/log p_{j+1})`` over
      consecutive primes with ``p_{j+1} <= t``, i.e. the integral of
      ``theta(u) / (u log^2 u)`` from 2 up to ``last_prime``.  Only filled
      when the sweep was asked for it.
    """

    thresholds: np.ndarray
    theta: np.ndarray
    last_prime: np.ndarray
    integral: np.ndarray = None


@lru_cache(maxsize=64)
def _small_primes_cached(limit):
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.setflags(write=False)
    return out


def small_primes(limit):
    """Primes ``<= limit`` from an unsegmented sieve; meant for base primes."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    return _small_primes_cached(int(limit))


def block_ranges(lo, hi, segment_size=DEFAULT_SEGMENT_SIZE):
    """Split ``[lo, hi)`` into consecutive windows of ``segment_size`` integers."""
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    return [(a, min(a + segment_size, hi)) for a in range(lo, hi, segment_size)]


def sieve_block(a, b, base):
    """Primes in ``[a, b)``; ``base`` must hold every prime ``<= isqrt(b - 1)``.

    Only odd integers are stored.
    """
    parts = []
    if a <= 2 < b:
        parts.append(np.array([2], dtype=np.int64))
    a0 = max(a, 3)
    a0 += 1 - (a0 & 1)
    if a0 < b:
        n_odd = (b - a0 + 1) // 2
        flags = np.ones(n_odd, dtype=bool)
        ps = base[1 : np.searchsorted(base, isqrt(b - 1), side="right")]
        if ps.size:
            starts = np.maximum(ps * ps, -(-a0 // ps) * ps)
            starts += ps * (starts % 2 == 0)
            offsets = (starts - a0) // 2
            for off, p in zip(offsets.tolist(), ps.tolist()):
                if off < n_odd:
                    flags[off::p] = False
        parts.append(a0 + 2 * np.flatnonzero(flags).astype(np.int64))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts) if len(parts) > 1 else parts[0]


def iter_prime_blocks(lo, hi, segment_size=DEFAULT_SEGMENT_SIZE):
    """Yield arrays of the primes in ``[lo, hi)``, one array per window."""
    lo = max(lo, 2)
    if hi <= lo:
        return
    base = small_primes(isqrt(hi - 1))
    for a, b in block_ranges(lo, hi, segment_size):
        yield sieve_block(a, b, base)


def map_prime_blocks(fn, lo, hi, threads=None, segment_size=DEFAULT_SEGMENT_SIZE):
    """Apply ``fn(primes)`` to each window of primes in ``[lo, hi)``, in order."""
    lo = max(lo, 2)
    if hi <= lo:
        return []
    base = small_primes(isqrt(hi - 1))

    def work(bounds):
        return fn(sieve_block(bounds[0], bounds[1], base))

    return ordered_map(work, block_ranges(lo, hi, segment_size), threads)


def map_indexed_prime_blocks(fn, lo, hi, threads=None, segment_size=DEFAULT_SEGMENT_SIZE):
    """Like :func:`map_prime_blocks` but calls ``fn(primes, index)``.

    ``index`` holds each prime's 1-based rank among all primes, i.e. pi(p).
    Windows are sieved in waves of ``threads`` so the running rank offset is
    known before the terms are evaluated.
    """
    lo = max(lo, 2)
    if hi <= lo:
        return []
    base = small_primes(isqrt(hi - 1))
    n = resolve_threads(threads)
    ranges = block_ranges(lo, hi, segment_size)
    offset = 0 if lo <= 2 else count_primes(lo - 1, threads, segment_size)
    results = []
    for w in range(0, len(ranges), n):
        blocks = ordered_map(lambda r: sieve_block(r[0], r[1], base), ranges[w : w + n], n)
        items = []
        for ps in blocks:
            items.append((ps, np.arange(offset + 1, offset + ps.size + 1, dtype=np.int64)))
            offset += ps.size
        results.extend(ordered_map(lambda item: fn(*item), items, n))
    return results


def primes_up_to(limit, segment_size=DEFAULT_SEGMENT_SIZE):
    """Return the :class:`PrimeList` of primes ``<= limit``.

    >>> primes_up_to(10).primes.tolist()
    [2, 3, 5, 7]
    """
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    blocks = list(iter_prime_blocks(2, limit + 1, segment_size))
    primes = np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.int64)
    primes.setflags(write=False)
    return PrimeList(limit=int(limit), primes=primes)


def count_primes(limit, threads=None, segment_size=DEFAULT_SEGMENT_SIZE):
    """pi(limit) by segmented sieving."""
    return sum(map_prime_blocks(len, 2, limit + 1, threads, segment_size))


def _omega_block(lo, hi, base):
    rem = np.arange(lo, hi, dtype=np.int64)
    omega = np.zeros(hi - lo, dtype=np.uint8)
    top = hi - 1
    for p in base[: np.searchsorted(base, isqrt(top), side="right")].tolist():
        pk = p
        while pk <= top:
            start = -(-lo // pk) * pk
            if start <= top:
                window = slice(start - lo, None, pk)
                omega[window] += 1
                rem[window] //= p
            pk *= p
    # a cofactor left after removing all primes <= sqrt(n) is a single prime
    omega += rem > 1
    return omega


def omega_segment(lo, hi, base):
    """Omega(n) for every ``n`` in ``[lo, hi)``.

    Parameters
    ----------
    lo, hi : int
        Window bounds, ``2 <= lo < hi``.
    base : PrimeList
        Must contain every prime ``<= isqrt(hi - 1)``.

    Raises
    ------
    SizingError
        If ``base.limit`` is below ``isqrt(hi - 1)``.
    """
    if not 2 <= lo < hi:
        raise ValueError(f"need 2 <= lo < hi, got lo={lo}, hi={hi}")
    need = isqrt(hi - 1)
    if base.limit < need:
        raise SizingError(f"base primes reach {base.limit}, window [{lo}, {hi}) needs {need}")
    omega = _omega_block(lo, hi, np.asarray(base.primes, dtype=np.int64))
    omega.setflags(write=False)
    return SieveSegment(lo=lo, hi=hi, omega=omega)


def iter_omega_blocks(lo, hi, threads=None, segment_size=DEFAULT_SEGMENT_SIZE, fn=None):
    """Map ``fn(lo, omega)`` over the Omega windows of ``[lo, hi)`` in order."""
    lo = max(lo, 2)
    if hi <= lo:
        return []
    base = small_primes(isqrt(hi - 1))

    def work(bounds):
        a, b = bounds
        return fn(a, _omega_block(a, b, base))

    return ordered_map(work, block_ranges(lo, hi, segment_size), threads)


def theta(x, threads=None, segment_size=DEFAULT_SEGMENT_SIZE):
    """Chebyshev theta, the sum of ``log p`` over primes ``p <= x``."""
    if x < 2:
        return 0.0
    partials = map_prime_blocks(lambda ps: fsum(np.log(ps)), 2, x + 1, threads, segment_size)
    return fsum(partials)


def pi_two(x, threads=None, segment_size=DEFAULT_SEGMENT_SIZE):
    """Number of ``n <= x`` with exactly two prime factors (with multiplicity)."""
    if x < 4:
        return 0
    counts = iter_omega_blocks(
        2, x + 1, threads, segment_size, fn=lambda a, om: int(np.count_nonzero(om == 2))
    )
    return sum(counts)


def step_sweep(thresholds, with_integral=False, segment_size=DEFAULT_SEGMENT_SIZE):
    """One ascending pass over the primes, sampling theta at each threshold.

    ``thresholds`` must be strictly increasing non-negative integers.  Theta
    is accumulated as correctly rounded per-piece sums (pieces cut at the
    thresholds) folded into a compensated running total.
    """
    t = np.asarray(thresholds, dtype=np.int64)
    if t.ndim != 1:
        raise ValueError("thresholds must be one-dimensional")
    if t.size and (np.any(np.diff(t) <= 0) or t[0] < 0):
        raise ValueError("thresholds must be strictly increasing and non-negative")
    theta_out = np.zeros(t.size)
    last_out = np.zeros(t.size, dtype=np.int64)
    integral_out = np.zeros(t.size) if with_integral else None
    if t.size == 0 or t[-1] < 2:
        return StepSweep(t, theta_out, last_out, integral_out)

    acc = CompensatedSum()
    jacc = CompensatedSum()
    prev_p = 0
    prev_theta = 0.0
    ti = int(np.searchsorted(t, 2))  # thresholds below 2 keep zeros
    top = int(t[-1])
    base = small_primes(isqrt(top))
    for a, b in block_ranges(2, top + 1, segment_size):
        ps = sieve_block(a, b, base)
        tj = int(np.searchsorted(t, b))
        cuts = np.searchsorted(ps, t[ti:tj], side="right").tolist()
        bounds = [0] + cuts + [ps.size]
        logs = np.log(ps)
        if with_integral and ps.size:
            theta_at = acc.total + np.cumsum(logs)
            left = np.concatenate(([prev_p], ps[:-1]))
            left_theta = np.concatenate(([prev_theta], theta_at[:-1]))
            safe = np.maximum(left, 2)
            # 1/log l - 1/log r, formed without cancellation
            gap = np.log1p((ps - safe) / safe) / (np.log(safe) * logs)
            terms = np.where(left > 0, left_theta * gap, 0.0)
        for k in range(len(bounds) - 1):
            i0, i1 = bounds[k], bounds[k + 1]
            if i1 > i0:
                acc.add(fsum(logs[i0:i1]))
                if with_integral:
                    jacc.add(fsum(terms[i0:i1]))
            if k < len(cuts):
                idx = ti + k
                theta_out[idx] = acc.total
                last_out[idx] = ps[i1 - 1] if i1 > 0 else prev_p
                if with_integral:
                    integral_out[idx] = jacc.total
        if ps.size:
            prev_p = int(ps[-1])
            prev_theta = acc.total
        ti = tj
    return StepSweep(t, theta_out, last_out, integral_out)


def theta_at_points(x, divisors, segment_size=DEFAULT_SEGMENT_SIZE):
    """theta(floor(x / k)) for every ``k`` in ``divisors``, in a single sweep."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    ks = [int(k) for k in divisors]
    if any(k < 1 for k in ks):
        raise ValueError("every divisor must be >= 1")
    points = sorted({x // k for k in ks})
    sweep = step_sweep(points, segment_size=segment_size)
    lookup = dict(zip(points, sweep.theta.tolist()))
    return ThresholdSweepResult(
        x=x, divisors=tuple(ks), theta_values={k: lookup[x // k] for k in ks}
    )

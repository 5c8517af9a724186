"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports the package under test.
"""
import math
from functools import lru_cache


def trial_is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def trial_primes(limit):
    return [n for n in range(2, limit + 1) if trial_is_prime(n)]


def factor(n):
    """Prime factors of n with multiplicity, by trial division."""
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def omega_table(limit):
    """Omega(n) for 0 <= n <= limit by factoring each n."""
    return tuple([0, 0] + [len(factor(n)) for n in range(2, limit + 1)])


def naive_upsilon(n):
    f = factor(n) if n >= 2 else []
    if len(f) != 2:
        return 0.0
    if f[0] == f[1]:
        return math.log(f[0])
    return math.log(n)


@lru_cache(maxsize=None)
def naive_upsilon_prefix(limit):
    """Prefix sums S(x) for 0 <= x <= limit; each prefix is an exact fsum."""
    terms = [0.0, 0.0] + [naive_upsilon(n) for n in range(2, limit + 1)]
    out = []
    partial = []
    for t in terms:
        if t:
            partial.append(t)
        out.append(math.fsum(partial))
    return tuple(out)


def naive_theta(x):
    return math.fsum(math.log(p) for p in trial_primes(int(x)))


def naive_pi(x):
    return len(trial_primes(int(x)))


def trapezoid_li(x, n=400_000):
    """Composite trapezoid rule for the integral of 1/log t over [2, x]."""
    if x == 2:
        return 0.0
    h = (x - 2) / n
    total = 0.5 * (1 / math.log(2) + 1 / math.log(x))
    total += math.fsum(1 / math.log(2 + i * h) for i in range(1, n))
    return total * h

"""Sums over primes ``p <= x/2``, their exact proof relations, and trend tables.

All ``p <= x/2`` bounds are evaluated as ``2p <= x``.  ``theta(x/p)`` is a
step function and is read at ``x // p``; ``Li(x/p)`` and the integral of
``theta(t) / (t log^2 t)`` up to ``x/p`` are continuous in the upper limit and
use the real quotient.
"""
import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expi

from ._summation import fsum
from .errors import DomainError
from .master import sum_upsilon
from .primecount import hyperbola_points, pi
from .sieve import map_indexed_prime_blocks, pi_two, step_sweep, theta

__all__ = [
    "EvalGrid",
    "TrendRow",
    "TrendSeries",
    "IdentityCheck",
    "CLAIMS",
    "li",
    "li_array",
    "cor1_sum",
    "cor1_majorant",
    "cor2_sum",
    "cor2_integral_remainder",
    "step_integral",
    "rosser_identity_check",
    "cor3_sum",
    "moment_sum",
    "trend_series",
    "resolve_claim",
]

LI_TOLERANCE = 1e-10
LI_MAX_DEPTH = 60
ROSSER_TOLERANCE = 1e-9

_LOG2 = math.log(2.0)
_EI_LOG2 = float(expi(_LOG2))
# Gauss-Legendre rule for Li on [2, y], y < 4, where Ei(log y) - Ei(log 2) cancels
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass(frozen=True)
class EvalGrid:
    """Geometric grid of integers from ``start`` to ``stop`` (both included).

    >>> EvalGrid(10, 1000, 3).values
    (10, 100, 1000)
    """

    start: int
    stop: int
    points: int

    def __post_init__(self):
        if self.start < 3:
            raise DomainError(f"grid start must be >= 3, got {self.start}")
        if self.stop < self.start:
            raise DomainError("grid stop must be >= start")
        if self.points < 2:
            raise DomainError("grid needs at least 2 points")

    @property
    def values(self):
        raw = np.rint(np.geomspace(self.start, self.stop, self.points)).astype(np.int64)
        raw[0], raw[-1] = self.start, self.stop
        return tuple(int(v) for v in np.unique(raw))


class TrendRow(tuple):
    __slots__ = ()
    _fields = ("x", "value", "reference", "ratio")

    def __new__(cls, x, value, reference, ratio):
        return tuple.__new__(cls, (x, value, reference, ratio))

    x = property(lambda self: self[0])
    value = property(lambda self: self[1])
    reference = property(lambda self: self[2])
    ratio = property(lambda self: self[3])


@dataclass(frozen=True)
class TrendSeries:
    claim: str
    rows: list = field(default_factory=list)

    @property
    def ratios(self):
        return [row.ratio for row in self.rows]


@dataclass(frozen=True)
class IdentityCheck:
    """Two sides of an exact relation at one ``x``."""

    check: str
    x: int
    lhs: float
    rhs: float
    abs_diff: float
    rel_diff: float
    passed: bool


def _check(name, x, lhs, rhs, tolerance):
    abs_diff = abs(lhs - rhs)
    rel = abs_diff / max(abs(lhs), abs(rhs), 1e-300)
    return IdentityCheck(name, x, float(lhs), float(rhs), abs_diff, rel, rel <= tolerance)


# -- logarithmic integral ----------------------------------------------------


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, eps, depth):
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0
    return _adaptive(f, a, fa, m, fm, lm, flm, left, eps / 2.0, depth - 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, eps / 2.0, depth - 1
    )


def li(x, tol=LI_TOLERANCE, max_depth=LI_MAX_DEPTH):
    """Offset logarithmic integral, the integral of ``1/log t`` over ``[2, x]``.

    Integrates ``e**u / u`` over ``[log 2, log x]`` (the substitution
    ``t = e**u``) by adaptive Simpson to relative tolerance ``tol``.
    """
    x = float(x)
    if not x >= 2.0:
        raise DomainError(f"li needs x >= 2, got {x}")
    if x == 2.0:
        return 0.0
    a, b = _LOG2, math.log(x)

    def f(u):
        return math.exp(u) / u

    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _adaptive(f, a, fa, b, fb, m, fm, whole, tol * abs(whole), max_depth)


def li_array(y):
    """Vectorised Li for an array of reals ``>= 2``.

    Uses ``Ei(log y) - Ei(log 2)`` where that difference is well conditioned
    (``y >= 4``) and a 24-point Gauss-Legendre rule on ``[2, y]`` below.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 2.0):
        raise DomainError("li_array needs every argument >= 2")
    out = np.empty_like(y)
    big = y >= 4.0
    out[big] = expi(np.log(y[big])) - _EI_LOG2
    ys = y[~big]
    if ys.size:
        half = 0.5 * (ys - 2.0)
        t = 2.0 + half[:, None] * (_GL_NODES[None, :] + 1.0)
        out[~big] = half * (_GL_WEIGHTS[None, :] / np.log(t)).sum(axis=1)
    return out


# -- prime sums --------------------------------------------------------------


def _prime_sum(x, term, threads=None):
    """fsum of ``term(p, pi(p))`` over primes with ``2p <= x``, window by window."""
    if x < 4:
        return 0.0

    def block(ps, index):
        return fsum(term(ps, index)) if ps.size else 0.0

    return fsum(map_indexed_prime_blocks(block, 2, x // 2 + 1, threads))


def _hyperbola_sweep(x, with_integral=False):
    """Step sweep at every ``x // p`` value reachable from a prime ``p >= 2``."""
    points = hyperbola_points(x)
    return step_sweep(points[points <= x // 2], with_integral=with_integral)


def _sample(sweep, values, v):
    return values[np.searchsorted(sweep.thresholds, v)]


def _moment(x, m, threads):
    return _prime_sum(x, lambda ps, index: index.astype(np.float64) ** m / ps, threads)


def cor1_sum(x, threads=None):
    """``sum over 2p <= x of pi(p) / p``; ``pi(p)`` is the rank of ``p`` among the primes."""
    return _moment(x, 1, threads)


def moment_sum(x, m, threads=None):
    """``sum over 2p <= x of pi(p)**m / p`` for an integer ``m >= 1``.

    ``moment_sum(x, 1)`` runs the same code as :func:`cor1_sum` and is bit
    identical to it.
    """
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"m must be an integer >= 1, got {m}")
    return _moment(x, int(m), threads)


def cor1_majorant(x, threads=None):
    """``sum over 2p <= x of pi(p) * theta(x // p)``."""
    if x < 4:
        return 0.0
    sweep = _hyperbola_sweep(x)
    return _prime_sum(x, lambda ps, index: index * _sample(sweep, sweep.theta, x // ps), threads)


def cor2_sum(x, threads=None):
    """``sum over 2p <= x of theta(x // p) * log p / log(x / p)``.

    ``log p / log(x/p)`` is ``(log x / log p - 1) ** -1`` rewritten without
    the inner division.
    """
    if x < 4:
        return 0.0
    sweep = _hyperbola_sweep(x)
    log_x = math.log(x)

    def term(ps, index):
        logs = np.log(ps)
        return _sample(sweep, sweep.theta, x // ps) * logs / (log_x - logs)

    return _prime_sum(x, term, threads)


def _integral_to(x, ps, t_theta, t_last, t_integral):
    """Integral of theta(u)/(u log^2 u) over [2, x/p], per prime ``p`` in ``ps``.

    Full constancy intervals of theta come from the sweep; the last partial
    interval [last prime, x/p] contributes theta * (1/log q - 1/log(x/p)).
    """
    q = t_last
    qp = q * ps
    tail = np.log1p((x - qp) / qp) / (np.log(q) * (math.log(x) - np.log(ps)))
    return t_integral + t_theta * tail


def step_integral(y):
    """Integral of ``theta(t) / (t log^2 t)`` over ``[2, y]`` for integer ``y >= 2``.

    Exact up to rounding: theta is constant between primes and the
    antiderivative of ``1 / (t log^2 t)`` is ``-1 / log t``.
    """
    if y < 2:
        raise DomainError(f"y must be >= 2, got {y}")
    sweep = step_sweep([int(y)], with_integral=True)
    q = int(sweep.last_prime[0])
    tail = math.log1p((y - q) / q) / (math.log(q) * math.log(y))
    return float(sweep.integral[0] + sweep.theta[0] * tail)


def cor2_integral_remainder(x, threads=None):
    """``sum over 2p <= x of log p * integral of theta(t)/(t log^2 t) over [2, x/p]``.

    The upper limit is the real quotient ``x / p``.
    """
    if x < 4:
        return 0.0
    sweep = _hyperbola_sweep(x, with_integral=True)

    def term(ps, index):
        pos = np.searchsorted(sweep.thresholds, x // ps)
        inner = _integral_to(
            x, ps, sweep.theta[pos], sweep.last_prime[pos], sweep.integral[pos]
        )
        return np.log(ps) * inner

    return _prime_sum(x, term, threads)


def rosser_identity_check(x, tolerance=ROSSER_TOLERANCE):
    """Compare ``pi(x)`` with ``theta(x)/log x + integral of theta(t)/(t log^2 t)``."""
    if x < 2:
        raise DomainError(f"x must be >= 2, got {x}")
    sweep = step_sweep([int(x)], with_integral=True)
    q = int(sweep.last_prime[0])
    th = float(sweep.theta[0])
    log_x = math.log(x)
    integral = float(sweep.integral[0]) + th * math.log1p((x - q) / q) / (math.log(q) * log_x)
    return _check("rosser", x, pi(x), th / log_x + integral, tolerance)


def cor3_sum(x, threads=None):
    """``sum over 2p <= x of Li(x / p)`` with the real quotient as argument."""
    if x < 4:
        return 0.0
    return _prime_sum(x, lambda ps, index: li_array(x / ps), threads)


# -- trends ------------------------------------------------------------------


def _ll(x):
    return math.log(math.log(x))


# claim -> (value function, reference function)
CLAIMS = {
    "theorem-master": (sum_upsilon, lambda x: x * _ll(x)),
    "landau": (pi_two, lambda x: x * _ll(x) / math.log(x)),
    "chebyshev": (theta, float),
    "cor1": (cor1_sum, _ll),
    "cor2": (cor2_sum, lambda x: x * _ll(x)),
    "cor3": (cor3_sum, lambda x: x * _ll(x) / math.log(x)),
}

_MOMENT = re.compile(r"moment-([1-9][0-9]*)")


def resolve_claim(claim):
    """Return ``(value_fn(x, threads), reference_fn(x))`` for a claim identifier."""
    if claim in CLAIMS:
        return CLAIMS[claim]
    match = _MOMENT.fullmatch(claim)
    if match:
        m = int(match.group(1))
        return (lambda x, threads=None: moment_sum(x, m, threads=threads)), _ll
    raise DomainError(
        f"unknown claim {claim!r}; expected one of {sorted(CLAIMS)} or moment-<m>"
    )


def trend_series(claim, grid, threads=None):
    """Value, reference asymptotic and their ratio at every grid point."""
    value_fn, reference_fn = resolve_claim(claim)
    rows = []
    for x in grid.values:
        value = float(value_fn(x, threads=threads))
        reference = float(reference_fn(x))
        ratio = value / reference if reference > 0 else math.nan
        rows.append(TrendRow(x, value, reference, ratio))
    return TrendSeries(claim=claim, rows=rows)

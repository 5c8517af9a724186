"""Capacity caps and tunables.

``UPSILON_MAX_X``, when set, replaces every per-path cap with a single value.
"""
import os

from .errors import CapacityError

DEFAULT_CAPS = {
    "identity": 10**9,
    "direct": 10**7,
    "cor3": 10**8,
}

# pi(x) switches from direct sieve counting to the hyperbola table here
PI_CROSSOVER = 10**7


def _parse_cap(raw):
    value = float(raw)
    if value != int(value) or value < 1:
        raise ValueError(f"UPSILON_MAX_X must be a positive integer, got {raw!r}")
    return int(value)


def max_x(path="identity"):
    """Return the capacity cap for ``path`` (``identity``, ``direct`` or ``cor3``)."""
    override = os.environ.get("UPSILON_MAX_X")
    if override:
        return _parse_cap(override)
    return DEFAULT_CAPS[path]


def check_capacity(x, path="identity"):
    cap = max_x(path)
    if x > cap:
        raise CapacityError(f"x={x} exceeds the {path} capacity cap {cap} (set UPSILON_MAX_X to override)")

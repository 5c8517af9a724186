"""Compensated summation helpers.

Array reductions go through :func:`math.fsum` (correctly rounded); running
totals that are fed piece by piece use :class:`CompensatedSum`.
"""
import math

import numpy as np


def fsum(values):
    """Correctly rounded sum of a 1-d array or iterable of floats."""
    if isinstance(values, np.ndarray):
        values = values.tolist()
    return math.fsum(values)


class CompensatedSum:
    """Neumaier running sum.

    >>> acc = CompensatedSum()
    >>> for v in (1e16, 1.0, -1e16):
    ...     acc.add(v)
    >>> acc.total
    1.0
    """

    __slots__ = ("_sum", "_carry")

    def __init__(self, value=0.0):
        self._sum = float(value)
        self._carry = 0.0

    def add(self, value):
        s = self._sum
        t = s + value
        if abs(s) >= abs(value):
            self._carry += (s - t) + value
        else:
            self._carry += (value - t) + s
        self._sum = t

    @property
    def total(self):
        return self._sum + self._carry

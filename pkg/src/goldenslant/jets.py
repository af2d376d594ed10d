"""Second-order forward-mode automatic differentiation.

A :class:`Jet2` carries a value, a gradient and a symmetric Hessian with
respect to ``m`` parameters and propagates them through arithmetic and the
elementary functions used by the immersion DSL.  Immersions here are
low-dimensional, so jets give exact-to-rounding Jacobians and Hessians
without any symbolic machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Jet2:
    value: float
    grad: np.ndarray
    hess: np.ndarray

    @classmethod
    def constant(cls, value: float, m: int) -> Jet2:
        return cls(float(value), np.zeros(m), np.zeros((m, m)))

    @classmethod
    def variable(cls, value: float, index: int, m: int) -> Jet2:
        g = np.zeros(m)
        g[index] = 1.0
        return cls(float(value), g, np.zeros((m, m)))

    @property
    def m(self) -> int:
        return self.grad.shape[0]

    def __add__(self, other: Jet2 | float) -> Jet2:
        other = _lift(other, self.m)
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __neg__(self) -> Jet2:
        return Jet2(-self.value, -self.grad, -self.hess)

    def __sub__(self, other: Jet2 | float) -> Jet2:
        return self + (-_lift(other, self.m))

    def __rsub__(self, other: Jet2 | float) -> Jet2:
        return (-self) + other

    def __mul__(self, other: Jet2 | float) -> Jet2:
        other = _lift(other, self.m)
        cross = np.outer(self.grad, other.grad)
        return Jet2(
            self.value * other.value,
            self.value * other.grad + other.value * self.grad,
            self.value * other.hess + other.value * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Jet2 | float) -> Jet2:
        other = _lift(other, self.m)
        if other.value == 0.0:
            raise DomainError("division by zero")
        return self * other._chain(1.0 / other.value,
                                   -1.0 / other.value**2,
                                   2.0 / other.value**3)

    def __rtruediv__(self, other: Jet2 | float) -> Jet2:
        return _lift(other, self.m) / self

    def __pow__(self, k: int) -> Jet2:
        if k == 0:
            return Jet2.constant(1.0, self.m)
        if self.value == 0.0 and k < 0:
            raise DomainError("zero raised to a negative power")
        v = self.value
        return self._chain(v**k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2) if k != 1 else 0.0)

    def _chain(self, f: float, fp: float, fpp: float) -> Jet2:
        """Compose with a scalar function given f(v), f'(v), f''(v)."""
        outer = np.outer(self.grad, self.grad)
        return Jet2(f, fp * self.grad, fp * self.hess + fpp * outer)


def _lift(x: Jet2 | float, m: int) -> Jet2:
    if isinstance(x, Jet2):
        return x
    return Jet2.constant(float(x), m)


def sin(x: Jet2) -> Jet2:
    return x._chain(math.sin(x.value), math.cos(x.value), -math.sin(x.value))


def cos(x: Jet2) -> Jet2:
    return x._chain(math.cos(x.value), -math.sin(x.value), -math.cos(x.value))


def exp(x: Jet2) -> Jet2:
    e = math.exp(x.value)
    return x._chain(e, e, e)


def sqrt(x: Jet2) -> Jet2:
    if x.value < 0.0:
        raise DomainError("sqrt of a negative value")
    if x.value == 0.0:
        raise DomainError("sqrt has no finite derivative at zero")
    r = math.sqrt(x.value)
    return x._chain(r, 0.5 / r, -0.25 / (r * x.value))

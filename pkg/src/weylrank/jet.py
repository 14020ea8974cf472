"""Truncated Taylor arithmetic in complex double precision.

A :class:`Jet` holds normalized Taylor coefficients ``c_k = f^(k)(x0)/k!`` of
a function at ``x0`` up to a fixed order. :class:`AnalyticFn` wraps a map from
the jet of the independent variable to the jet of an expression, so
candidate functions can be written as ordinary expressions::

    psi = X**2.5 * bessel_j(0.125, X**4 / 4)
    psi.derivatives(0.7, 4)
"""

from __future__ import annotations

import cmath
import math
from numbers import Number
from typing import Callable

import numpy as np

__all__ = ["Jet", "AnalyticFn", "BranchPointError", "X", "constant", "exp", "compose"]


class BranchPointError(ValueError):
    """Non-integer power of a function that vanishes at the expansion point."""


def _is_integer(r) -> bool:
    if isinstance(r, complex):
        return r.imag == 0 and float(r.real).is_integer()
    try:
        return float(r).is_integer()
    except TypeError:
        return False


class Jet:
    __slots__ = ("center", "coeffs")

    def __init__(self, center: complex, coeffs):
        self.center = complex(center)
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or not len(self.coeffs):
            raise ValueError("jet needs a non-empty 1-D coefficient array")

    @classmethod
    def variable(cls, x0: complex, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = x0
        if order:
            c[1] = 1
        return cls(x0, c)

    @classmethod
    def constant(cls, value: complex, x0: complex, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(x0, c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def derivative(self, k: int) -> complex:
        """``f^(k)(x0) = k! c_k``."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return complex(math.factorial(k) * self.coeffs[k])

    def derivatives(self) -> list[complex]:
        return [self.derivative(k) for k in range(self.order + 1)]

    def _like(self, coeffs) -> "Jet":
        return Jet(self.center, coeffs)

    def _check(self, other: "Jet"):
        if other.order != self.order or other.center != self.center:
            raise ValueError("jets differ in order or expansion point")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return self._like(self.coeffs + other.coeffs)
        if isinstance(other, Number):
            c = self.coeffs.copy()
            c[0] += other
            return self._like(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return self._like(np.convolve(self.coeffs, other.coeffs)[: self.order + 1])
        if isinstance(other, Number):
            return self._like(self.coeffs * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("reciprocal of a jet vanishing at its center")
        y = np.zeros_like(a)
        y[0] = 1 / a[0]
        for n in range(1, len(a)):
            y[n] = -np.dot(a[1 : n + 1], y[n - 1 :: -1][:n]) / a[0]
        return self._like(y)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        if isinstance(other, Number):
            return self._like(self.coeffs / complex(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Number):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, rho):
        if _is_integer(rho):
            k = int(rho.real if isinstance(rho, complex) else rho)
            if k < 0:
                return (self ** (-k)).reciprocal()
            result = Jet.constant(1, self.center, self.order)
            base = self
            while k:
                if k & 1:
                    result = result * base
                k >>= 1
                if k:
                    base = base * base
            return result
        a = self.coeffs
        if a[0] == 0:
            raise BranchPointError(f"non-integer power {rho} at a zero of the base")
        rho = complex(rho)
        y = np.zeros_like(a)
        # principal branch
        y[0] = cmath.exp(rho * cmath.log(a[0]))
        for n in range(1, len(a)):
            k = np.arange(1, n + 1)
            y[n] = np.sum(((rho + 1) * k - n) * a[1 : n + 1] * y[n - k]) / (n * a[0])
        return self._like(y)

    def exp(self) -> "Jet":
        a = self.coeffs
        y = np.zeros_like(a)
        y[0] = cmath.exp(a[0])
        for n in range(1, len(a)):
            k = np.arange(1, n + 1)
            y[n] = np.sum(k * a[1 : n + 1] * y[n - k]) / n
        return self._like(y)

    def __repr__(self):
        return f"Jet(center={self.center}, coeffs={self.coeffs.tolist()})"


def compose(outer: Jet, inner: Jet, tol: float = 1e-12) -> Jet:
    """``outer o inner`` where ``outer`` is expanded at ``inner``'s value."""
    if outer.order != inner.order:
        raise ValueError("jets differ in order")
    if abs(inner.value - outer.center) > tol * max(1.0, abs(outer.center)):
        raise ValueError("inner jet value does not match the outer expansion point")
    h = inner.coeffs.copy()
    h[0] = 0
    h = Jet(inner.center, h)
    # Horner in the shifted inner jet
    acc = Jet.constant(outer.coeffs[-1], inner.center, inner.order)
    for c in outer.coeffs[-2::-1]:
        acc = acc * h + complex(c)
    return acc


class AnalyticFn:
    """An expression in ``x`` evaluable to a :class:`Jet` at any admissible point."""

    __slots__ = ("_fn", "label")

    def __init__(self, fn: Callable[[Jet], Jet], label: str):
        self._fn = fn
        self.label = label

    def jet(self, x0: complex, order: int) -> Jet:
        return self._fn(Jet.variable(x0, order))

    def on(self, t: Jet) -> Jet:
        """Evaluate with an arbitrary jet substituted for ``x``."""
        return self._fn(t)

    def __call__(self, x0: complex) -> complex:
        return self.jet(x0, 0).value

    def derivatives(self, x0: complex, k: int) -> list[complex]:
        return self.jet(x0, k).derivatives()

    @staticmethod
    def lift(other) -> "AnalyticFn":
        if isinstance(other, AnalyticFn):
            return other
        if isinstance(other, Number):
            return constant(other)
        raise TypeError(f"cannot use {other!r} as an analytic function")

    def _binary(self, other, op, sym, reverse=False):
        try:
            other = AnalyticFn.lift(other)
        except TypeError:
            return NotImplemented
        a, b = (other, self) if reverse else (self, other)
        return AnalyticFn(lambda t: op(a._fn(t), b._fn(t)), f"({a.label} {sym} {b.label})")

    def __add__(self, other):
        return self._binary(other, lambda u, v: u + v, "+")

    def __radd__(self, other):
        return self._binary(other, lambda u, v: u + v, "+", reverse=True)

    def __sub__(self, other):
        return self._binary(other, lambda u, v: u - v, "-")

    def __rsub__(self, other):
        return self._binary(other, lambda u, v: u - v, "-", reverse=True)

    def __mul__(self, other):
        return self._binary(other, lambda u, v: u * v, "*")

    def __rmul__(self, other):
        return self._binary(other, lambda u, v: u * v, "*", reverse=True)

    def __truediv__(self, other):
        return self._binary(other, lambda u, v: u / v, "/")

    def __rtruediv__(self, other):
        return self._binary(other, lambda u, v: u / v, "/", reverse=True)

    def __neg__(self):
        return AnalyticFn(lambda t: -self._fn(t), f"-{self.label}")

    def __pow__(self, rho):
        return AnalyticFn(lambda t: self._fn(t) ** rho, f"{self.label}^{rho}")

    def __repr__(self):
        return f"AnalyticFn({self.label})"


X = AnalyticFn(lambda t: t, "x")


def constant(c: complex) -> AnalyticFn:
    c = complex(c)
    label = repr(c.real) if c.imag == 0 else repr(c)
    return AnalyticFn(lambda t: Jet.constant(c, t.center, t.order), label)


def exp(f):
    """Exponential of a jet or of an analytic function."""
    if isinstance(f, Jet):
        return f.exp()
    f = AnalyticFn.lift(f)
    return AnalyticFn(lambda t: f._fn(t).exp(), f"exp({f.label})")

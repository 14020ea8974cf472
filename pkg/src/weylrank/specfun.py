"""Series evaluation of Bessel and confluent Heun functions in jet arithmetic.

Every evaluator accepts either a :class:`~weylrank.jet.Jet` (the argument's
Taylor expansion at a point) and returns the jet of the composed function, or
an :class:`~weylrank.jet.AnalyticFn`, in which case it returns a new
expression.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterator, Mapping, Sequence

import numpy as np
import scipy.special

from .jet import AnalyticFn, BranchPointError, Jet
from .ring import XPoly

__all__ = [
    "DomainError",
    "ConvergenceError",
    "gamma",
    "bessel_j",
    "bessel_j_prime",
    "bessel_y",
    "HeunParams",
    "heun_c",
    "heun_c_coefficients",
    "series_ode_solve",
    "HEUN_RADIUS",
]

#: the confluent Heun series is only summed inside this disc (singularity at 1)
HEUN_RADIUS = 0.9

SERIES_TOL = 1e-16
MAX_TERMS = 20000


class DomainError(ValueError):
    """Argument outside the domain where the series is evaluated."""


class ConvergenceError(ArithmeticError):
    """A series did not meet its stopping rule within the term cap."""


def _as_int(r):
    """``int(r)`` if ``r`` is an exact-valued integer, else ``None``."""
    if isinstance(r, complex):
        if r.imag != 0:
            return None
        r = r.real
    if isinstance(r, Fraction):
        return int(r) if r.denominator == 1 else None
    f = float(r)
    return int(f) if f.is_integer() else None


def gamma(s):
    """Gamma function for real or complex ``s`` away from the poles ``0, -1, -2, ...``."""
    n = _as_int(s)
    if n is not None and n <= 0:
        raise DomainError(f"gamma has a pole at {s}")
    if isinstance(s, complex):
        return complex(scipy.special.gamma(s))
    return float(scipy.special.gamma(float(s)))


def _sum_series(coeffs: Iterator[complex], base: Jet, *, min_terms: int = 0, tol: float = SERIES_TOL) -> Jet:
    """``sum_n c_n base^n`` in jet arithmetic.

    Stops once two consecutive terms are below ``tol`` relative to the running
    sum in every jet component (past ``min_terms``).
    """
    order = base.order
    total = np.zeros(order + 1, dtype=complex)
    power = Jet.constant(1, base.center, order)
    quiet = 0
    for n, c in enumerate(coeffs):
        if n > MAX_TERMS:
            raise ConvergenceError(f"series did not converge in {MAX_TERMS} terms")
        term = complex(c) * power.coeffs
        total = total + term
        mag = np.abs(total)
        floor = tol * mag.max()
        if n >= min_terms and np.all(np.abs(term) <= tol * np.maximum(mag, floor)):
            quiet += 1
            if quiet >= 2:
                return Jet(base.center, total)
        else:
            quiet = 0
        power = power * base
    raise ConvergenceError("coefficient stream ended before convergence")


def _jet_map(f, fn, label):
    if isinstance(f, Jet):
        return fn(f)
    if isinstance(f, AnalyticFn):
        return AnalyticFn(lambda t: fn(f.on(t)), label(f.label))
    if isinstance(f, Number):
        return fn(Jet.constant(f, 0, 0)).value
    raise TypeError(f"expected a Jet, AnalyticFn or number, got {type(f).__name__}")


def _bessel_j_jet(alpha, u: Jet) -> Jet:
    n = _as_int(alpha)
    if n is not None and n < 0:
        raise DomainError("negative integer order is not supported")
    half = u * 0.5
    if n is not None:
        prefix = half**n
    else:
        if u.value == 0:
            raise BranchPointError(f"J_{alpha} has a branch point at 0")
        prefix = half ** float(alpha)
    s = half * half
    a = float(alpha)

    def coeffs():
        c = 1.0 / gamma(a + 1)
        k = 0
        while True:
            yield c
            k += 1
            c = -c / (k * (k + a))

    # terms grow until k ~ |u/2|; do not test for convergence before that
    return prefix * _sum_series(coeffs(), s, min_terms=int(abs(s.value) ** 0.5) + u.order + 2)


def bessel_j(alpha, arg):
    """Bessel function of the first kind from its power series.

    ``J_a(u) = (u/2)^a sum_k (-1)^k (u/2)^(2k) / (k! Gamma(a+k+1))``, principal
    branch for non-integer ``a`` (so ``arg`` must not vanish there).
    """
    return _jet_map(arg, lambda u: _bessel_j_jet(alpha, u), lambda s: f"J_{alpha}({s})")


def bessel_j_prime(alpha, x: complex) -> complex:
    """``J'_a(x) = a J_a(x)/x - J_{a+1}(x)``."""
    if x == 0:
        raise DomainError("derivative identity needs x != 0")
    return float(alpha) * bessel_j(alpha, x) / x - bessel_j(float(alpha) + 1, x)


def bessel_y(alpha, arg):
    """``Y_a = (J_a cos(a pi) - J_{-a}) / sin(a pi)`` for non-integer ``a``."""
    if _as_int(alpha) is not None:
        raise DomainError("Y_a from J_{+-a} needs non-integer order")
    a = float(alpha)

    def fn(u: Jet) -> Jet:
        return (_bessel_j_jet(a, u) * math.cos(a * math.pi) - _bessel_j_jet(-a, u)) / math.sin(a * math.pi)

    return _jet_map(arg, fn, lambda s: f"Y_{alpha}({s})")


@dataclass(frozen=True)
class HeunParams:
    """Parameters ``(alpha, beta, gamma, delta, eta)`` of the confluent Heun equation

    ``y'' + (alpha + (beta+1)/x + (gamma+1)/(x-1)) y' + (mu/x + nu/(x-1)) y = 0``

    normalized by ``y(0) = 1``. Values may be exact (``Fraction``) or complex.
    """

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    eta: complex

    def __post_init__(self):
        n = _as_int(self.beta)
        if n is not None and n < 0:
            raise DomainError("beta must not be a negative integer (beta = -1 in particular)")

    def initial_slope(self):
        """``y'(0) = (beta(gamma - alpha + 1) + gamma - alpha + 2 eta) / (2(beta + 1))``."""
        a, b, g, e = self.alpha, self.beta, self.gamma, self.eta
        return (b * (g - a + 1) + g - a + 2 * e) / (2 * (b + 1))

    def cleared_ode(self) -> tuple[list, list, list]:
        """Ascending coefficients of ``x(x-1) y'' + p1 y' + p0 y = 0``."""
        a, b, g, d, e = self.alpha, self.beta, self.gamma, self.delta, self.eta
        p2 = [0, -1, 1]
        p1 = [-(b + 1), b + g + 2 - a, a]
        p0 = [-(a * (b + 1) - b * (g + 1) - 2 * e - g) / 2, (a * (b + g + 2) + 2 * d) / 2]
        return p2, p1, p0


def heun_c_coefficients(p: HeunParams) -> Iterator:
    """Taylor coefficients at 0 of the normalized confluent Heun function.

    Clearing ``x(x-1)`` and matching powers gives the three-term recurrence

    ``(n+1)(n+beta+1) c[n+1] = (n(n-1) + b n - q) c[n] + (alpha(n-1) + p) c[n-1]``

    with ``b = beta + gamma + 2 - alpha`` and ``q, p`` the constant and linear
    coefficients of the cleared ``y`` term. Exact parameters give exact output.
    """
    a, beta = p.alpha, p.beta
    (q_neg, p_lin) = p.cleared_ode()[2]
    q = -q_neg
    b = p.beta + p.gamma + 2 - a
    prev, cur = 1, p.initial_slope()
    yield prev
    yield cur
    n = 1
    while True:
        nxt = (cur * (n * (n - 1) + b * n - q) + prev * (a * (n - 1) + p_lin)) / ((n + 1) * (n + beta + 1))
        yield nxt
        prev, cur = cur, nxt
        n += 1


def _heun_jet(p: HeunParams, t: Jet) -> Jet:
    if abs(t.value) > HEUN_RADIUS * (1 + 1e-12):
        raise DomainError(f"|{t.value}| exceeds the confluent Heun disc radius {HEUN_RADIUS}")
    cp = HeunParams(*(complex(v) for v in (p.alpha, p.beta, p.gamma, p.delta, p.eta)))
    return _sum_series(heun_c_coefficients(cp), t, min_terms=t.order + 4)


def heun_c(p: HeunParams, arg):
    """Confluent Heun function ``CH(alpha, beta, gamma, delta, eta; t)`` for ``|t| <= 0.9``."""
    return _jet_map(arg, lambda t: _heun_jet(p, t), lambda s: f"CH{tuple(map(str, (p.alpha, p.beta, p.gamma, p.delta, p.eta)))}({s})")


def _numeric_coeffs(p, params) -> list[complex]:
    if isinstance(p, XPoly):
        return [c.evaluate(params) for c in p.coeffs]
    return [complex(c) for c in p]


def _shift(coeffs: Sequence[complex], x0: complex) -> list[complex]:
    n = len(coeffs)
    return [sum(coeffs[m] * math.comb(m, k) * x0 ** (m - k) for m in range(k, n)) for k in range(n)]


def series_ode_solve(
    p2,
    p1,
    p0,
    y0: complex,
    y1: complex,
    order: int,
    center: complex = 0,
    params: Mapping[str, complex] | None = None,
) -> Jet:
    """Taylor jet at ``center`` of the solution of ``p2 y'' + p1 y' + p0 y = 0``.

    ``p2, p1, p0`` are :class:`XPoly` (bound through ``params``) or ascending
    coefficient sequences. Only ordinary points (``p2(center) != 0``) are handled.
    """
    P2, P1, P0 = (_shift(_numeric_coeffs(p, params), center) for p in (p2, p1, p0))
    if not P2 or P2[0] == 0:
        raise DomainError(f"{center} is a singular point of the equation")
    c = [complex(y0), complex(y1)]
    get = lambda seq, i: seq[i] if 0 <= i < len(seq) else 0
    for n in range(order - 1):
        # coefficient of h^n in the equation, solved for c[n+2]
        acc = 0j
        for i in range(max(len(P2), len(P1), len(P0))):
            if i:
                k = n - i + 2
                if k >= 0:
                    acc += get(P2, i) * k * (k - 1) * c[k]
            k = n - i + 1
            if k >= 0:
                acc += get(P1, i) * k * c[k]
            k = n - i
            if k >= 0:
                acc += get(P0, i) * c[k]
        c.append(-acc / (P2[0] * (n + 2) * (n + 1)))
    return Jet(center, c[: order + 1] if order >= 1 else c[:1])

"""Ordinary differential operators ``sum_i u_i(x) D^i`` with polynomial coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .ring import ParameterMismatch, ParamPoly, ParamRing, XPoly, _render

__all__ = ["DiffOp", "compose", "commutator", "power", "apply"]


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


class DiffOp:
    """Differential operator; ``coeffs[i]`` multiplies ``D^i`` (``D = d/dx``)."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: ParamRing, coeffs: Iterable = ()):
        self.ring = ring
        cs = []
        for c in coeffs:
            if not isinstance(c, XPoly):
                c = XPoly.const(ring, c)
            elif c.ring != ring:
                raise ParameterMismatch(f"{c.ring.names} vs {ring.names}")
            cs.append(c)
        while cs and not cs[-1].coeffs:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, ring, coeffs):
        obj = cls.__new__(cls)
        obj.ring = ring
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1].coeffs:
            coeffs.pop()
        obj.coeffs = tuple(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def identity(cls, ring: ParamRing) -> "DiffOp":
        return cls(ring, [XPoly.const(ring, 1)])

    @classmethod
    def d(cls, ring: ParamRing, k: int = 1) -> "DiffOp":
        """The operator ``D^k``."""
        z = XPoly(ring)
        return cls(ring, [z] * k + [XPoly.const(ring, 1)])

    @classmethod
    def mult(cls, p) -> "DiffOp":
        """Multiplication by a polynomial (order-0 operator)."""
        return cls(p.ring, [p])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> XPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else XPoly(self.ring)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            if other.ring != self.ring:
                raise ParameterMismatch(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, XPoly):
            if other.ring != self.ring:
                raise ParameterMismatch(f"{self.ring.names} vs {other.ring.names}")
            return DiffOp._raw(self.ring, [other])
        if isinstance(other, ParamPoly) or (
            isinstance(other, (int, Fraction)) and not isinstance(other, bool)
        ):
            return DiffOp._raw(self.ring, [XPoly.const(self.ring, other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return DiffOp._raw(self.ring, [a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])

    __radd__ = __add__

    def __neg__(self):
        return DiffOp._raw(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        """Composition ``self o other``; scalars and polynomials act as order-0 operators."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return compose(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return compose(other, self)

    def __pow__(self, k: int):
        return power(self, k)

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, ParamPoly, XPoly)) and not isinstance(other, bool):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.coeffs))
        return self._hash

    def __call__(self, f: XPoly) -> XPoly:
        return apply(self, f)

    def subs(self, values) -> "DiffOp":
        return DiffOp._raw(self.ring, [c.subs(values) for c in self.coeffs])

    def lift(self, ring: ParamRing) -> "DiffOp":
        return DiffOp._raw(ring, [c.lift(ring) for c in self.coeffs])

    def apply_numeric(
        self, derivs: Sequence[complex], x: complex, params: Mapping[str, complex] | None = None
    ) -> tuple[complex, list[complex]]:
        """``sum_i u_i(x) f^(i)`` from ``derivs[i] = f^(i)(x)``; also returns the terms."""
        if len(derivs) <= self.order:
            raise ValueError(f"need {self.order + 1} derivatives, got {len(derivs)}")
        terms = [c(x, params) * derivs[i] for i, c in enumerate(self.coeffs)]
        return sum(terms, 0j), terms

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c.coeffs:
                continue
            dpart = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
            terms = c.terms()
            if not dpart:
                parts.append(terms)
            elif len(terms) == 1:
                v, mono = terms[0]
                parts.append([(v, "*".join(s for s in (mono, dpart) if s))])
            else:
                parts.append([(1, f"({c})*{dpart}")])
        return _render([t for p in parts for t in p])

    def __repr__(self):
        return f"DiffOp({self}; {','.join(self.ring.names)})"


def compose(P: DiffOp, R: DiffOp) -> DiffOp:
    """Exact product ``P o R`` via ``D^i v = sum_k C(i,k) v^(k) D^(i-k)``."""
    if P.ring != R.ring:
        raise ParameterMismatch(f"{P.ring.names} vs {R.ring.names}")
    ring = P.ring
    if not P.coeffs or not R.coeffs:
        return DiffOp(ring)
    # derivatives of R's coefficients up to order(P)
    derivs = []
    for v in R.coeffs:
        ds = [v]
        for _ in range(P.order):
            ds.append(ds[-1].diff())
        derivs.append(ds)
    out = [XPoly(ring)] * (P.order + R.order + 1)
    for i, u in enumerate(P.coeffs):
        if not u.coeffs:
            continue
        for j in range(len(R.coeffs)):
            ds = derivs[j]
            for k in range(i + 1):
                vk = ds[k]
                if not vk.coeffs:
                    break
                term = u * vk
                b = _binom(i, k)
                if b != 1:
                    term = term * b
                idx = i - k + j
                out[idx] = out[idx] + term
    return DiffOp._raw(ring, out)


def commutator(P: DiffOp, R: DiffOp) -> DiffOp:
    """``[P, R] = P o R - R o P``."""
    return compose(P, R) - compose(R, P)


def power(P: DiffOp, k: int) -> DiffOp:
    """``k``-fold composition by left folding; ``power(P, 0)`` is the identity."""
    if not isinstance(k, int) or k < 0:
        raise ValueError("power needs a non-negative integer")
    if k == 0:
        return DiffOp.identity(P.ring)
    result = P
    for _ in range(k - 1):
        result = compose(P, result)
    return result


def apply(P: DiffOp, f: XPoly) -> XPoly:
    """``sum_i u_i f^(i)``, exact."""
    if P.ring != f.ring:
        raise ParameterMismatch(f"{P.ring.names} vs {f.ring.names}")
    out = XPoly(P.ring)
    g = f
    for i, u in enumerate(P.coeffs):
        if i:
            g = g.diff()
        if not g.coeffs:
            break
        out = out + u * g
    return out

"""Exact coefficient arithmetic.

Three layers:

* rationals -- Python ``int`` when integral, :class:`fractions.Fraction` otherwise;
* :class:`ParamPoly` -- sparse polynomials over the rationals in a fixed,
  ordered list of named parameters (held by a :class:`ParamRing`);
* :class:`XPoly` -- dense polynomials in ``x`` with :class:`ParamPoly`
  coefficients.

All values are immutable. Division only exists as exact division
(:meth:`ParamPoly.divide_exact`) and through :func:`solve_linear_system`.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Rat",
    "as_rat",
    "ParamRing",
    "ParamPoly",
    "XPoly",
    "ParameterMismatch",
    "UnboundParameter",
    "NotDivisible",
    "LinearSolution",
    "solve_linear_system",
    "common_content",
    "diff_x",
    "eval_x",
    "parse_xpoly",
]

Rat = Fraction
Scalar = Union[int, Fraction]


class ParameterMismatch(ValueError):
    """Operands live over different parameter lists."""


class UnboundParameter(KeyError):
    """A parameter in the support was not given a value."""


class NotDivisible(ArithmeticError):
    """Exact division left a nonzero remainder."""


def as_rat(value) -> Scalar:
    """Canonical exact scalar: ``int`` if integral, else ``Fraction``."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return as_rat(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return as_rat(Fraction(value))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _canon(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _fmt_rat(c) -> str:
    c = _canon(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class ParamRing:
    """An ordered list of parameter names shared by all values of a session."""

    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate parameter names in {self.names}")
        for n in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n) or n == "x":
                raise ValueError(f"invalid parameter name {n!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a parameter of {self.names}") from None

    def gen(self, name: str) -> "ParamPoly":
        i = self.index(name)
        exps = tuple(1 if k == i else 0 for k in range(self.nvars))
        return ParamPoly(self, {exps: 1})

    def gens(self) -> tuple["ParamPoly", ...]:
        return tuple(self.gen(n) for n in self.names)

    def const(self, c) -> "ParamPoly":
        c = as_rat(c)
        return ParamPoly(self, {(0,) * self.nvars: c} if c else {})

    @property
    def zero(self) -> "ParamPoly":
        return ParamPoly(self, {})

    @property
    def one(self) -> "ParamPoly":
        return self.const(1)

    def extend(self, *names: str) -> "ParamRing":
        return ParamRing(self.names + tuple(n for n in names if n not in self.names))

    def without(self, name: str) -> "ParamRing":
        self.index(name)
        return ParamRing(tuple(n for n in self.names if n != name))


class ParamPoly:
    """Sparse polynomial in the parameters of ``ring`` with rational coefficients.

    ``terms`` maps exponent tuples (arity ``ring.nvars``) to nonzero rationals.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: ParamRing, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.ring = ring
        clean = {}
        if terms:
            n = ring.nvars
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent vector {e} does not match {ring.names}")
                if c:
                    clean[tuple(e)] = _canon(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # terms already canonical: no zeros, correct arity
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            if other.ring != self.ring:
                raise ParameterMismatch(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * self.ring.nvars, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self, name: str | None = None) -> int:
        """Total degree, or degree in one parameter; -1 for zero."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = self.ring.index(name)
        return max(e[i] for e in self.terms)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _canon(s)
            else:
                out.pop(e, None)
        return ParamPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._raw(self.ring, {e: -c for e, c in self.terms.items()})

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
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return self.ring.zero
            return ParamPoly._raw(self.ring, {e: _canon(c * other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero
        add = operator.add
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return ParamPoly._raw(self.ring, {e: _canon(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- structure ------------------------------------------------------
    def leading_term(self) -> tuple[tuple[int, ...], Scalar]:
        """Leading term in lexicographic order on the exponent vector."""
        e = max(self.terms)
        return e, self.terms[e]

    def divide_exact(self, other: "ParamPoly") -> "ParamPoly":
        """Quotient ``self / other``; raises :class:`NotDivisible` on remainder."""
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError("cannot divide by non-polynomial")
        if not other.terms:
            raise ZeroDivisionError("exact division by zero polynomial")
        if not self.terms:
            return self
        if len(other.terms) == 1:
            (eb, cb), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                q = tuple(a - b for a, b in zip(e, eb))
                if min(q, default=0) < 0:
                    raise NotDivisible(f"{self} / {other}")
                if type(c) is int and type(cb) is int and c % cb == 0:
                    out[q] = c // cb
                else:
                    out[q] = _canon(Fraction(c) / cb)
            return ParamPoly._raw(self.ring, out)
        lt_e, lt_c = other.leading_term()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem)
            c = rem[e]
            q_e = tuple(a - b for a, b in zip(e, lt_e))
            if min(q_e, default=0) < 0:
                raise NotDivisible(f"{self} / {other}")
            q_c = _canon(Fraction(c) / lt_c)
            quot[q_e] = q_c
            for eb, cb in other.terms.items():
                k = tuple(a + b for a, b in zip(q_e, eb))
                s = rem.get(k, 0) - q_c * cb
                if s:
                    rem[k] = _canon(s)
                else:
                    rem.pop(k, None)
        return ParamPoly._raw(self.ring, quot)

    def lift(self, ring: ParamRing) -> "ParamPoly":
        """Re-express over a ring whose names include all of ours."""
        if ring == self.ring:
            return self
        idx = [ring.index(n) for n in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            new = [0] * ring.nvars
            for i, k in zip(idx, e):
                new[i] = k
            out[tuple(new)] = c
        return ParamPoly._raw(ring, out)

    def split(self, name: str) -> dict[int, "ParamPoly"]:
        """Coefficients with respect to ``name``, over the ring without it."""
        i = self.ring.index(name)
        sub = self.ring.without(name)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: ParamPoly._raw(sub, t) for k, t in sorted(parts.items())}

    def subs(self, values: Mapping[str, Scalar]) -> "ParamPoly":
        """Exact partial instantiation; the ring is unchanged."""
        idx = {self.ring.index(n): as_rat(v) for n, v in values.items()}
        if not idx:
            return self
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, v in idx.items():
                if e[i]:
                    c = c * v ** e[i]
                    e2[i] = 0
            t = tuple(e2)
            out[t] = out.get(t, 0) + c
        return ParamPoly(self.ring, out)

    def evaluate(self, values: Mapping[str, complex] | None = None) -> complex:
        values = values or {}
        total = 0j
        for e, c in self.terms.items():
            term = complex(c)
            for name, k in zip(self.ring.names, e):
                if k:
                    try:
                        term *= complex(values[name]) ** k
                    except KeyError:
                        raise UnboundParameter(name) from None
            total += term
        return total

    def content(self) -> tuple[Fraction, tuple[int, ...]]:
        """Positive rational content and monomial gcd of the support."""
        if not self.terms:
            return Fraction(0), (0,) * self.ring.nvars
        nums = [Fraction(c) for c in self.terms.values()]
        g = math.gcd(*(q.numerator for q in nums))
        l = math.lcm(*(q.denominator for q in nums))
        mono = tuple(min(col) for col in zip(*self.terms)) if self.ring.nvars else ()
        return Fraction(g, l), mono

    # -- rendering ------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def monomial_str(self, e: tuple[int, ...]) -> str:
        parts = []
        for name, k in zip(self.ring.names, e):
            if k == 1:
                parts.append(name)
            elif k:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        return _render([(c, self.monomial_str(e)) for e, c in self.sorted_terms()])

    def __repr__(self):
        return f"ParamPoly({self}; {','.join(self.ring.names)})"


def _render(terms: list[tuple[Scalar, str]]) -> str:
    """Join ``(coefficient, monomial)`` pairs as ``3*A*x^2 - z + 1``."""
    if not terms:
        return "0"
    out = []
    for i, (c, mono) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
        else:
            body = _fmt_rat(a)
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


class XPoly:
    """Dense polynomial in ``x``; ``coeffs[k]`` is the coefficient of ``x^k``."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: ParamRing, coeffs: Iterable = ()):
        self.ring = ring
        cs = []
        for c in coeffs:
            if isinstance(c, ParamPoly):
                if c.ring != ring:
                    raise ParameterMismatch(f"{c.ring.names} vs {ring.names}")
            else:
                c = ring.const(c)
            cs.append(c)
        while cs and not cs[-1].terms:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, ring, coeffs):
        obj = cls.__new__(cls)
        obj.ring = ring
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1].terms:
            coeffs.pop()
        obj.coeffs = tuple(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def x(cls, ring: ParamRing) -> "XPoly":
        return cls._raw(ring, (ring.zero, ring.one))

    @classmethod
    def const(cls, ring: ParamRing, c) -> "XPoly":
        if isinstance(c, ParamPoly):
            return cls(ring, (c,))
        return cls(ring, (ring.const(c),))

    @classmethod
    def monomial(cls, ring: ParamRing, k: int, c=1) -> "XPoly":
        c = c if isinstance(c, ParamPoly) else ring.const(c)
        return cls(ring, [ring.zero] * k + [c])

    # -- basics ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> ParamPoly:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other) -> "XPoly":
        if isinstance(other, XPoly):
            if other.ring != self.ring:
                raise ParameterMismatch(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, ParamPoly):
            if other.ring != self.ring:
                raise ParameterMismatch(f"{self.ring.names} vs {other.ring.names}")
            return XPoly._raw(self.ring, (other,))
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return XPoly._raw(self.ring, (self.ring.const(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return XPoly._raw(self.ring, [a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])

    __radd__ = __add__

    def __neg__(self):
        return XPoly._raw(self.ring, [-c for c in self.coeffs])

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
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return XPoly._raw(self.ring, [c * other for c in self.coeffs])
        if isinstance(other, ParamPoly):
            if other.ring != self.ring:
                raise ParameterMismatch(f"{self.ring.names} vs {other.ring.names}")
            return XPoly._raw(self.ring, [c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return XPoly._raw(self.ring, ())
        # fused multiply-accumulate straight into term dictionaries
        add = operator.add
        acc = [dict() for _ in range(len(a) + len(b) - 1)]
        for i, p in enumerate(a):
            if not p.terms:
                continue
            pt = p.terms.items()
            for j, q in enumerate(b):
                if not q.terms:
                    continue
                d = acc[i + j]
                for e1, c1 in pt:
                    for e2, c2 in q.terms.items():
                        e = tuple(map(add, e1, e2))
                        d[e] = d.get(e, 0) + c1 * c2
        ring = self.ring
        return XPoly._raw(
            ring, [ParamPoly._raw(ring, {e: _canon(c) for e, c in d.items() if c}) for d in acc]
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = XPoly.const(self.ring, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, XPoly):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, ParamPoly)) and not isinstance(other, bool):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.coeffs))
        return self._hash

    # -- calculus and evaluation ----------------------------------------
    def diff(self, k: int = 1) -> "XPoly":
        if k < 0:
            raise ValueError("derivative order must be >= 0")
        if k == 0:
            return self
        out = []
        for n in range(k, len(self.coeffs)):
            f = math.perm(n, k)
            out.append(self.coeffs[n] * f)
        return XPoly._raw(self.ring, out)

    def __call__(self, x: complex, params: Mapping[str, complex] | None = None) -> complex:
        return eval_x(self, x, params)

    def eval_abs(self, x: complex, params: Mapping[str, complex] | None = None) -> float:
        """Sum of the magnitudes of the individual monomials at ``x``."""
        ax = abs(x)
        return sum(abs(c.evaluate(params)) * ax**k for k, c in enumerate(self.coeffs))

    def subs(self, values: Mapping[str, Scalar]) -> "XPoly":
        return XPoly._raw(self.ring, [c.subs(values) for c in self.coeffs])

    def lift(self, ring: ParamRing) -> "XPoly":
        return XPoly._raw(ring, [c.lift(ring) for c in self.coeffs])

    def split(self, name: str) -> dict[int, "XPoly"]:
        """Coefficients with respect to a parameter, as XPolys over the smaller ring."""
        sub = self.ring.without(name)
        parts: dict[int, list] = {}
        for k, c in enumerate(self.coeffs):
            for p, pc in c.split(name).items():
                parts.setdefault(p, [sub.zero] * len(self.coeffs))[k] = pc
        return {p: XPoly._raw(sub, cs) for p, cs in sorted(parts.items())}

    def divide_exact(self, c: ParamPoly) -> "XPoly":
        return XPoly._raw(self.ring, [a.divide_exact(c) for a in self.coeffs])

    def primitive(self) -> tuple[ParamPoly, "XPoly"]:
        """Split off rational content and the common parameter monomial.

        The primitive part's leading coefficient has a positive leading term.
        """
        if not self.coeffs:
            return self.ring.zero, self
        content = common_content(self.coeffs)
        if self.coeffs[-1].leading_term()[1] < 0:
            content = -content
        return content, self.divide_exact(content)

    # -- rendering ------------------------------------------------------
    def terms(self, var: str = "x") -> list[tuple[Scalar, str]]:
        out = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            xs = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            for e, v in c.sorted_terms():
                mono = "*".join(s for s in (c.monomial_str(e), xs) if s)
                out.append((v, mono))
        return out

    def __str__(self):
        return _render(self.terms())

    def __repr__(self):
        return f"XPoly({self}; {','.join(self.ring.names)})"


def common_content(polys: Iterable[ParamPoly]) -> ParamPoly:
    """Positive rational gcd times monomial gcd of a family of parameter polynomials."""
    polys = [p for p in polys if p.terms]
    if not polys:
        raise ValueError("content of zero")
    ring = polys[0].ring
    parts = [p.content() for p in polys]
    g = math.gcd(*(q.numerator for q, _ in parts))
    l = math.lcm(*(q.denominator for q, _ in parts))
    mono = tuple(min(col) for col in zip(*(m for _, m in parts))) if ring.nvars else ()
    return ParamPoly(ring, {mono: Fraction(g, l)})


def diff_x(p: XPoly, k: int = 1) -> XPoly:
    """Exact ``k``-th derivative in ``x``."""
    return p.diff(k)


def eval_x(p: XPoly, x: complex, params: Mapping[str, complex] | None = None) -> complex:
    """Horner evaluation at complex ``x``; every parameter in the support must be bound."""
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * x + c.evaluate(params)
    return acc


# ---------------------------------------------------------------------------
# fraction-free linear algebra


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of :func:`solve_linear_system`.

    ``values[j]`` is ``(numerator, denominator)``; free variables are set to 0.
    For an inconsistent system ``values`` is ``None`` and ``certificate`` holds
    ``(row, residual)``: an original row index whose combination reduces to
    ``0 = residual`` with ``residual != 0``.
    """

    consistent: bool
    values: tuple[tuple[ParamPoly, ParamPoly], ...] | None
    rank: int
    nullity: int
    pivots: tuple[int, ...]
    certificate: tuple[int, ParamPoly] | None = None

    def value(self, j: int) -> ParamPoly:
        """Variable ``j`` as a polynomial; raises :class:`NotDivisible` if it is not one."""
        num, den = self.values[j]
        return num.divide_exact(den)


def solve_linear_system(
    M: Sequence[Sequence[ParamPoly]], b: Sequence[ParamPoly]
) -> LinearSolution:
    """Solve ``M r = b`` over the fraction field of the parameter ring.

    Fraction-free Gauss-Jordan elimination (Bareiss): every intermediate entry
    is a minor of the augmented matrix, so each division is exact. Columns are
    pivoted left to right, hence free variables are the rightmost possible.
    """
    m = len(M)
    if len(b) != m:
        raise ValueError("row count of M and b differ")
    n = len(M[0]) if m else 0
    if any(len(row) != n for row in M):
        raise ValueError("M is not rectangular")
    ring = None
    for row in list(M) + [b]:
        for e in row:
            if isinstance(e, ParamPoly):
                if ring is None:
                    ring = e.ring
                elif e.ring != ring:
                    raise ParameterMismatch(f"{ring.names} vs {e.ring.names}")
    ring = ring or ParamRing()

    def coerce(e):
        return e if isinstance(e, ParamPoly) else ring.const(e)

    A = [[coerce(e) for e in row] + [coerce(bi)] for row, bi in zip(M, b)]
    origin = list(range(m))
    prev = ring.one
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        cand = [i for i in range(r, m) if A[i][c].terms]
        if not cand:
            continue
        best = min(cand, key=lambda i: (len(A[i][c].terms), i))
        A[r], A[best] = A[best], A[r]
        origin[r], origin[best] = origin[best], origin[r]
        piv_row = A[r]
        p = piv_row[c]
        trivial_prev = prev == 1
        for i in range(m):
            if i == r:
                continue
            row = A[i]
            a = row[c]
            if not a.terms:
                if p == prev:
                    continue
                new = [p * v if v.terms else v for v in row]
            else:
                new = [p * v - a * pv for v, pv in zip(row, piv_row)]
            if not trivial_prev:
                new = [v.divide_exact(prev) if v.terms else v for v in new]
            A[i] = new
        prev = p
        pivots.append(c)
        r += 1

    for i in range(r, m):
        if A[i][n].terms:
            return LinearSolution(False, None, r, n - r, tuple(pivots), (origin[i], A[i][n]))

    d = prev
    values = [(ring.zero, ring.one)] * n
    for k, c in enumerate(pivots):
        num = A[k][n]
        try:
            values[c] = (num.divide_exact(d), ring.one)
        except NotDivisible:
            values[c] = (num, d)
    return LinearSolution(True, tuple(values), r, n - r, tuple(pivots))


# ---------------------------------------------------------------------------
# parsing of the canonical text form

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse_xpoly(text: str, ring: ParamRing) -> XPoly:
    """Parse ``16*A*x^4 + z``-style text into an :class:`XPoly` over ``ring``.

    Accepts ``+ - * / ^ **`` and parentheses; ``/`` only by a constant.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        num, name, op = m.groups()
        tokens.append(("num", int(num)) if num else ("name", name) if name else ("op", op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0
    X = XPoly.x(ring)

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def expr():
        sign = 1
        if peek() in (("op", "-"), ("op", "+")):
            sign = -1 if take()[1] == "-" else 1
        val = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            val = val + t if op == "+" else val - t
        return val

    def term():
        val = factor()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            f = factor()
            if op == "*":
                val = val * f
            else:
                if f.degree != 0 or not f.coeffs[0].is_constant():
                    raise ValueError("division only by nonzero rational constants")
                val = val * (1 / Fraction(f.coeffs[0].constant_value()))
        return val

    def factor():
        base = atom()
        if peek() in (("op", "^"), ("op", "**")):
            take()
            kind, k = take()
            if kind != "num":
                raise ValueError("exponent must be a non-negative integer")
            return base**k
        return base

    def atom():
        kind, v = take()
        if kind == "num":
            return XPoly.const(ring, v)
        if kind == "name":
            if v == "x":
                return X
            return XPoly.const(ring, ring.gen(v))
        if (kind, v) == ("op", "("):
            val = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return val
        if (kind, v) == ("op", "-"):
            return -factor()
        raise ValueError(f"unexpected token {v!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return result

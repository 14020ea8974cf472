"""Rank-2 commuting pairs for ``L = (D^2 + V)^2 + W``.

``L`` commutes with an operator of order ``4g+2`` exactly when some
``Q = z^g + a_1(x) z^(g-1) + ... + a_g(x)`` kills the fifth-order relation

    Q''''' + 4 V Q''' + 6 V' Q'' + 2 Q' (2z - 2W + V'') - 2 Q W' = 0.

Given such a ``Q`` the spectral curve ``4 w^2 = P(z)`` and the second-order
equation ``psi'' - chi1 psi' - chi0 psi = 0`` for common eigenfunctions follow
in closed form. The spectral variables ``z`` and ``w`` are adjoined to the
parameter ring on demand, so user rings must not already use those names.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .ring import (
    NotDivisible,
    ParamPoly,
    ParamRing,
    XPoly,
    _render,
    common_content,
    solve_linear_system,
)
from .weyl import DiffOp

__all__ = [
    "OperatorData",
    "QPolynomial",
    "PlaneCurve",
    "EigenODE",
    "QSolveError",
    "NoQSolution",
    "CurveError",
    "OffCurveError",
    "PoleError",
    "q_residual",
    "solve_q",
    "spectral_curve",
    "eigen_ode",
    "curve_membership",
]

SPECTRAL = ("z", "w")


class QSolveError(RuntimeError):
    """The Q-solver could not produce a polynomial Q."""


class NoQSolution(QSolveError):
    """The linear system for Q is inconsistent at the given degree bound.

    ``certificate`` is ``((x_power, z_power), residual)``: the coefficient of
    ``x^j z^k`` whose equation reduces to ``0 = residual``.
    """

    def __init__(self, message, deg_bound=None, certificate=None):
        super().__init__(message)
        self.deg_bound = deg_bound
        self.certificate = certificate


class CurveError(ValueError):
    """The curve expression still depends on ``x``, so ``Q`` is not a solution."""


class OffCurveError(ValueError):
    """``(z, w)`` does not lie on the spectral curve."""


class PoleError(ZeroDivisionError):
    """Evaluation at a root of ``Q(x, z)``."""


def _check_ring(ring: ParamRing):
    clash = [n for n in SPECTRAL if n in ring.names]
    if clash:
        raise ValueError(f"parameter names {clash} are reserved for the spectral variables")


@dataclass(frozen=True)
class OperatorData:
    """``V`` and ``W`` in ``L = (D^2 + V)^2 + W``."""

    V: XPoly
    W: XPoly

    def __post_init__(self):
        if self.V.ring != self.W.ring:
            raise ValueError("V and W must share a parameter ring")
        _check_ring(self.V.ring)

    @property
    def ring(self) -> ParamRing:
        return self.V.ring

    def operator(self) -> DiffOp:
        """The fourth-order operator ``L`` itself."""
        H = DiffOp.d(self.ring, 2) + DiffOp.mult(self.V)
        return H * H + DiffOp.mult(self.W)

    def subs(self, values) -> "OperatorData":
        return OperatorData(self.V.subs(values), self.W.subs(values))

    def lift(self, ring: ParamRing):
        return self.V.lift(ring), self.W.lift(ring)


@dataclass(frozen=True)
class QPolynomial:
    """Monic ``Q = z^g + a[0] z^(g-1) + ... + a[g-1]``."""

    ring: ParamRing
    g: int
    a: tuple[XPoly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if self.g < 0 or len(self.a) != self.g:
            raise ValueError(f"genus {self.g} needs exactly {self.g} coefficients")
        if any(p.ring != self.ring for p in self.a):
            raise ValueError("coefficients must live over the declared ring")

    def as_xpoly(self, ring: ParamRing) -> XPoly:
        """``Q`` as a polynomial in ``x`` over ``ring``, which must contain ``z``."""
        z = ring.gen("z")
        out = XPoly.const(ring, z**self.g)
        for i, ai in enumerate(self.a, start=1):
            out = out + ai.lift(ring) * z ** (self.g - i)
        return out

    def at(self, z) -> XPoly:
        """Exact specialization ``Q(x, z)`` at a rational ``z``."""
        out = XPoly.const(self.ring, Fraction(z) ** self.g)
        for i, ai in enumerate(self.a, start=1):
            out = out + ai * Fraction(z) ** (self.g - i)
        return out

    def __str__(self):
        if self.g == 0:
            return "1"
        zs = lambda k: "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        terms = [(1, zs(self.g))]
        for i, ai in enumerate(self.a, start=1):
            zk = zs(self.g - i)
            for c, mono in ai.terms():
                terms.append((c, "*".join(s for s in (mono, zk) if s)))
        return _render(terms)


def _ext(ring: ParamRing, *names: str) -> ParamRing:
    _check_ring(ring)
    return ring.extend(*names)


def _relation(V: XPoly, W: XPoly, Q: XPoly, z: ParamPoly) -> XPoly:
    d = lambda p, k=1: p.diff(k)
    Q1 = d(Q)
    return (
        d(Q, 5)
        + V * d(Q, 3) * 4
        + d(V) * d(Q, 2) * 6
        + Q1 * (XPoly.const(Q.ring, z * 2) - W * 2 + d(V, 2)) * 2
        - Q * d(W) * 2
    )


def q_residual(data: OperatorData, Q: QPolynomial) -> XPoly:
    """Left side of the fifth-order relation, as a polynomial in ``x`` over ring + ``z``."""
    if Q.ring != data.ring:
        raise ValueError("Q and the operator data use different rings")
    ring = _ext(data.ring, "z")
    V, W = data.lift(ring)
    return _relation(V, W, Q.as_xpoly(ring), ring.gen("z"))


def _equations(res: XPoly) -> dict[tuple[int, int], ParamPoly]:
    out = {}
    for j, c in enumerate(res.coeffs):
        for k, pc in c.split("z").items():
            if pc.terms:
                out[(j, k)] = pc
    return out


def _solve_exact(data: OperatorData, g: int, deg_bound: int) -> QPolynomial:
    base = data.ring
    ring = _ext(base, "z")
    V, W = data.lift(ring)
    z = ring.gen("z")
    # columns ordered by ascending x-degree so free variables sit at high degree
    columns = [(m, i) for m in range(deg_bound + 1) for i in range(1, g + 1)]
    rhs = _equations(_relation(V, W, XPoly.const(ring, z**g), z))
    cols = []
    for m, i in columns:
        basis = XPoly.monomial(ring, m, z ** (g - i))
        cols.append(_equations(_relation(V, W, basis, z)))
    keys = sorted(set(rhs).union(*cols))
    M = [[col.get(key, base.zero) for col in cols] for key in keys]
    b = [-rhs.get(key, base.zero) for key in keys]
    sol = solve_linear_system(M, b)
    if not sol.consistent:
        row, residual = sol.certificate
        q, _ = residual.content()
        residual = residual * (1 / q)
        raise NoQSolution(
            f"no Q of genus {g} with deg a_i <= {deg_bound}: "
            f"coefficient of x^{keys[row][0]} z^{keys[row][1]} forces 0 = {residual}",
            deg_bound,
            (keys[row], residual),
        )
    coeffs = [[base.zero] * (deg_bound + 1) for _ in range(g)]
    for j, (m, i) in enumerate(columns):
        try:
            coeffs[i - 1][m] = sol.value(j)
        except NotDivisible:
            num, den = sol.values[j]
            raise QSolveError(
                f"coefficient of x^{m} in a_{i} is the rational function ({num})/({den})"
            ) from None
    return QPolynomial(base, g, tuple(XPoly(base, c) for c in coeffs))


def _newton_interpolate(ts: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients of the interpolating polynomial (exact)."""
    n = len(ts)
    dd = list(ys)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (ts[i] - ts[i - k])
    poly = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # poly = poly * (t - ts[k]) + dd[k]
        new = [Fraction(0)] * n
        for j, c in enumerate(poly[:-1]):
            new[j + 1] += c
            new[j] -= c * ts[k]
        new[0] += dd[k]
        poly = new
    return poly


def _solve_interpolated(data: OperatorData, g: int, deg_bound: int, max_points: int = 48):
    base = data.ring
    support = sorted(
        {n for p in (data.V, data.W) for c in p.coeffs for e in c.terms for n, k in zip(base.names, e) if k}
    )
    if not support:
        return _solve_exact(data, g, deg_bound)
    if len(support) > 1:
        raise NotImplementedError("interpolation path handles one symbolic parameter")
    (t,) = support
    ts, samples = [], []
    failures = 0
    value = 0
    while len(ts) < max_points:
        value += 1
        tv = Fraction(value)
        try:
            q = _solve_exact(data.subs({t: tv}), g, deg_bound)
        except NoQSolution:
            failures += 1
            if failures >= 3 and not ts:
                raise
            continue
        ts.append(tv)
        samples.append([[Fraction(ai.coeff(m).constant_value()) for m in range(deg_bound + 1)] for ai in q.a])
        n = len(ts)
        if n < 3:
            continue
        # fit on all but the last two samples, predict the last two
        fit = n - 2
        ok = True
        polys = []
        for i in range(g):
            row = []
            for m in range(deg_bound + 1):
                ys = [s[i][m] for s in samples]
                coeffs = _newton_interpolate(ts[:fit], ys[:fit])
                pred = [sum(c * tt**k for k, c in enumerate(coeffs)) for tt in ts[fit:]]
                if pred != ys[fit:]:
                    ok = False
                    break
                row.append(coeffs)
            if not ok:
                break
            polys.append(row)
        if ok:
            gen = base.gen(t)
            a = []
            for row in polys:
                cs = [sum((gen**k * c for k, c in enumerate(coeffs) if c), base.zero) for coeffs in row]
                a.append(XPoly(base, cs))
            Q = QPolynomial(base, g, tuple(a))
            if q_residual(data, Q).coeffs:
                raise QSolveError("interpolated Q does not satisfy the relation")
            return Q
    raise QSolveError(f"interpolation in {t} did not stabilize within {max_points} points")


def solve_q(
    data: OperatorData,
    g: int,
    deg_bound: int | None = None,
    *,
    cap: int = 64,
    method: str = "exact",
) -> QPolynomial:
    """Find the monic ``Q`` of genus ``g`` for ``data``.

    The unknown coefficients of ``a_1 .. a_g`` (x-degree at most ``deg_bound``)
    enter the relation linearly; equating every ``x^j z^k`` coefficient gives a
    linear system over the parameter ring, solved fraction-free. Without an
    explicit ``deg_bound`` the search starts at ``deg W + 4g`` and doubles up to
    ``cap``. A failure only proves nonexistence up to the last bound tried.

    When the solution is not unique the free coefficients (highest x-degree
    first) are set to zero. ``method="interpolate"`` instantiates the single
    symbolic parameter at integers and interpolates; it yields the same Q.
    """
    if g < 0:
        raise ValueError("genus must be >= 0")
    if method not in ("exact", "interpolate"):
        raise ValueError(f"unknown method {method!r}")
    if g == 0:
        Q = QPolynomial(data.ring, 0, ())
        res = q_residual(data, Q)
        if res.coeffs:
            raise NoQSolution(f"Q = 1 leaves residual {res}", 0, None)
        return Q
    solver = _solve_exact if method == "exact" else _solve_interpolated
    if deg_bound is not None:
        return solver(data, g, deg_bound)
    bound = max(data.W.degree, 0) + 4 * g
    while True:
        try:
            return solver(data, g, bound)
        except NoQSolution:
            if bound >= cap:
                raise
            bound = min(2 * bound, cap)


@dataclass(frozen=True)
class PlaneCurve:
    """``4 w^2 = P(z)`` with ``p[k]`` the coefficient of ``z^k``."""

    ring: ParamRing
    g: int
    p: tuple[ParamPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(self.p))
        if len(self.p) != 2 * self.g + 2 or self.p[-1] != 4:
            raise CurveError(f"genus-{self.g} curve must have degree {2 * self.g + 1} and leading coefficient 4")

    @property
    def degree(self) -> int:
        return len(self.p) - 1

    def w_squared(self) -> tuple[ParamPoly, ...]:
        """Coefficients of ``w^2 = P(z)/4``."""
        return tuple(c * Fraction(1, 4) for c in self.p)

    def evaluate(self, z: complex, params: Mapping[str, complex] | None = None) -> complex:
        acc = 0j
        for c in reversed(self.p):
            acc = acc * z + c.evaluate(params)
        return acc

    def _zterms(self, coeffs):
        terms = []
        for k in range(len(coeffs) - 1, -1, -1):
            zk = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            c = coeffs[k]
            for e, v in c.sorted_terms():
                terms.append((v, "*".join(s for s in (c.monomial_str(e), zk) if s)))
        return terms

    def __str__(self):
        return "w^2 = " + _render(self._zterms(self.w_squared()))

    def four_w2(self) -> str:
        return "4*w^2 = " + _render(self._zterms(self.p))

    def to_json(self) -> dict:
        return {
            "genus": self.g,
            "equation": "4*w^2 = sum_k coefficients[k]*z^k",
            "parameters": list(self.ring.names),
            "coefficients": [str(c) for c in self.p],
        }


def spectral_curve(data: OperatorData, Q: QPolynomial) -> PlaneCurve:
    """``4 w^2 = 4(z-W)Q^2 - 4V Q'^2 + Q''^2 - 2Q'Q''' + 2Q(2V'Q' + 4VQ'' + Q'''')``."""
    ring = _ext(data.ring, "z")
    V, W = data.lift(ring)
    q = Q.as_xpoly(ring)
    z = XPoly.const(ring, ring.gen("z"))
    q1, q2, q3, q4 = (q.diff(k) for k in (1, 2, 3, 4))
    P = (
        (z - W) * q * q * 4
        - V * q1 * q1 * 4
        + q2 * q2
        - q1 * q3 * 2
        + q * (V.diff() * q1 * 2 + V * q2 * 4 + q4) * 2
    )
    if P.degree > 0:
        raise CurveError(f"curve expression depends on x (degree {P.degree}); Q does not solve the relation")
    parts = P.coeff(0).split("z")
    deg = max(parts, default=0)
    coeffs = [parts.get(k, data.ring.zero) for k in range(deg + 1)]
    return PlaneCurve(data.ring, Q.g, tuple(coeffs))


def curve_membership(
    curve: PlaneCurve, z: complex, w: complex, params: Mapping[str, complex] | None = None
) -> float:
    """``|4w^2 - P(z)|`` relative to the largest individual term (0 at the origin)."""
    lhs = 4 * complex(w) ** 2
    terms = [c.evaluate(params) * complex(z) ** k for k, c in enumerate(curve.p)]
    scale = max([abs(lhs)] + [abs(t) for t in terms])
    if scale == 0:
        return 0.0
    return abs(lhs - sum(terms)) / scale


@dataclass(frozen=True)
class EigenODE:
    """``psi'' - chi1 psi' - chi0 psi = 0`` with ``chi = num/den``.

    Polynomials live over the data ring plus ``z`` and ``w``. With
    ``bindings`` set every parameter has a complex value and the numeric
    evaluators are available; otherwise the data is exact.
    """

    chi1_num: XPoly
    chi1_den: XPoly
    chi0_num: XPoly
    chi0_den: XPoly
    bindings: Mapping[str, complex] | None = field(default=None, compare=False)

    @property
    def ring(self) -> ParamRing:
        return self.chi1_num.ring

    @property
    def is_numeric(self) -> bool:
        return self.bindings is not None

    def cleared(self) -> tuple[XPoly, XPoly, XPoly]:
        """``(p2, p1, p0)`` with ``p2 psi'' + p1 psi' + p0 psi = 0`` (denominators cleared)."""
        if self.chi1_den != self.chi0_den:
            raise ValueError("denominators differ; cannot clear with a single multiplier")
        return self.chi1_den, -self.chi1_num, -self.chi0_num

    def subs(self, values) -> "EigenODE":
        """Exact substitution of rational values (e.g. ``z = w = 0``)."""
        return EigenODE(*(p.subs(values) for p in (self.chi1_num, self.chi1_den, self.chi0_num, self.chi0_den)), self.bindings)

    def primitive_cleared(self) -> tuple[XPoly, XPoly, XPoly]:
        """Cleared form divided by the common rational and monomial content."""
        p2, p1, p0 = self.cleared()
        content = common_content(c for p in (p2, p1, p0) for c in p.coeffs)
        if p2.coeffs[-1].leading_term()[1] < 0:
            content = -content
        return tuple(p.divide_exact(content) for p in (p2, p1, p0))

    def _need_bindings(self):
        if self.bindings is None:
            raise ValueError("exact EigenODE has no numeric bindings")

    def coefficients(self, x: complex) -> tuple[complex, complex, complex]:
        self._need_bindings()
        return tuple(p(x, self.bindings) for p in self.cleared())

    def chi(self, x: complex) -> tuple[complex, complex]:
        self._need_bindings()
        den = self.chi1_den(x, self.bindings)
        if abs(den) <= 1e-14 * max(self.chi1_den.eval_abs(x, self.bindings), 1e-300):
            raise PoleError(f"Q(x, z) vanishes at x = {x}")
        return self.chi1_num(x, self.bindings) / den, self.chi0_num(x, self.bindings) / self.chi0_den(x, self.bindings)

    def to_json(self) -> dict:
        out = {
            "chi1": {"numerator": str(self.chi1_num), "denominator": str(self.chi1_den)},
            "chi0": {"numerator": str(self.chi0_num), "denominator": str(self.chi0_den)},
        }
        if self.bindings is not None:
            out["bindings"] = {k: _complex_json(v) for k, v in sorted(self.bindings.items())}
        return out


def _complex_json(v: complex):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def _chi_data(V: XPoly, Q: XPoly, w: ParamPoly) -> tuple[XPoly, XPoly, XPoly, XPoly]:
    """``chi1 = Q'/Q`` and ``chi0 = (w - Q''/2 - V Q)/Q`` for any (not necessarily monic) ``Q``."""
    chi0_num = XPoly.const(Q.ring, w) - Q.diff(2) * Fraction(1, 2) - V * Q
    return Q.diff(), Q, chi0_num, Q


def eigen_ode(
    data: OperatorData,
    Q: QPolynomial,
    z: complex | None = None,
    w: complex | None = None,
    params: Mapping[str, complex] | None = None,
    *,
    tol: float = 1e-10,
    curve: PlaneCurve | None = None,
) -> EigenODE:
    """Second-order equation for the common eigenfunctions at the curve point ``(z, w)``.

    Leaving ``z`` and ``w`` as ``None`` returns the exact form with ``z, w``
    symbolic; otherwise the point is checked against the curve (relative
    ``tol``) and the returned equation carries numeric bindings.
    """
    ring = _ext(data.ring, "z", "w")
    V, _ = data.lift(ring)
    chi = _chi_data(V, Q.as_xpoly(ring), ring.gen("w"))
    if z is None and w is None:
        return EigenODE(*chi)
    if z is None or w is None:
        raise ValueError("give both z and w, or neither")
    params = dict(params or {})
    curve = curve or spectral_curve(data, Q)
    res = curve_membership(curve, z, w, params)
    if not math.isfinite(res) or res > tol:
        raise OffCurveError(f"(z, w) = ({z}, {w}) is off the curve: relative residual {res:.3e}")
    bindings = {**{k: complex(v) for k, v in params.items()}, "z": complex(z), "w": complex(w)}
    return EigenODE(*chi, bindings=bindings)

"""Numeric checks of candidate eigenfunctions against exact operator data.

Residuals are scale free: the magnitude of the sum of an equation's terms
divided by the largest individual term at the point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import catalog
from .jet import AnalyticFn, BranchPointError, X, exp
from .rank2 import EigenODE, PoleError, eigen_ode, solve_q, spectral_curve
from .specfun import DomainError, HeunParams, bessel_j, bessel_y, gamma, heun_c, HEUN_RADIUS
from .weyl import DiffOp

__all__ = [
    "ResidualReport",
    "REPORT_SCHEMA",
    "CANDIDATES",
    "verify_ode",
    "verify_eigen",
    "verify_bessel_heun",
    "sample_points",
    "run_candidate",
]

INADMISSIBLE = (DomainError, BranchPointError, PoleError, ZeroDivisionError)

CANDIDATES = (
    "g1-z0-besselJ",
    "g1-z0-besselY",
    "g1-zpm-ch1",
    "g1-zpm-ch2",
    "g2-z0-ch1",
    "g2-z0-ch2",
    "bessel-heun-identity",
)

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "candidate",
        "equation",
        "parameters",
        "points",
        "residuals",
        "tolerance",
        "verdict",
        "branches_tried",
    ],
    "properties": {
        "candidate": {"type": "string"},
        "equation": {"type": "string"},
        "parameters": {"type": "object"},
        "points": {"type": "array", "items": {"$ref": "#/$defs/number"}},
        "residuals": {"type": "array", "items": {"type": ["number", "null"]}},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "verdict": {"enum": ["pass", "fail"]},
        "branches_tried": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["branch", "verdict", "max_residual"],
                "properties": {
                    "branch": {"type": "object"},
                    "verdict": {"enum": ["pass", "fail"]},
                    "max_residual": {"type": ["number", "null"]},
                },
            },
        },
        "scale": {"type": "string"},
    },
    "$defs": {
        "number": {
            "oneOf": [
                {"type": "number"},
                {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            ]
        }
    },
}


def _num(v) -> int | float | list[float]:
    """JSON form of a scalar: int stays int, else a float or ``[re, im]`` (no ``-0.0``)."""
    if isinstance(v, int):
        return v
    v = complex(v)
    re, im = v.real + 0.0, v.imag + 0.0
    return re if im == 0 else [re, im]


@dataclass
class ResidualReport:
    candidate: str
    equation: str
    parameters: dict
    points: list[complex]
    residuals: list[float | None]
    tolerance: float
    branches_tried: list[dict] = field(default_factory=list)
    scale: str = "max-term"

    @property
    def passed(self) -> bool:
        return bool(self.residuals) and all(r is not None and r < self.tolerance for r in self.residuals)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def max_residual(self) -> float | None:
        if not self.residuals or any(r is None for r in self.residuals):
            return None
        return max(self.residuals)

    def to_json(self) -> dict:
        return {
            "candidate": self.candidate,
            "equation": self.equation,
            "parameters": {k: _num(v) if isinstance(v, (int, float, complex)) and not isinstance(v, bool) else v for k, v in self.parameters.items()},
            "points": [_num(p) for p in self.points],
            "residuals": self.residuals,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "branches_tried": self.branches_tried,
            "scale": self.scale,
        }

    def summary(self) -> str:
        mr = self.max_residual
        mrs = "inadmissible point" if mr is None else f"{mr:.3e}"
        return f"{self.candidate}: {self.verdict} (max residual {mrs}, tol {self.tolerance:g}, {len(self.points)} points)"


def _relative(terms: Sequence[complex]) -> float:
    scale = max(abs(t) for t in terms)
    return 0.0 if scale == 0 else abs(sum(terms)) / scale


def verify_ode(
    ode: EigenODE,
    psi: AnalyticFn,
    points: Iterable[complex],
    tol: float,
    *,
    order: int = 6,
    candidate: str = "",
    equation: str | None = None,
    parameters: Mapping | None = None,
) -> ResidualReport:
    """Residual of ``p2 psi'' + p1 psi' + p0 psi`` at each point, from jets of ``psi``."""
    if not ode.is_numeric:
        raise ValueError("verify_ode needs an EigenODE with numeric bindings")
    points = list(points)
    residuals = []
    for x in points:
        try:
            d = psi.derivatives(x, max(order, 2))
            p2, p1, p0 = ode.coefficients(x)
            if p2 == 0:
                raise PoleError(f"Q vanishes at {x}")
            residuals.append(_relative([p2 * d[2], p1 * d[1], p0 * d[0]]))
        except INADMISSIBLE:
            residuals.append(None)
    if equation is None:
        p2, p1, p0 = ode.cleared()
        equation = f"({p2})*psi'' + ({p1})*psi' + ({p0})*psi = 0"
    return ResidualReport(candidate, equation, dict(parameters or {}), points, residuals, tol)


def verify_eigen(
    L: DiffOp,
    psi: AnalyticFn,
    z: complex,
    points: Iterable[complex],
    tol: float,
    params: Mapping[str, complex] | None = None,
    *,
    order: int = 6,
    candidate: str = "",
    parameters: Mapping | None = None,
) -> ResidualReport:
    """Residual of ``L psi - z psi`` with jets of order at least ``order(L)``."""
    order = max(order, L.order)
    points = list(points)
    residuals = []
    for x in points:
        try:
            d = psi.derivatives(x, order)
            _, terms = L.apply_numeric(d, x, params)
            residuals.append(_relative(terms + [-complex(z) * d[0]]))
        except INADMISSIBLE:
            residuals.append(None)
    return ResidualReport(candidate, f"({L})*psi = z*psi", dict(parameters or {}), points, residuals, tol)


def verify_bessel_heun(
    alpha,
    points: Iterable[float],
    tol: float = 1e-10,
) -> ResidualReport:
    """Compare ``J_a(x)`` with ``x^a (2ix+1) CH(1, 2a, 1, 0, 1/2; -2ix) / (Gamma(a+1) 2^a e^(ix))``.

    A failing verdict is a finding about the identity, not an error.
    """
    a = float(alpha)
    p = HeunParams(1, 2 * Fraction(alpha) if isinstance(alpha, (int, Fraction)) else 2 * a, 1, 0, Fraction(1, 2))
    norm = gamma(a + 1) * 2**a
    points = list(points)
    residuals = []
    for x in points:
        try:
            if not x.real > 0 or complex(x).imag:
                raise DomainError("identity checked on the positive real axis")
            lhs = bessel_j(alpha, x)
            ch = heun_c(p, -2j * x)
            rhs = complex(x) ** a * (2j * x + 1) * ch / (norm * cmath.exp(1j * x))
            scale = max(abs(lhs), abs(rhs))
            residuals.append(0.0 if scale == 0 else abs(lhs - rhs) / scale)
        except INADMISSIBLE:
            residuals.append(None)
    return ResidualReport(
        "bessel-heun-identity",
        "J_a(x) = x^a*(2*i*x + 1)*CH(1, 2*a, 1, 0, 1/2; -2*i*x)/(Gamma(a + 1)*2^a*exp(i*x))",
        {"alpha": a},
        points,
        residuals,
        tol,
        scale="max(|lhs|, |rhs|)",
    )


def sample_points(
    count: int,
    interval: tuple[float, float],
    *,
    seed: int = 0,
    constraints: Sequence[Callable[[float], bool]] = (),
    max_tries: int = 100000,
) -> list[float]:
    """``count`` sorted points drawn uniformly from ``interval`` that satisfy every constraint.

    The same seed always gives the same list.
    """
    lo, hi = interval
    if not hi > lo:
        raise ValueError(f"empty interval {interval}")
    rng = np.random.default_rng(seed)
    out: list[float] = []
    tries = 0
    while len(out) < count:
        if tries >= max_tries:
            raise ValueError(f"only {len(out)} of {count} admissible points after {max_tries} draws")
        tries += 1
        x = float(rng.uniform(lo, hi))
        if x <= lo or x >= hi or x in out:
            continue
        if all(c(x) for c in constraints):
            out.append(x)
    return sorted(out)


def within_disc(coeff: complex, power: int, radius: float = HEUN_RADIUS) -> Callable[[float], bool]:
    """Constraint ``|coeff * x^power| <= radius``."""
    return lambda x: abs(coeff * x**power) <= radius


def avoiding(f: Callable[[complex], complex], eps: float = 1e-8) -> Callable[[float], bool]:
    """Constraint ``|f(x)| > eps`` (keeps away from roots of a denominator)."""
    return lambda x: abs(f(x)) > eps


# ---------------------------------------------------------------------------
# explicit candidates


@lru_cache(maxsize=None)
def _family(g: int):
    data = catalog.oganesyan_data(A=catalog.SYMBOLIC, B=0, g=g)
    Q = solve_q(data, g)
    return data, Q, spectral_curve(data, Q)


def _ode(g: int, A: complex, z: complex, w: complex) -> EigenODE:
    data, Q, curve = _family(g)
    return eigen_ode(data, Q, z, w, {"A": A}, curve=curve)


def _operator(g: int) -> DiffOp:
    return _family(g)[0].operator()


@dataclass(frozen=True)
class _Setup:
    g: int
    z: complex
    w: complex
    interval: tuple[float, float]
    constraints: tuple
    tol: float
    count: int
    branches: tuple[tuple[dict, AnalyticFn], ...]


def _upper(limit: float, default: float) -> float:
    return min(default, limit * (1 - 1e-9))


def _setup(name: str, A: complex, z_sign: int) -> _Setup:
    A = complex(A)
    if A == 0:
        raise ValueError("A must be nonzero")
    if name in ("g1-z0-besselJ", "g1-z0-besselY"):
        f = bessel_j if name.endswith("J") else bessel_y
        psi = X ** Fraction(5, 2) * f(Fraction(1, 8), cmath.sqrt(A) * X**4 / 4)
        return _Setup(1, 0j, 0j, (0.2, 1.2), (), 1e-8, 20, (({"sqrt_A": "principal"}, psi),))
    if name in ("g1-zpm-ch1", "g1-zpm-ch2"):
        z = z_sign * cmath.sqrt(-192 * A)
        beta = Fraction(-1, 4) if name.endswith("ch1") else Fraction(1, 4)
        disc = -16 * A / z
        hi = _upper((HEUN_RADIUS / abs(disc)) ** 0.25, 2.0)
        branches = []
        for sgn in (1, -1):
            s = sgn * cmath.sqrt(-1 / A)
            p = HeunParams(z / 32 * s, beta, -2, 0, Fraction(5, 4))
            core = exp(-(A / 4) * s * X**4) * heun_c(p, disc * X**4)
            psi = core if beta < 0 else X * core
            branches.append(({"sqrt(-1/A)": "+principal" if sgn > 0 else "-principal", "z": _num(z)}, psi))
        return _Setup(1, z, 0j, (0.2, hi), (within_disc(disc, 4),), 1e-7, 12, tuple(branches))
    if name in ("g2-z0-ch1", "g2-z0-ch2"):
        beta = Fraction(-1, 8) if name.endswith("ch1") else Fraction(1, 8)
        disc = -4 * A / 35
        hi = _upper((HEUN_RADIUS / abs(disc)) ** 0.125, 2.0)
        p = HeunParams(0, beta, -2, Fraction(-35, 256), Fraction(387, 256))
        core = heun_c(p, disc * X**8)
        psi = core if beta < 0 else X * core
        return _Setup(2, 0j, 0j, (0.2, hi), (within_disc(disc, 8),), 1e-8, 12, (({}, psi),))
    raise KeyError(f"unknown candidate {name!r}; choose from {CANDIDATES}")


def run_candidate(
    name: str,
    *,
    A: complex = 1,
    tol: float | None = None,
    seed: int = 0,
    count: int | None = None,
    z_sign: int = 1,
    order: int = 6,
    relation: str = "ode",
    alpha=Fraction(1, 8),
) -> ResidualReport:
    """Verify one of :data:`CANDIDATES` at deterministic sample points.

    ``relation="ode"`` checks the second-order eigenfunction equation,
    ``relation="eigen"`` checks ``L psi = z psi``. Every branch/sign variant is
    tried; the report passes if one of them passes everywhere and records all.
    """
    if name == "bessel-heun-identity":
        pts = sample_points(count or 8, (0.05, 0.45), seed=seed)
        return verify_bessel_heun(alpha, pts, tol or 1e-10)
    if relation not in ("ode", "eigen"):
        raise ValueError("relation must be 'ode' or 'eigen'")
    if z_sign not in (1, -1):
        raise ValueError("z_sign must be +1 or -1")
    st = _setup(name, A, z_sign)
    tol = st.tol if tol is None else tol
    pts = sample_points(count or st.count, st.interval, seed=seed, constraints=st.constraints)
    params = {"g": st.g, "A": complex(A), "z": st.z, "w": st.w, "jet_order": order}
    if relation == "ode":
        ode = _ode(st.g, complex(A), st.z, st.w)
        run = lambda psi: verify_ode(ode, psi, pts, tol, order=order, candidate=name, parameters=params)
    else:
        L = _operator(st.g)
        run = lambda psi: verify_eigen(L, psi, st.z, pts, tol, {"A": complex(A)}, order=order, candidate=name, parameters=params)
    tried = []
    chosen = None
    for branch, psi in st.branches:
        rep = run(psi)
        tried.append({"branch": branch, "verdict": rep.verdict, "max_residual": rep.max_residual})
        if chosen is None or (rep.passed and not chosen.passed):
            chosen = rep
    chosen.branches_tried = tried
    return chosen

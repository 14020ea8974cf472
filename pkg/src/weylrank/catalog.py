"""Named operator families with exact (possibly symbolic) parameters.

Every constructor takes parameter values as rationals or the string
``"symbolic"``; symbolic parameters become generators of a fresh ring whose
names are the parameter names (``alpha``, ``A``, ``B``, ``A0`` ... ``A3``).
"""

from __future__ import annotations

from fractions import Fraction

from .rank2 import OperatorData
from .ring import ParamPoly, ParamRing, XPoly, as_rat
from .weyl import DiffOp, compose, power

__all__ = [
    "SYMBOLIC",
    "parameters",
    "dixmier_rank2",
    "dixmier_rank3",
    "burchnall_chaundy_residual",
    "mironov_data",
    "oganesyan_data",
]

SYMBOLIC = "symbolic"


def parameters(**values) -> tuple[ParamRing, dict[str, ParamPoly]]:
    """Build the ring of the symbolic entries and return every value as a ParamPoly."""
    names = tuple(n for n, v in values.items() if v == SYMBOLIC)
    ring = ParamRing(names)
    out = {}
    for n, v in values.items():
        out[n] = ring.gen(n) if v == SYMBOLIC else ring.const(as_rat(v))
    return ring, out


def _nonzero(name: str, p: ParamPoly):
    if p.is_zero():
        raise ValueError(f"{name} must be nonzero")


def dixmier_rank2(alpha=SYMBOLIC, *, as_printed: bool = False) -> tuple[DiffOp, DiffOp]:
    """Rank-2, genus-1 Dixmier pair built on ``H = D^2 + x^3 + alpha``.

    ``L = H^2 + 2x`` and ``M = H^3 + 3x D^2 + 3D + 3x(x^3 + alpha)``, i.e.
    ``M = H^3 + (3/2)(xH + Hx)``. With ``as_printed=True`` the last term is
    ``3x(x^2 + alpha)``; that pair does not commute.
    """
    ring, p = parameters(alpha=alpha)
    a = p["alpha"]
    x = XPoly.x(ring)
    H = DiffOp.d(ring, 2) + DiffOp.mult(x**3 + a)
    L = compose(H, H) + DiffOp.mult(x * 2)
    tail = x * (x**2 + a) * 3 if as_printed else x * (x**3 + a) * 3
    M = power(H, 3) + DiffOp.mult(x * 3) * DiffOp.d(ring, 2) + DiffOp.d(ring, 1) * 3 + DiffOp.mult(tail)
    return L, M


def dixmier_rank3(alpha=SYMBOLIC) -> tuple[DiffOp, DiffOp]:
    """Rank-3, genus-1 Dixmier pair built on ``H = D^3 + x^2 + alpha``."""
    ring, p = parameters(alpha=alpha)
    a = p["alpha"]
    x = XPoly.x(ring)
    H = DiffOp.d(ring, 3) + DiffOp.mult(x**2 + a)
    L = compose(H, H) + DiffOp.d(ring, 1) * 2
    M = (
        power(H, 3)
        + DiffOp.d(ring, 4) * 3
        + DiffOp.mult((x**2 + a) * 3) * DiffOp.d(ring, 1)
        + DiffOp.mult(x * 3)
    )
    return L, M


def burchnall_chaundy_residual(L: DiffOp, M: DiffOp, alpha: ParamPoly | None = None) -> DiffOp:
    """``M^2 - L^3 + alpha`` for the Dixmier curve ``w^2 = z^3 - alpha``."""
    if alpha is None:
        alpha = L.ring.gen("alpha")
    return compose(M, M) - power(L, 3) + alpha


def mironov_data(A0=SYMBOLIC, A1=SYMBOLIC, A2=SYMBOLIC, A3=SYMBOLIC, g: int = 1) -> OperatorData:
    """``V = A3 x^3 + A2 x^2 + A1 x + A0`` and ``W = g(g+1) A3 x``."""
    if g < 0:
        raise ValueError("genus must be >= 0")
    ring, p = parameters(A0=A0, A1=A1, A2=A2, A3=A3)
    _nonzero("A3", p["A3"])
    x = XPoly.x(ring)
    V = x**3 * p["A3"] + x**2 * p["A2"] + x * p["A1"] + p["A0"]
    W = x * p["A3"] * (g * (g + 1))
    return OperatorData(V, W)


def oganesyan_data(A=SYMBOLIC, B=0, g: int = 1, *, variant: str = "x4") -> OperatorData:
    """``V = A x^6 + B x^4`` (or ``B x^2`` with ``variant="x2"``), ``W = 16 g(g+1) A x^4``.

    The two variants agree at ``B = 0``; which one admits ``Q`` for ``B != 0``
    is left to :func:`weylrank.rank2.solve_q`.
    """
    if variant not in ("x4", "x2"):
        raise ValueError("variant must be 'x4' or 'x2'")
    if g < 0:
        raise ValueError("genus must be >= 0")
    ring, p = parameters(A=A, B=B)
    _nonzero("A", p["A"])
    x = XPoly.x(ring)
    V = x**6 * p["A"] + x ** (4 if variant == "x4" else 2) * p["B"]
    W = x**4 * p["A"] * (16 * g * (g + 1))
    return OperatorData(V, W)

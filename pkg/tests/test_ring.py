from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weylrank.ring import (
    NotDivisible,
    ParameterMismatch,
    ParamPoly,
    ParamRing,
    UnboundParameter,
    XPoly,
    diff_x,
    eval_x,
    parse_xpoly,
    solve_linear_system,
)

from _gen import RING, params, xpolys

R = ParamRing(("A",))
A = R.gen("A")
x = XPoly.x(R)


def test_difference_of_squares():
    assert (A + 1) * (A - 1) == A**2 - 1


def test_monomial_product():
    assert XPoly.x(ParamRing()) ** 3 * XPoly.x(ParamRing()) ** 4 == XPoly.monomial(ParamRing(), 7)
    assert x**3 * x**4 == XPoly.monomial(R, 7)


def _schoolbook(p: XPoly, q: XPoly) -> dict:
    # independent product: expand every pair of (x-power, parameter monomial) terms
    out = {}
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            for ea, ca in a.terms.items():
                for eb, cb in b.terms.items():
                    key = (i + j, tuple(u + v for u, v in zip(ea, eb)))
                    out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _flat(p: XPoly) -> dict:
    return {(i, e): c for i, a in enumerate(p.coeffs) for e, c in a.terms.items()}


def test_product_against_schoolbook():
    p = x**4 * (16 * A)
    assert p * p == x**8 * (256 * A**2)
    assert _flat(p * p) == _schoolbook(p, p)


@settings(max_examples=200, deadline=None)
@given(xpolys, xpolys)
def test_product_matches_schoolbook_random(p, q):
    assert _flat(p * q) == _schoolbook(p, q)


def test_diff_examples():
    assert diff_x(x**4 * (16 * A)) == x**3 * (64 * A)
    assert diff_x(x**4, 5).is_zero()
    al = ParamRing(("alpha",))
    p = XPoly.x(al) ** 3 + al.gen("alpha")
    assert diff_x(p, 2) == diff_x(diff_x(p)) == XPoly.x(al) * 6


def test_eval_examples():
    assert eval_x(x**4 * (16 * A), 1, {"A": 1}) == 16
    r0 = ParamRing()
    assert eval_x(XPoly.x(r0) ** 2 - 1, 1j) == -2
    p = x**8 * (4 * A) + 35
    exact = sum(c.constant_value() * Fraction(1, 2) ** k for k, c in enumerate(p.subs({"A": 1}).coeffs))
    assert exact == Fraction(35015625, 1000000)
    assert eval_x(p, 0.5, {"A": 1}) == pytest.approx(35.015625, abs=1e-15)


def test_eval_unbound_parameter():
    with pytest.raises(UnboundParameter):
        eval_x(x * A, 1.0)


def test_ring_mismatch():
    other = ParamRing(("B",))
    with pytest.raises(ParameterMismatch):
        A + other.gen("B")


def test_divide_exact():
    assert ((A + 1) * (A - 1)).divide_exact(A + 1) == A - 1
    with pytest.raises(NotDivisible):
        (A**2 + 1).divide_exact(A + 1)


def test_rendering():
    assert str(x**4 * (16 * A) + R.gen("A") * 0 + 1) == "16*A*x^4 + 1"
    assert str(R.const(Fraction(-3, 2)) * x) == "-3/2*x"
    assert str(XPoly(R, [])) == "0"


@pytest.mark.parametrize("text", ["16*A*x^4 + z", "x^3 - 2/3*A^2*x + 7", "(x + A)^2*(x - 1)", "-x**2 + 3"])
def test_parse_roundtrip(text):
    ring = ParamRing(("A", "z"))
    p = parse_xpoly(text, ring)
    assert parse_xpoly(str(p), ring) == p
    sym = sympy.sympify(text.replace("^", "**"))
    assert sympy.expand(sym - sympy.sympify(str(p).replace("^", "**"))) == 0


# ---------------------------------------------------------------------------
# linear solver


def test_solve_identity():
    sol = solve_linear_system([[R.one, R.zero], [R.zero, R.one]], [A, R.one])
    assert sol.consistent and sol.value(0) == A and sol.value(1) == 1


def test_solve_scalar_normalizes():
    sol = solve_linear_system([[A]], [A**2])
    assert sol.value(0) == A


def test_solve_inconsistent_certificate():
    sol = solve_linear_system([[R.one], [R.one * 2]], [R.one, R.one])
    assert not sol.consistent
    row, residual = sol.certificate
    assert row in (0, 1) and not residual.is_zero()


def _sym(p, a):
    v = Fraction(p.subs({"A": a}).constant_value())
    return sympy.Rational(v.numerator, v.denominator)


def test_solve_against_instantiation_oracle():
    import random

    rng = random.Random(7)
    for _ in range(10):
        M = [[R.const(rng.randint(-4, 4)) + A * rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        b = [R.const(rng.randint(-4, 4)) + A**2 * rng.randint(-1, 1) for _ in range(3)]
        sol = solve_linear_system(M, b)
        for a in (Fraction(3), Fraction(-1, 2), Fraction(7, 3)):
            Ma = sympy.Matrix([[_sym(e, a) for e in row] for row in M])
            ba = sympy.Matrix([_sym(e, a) for e in b])
            if Ma.det() == 0:
                continue
            ref = Ma.LUsolve(ba)
            for j in range(3):
                num, den = sol.values[j]
                assert _sym(num, a) / _sym(den, a) == ref[j]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(params, min_size=3, max_size=3), min_size=2, max_size=4), st.data())
def test_solution_satisfies_system(M, data):
    b = data.draw(st.lists(params, min_size=len(M), max_size=len(M)))
    sol = solve_linear_system(M, b)
    if not sol.consistent:
        return
    # clear denominators: sum_j M_ij num_j * prod_{k != j} den_k == b_i * prod den
    dens = [d for _, d in sol.values]
    total = RING.one
    for d in dens:
        total = total * d
    for row, bi in zip(M, b):
        lhs = RING.zero
        for j, (num, den) in enumerate(sol.values):
            others = RING.one
            for k, d in enumerate(dens):
                if k != j:
                    others = others * d
            lhs = lhs + row[j] * num * others
        assert lhs == bi * total


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=200, deadline=None)
@given(params, params, params)
def test_param_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=200, deadline=None)
@given(xpolys, xpolys, xpolys)
def test_xpoly_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@settings(max_examples=200, deadline=None)
@given(xpolys, xpolys, params)
def test_leibniz_and_linearity(p, q, c):
    assert diff_x(p * q) == diff_x(p) * q + p * diff_x(q)
    assert diff_x(p * c + q) == diff_x(p) * c + diff_x(q)


@settings(max_examples=200, deadline=None)
@given(xpolys, xpolys, st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_eval_multiplicative(p, q, z):
    vals = {"A": 0.7 - 0.2j, "B": 1.3}
    lhs = eval_x(p * q, z, vals)
    rhs = eval_x(p, z, vals) * eval_x(q, z, vals)
    scale = (p * q).eval_abs(abs(z), {"A": abs(vals["A"]), "B": 1.3}) + 1e-300
    assert abs(lhs - rhs) <= 1e-12 * max(scale, abs(lhs), 1.0)

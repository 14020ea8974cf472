"""Random exact objects for property tests, from hypothesis or a seeded RNG."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from weylrank.ring import ParamPoly, ParamRing, XPoly
from weylrank.weyl import DiffOp

RING = ParamRing(("A", "B"))

rats = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3))
monos = st.tuples(st.integers(0, 2), st.integers(0, 2))
params = st.dictionaries(monos, rats, max_size=3).map(lambda t: ParamPoly(RING, t))
xpolys = st.lists(params, max_size=4).map(lambda cs: XPoly(RING, cs))
ops = st.lists(xpolys, max_size=4).map(lambda cs: DiffOp(RING, cs))


def rand_param(rng: random.Random) -> ParamPoly:
    terms = {}
    for _ in range(rng.randint(0, 3)):
        terms[(rng.randint(0, 2), rng.randint(0, 2))] = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
    return ParamPoly(RING, terms)


def rand_xpoly(rng: random.Random, deg: int = 3) -> XPoly:
    return XPoly(RING, [rand_param(rng) for _ in range(rng.randint(0, deg + 1))])


def rand_op(rng: random.Random, order: int = 3, deg: int = 3) -> DiffOp:
    return DiffOp(RING, [rand_xpoly(rng, deg) for _ in range(rng.randint(0, order + 1))])

import math
from fractions import Fraction

import jsonschema
import numpy as np
import pytest

from weylrank import catalog
from weylrank.jet import X, constant
from weylrank.rank2 import eigen_ode, solve_q
from weylrank.ring import ParamRing
from weylrank.specfun import bessel_j, bessel_y, gamma
from weylrank.verify import (
    CANDIDATES,
    REPORT_SCHEMA,
    run_candidate,
    sample_points,
    verify_bessel_heun,
    verify_eigen,
    verify_ode,
    within_disc,
)
from weylrank.weyl import DiffOp

DATA = catalog.oganesyan_data(g=1)
Q = solve_q(DATA, 1)
ODE0 = eigen_ode(DATA, Q, 0, 0, {"A": 1})
PTS = [0.3 + 0.1 * k for k in range(10)]
PSI_J = X ** Fraction(5, 2) * bessel_j(Fraction(1, 8), X**4 / 4)
PSI_Y = X ** Fraction(5, 2) * bessel_y(Fraction(1, 8), X**4 / 4)


@pytest.mark.parametrize("psi", [PSI_J, PSI_Y])
def test_bessel_candidates_solve_ode(psi):
    assert verify_ode(ODE0, psi, PTS, 1e-8).passed


def test_non_solution_rejected():
    rep = verify_ode(ODE0, X**3, PTS, 1e-8)
    assert not rep.passed and rep.max_residual > 1e-2


def test_eigenrelation():
    L = DATA.operator()
    assert verify_eigen(L, PSI_J, 0, PTS, 1e-7, {"A": 1}).passed
    D4 = DiffOp.d(ParamRing(), 4)
    assert verify_eigen(D4, constant(3.0), 0, PTS, 1e-12).passed


def test_ode_pass_implies_eigen_pass():
    L = DATA.operator()
    for psi in (PSI_J, PSI_Y):
        tol = 1e-8
        assert verify_ode(ODE0, psi, PTS, tol).passed
        assert verify_eigen(L, psi, 0, PTS, 10 * tol, {"A": 1}).passed


def test_inadmissible_point_recorded():
    rep = verify_ode(ODE0, PSI_J, [0.0, 0.5], 1e-8)
    assert rep.residuals[0] is None and not rep.passed
    assert rep.residuals[1] < 1e-8


@pytest.mark.parametrize("name", [c for c in CANDIDATES if c != "bessel-heun-identity"])
@pytest.mark.parametrize("relation", ["ode", "eigen"])
def test_all_candidates_pass(name, relation):
    rep = run_candidate(name, relation=relation)
    assert rep.passed, rep.summary()
    assert rep.branches_tried and any(b["verdict"] == "pass" for b in rep.branches_tried)


@pytest.mark.parametrize("name", ["g1-zpm-ch1", "g1-zpm-ch2"])
def test_both_signs_of_z(name):
    assert run_candidate(name, z_sign=-1).passed
    rep = run_candidate(name)
    assert len(rep.branches_tried) == 2


@pytest.mark.parametrize("name", [c for c in CANDIDATES if c != "bessel-heun-identity"])
def test_verdict_stable_under_refinement(name):
    base = run_candidate(name)
    fine = run_candidate(name, order=2 * 6, count=2 * len(base.points))
    assert base.verdict == fine.verdict == "pass"


def test_bessel_heun_identity():
    for alpha in (Fraction(1, 8), Fraction(1, 2)):
        rep = verify_bessel_heun(alpha, [0.1, 0.2, 0.3])
        assert rep.verdict in ("pass", "fail") and len(rep.residuals) == 3
    rep = verify_bessel_heun(Fraction(1, 2), [0.2])
    assert rep.residuals[0] < 1e-10
    # near 0 both sides reduce to x^a / (2^a Gamma(a+1))
    x = 1e-6
    lead = x**0.5 / (2**0.5 * gamma(1.5))
    assert abs(bessel_j(0.5, x) - lead) / lead < 1e-10
    assert verify_bessel_heun(Fraction(1, 2), [x]).residuals[0] < 1e-10


def test_sample_points():
    z = 1j * math.sqrt(192)
    hi = (0.9 * math.sqrt(192) / 16) ** 0.25
    pts = sample_points(12, (0.2, 1.5), seed=4, constraints=(within_disc(16 / z, 4),))
    assert len(pts) == 12 and all(p <= hi for p in pts)
    assert len(sample_points(20, (0.2, 1.2))) == 20
    assert sample_points(20, (0.2, 1.2), seed=9) == sample_points(20, (0.2, 1.2), seed=9)
    with pytest.raises(ValueError):
        sample_points(3, (0.2, 1.2), constraints=(lambda x: False,), max_tries=100)


def test_report_schema():
    for name in CANDIDATES:
        jsonschema.validate(run_candidate(name).to_json(), REPORT_SCHEMA)

#!/usr/bin/env python3
"""Bessel and confluent Heun functions in jet arithmetic.

A jet carries Taylor coefficients through every operation, so derivatives of
composite expressions come out exact to rounding.
"""

# %%
import math
from fractions import Fraction

from weylrank.jet import X, Jet
from weylrank.specfun import HeunParams, bessel_j, bessel_y, heun_c, heun_c_coefficients

psi = X ** Fraction(5, 2) * bessel_j(Fraction(1, 8), X**4 / 4)
print("psi, psi', psi'' at 0.7:", [f"{d.real:.12f}" for d in psi.derivatives(0.7, 2)])

# %%
# J_1/2 and Y_1/2 have closed forms.
print(abs(bessel_j(0.5, 1.0) - math.sqrt(2 / math.pi) * math.sin(1)))
print(abs(bessel_y(0.5, 1.0) + math.sqrt(2 / math.pi) * math.cos(1)))

# %%
# Exact parameters give exact series coefficients; the first two are y(0), y'(0).
p = HeunParams(0, Fraction(-1, 8), -2, Fraction(-35, 256), Fraction(387, 256))
gen = heun_c_coefficients(p)
print("coefficients:", [str(next(gen)) for _ in range(4)])
print("CH(-0.5) =", heun_c(p, -0.5).real)

# %%
# The series is only summed inside |t| <= 0.9.
j = heun_c(p, Jet.variable(-0.8, 3))
print("derivatives at -0.8:", [f"{d.real:.6e}" for d in j.derivatives()])

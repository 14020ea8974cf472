#!/usr/bin/env python3
"""Solving for Q and reading off the spectral curve.

L = (D^2 + V)^2 + W commutes with an operator of order 4g + 2 exactly when a
polynomial Q = z^g + a_1 z^(g-1) + ... + a_g satisfies a fifth-order linear
relation. The solver finds the a_i by exact elimination over Q[A].
"""

# %%
from weylrank import catalog
from weylrank.rank2 import NoQSolution, q_residual, solve_q, spectral_curve

for g in (1, 2):
    data = catalog.oganesyan_data(g=g)
    Q = solve_q(data, g)
    print(f"g = {g}: V = {data.V}, W = {data.W}")
    print("   Q =", Q, "   residual:", q_residual(data, Q))
    print("  ", spectral_curve(data, Q))

# %%
# At z = 0 the genus-2 Q is a multiple of 4Ax^8 + 35.
content, prim = solve_q(catalog.oganesyan_data(g=2), 2).a[-1].primitive()
print(f"a_2 = ({content})*({prim})")

# %%
# With B symbolic, only the B x^2 variant of V admits Q.
print("B x^2:", solve_q(catalog.oganesyan_data(B="symbolic", variant="x2"), 1))
try:
    solve_q(catalog.oganesyan_data(B="symbolic"), 1, 8)
except NoQSolution as err:
    print("B x^4:", err)

# %%
# Instantiating A and interpolating gives the same Q.
print("interpolated:", solve_q(catalog.oganesyan_data(g=2), 2, method="interpolate"))

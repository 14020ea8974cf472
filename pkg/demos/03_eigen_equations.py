#!/usr/bin/env python3
"""Second-order equations for the common eigenfunctions.

At a point (z, w) of the curve the common eigenfunctions satisfy
psi'' = chi1 psi' + chi0 psi with chi1 = Q'/Q and chi0 = (w - Q''/2 - VQ)/Q.
"""

# %%
from weylrank import catalog
from weylrank.rank2 import OffCurveError, eigen_ode, solve_q

data = catalog.oganesyan_data(g=1)
Q = solve_q(data, 1)
ode = eigen_ode(data, Q)
print("chi1 =", f"({ode.chi1_num})/({ode.chi1_den})")
print("chi0 =", f"({ode.chi0_num})/({ode.chi0_den})")

# %%
# At the origin of the genus-2 curve, the cleared form has coprime coefficients.
data2 = catalog.oganesyan_data(g=2)
ode2 = eigen_ode(data2, solve_q(data2, 2)).subs({"z": 0, "w": 0})
for name, p in zip(("psi''", "psi'", "psi"), ode2.primitive_cleared()):
    print(f"{name:6s} {p}")

# %%
# Points off the curve are rejected in numeric mode.
try:
    eigen_ode(data, Q, 1.0, 0.5, {"A": 1})
except OffCurveError as err:
    print(err)

#!/usr/bin/env python3
"""Numerical verification of the explicit eigenfunctions.

Each candidate is evaluated by jets at seeded sample points and its residual
in the eigenfunction equation (or in L psi = z psi) is compared with a
tolerance. Candidates with a branch choice are tried on every branch.
"""

# %%
from weylrank.verify import CANDIDATES, run_candidate

for name in CANDIDATES:
    print(run_candidate(name).summary())

# %%
# The fourth-order relation L psi = z psi holds as well.
for name in CANDIDATES[:-1]:
    print(run_candidate(name, relation="eigen").summary())

# %%
# Branches tried for one of the z = +-i sqrt(192) solutions.
rep = run_candidate("g1-zpm-ch1", z_sign=-1)
for b in rep.branches_tried:
    print(b)

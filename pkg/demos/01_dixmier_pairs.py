#!/usr/bin/env python3
"""Commuting Dixmier pairs of rank 2 and rank 3.

Both pairs are built from an operator H and checked with alpha left as a
symbol, so the identities hold for every alpha at once.
"""

# %%
# Rank 2: H = D^2 + x^3 + alpha, L = H^2 + 2x, M of order 6.
from weylrank import catalog
from weylrank.weyl import commutator

L, M = catalog.dixmier_rank2()
print("L =", L)
print("[L, M] =", commutator(L, M))

# %%
# The pair lies on the curve w^2 = z^3 - alpha, i.e. M^2 - L^3 + alpha = 0.
print("M^2 - L^3 + alpha =", catalog.burchnall_chaundy_residual(L, M))

# %%
# Replacing x^3 by x^2 in the last term of M breaks commutativity.
Lp, Mp = catalog.dixmier_rank2(as_printed=True)
print("with x^2 instead of x^3, [L, M] has order", commutator(Lp, Mp).order)

# %%
# Rank 3: H = D^3 + x^2 + alpha. Squaring M composes operators of order 18.
L3, M3 = catalog.dixmier_rank3()
print("rank 3: [L, M] =", commutator(L3, M3), " M^2 - L^3 + alpha =", catalog.burchnall_chaundy_residual(L3, M3))

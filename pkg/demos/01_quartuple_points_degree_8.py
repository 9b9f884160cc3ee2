"""Nine general 4-points of P^3 fail to impose independent conditions on octics.

Run with ``python3 demos/01_quartuple_points_degree_8.py``.
"""

# %%
import numpy as np

from postulate import FatPointScheme, build_matrix, check_postulation, rank
from postulate.gfp import DEFAULT_PRIME

# Nine 4-points impose 9 * 20 = 180 conditions on the 165 octic monomials,
# so the expected dimension of octics through them is zero.
nine = FatPointScheme.general(3, {4: 9})
print("degree", nine.degree, "monomials", 165)

# %%
# One random specialization over GF(31991): a 180 x 165 matrix.
m = build_matrix(nine, 8, rng=np.random.default_rng(1))
print("matrix", m.shape, "rank", rank(m, DEFAULT_PRIME))

# %%
# The rank is one short.  Nine general points lie on a unique quadric Q, and
# Q^4 is an octic vanishing to order 4 at each of them.
report = check_postulation(nine, 8)
print(report.verdict.value, "rank", report.rank, "defect", report.defect, "trials", report.trials_used)

# %%
# The other quartic-type failures in degree 8.
for x, y, z in [(8, 1, 0), (8, 0, 1), (8, 0, 2), (7, 2, 1)]:
    r = check_postulation(FatPointScheme.quartic_type(x, y, z), 8)
    print(f"x={x} y={y} z={z}: {r.verdict.value:9s} rank {r.rank}/{min(r.N, r.scheme_degree)}")

# %%
# A tenth general point is not on Q, so it kills Q^4 and the rank becomes full.
bigger = nine.union(FatPointScheme.general(3, {1: 1}))
print("nine 4-points + one point:", check_postulation(bigger, 8).rank)

"""Sweep every (x, y, z) near the expected-dimension boundary in one degree.

A triple is on the boundary when eps = binom(d+3, 3) - 20x - 10y - 4z lies
in [-19, 3]; these are the cases that decide good postulation for all
unions of 4-, 3- and 2-points in that degree.
"""

# %%
import sys
from collections import Counter

from postulate.schemes import boundary_triples
from postulate.survey import Summary, SweepConfig, run_sweep

d = int(sys.argv[1]) if len(sys.argv) > 1 else 9
print(f"d={d}: {len(boundary_triples(d))} boundary triples")

# %%
records, _ = run_sweep(SweepConfig(d, d))
summary = Summary.of(records)
print(f"good {summary.good}, defective {summary.defective}, {summary.ms / 1e3:.1f}s")

# %%
# Cases per value of eps; positive eps leaves forms over, negative eps
# means more conditions than monomials.
by_eps = Counter(r.epsilon for r in records)
for eps in sorted(by_eps):
    print(f"eps={eps:+3d}  {by_eps[eps]:4d} cases")

# %%
bad = [(r.x, r.y, r.z, r.defect) for r in records if not r.good]
print("defective:", bad if bad else "none")

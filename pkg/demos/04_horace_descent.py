"""Follow the Horace descent for 662 quadruple points and one double point in degree 41.

Each step pushes components onto a plane H until the trace fills
binom(t+2, 2), takes the residual, and peels off the simple points of H.
The descent ends when everything sits on H with room to spare.
"""

# %%
import random

from postulate import run_induction
from postulate.schemes import boundary_triples, epsilon

trace = run_induction(41, 662, 0, 1)
print("epsilon", trace.epsilon, "status", trace.status.value)

# %%
# One line per step: degree t, alpha = deg Y_t, simple points split off,
# the gap beta left after moving plain points, and the step type.
print(trace.to_text())

# %%
# The first step moves as many 4-points as fit: 10 * k4 <= binom(43, 2) = 903.
first = trace.steps[0]
print("moved (k4, k3, k2):", first.moved, "beta:", first.beta, "efg:", first.efg)

# %%
# Global counting checks, evaluated on this run.
for name, ok in trace.global_checks:
    print(f"{name:22s} {'ok' if ok else 'FAIL'}")

# %%
# A few random boundary triples in higher degree.
rng = random.Random(0)
for d in (45, 50, 60):
    x, y, z = rng.choice(boundary_triples(d))
    t = run_induction(d, x, y, z)
    print(f"d={d} (x,y,z)=({x},{y},{z}) eps={epsilon(d, x, y, z):+d}: "
          f"{t.status.value}, {t.filled_steps} filled steps, ends in degree {t.final_degree}")

"""
Brute-force oracles
===================

Two checks that never use the closed-form laws.  A grid search maximises
entropy directly over feasible occupation vectors, and a perturbation test
probes a candidate with random moves that conserve both constraints.
"""
# %%
import numpy as np

from maxentlab import bosonic_occupation
from maxentlab.oracle import grid_search_maxent, perturbation_test

E = np.array([0.0, 1.0, 2.0])
analytic = bosonic_occupation(E, beta=1.0, alpha=0.5).values
U, P = float(analytic @ E), float(analytic.sum())

for step in (0.05, 0.02, 0.01):
    found = grid_search_maxent(E, "bosonic", U, P, grid_step=step)
    gap = np.max(np.abs(found.occupations.values - analytic))
    print(f"step {step}: {found.evaluated} feasible points, gap to analytic law {gap:.4f}")

# %%
E = np.array([0.5, 1.0, 2.0])
analytic = bosonic_occupation(E, beta=0.6, alpha=0.8).values
U, P = float(analytic @ E), float(analytic.sum())
print("analytic solution survives perturbation:", perturbation_test(E, analytic, "bosonic"))

# Double the middle occupation and rebalance the outer two so both
# constraints still hold; entropy can now be raised.
bad = analytic.copy()
bad[1] *= 2
bad[[0, 2]] = np.linalg.solve([[1.0, 1.0], [E[0], E[2]]], [P - bad[1], U - bad[1] * E[1]])
print("corrupted vector survives perturbation:", perturbation_test(E, bad, "bosonic"))

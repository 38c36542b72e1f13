"""
Solving for the Lagrange multipliers
====================================

Maximising entropy at fixed total energy (and optionally fixed particle
number) gives the Bose-Einstein and Fermi-Dirac laws.  Given the targets,
the solvers recover beta and alpha.
"""
# %%
import numpy as np

from maxentlab import bosonic_occupation, exclusion_occupation, solve_alpha_beta, solve_beta

# Photon-like modes: no particle constraint, alpha = 0.
sol = solve_beta([1.0, 2.0], "bosonic", target_energy=1.0)
print("Planck modes:", sol.to_dict())

# %%
# Both constraints for bosons on three levels.
sol = solve_alpha_beta([1.0, 2.0, 3.0], "bosonic", target_energy=2.5, target_particles=1.5)
print(f"alpha = {sol.alpha:.15f}, beta = {sol.beta:.15f}")
print("occupations:", sol.occupations.values)

# %%
# Round trip for fermions: generate occupations, then forget the multipliers.
E = np.array([0.0, 0.5, 1.0, 2.0])
n = exclusion_occupation(E, beta=1.5, alpha=-0.7)
sol = solve_alpha_beta(E, "exclusion", float(n.values @ E), n.total)
print(f"recovered alpha = {sol.alpha:.12f}, beta = {sol.beta:.12f}")

# %%
# At large alpha + beta*E both statistics approach the Boltzmann factor.
for x in (1.0, 5.0, 10.0):
    b = bosonic_occupation([x], 1.0).values[0]
    f = exclusion_occupation([x], 1.0).values[0]
    print(f"x = {x:>4}: bosonic {b:.6e}  exclusion {f:.6e}  exp(-x) {np.exp(-x):.6e}")

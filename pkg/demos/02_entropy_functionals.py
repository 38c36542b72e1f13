"""
Entropy functionals
===================

Three entropies of an occupation vector, all in nats: the Gibbs entropy of
a probability distribution, the exclusion form for occupations in [0, 1],
and the bosonic form for unbounded occupations.  At small occupations the
last two agree with each other and with -n ln n + n.
"""
# %%
import numpy as np

from maxentlab import bosonic_entropy, exclusion_entropy, gibbs_entropy, low_occupation_deviation

print("Gibbs, uniform over 8:", gibbs_entropy(np.full(8, 1 / 8)), "= ln 8 =", np.log(8))
print("exclusion, half filling of 8:", exclusion_entropy(np.full(8, 0.5)))
print("bosonic, one particle per state, 8 states:", bosonic_entropy(np.ones(8)))

# %%
# The two per-state forms merge as n -> 0.
for n in (0.5, 0.1, 1e-2, 1e-4):
    values = np.full(4, n)
    print(f"n = {n:<7g} exclusion = {exclusion_entropy(values):.6e}  bosonic = {bosonic_entropy(values):.6e}"
          f"  max deviation from -n ln n + n = {low_occupation_deviation(values, 'bosonic'):.1e}")

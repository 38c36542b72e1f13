"""
Counting microstates
====================

How many ways can P particles sit in N states?  With at most one particle
per state the answer is C(N, P); with unlimited occupancy it is
C(N + P - 1, P).  We check both against brute-force enumeration and then
watch the Stirling form of ln W converge as the system grows.
"""
# %%
from maxentlab import EnsembleSpec, Kind, count_microstates, stirling_entropy, stirling_relative_error
from maxentlab.oracle import enumerate_occupations

for kind in (Kind.EXCLUSION, Kind.BOSONIC):
    spec = EnsembleSpec(n_states=3, n_particles=2, kind=kind)
    vectors = list(enumerate_occupations(spec))
    print(f"{kind}: W = {count_microstates(spec).exact}, enumerated {len(vectors)}")
    for v in vectors:
        print("   ", v)

# %%
# Large ensembles keep only the logarithm.  Past N + P = 10000 it is an
# exact log-sum, so comparing it with Stirling is not circular.
for k in (10, 100, 1000, 10_000, 100_000):
    spec = EnsembleSpec(k, k, Kind.BOSONIC)
    count = count_microstates(spec)
    print(f"N = P = {k:>6}: ln W = {count.log_value:14.6f}  "
          f"Stirling = {stirling_entropy(spec):14.6f}  rel. error = {stirling_relative_error(spec):.2e}")

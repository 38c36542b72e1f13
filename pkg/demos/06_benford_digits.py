"""
Leading digits of a 1/x density
===============================

A density proportional to 1/x over whole decades puts log10(1 + 1/d) of
its mass on leading digit d.  We compare that closed form with seeded
samples.
"""
# %%
import numpy as np

from maxentlab.analysis import benford_frequencies, benford_law

law = benford_law()
sampled = benford_frequencies(decades=6, mode="sampled", samples=1_000_000, seed=42)
for d, (p, q) in enumerate(zip(law, sampled), start=1):
    print(f"{d}: law {p:.5f}  sampled {q:.5f}")
print("sum of law:", law.sum(), " max deviation:", np.max(np.abs(sampled - law)))

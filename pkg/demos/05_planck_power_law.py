"""
The Planck curve on log-log axes
================================

With phi = beta*E, the Planck occupation 1/(e^phi - 1) behaves like 1/phi
for small phi (slope -1 on a log-log plot) and like e^-phi for large phi.
The table below marks each point by regime; a plot is drawn when
matplotlib is available.
"""
# %%
import math
from collections import Counter

from maxentlab.analysis import figure1_table, numeric_slope, rayleigh_jeans_gap

table = figure1_table(1e-4, 20.0, 200)
print(Counter(table.column("regime")))
for phi in (1e-4, 1e-3, math.log(2), 5.0):
    print(f"phi = {phi:<8.4g} numeric slope = {numeric_slope(phi, 1.001):+.6f}  "
          f"gap to 1/phi = {rayleigh_jeans_gap(phi):.4f}")

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    colours = {"PowerLaw": "tab:blue", "Crossover": "tab:orange", "Canonical": "tab:green"}
    fig, ax = plt.subplots(figsize=(5, 4))
    for regime, colour in colours.items():
        rows = [r for r in table.rows if r[5] == regime]
        ax.plot([r[2] for r in rows], [r[3] for r in rows], ".", color=colour, label=regime)
    ax.axvline(math.log(math.log(2)), color="grey", lw=0.8, ls="--")
    ax.set_xlabel("ln phi")
    ax.set_ylabel("ln n")
    ax.legend()
    fig.tight_layout()
    fig.savefig("planck_loglog.png", dpi=120)
    print("wrote planck_loglog.png")

"""
Maximal average fidelity and the final measurement
==================================================

When the last attempt fails Alice can still measure her spare qubit.  A plain
``|+>, |->`` measurement leaves Bob with an imperfect copy; a basis matched to
the collapsed state sometimes recovers the input exactly.  Averaged over all
inputs, the fidelity falls as more attempts are allowed, because each failed
attempt leaves a less useful state behind.
"""

import numpy as np
import matplotlib.pyplot as plt

from pqt.sweeps import SweepSpec, maf_rows

spec = SweepSpec(points=31, depths=(0, 1, 2), strategies=("plain-vnm", "matched-vnm"))
rows = maf_rows(spec, jobs=1)

fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
for ax, strategy in zip(axes, ("plain-vnm", "matched-vnm")):
    for depth in spec.depths:
        sel = [r for r in rows if r["depth"] == depth and r["strategy"] == strategy]
        ax.plot([r["c"] for r in sel], [r["maf"] for r in sel], label=f"{depth} repetitions")
    ax.set_title(strategy)
    ax.set_xlabel("concurrence C")
axes[0].set_ylabel("average fidelity")
axes[0].legend()

###############################################################################
# Matching the final basis never lowers the chance of an exact transfer.

for depth in spec.depths:
    plain = np.array([r["success_prob"] for r in rows
                      if r["depth"] == depth and r["strategy"] == "plain-vnm"])
    matched = np.array([r["success_prob"] for r in rows
                        if r["depth"] == depth and r["strategy"] == "matched-vnm"])
    print(f"depth {depth}: largest gain from matching {np.max(matched - plain):.4f}")

plt.show()

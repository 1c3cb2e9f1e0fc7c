"""
Success probability versus channel concurrence
==============================================

Each extra attempt recovers part of what the previous one lost.  The gain
shrinks quickly: most of the improvement comes from the first repetition.
"""

import numpy as np
import matplotlib.pyplot as plt

from pqt import analytic
from pqt.sweeps import SweepSpec, sweep_rows

spec = SweepSpec(points=41, depths=(0, 1, 2, 3), strategies=("continue",))
rows = sweep_rows(spec, jobs=1)

###############################################################################
# The enumerated tree and the closed forms should lie on top of each other.

worst = max(r["delta"] for r in rows)
print(f"largest enumeration / closed-form gap: {worst:.2e}")

fig, ax = plt.subplots()
for depth in spec.depths:
    sel = [r for r in rows if r["depth"] == depth]
    c = np.array([r["c"] for r in sel])
    ax.plot(c, [r["p_enum"] for r in sel], "o", ms=3, label=f"{depth} repetitions")
    ax.plot(c, analytic.p_success(depth, c), "k-", lw=0.6)
ax.set_xlabel("concurrence C")
ax.set_ylabel("success probability")
ax.legend()

###############################################################################
# Increments at a few concurrences: each is smaller than the one before.

for c in (0.3, 0.6, 0.9, 1.0):
    inc = [float(analytic.increment(n, c)) for n in (1, 2, 3)]
    print(f"C={c:.1f}: " + ", ".join(f"{x:.5f}" for x in inc))

plt.show()

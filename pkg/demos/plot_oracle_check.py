"""
Closed forms against brute force
================================

Eve's Holevo quantities from the eigenvalue formulas, set against a direct
Gram-matrix diagonalisation of her tapped coherent states.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dpts import holevo_brute, holevo_primary, time_bit_holevo
from dpts.holevo import gamma

mu = 0.3
ts = np.linspace(0.001, 0.999, 60)
g = np.array([gamma(mu, t) for t in ts])
brute = [holevo_brute(mu, t) for t in ts]

chi0 = np.array([holevo_primary(x) for x in g])
chi0_num = np.array([b.chi0 for b in brute])
print("max |chi0 closed - numeric|:", np.abs(chi0 - chi0_num).max())

# the two-slot time-bit bracket; ``printed=True`` swaps in the variant whose
# early/late overlaps are gamma**2, which the numerics do not support
bracket = np.array([time_bit_holevo(x) for x in g])
printed = np.array([time_bit_holevo(x, printed=True) for x in g])
bracket_num = np.array([b.chi1_bracket for b in brute])
print("max |bracket closed - numeric|:", np.abs(bracket - bracket_num).max())
print("max |printed variant - numeric|:", np.abs(printed - bracket_num).max())

# adding the conditioned entropy instead of subtracting it overshoots the
# one-symbol ceiling as gamma -> 0
print("chi0 at gamma=0, subtracted / added:", holevo_primary(0.0), holevo_primary(0.0, printed_sign=True))

fig, ax = plt.subplots()
ax.plot(ts, chi0, label="chi0 closed form")
ax.plot(ts, chi0_num, "k.", ms=3, label="chi0 Gram")
ax.plot(ts, bracket, label="time-bit bracket")
ax.plot(ts, printed, "--", label="bracket, gamma^2 overlaps")
ax.plot(ts, bracket_num, "k.", ms=3)
ax.set_xlabel("transmittance t")
ax.set_ylabel("Holevo quantity (base 4)")
ax.legend()
fig.savefig("oracle_check.png", dpi=120)

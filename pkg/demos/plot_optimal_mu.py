"""
Optimal mean photon number
==========================

The rate-maximising mu for each protocol as the channel gets longer, once
per pulse and once per second with saturating detectors.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dpts import dead_time_limited_params, optimize_mu

distances = np.linspace(5, 150, 30)
fig, ax = plt.subplots()
for name in ("dpts", "dps"):
    for objective, style in (("bits_per_pulse", "--"), ("bits_per_second", "-")):
        mu = [optimize_mu(dead_time_limited_params(length_km=L), name, objective=objective).mu for L in distances]
        ax.plot(distances, mu, style, label=f"{name.upper()}, {objective.replace('_', ' ')}")
        print(f"{name:>4} {objective:>15}: mu_opt " + " ".join(f"{m:.3f}" for m in mu[::6]))

ax.set_xlabel("distance (km)")
ax.set_ylabel("optimal mu")
ax.legend()
fig.savefig("optimal_mu.png", dpi=120)

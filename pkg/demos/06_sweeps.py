"""Figure presets: one swept parameter, CSV out, and a quick plot."""

#%%
import io
import math

import matplotlib.pyplot as plt
import numpy as np

from cvmonogamy.sweep import PRESETS, get_preset, run_sweep, to_csv

print(sorted(PRESETS))
spec = get_preset("fig3b")
print(spec.description, spec.header())

#%%
rows = run_sweep(spec)
csv = to_csv(spec, rows)
print(csv.splitlines()[0])
print(csv.splitlines()[-1], " e^-4 =", math.exp(-4))

#%% D_BA, D_BC and their sum against the splitter ratio.
data = np.genfromtxt(io.StringIO(csv), delimiter=",", names=True)
fig, ax = plt.subplots()
for col in ("D_BA", "D_BC", "D_sum"):
    ax.plot(data["eta0"], data[col], label=col)
ax.axhline(1, color="gray", lw=0.5)
ax.set_xlabel("eta0")
ax.legend()

#%% Thermal seeding: collective steering is lost once (2n+1)/cosh 2r exceeds 1.
spec = get_preset("fig7e")
data = np.genfromtxt(io.StringIO(to_csv(spec, run_sweep(spec))), delimiter=",", names=True)
fig, ax = plt.subplots()
ax.plot(data["nB"], data["S_coll"])
ax.axvline((math.cosh(2) - 1) / 2, ls="--", color="gray")
ax.axhline(1, color="gray", lw=0.5)
ax.set_xlabel("n_th")
ax.set_ylabel("S_coll")
plt.show()

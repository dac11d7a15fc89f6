"""How tightly the product of pair Ent values meets its lower bound M_B on the ideal circuit.

The gap closes with squeezing but is largest near unbalanced splitters.
"""

#%%
import numpy as np

from cvmonogamy.network import MODE_A, MODE_B, MODE_C, CircuitParams, build_circuit, closed_form_report
from cvmonogamy.quantifiers import check_monogamy

etas = np.linspace(0.05, 0.95, 181)


def relative_gap(r):
    out = []
    for e in etas:
        q = check_monogamy(build_circuit(CircuitParams(r, e)), MODE_B, MODE_A, MODE_C)
        out.append((q.Ent_BA * q.Ent_BC - q.M_B) / q.M_B)
    return np.array(out)


#%%
for r in (1, 2, 3, 4, 5):
    gap = relative_gap(r)
    k = int(np.argmax(gap))
    print(f"r={r}  max gap {gap[k]:.4f} at eta0={etas[k]:.3f}   gap at eta0=0.5: {gap[90]:.5f}")

#%% The closed forms give the same numbers, so the gap is not a numerical artifact.
q = closed_form_report(CircuitParams(2.0, 0.05))
print((q.Ent_BA * q.Ent_BC - q.M_B) / q.M_B)

#%% Absolute gap on the r=2 curve stays small, which is what a plot shows.
gaps = []
for e in etas:
    q = check_monogamy(build_circuit(CircuitParams(2.0, e)), MODE_B, MODE_A, MODE_C)
    gaps.append(q.Ent_BA * q.Ent_BC - q.M_B)
print("max |Ent_prod - M_B| at r=2:", max(gaps))

"""Analytic expressions per scenario family against the operation-by-operation construction."""

#%%
import numpy as np

from cvmonogamy.network import (
    FAMILIES,
    MODE_A,
    MODE_B,
    MODE_C,
    CircuitParams,
    NoClosedFormError,
    build_circuit,
    closed_form_report,
    effective_eta_F,
    scenario_family,
)
from cvmonogamy.quantifiers import check_monogamy

print(FAMILIES)

examples = [
    CircuitParams(2.0, 0.3),
    CircuitParams(2.0, 0.5, etaB=0.5),
    CircuitParams(1.0, 0.5, etaB=0.8),
    CircuitParams(2.0, 0.6, etaA=0.8, etaC=0.5),
    CircuitParams(1.0, 0.5, nB=1.0, nF=1.0),
]

#%% Both routes, field by field.
for p in examples:
    numeric = check_monogamy(build_circuit(p), MODE_B, MODE_A, MODE_C).to_dict()
    oracle = closed_form_report(p).to_dict()
    worst = max(abs(numeric[k] - oracle[k]) for k in numeric)
    print(f"{scenario_family(p):<11} max |delta| = {worst:.2e}   S_coll = {numeric['S_coll']:.6f}")

#%% Loss on A and C enters through one effective transmission.
p = examples[3]
print("eta_F =", effective_eta_F(p))

#%% Mixed cases have no printed formula and are only built constructively.
mixed = CircuitParams(1.0, 0.5, etaB=0.7, etaC=0.6)
try:
    closed_form_report(mixed)
except NoClosedFormError as exc:
    print("no closed form:", exc)
print(check_monogamy(build_circuit(mixed), MODE_B, MODE_A, MODE_C).min_residual)

#%% A 20x20 grid of the ideal family.
worst = 0.0
for r in np.linspace(0, 2, 20):
    for e in np.linspace(0, 1, 20):
        p = CircuitParams(r, e)
        a = check_monogamy(build_circuit(p), MODE_B, MODE_A, MODE_C).to_dict()
        b = closed_form_report(p).to_dict()
        worst = max(worst, max(abs(a[k] - b[k]) for k in a))
print("ideal grid max |delta| =", worst)

"""Entanglement and steering quantifiers on the B-A-C splitter circuit, and the five monogamy residuals."""

#%%
import math

import numpy as np

from cvmonogamy.network import MODE_A, MODE_B, MODE_C, CircuitParams, build_circuit
from cvmonogamy.quantifiers import (
    check_monogamy,
    duan_D,
    ent_g,
    ent_opt,
    optimal_inference,
    search_inference,
    steering_S_collective,
    steering_S_pair,
)

state = build_circuit(CircuitParams(r=1.0, eta0=0.5))

#%% D below 1 witnesses entanglement. With a balanced splitter both pairs sit just above 1.
print("D_BA =", duan_D(state, MODE_B, MODE_A))
print("D_BC =", duan_D(state, MODE_B, MODE_C))

#%% Steering: inference variances of B's quadratures given measurements on the other modes.
print("S_B|A  =", steering_S_pair(state, MODE_B, MODE_A))
print("S_B|C  =", steering_S_pair(state, MODE_B, MODE_C))
print("S_B|AC =", steering_S_collective(state, MODE_B, [MODE_A, MODE_C]), " 1/cosh 2 =", 1 / math.cosh(2))

#%% The best quadrature angles come out of the regression weights in closed form.
# A brute-force angle search lands on the same value.
exact, angles = optimal_inference(state, (MODE_B, 0.0), [MODE_A, MODE_C])
searched, found = search_inference(state, (MODE_B, 0.0), [MODE_A, MODE_C], num=32)
print(exact, np.degrees(angles))
print(searched, np.degrees(found))

#%% Ent as a function of the gain, and its minimum.
for g in (0.25, 0.5, 1.0, 2.0):
    print(f"g={g:<5} Ent_BA={ent_g(state, MODE_B, MODE_A, g):.6f}")
print("optimum", ent_opt(state, MODE_B, MODE_A))

#%% All quantifiers at once. Residuals are LHS - RHS, so non-negative means the inequality holds.
report = check_monogamy(state, MODE_B, MODE_A, MODE_C)
for name, value in report.residuals.items():
    print(f"{name:<11} {value: .6f}")

#%% Residual r4 shrinks as squeezing grows: the Ent bound saturates only asymptotically.
for r in (0.5, 1, 2, 3, 4):
    print(r, check_monogamy(build_circuit(CircuitParams(r, 0.5)), MODE_B, MODE_A, MODE_C).r4)

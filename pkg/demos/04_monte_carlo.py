"""Conditional variances estimated from phase-space samples, without any Schur complement."""

#%%
import math

import numpy as np

from cvmonogamy.gaussian import conditional_variance
from cvmonogamy.montecarlo import (
    empirical_conditional_variance,
    empirical_linear_variance,
    regression_conditional_variance,
    sample_wigner,
)
from cvmonogamy.network import MODE_A, MODE_B, MODE_C, CircuitParams, build_circuit

state = build_circuit(CircuitParams(1.0, 0.5))
batch = sample_wigner(state, 1_000_000, seed=0)
print(batch.data.shape)
print(np.cov(batch.data, rowvar=False).round(3))

#%% Binned estimate, regression estimate and the exact value for X_B given X_A and X_C.
conds = [(MODE_A, 0.0), (MODE_C, 0.0)]
exact = conditional_variance(state, (MODE_B, 0.0), conds)
binned, bse = empirical_conditional_variance(batch, (MODE_B, 0.0), conds, return_stderr=True)
reg, rse = regression_conditional_variance(batch, (MODE_B, 0.0), conds, return_stderr=True)
print(f"exact {exact:.5f}  binned {binned:.5f} +- {bse:.5f}  regression {reg:.5f} +- {rse:.5f}")

#%% Coarse bins bias the binned estimate upward; the bias fades as bins shrink.
one = [(MODE_A, 0.0)]
exact_one = conditional_variance(state, (MODE_B, 0.0), one)
for k in (10, 50, 200, 1000, 10_000):
    v = empirical_conditional_variance(batch, (MODE_B, 0.0), one, num_bins=k)
    print(f"{k:>6} bins  relative bias {v / exact_one - 1:+.4f}")

#%% No fixed gain beats the conditional variance.
gains = np.linspace(-2, 2, 9)
lin = [empirical_linear_variance(batch, (MODE_B, 0.0), (MODE_A, 0.0), g)[0] for g in gains]
print(np.round(lin, 4), ">=", round(exact_one, 4))

#%% The steering product from sampled inference variances.
sx = regression_conditional_variance(batch, (MODE_B, 0.0), conds)
sp = regression_conditional_variance(batch, (MODE_B, math.pi / 2), [(MODE_A, math.pi / 2), (MODE_C, math.pi / 2)])
print("S_B|AC from samples:", math.sqrt(sx * sp), " exact:", 1 / math.cosh(2))

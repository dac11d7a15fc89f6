"""Gaussian states as (mean, covariance) pairs.

Vacuum variance is 1 and quadratures are interleaved X1, P1, X2, P2, ...
"""

#%%
import numpy as np

from cvmonogamy.gaussian import (
    GaussianState,
    apply_beamsplitter,
    apply_loss,
    is_physical,
    partial_trace,
    reduced_two_mode,
    tensor,
    two_mode_squeezed,
    vacuum_state,
)

np.set_printoptions(precision=4, suppress=True)

tms = two_mode_squeezed(1.0)
print(tms.cov)
print("cosh 2 =", np.cosh(2), " sinh 2 =", np.sinh(2))

#%% Loss is a beam splitter with a vacuum ancilla that is traced out afterwards.
lossy = apply_loss(tms, 0, 0.5)
print(lossy.cov)
print("n = 0.5 cosh 2 + 0.5 :", 0.5 * np.cosh(2) + 0.5)

#%% Splitting one arm of the squeezed pair gives the three-mode state used everywhere else.
three = tensor(tms, vacuum_state(1))
three = apply_beamsplitter(three, 2, 1, 0.5)
print(three.num_modes, "modes")
print(reduced_two_mode(three, 0, 1))
print(reduced_two_mode(three, 0, 2))

#%% Physicality: cov + iJ must be positive semidefinite.
print(is_physical(three))
squeezed_too_far = three.cov.copy()
squeezed_too_far[0, 0] = 0.1
print(is_physical(GaussianState(three.mean, squeezed_too_far)))

#%% Tracing out C leaves the B-A pair.
print(partial_trace(three, [0, 1]).cov)

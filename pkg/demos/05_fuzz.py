"""Random physical three-mode states and a hunt for monogamy violations."""

#%%
import json

from cvmonogamy.fuzz import build_from_recipe, circuit_recipe, evaluate_recipe, fuzz_monogamy, random_recipe
from cvmonogamy.gaussian import is_physical
from cvmonogamy.network import CircuitParams

recipe = random_recipe(3, seed=1, depth=2)
print(json.dumps(recipe, indent=1))
print(is_physical(build_from_recipe(recipe)))

#%% A short run. Every minimum comes with the recipe that produced it.
report = fuzz_monogamy(500, seed=0, depth=6)
print(json.dumps(report.min_residuals, indent=1))
print("steering fraction", report.steering_fraction, " ok", report.ok)
witness = report.worst_state_params["r4"]
print(witness["trial"], witness["roles"])

#%% Rebuilding the witness gives back the same minimum.
again = evaluate_recipe(witness["recipe"], {})
print(again.min_residuals["r4"], report.min_residuals["r4"])

#%% Strongly squeezed balanced circuits come close to saturating r4.
# The single random trial here has depth 0. A product state meets the bound exactly
# (both gains drop to 0), so it already counts once at the tightest threshold.
near = [circuit_recipe(CircuitParams(r, 0.5)) for r in (2.0, 3.0, 4.0)]
for tol in (1e-6, 1e-3, 1e-2):
    print(tol, fuzz_monogamy(1, 0, 0, extra_recipes=near, saturation_tol=tol).saturation_count)

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvmonogamy import fuzz
from cvmonogamy.fuzz import (
    RESIDUAL_NAMES,
    FuzzReport,
    build_from_recipe,
    circuit_recipe,
    evaluate_recipe,
    fuzz_monogamy,
    random_recipe,
    trial_seed,
)
from cvmonogamy.gaussian import is_physical
from cvmonogamy.network import CircuitParams, build_circuit


@given(st.integers(0, 2**32), st.integers(0, 8))
@settings(max_examples=40)
def test_random_states_are_physical(seed, depth):
    ok, worst = is_physical(build_from_recipe(random_recipe(3, seed, depth)))
    assert ok, worst


def test_recipe_is_json_and_deterministic():
    recipe = random_recipe(3, 42, 5)
    assert json.loads(json.dumps(recipe)) == recipe
    assert random_recipe(3, 42, 5) == recipe
    assert random_recipe(3, 43, 5) != recipe
    assert len(recipe) == 1 + 4 * 5


@pytest.mark.parametrize("params", [CircuitParams(1.2, 0.3), CircuitParams(0.8, 0.6, 0.7, 0.9, 0.4, 0.5, 1.5)])
def test_circuit_recipe_rebuilds_circuit(params):
    a, b = build_from_recipe(circuit_recipe(params)), build_circuit(params)
    assert (a.cov == b.cov).all()


def test_recipe_errors():
    with pytest.raises(ValueError):
        build_from_recipe([])
    with pytest.raises(ValueError):
        build_from_recipe([{"op": "tms", "modes": [0, 1], "r": 1}])
    with pytest.raises(ValueError):
        build_from_recipe([{"op": "vacuum", "num_modes": 2}, {"op": "swap"}])
    with pytest.raises(ValueError):
        random_recipe(1, 0, 2)
    with pytest.raises(ValueError):
        random_recipe(3, 0, -1)


def test_depth_zero_thermal_products_have_no_steering():
    report = fuzz_monogamy(50, 1, 0)
    assert report.ok
    assert report.steering_trials == 0
    # uncorrelated thermal modes: D sums to at least 1, with equality only for vacua
    assert report.min_residuals["r1"] >= 0


def test_fuzz_small_run_is_clean_and_reproducible():
    a = fuzz_monogamy(200, 7, 6)
    b = fuzz_monogamy(200, 7, 6)
    assert a.to_json() == b.to_json()
    assert a.ok, a.violations()
    assert a.trials == 200
    assert set(a.min_residuals) == set(RESIDUAL_NAMES)
    assert 0.5 < a.steering_fraction <= 1.0


def test_witness_rebuilds_minimizing_state():
    report = fuzz_monogamy(60, 3, 4)
    for name, value in report.min_residuals.items():
        witness = report.worst_state_params[name]
        assert witness["seed"] == trial_seed(3, witness["trial"])
        again = evaluate_recipe(witness["recipe"], {})
        assert again.min_residuals[name] == value


def test_merge_is_order_independent_in_values():
    parts = [evaluate_recipe(random_recipe(3, trial_seed(5, k), 4), {"trial": k, "seed": trial_seed(5, k)}) for k in range(12)]
    left = FuzzReport()
    for p in parts:
        left = left.merge(p)
    # grouping does not change anything, witnesses included
    grouped = FuzzReport().merge(parts[0]).merge(parts[1])
    rest = FuzzReport()
    for p in parts[2:]:
        rest = rest.merge(p)
    grouped = grouped.merge(rest)
    assert left.to_dict() == grouped.to_dict()
    assert left.to_dict() == fuzz_monogamy(12, 5, 4).to_dict()


def test_injected_saturating_state_is_counted():
    # a balanced splitter on strong squeezing nearly saturates the Ent bound (r4 ~ 7e-5 at r=4)
    recipe = circuit_recipe(CircuitParams(4.0, 0.5))
    loose = fuzz_monogamy(5, 0, 3, extra_recipes=[recipe], saturation_tol=0.02)
    assert loose.trials == 6
    assert loose.saturation_count >= 1
    assert fuzz_monogamy(5, 0, 3, extra_recipes=[recipe]).saturation_count <= loose.saturation_count


def test_nonphysical_state_is_reported_not_evaluated(monkeypatch):
    # the recipe ops cannot leave the physical set, so fake a roundoff failure
    monkeypatch.setattr(fuzz, "is_physical", lambda state: (False, -1e-3))
    report = evaluate_recipe([{"op": "vacuum", "num_modes": 3}], {"injected": 0})
    assert report.nonphysical[0]["min_eigenvalue"] == -1e-3
    assert not report.ok
    assert report.min_residuals["r1"] == float("inf")


def test_worker_count_does_not_change_the_report():
    serial = fuzz_monogamy(600, 2, 3)
    parallel = fuzz_monogamy(600, 2, 3, workers=2)
    assert serial.to_json() == parallel.to_json()

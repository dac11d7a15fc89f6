import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvmonogamy.gaussian import is_physical, reduced_two_mode
from cvmonogamy.network import (
    MODE_A,
    MODE_B,
    MODE_C,
    CircuitParams,
    NoClosedFormError,
    NonPhysicalParameters,
    build_circuit,
    closed_form_covariances,
    closed_form_report,
    effective_eta_F,
    scenario_family,
)
from cvmonogamy.quantifiers import check_monogamy, duan_D, steering_S_collective

TOL = 1e-10


def grid(lo, hi, num=20):
    return np.linspace(lo, hi, num)


def family_params(family, x, y):
    """One point of a 2-parameter grid per family: ``x`` is r, ``y`` the family's own knob."""
    r = x
    if family == "ideal":
        return CircuitParams(r, y)
    if family == "loss_B":
        return CircuitParams(r, 0.3, etaB=y)
    if family == "equal_loss":
        return CircuitParams(r, y, etaB=y)
    if family == "loss_AC":
        return CircuitParams(r, 0.4, etaA=y, etaC=0.5 + 0.5 * y)
    return CircuitParams(r, y, nB=0.7, nF=0.2)


def compare(params):
    numeric = check_monogamy(build_circuit(params), MODE_B, MODE_A, MODE_C).to_dict()
    oracle = closed_form_report(params).to_dict()
    return max(abs(numeric[k] - oracle[k]) for k in numeric)


def test_constructive_and_closed_form_agree_ideal_grid():
    worst = max(compare(CircuitParams(r, e)) for r in grid(0, 2) for e in grid(0, 1))
    assert worst <= TOL


@pytest.mark.parametrize("family", ["loss_B", "equal_loss", "loss_AC", "thermal"])
def test_constructive_and_closed_form_agree_per_family(family):
    worst = 0.0
    for r in grid(0, 2, 8):
        for y in grid(0.05, 0.95, 8):
            p = family_params(family, r, y)
            if family != "thermal":
                assert scenario_family(p) == family or p.etaB == p.eta0
            worst = max(worst, compare(p))
    assert worst <= TOL


def test_closed_form_covariances_match_circuit():
    p = CircuitParams(1.3, 0.35, etaB=0.6)
    state = build_circuit(p)
    for key, (i, j) in {"BA": (MODE_B, MODE_A), "BC": (MODE_B, MODE_C)}.items():
        printed = closed_form_covariances(p)[key]
        built = reduced_two_mode(state, i, j)
        for field in ("n", "m", "c_x", "c_p"):
            assert getattr(printed, field) == pytest.approx(getattr(built, field), abs=1e-12)


@pytest.mark.parametrize("params", [CircuitParams(0, 0.5), CircuitParams(1, 0.0), CircuitParams(1, 1.0)])
def test_uncorrelated_pairs_fall_back_to_numeric_gain(params):
    # the printed gain divides by the correlation; both routes then minimize numerically
    assert compare(params) <= TOL
    assert check_monogamy(build_circuit(params), MODE_B, MODE_A, MODE_C).min_residual >= -1e-9


def test_family_routing():
    assert scenario_family(CircuitParams(1, 0.5)) == "ideal"
    assert scenario_family(CircuitParams(1, 0.5, etaB=0.5)) == "equal_loss"
    assert scenario_family(CircuitParams(1, 0.5, etaB=0.4)) == "loss_B"
    assert scenario_family(CircuitParams(1, 0.5, etaC=0.4)) == "loss_AC"
    assert scenario_family(CircuitParams(1, 0.5, nB=1)) == "thermal"
    with pytest.raises(NoClosedFormError):
        scenario_family(CircuitParams(1, 0.5, etaB=0.4, etaA=0.9))
    with pytest.raises(NoClosedFormError):
        scenario_family(CircuitParams(1, 0.5, nF=0.1, etaB=0.9))


@given(st.floats(0, 3), st.floats(0, 1))
@settings(max_examples=50)
def test_ideal_splitter_mirror(r, e):
    # swapping the splitter ratio swaps the roles of A and C
    a = check_monogamy(build_circuit(CircuitParams(r, e)), MODE_B, MODE_A, MODE_C)
    b = check_monogamy(build_circuit(CircuitParams(r, 1 - e)), MODE_B, MODE_A, MODE_C)
    assert a.D_BA == pytest.approx(b.D_BC, abs=1e-10)
    assert a.S_coll == pytest.approx(b.S_coll, abs=1e-10)


@given(st.floats(0, 3))
def test_balanced_splitter_is_symmetric(r):
    s = build_circuit(CircuitParams(r, 0.5))
    assert duan_D(s, MODE_B, MODE_A) == pytest.approx(duan_D(s, MODE_B, MODE_C), abs=1e-10)


@given(st.floats(0, 3), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 3), st.floats(0, 3))
@settings(max_examples=50)
def test_circuit_is_physical(r, e0, eB, eA, eC, nB, nF):
    ok, worst = is_physical(build_circuit(CircuitParams(r, e0, eB, eA, eC, nB, nF)))
    assert ok, worst


@given(st.floats(0, 3), st.floats(0, 1))
def test_collective_steering_is_that_of_the_pair(r, e):
    s = build_circuit(CircuitParams(r, e))
    # relative accuracy degrades like cosh(2r)^2 * eps, so pin the absolute error
    assert steering_S_collective(s, MODE_B, [MODE_A, MODE_C]) == pytest.approx(1 / math.cosh(2 * r), rel=0, abs=1e-10)


def test_effective_eta_F():
    assert effective_eta_F(CircuitParams(1, 0.6, etaA=0.8, etaC=0.5)) == pytest.approx(0.68)
    assert effective_eta_F(CircuitParams(1, 0.3)) == 1.0


def test_params_validation_and_json_round_trip():
    p = CircuitParams(1.5, 0.25, etaB=0.9, nF=0.5)
    assert CircuitParams.from_json(p.to_json()) == p
    assert json.loads(p.to_json())["etaB"] == 0.9
    assert p.replace(r=2).r == 2.0
    with pytest.raises(NonPhysicalParameters):
        CircuitParams(1, 1.2)
    with pytest.raises(NonPhysicalParameters):
        CircuitParams(1, 0.5, nB=-0.1)
    with pytest.raises(NonPhysicalParameters):
        CircuitParams(math.nan, 0.5)
    with pytest.raises(TypeError):
        CircuitParams("1", 0.5)
    with pytest.raises(TypeError):
        CircuitParams(True, 0.5)
    with pytest.raises(KeyError):
        CircuitParams.from_dict({"r": 1})
    with pytest.raises(KeyError):
        CircuitParams.from_dict({"r": 1, "eta0": 0.5, "gain": 2})

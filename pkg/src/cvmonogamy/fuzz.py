"""Random physical Gaussian states and a violation hunt over the monogamy residuals.

A state is described by a *recipe*: a JSON-serializable list of layer
descriptors, e.g. ``[{"op": "thermal", "occupations": [0.3, 1.2, 0.1]},
{"op": "tms", "modes": [0, 2], "r": -0.7}, ...]``. Every fuzzed state and
every reported witness carries its recipe, so failures can be rebuilt
exactly with :func:`build_from_recipe`.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .gaussian import (
    GaussianState,
    apply_beamsplitter,
    apply_loss,
    apply_phase_rotation,
    apply_two_mode_squeezing,
    is_physical,
    tensor,
    thermal_seeded_tms,
    thermal_state,
    vacuum_state,
)
from .network import MODE_A, MODE_B, MODE_C, CircuitParams
from .quantifiers import RESIDUAL_NAMES, RESIDUAL_TOL, check_monogamy

SQUEEZE_RANGE = (-2.0, 2.0)
LOSS_FLOOR = 0.1
SATURATION_TOL = 1e-6

# (steered, first steerer, second steerer); each mode takes the steered role once.
ROLE_ASSIGNMENTS = ((0, 1, 2), (1, 0, 2), (2, 0, 1))
EXTRA_CHECKS = ("steering_product", "collective_gain")
FUZZ_CHUNK = 250


def _pair(rng: np.random.Generator, num_modes: int) -> List[int]:
    return [int(k) for k in rng.choice(num_modes, size=2, replace=False)]


def random_recipe(num_modes: int, seed: int, depth: int) -> List[Dict]:
    """Recipe for a thermal product followed by ``depth`` random layers.

    Each layer applies, in order, a two-mode squeezer (``r`` uniform in
    [-2, 2]) on a random pair, a beam splitter (``eta`` in [0, 1]) on a
    random pair, a phase rotation on a random mode and a loss channel
    (``eta`` in [0.1, 1]) on a random mode.
    """
    if num_modes < 2:
        raise ValueError("need at least two modes")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    rng = np.random.default_rng(seed)
    recipe = [{"op": "thermal", "occupations": rng.exponential(1.0, num_modes).tolist()}]
    for _ in range(depth):
        recipe.append({"op": "tms", "modes": _pair(rng, num_modes), "r": float(rng.uniform(*SQUEEZE_RANGE))})
        recipe.append({"op": "beamsplitter", "modes": _pair(rng, num_modes), "eta": float(rng.uniform(0.0, 1.0))})
        recipe.append({"op": "phase", "mode": int(rng.integers(num_modes)), "theta": float(rng.uniform(0.0, 2 * math.pi))})
        recipe.append({"op": "loss", "mode": int(rng.integers(num_modes)), "eta": float(rng.uniform(LOSS_FLOOR, 1.0))})
    return recipe


def build_from_recipe(recipe: Sequence[Dict]) -> GaussianState:
    """Rebuild a state from its layer list. The first layer must create the modes."""
    if not recipe:
        raise ValueError("empty recipe")
    state = None
    for layer in recipe:
        op = layer.get("op")
        if op == "thermal":
            new = thermal_state(layer["occupations"])
            state = new if state is None else tensor(state, new)
        elif op == "vacuum":
            new = vacuum_state(int(layer.get("num_modes", 1)))
            state = new if state is None else tensor(state, new)
        elif op == "seeded_tms":
            new = thermal_seeded_tms(layer["r"], layer.get("nB", 0.0), layer.get("nF", 0.0))
            state = new if state is None else tensor(state, new)
        elif state is None:
            raise ValueError(f"recipe must start by creating modes, got {op!r}")
        elif op == "tms":
            state = apply_two_mode_squeezing(state, *layer["modes"], layer["r"])
        elif op == "beamsplitter":
            state = apply_beamsplitter(state, *layer["modes"], layer["eta"])
        elif op == "phase":
            state = apply_phase_rotation(state, layer["mode"], layer["theta"])
        elif op == "loss":
            state = apply_loss(state, layer["mode"], layer["eta"])
        else:
            raise ValueError(f"unknown recipe op {op!r}")
    return state


def random_physical_state(num_modes: int, seed: int, depth: int) -> GaussianState:
    return build_from_recipe(random_recipe(num_modes, seed, depth))


def circuit_recipe(params: CircuitParams) -> List[Dict]:
    """The tripartite circuit as a recipe; rebuilds the same state as ``build_circuit``."""
    return [
        {"op": "seeded_tms", "r": params.r, "nB": params.nB, "nF": params.nF},
        {"op": "loss", "mode": MODE_B, "eta": params.etaB},
        {"op": "vacuum", "num_modes": 1},
        {"op": "beamsplitter", "modes": [MODE_C, MODE_A], "eta": params.eta0},
        {"op": "loss", "mode": MODE_A, "eta": params.etaA},
        {"op": "loss", "mode": MODE_C, "eta": params.etaC},
    ]


def trial_seed(seed: int, index: int) -> int:
    """Independent 63-bit seed for trial ``index`` of a run seeded with ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


@dataclass
class FuzzReport:
    """Aggregated minima over a fuzz run.

    ``min_extras`` holds ``steering_product = min(S_BA * S_BC) - 1`` and
    ``collective_gain = min(S_BA, S_BC) - S_coll``; both must stay >= 0.
    ``worst_state_params`` maps each residual name (and each extra) to the
    recipe, derived seed and role assignment of the minimizing trial.
    """

    trials: int = 0
    min_residuals: Dict[str, float] = field(default_factory=lambda: {k: math.inf for k in RESIDUAL_NAMES})
    worst_state_params: Dict[str, Dict] = field(default_factory=dict)
    saturation_count: int = 0
    min_extras: Dict[str, float] = field(default_factory=lambda: {k: math.inf for k in EXTRA_CHECKS})
    steering_trials: int = 0
    nonphysical: List[Dict] = field(default_factory=list)

    @property
    def steering_fraction(self) -> float:
        return self.steering_trials / self.trials if self.trials else 0.0

    def violations(self, tol: float = RESIDUAL_TOL) -> Dict[str, float]:
        bad = {k: v for k, v in self.min_residuals.items() if v < -tol}
        bad.update({k: v for k, v in self.min_extras.items() if v < -tol})
        return bad

    @property
    def ok(self) -> bool:
        return not self.violations() and not self.nonphysical

    def _offer(self, key: str, value: float, witness: Dict, table: Dict[str, float]) -> None:
        if value < table[key]:
            table[key] = value
            self.worst_state_params[key] = witness

    def merge(self, other: "FuzzReport") -> "FuzzReport":
        """Combine two reports; ties keep ``self``'s witness so merging in index order is deterministic."""
        out = FuzzReport(
            trials=self.trials + other.trials,
            min_residuals=dict(self.min_residuals),
            worst_state_params=dict(self.worst_state_params),
            saturation_count=self.saturation_count + other.saturation_count,
            min_extras=dict(self.min_extras),
            steering_trials=self.steering_trials + other.steering_trials,
            nonphysical=self.nonphysical + other.nonphysical,
        )
        for key, value in other.min_residuals.items():
            if key in other.worst_state_params:
                out._offer(key, value, other.worst_state_params[key], out.min_residuals)
        for key, value in other.min_extras.items():
            if key in other.worst_state_params:
                out._offer(key, value, other.worst_state_params[key], out.min_extras)
        return out

    def to_dict(self) -> Dict:
        return {
            "trials": self.trials,
            "min_residuals": dict(self.min_residuals),
            "min_extras": dict(self.min_extras),
            "saturation_count": self.saturation_count,
            "steering_fraction": self.steering_fraction,
            "ok": self.ok,
            "worst_state_params": self.worst_state_params,
            "nonphysical": self.nonphysical,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def evaluate_recipe(recipe: Sequence[Dict], label: Dict, saturation_tol: float = SATURATION_TOL) -> FuzzReport:
    """Single-trial report for one recipe, over all three role assignments."""
    report = FuzzReport()
    report.trials = 1
    state = build_from_recipe(recipe)
    ok, worst = is_physical(state)
    if not ok:
        report.nonphysical.append({**label, "recipe": list(recipe), "min_eigenvalue": worst})
        return report
    saturated = steering = False
    for roles in ROLE_ASSIGNMENTS:
        q = check_monogamy(state, *roles)
        witness = {**label, "roles": list(roles), "recipe": list(recipe)}
        for name, value in q.residuals.items():
            report._offer(name, value, witness, report.min_residuals)
        report._offer("steering_product", q.S_BA * q.S_BC - 1.0, witness, report.min_extras)
        report._offer("collective_gain", min(q.S_BA, q.S_BC) - q.S_coll, witness, report.min_extras)
        saturated |= abs(q.r4) < saturation_tol
        steering |= q.S_coll < 1.0
    report.saturation_count = int(saturated)
    report.steering_trials = int(steering)
    return report


def _run_trials(seed: int, depth: int, start: int, stop: int, num_modes: int, saturation_tol: float) -> FuzzReport:
    total = FuzzReport()
    for k in range(start, stop):
        s = trial_seed(seed, k)
        recipe = random_recipe(num_modes, s, depth)
        total = total.merge(evaluate_recipe(recipe, {"trial": k, "seed": s}, saturation_tol))
    return total


def fuzz_monogamy(
    trials: int,
    seed: int,
    depth: int,
    extra_recipes: Optional[Sequence[Sequence[Dict]]] = None,
    saturation_tol: float = SATURATION_TOL,
    num_modes: int = 3,
    workers: int = 1,
) -> FuzzReport:
    """Evaluate ``trials`` random states (plus any injected recipes) and aggregate the minima.

    Trial ``k`` is rebuilt from ``trial_seed(seed, k)`` alone, and reports
    are merged in index order, so the result does not depend on ``workers``
    or on scheduling. Injected recipes count as extra trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    bounds = [(a, min(a + FUZZ_CHUNK, trials)) for a in range(0, trials, FUZZ_CHUNK)]
    args = [(seed, depth, a, b, num_modes, saturation_tol) for a, b in bounds]
    if workers == 1 or len(bounds) == 1:
        parts = [_run_trials(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_trials, *zip(*args)))
    total = FuzzReport()
    for part in parts:
        total = total.merge(part)
    for k, recipe in enumerate(extra_recipes or ()):
        total = total.merge(evaluate_recipe(recipe, {"injected": k}, saturation_tol))
    return total

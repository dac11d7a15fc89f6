"""Parameter sweeps over the tripartite circuit, written as deterministic CSV.

Each preset reproduces the x-axis and fixed parameters of one figure
panel. Panels whose caption gives no grid density use 101 evenly spaced
points. The thermal-noise panels use ``n_th`` in [0, 3] since the range is
not stated.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, fields
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .network import FAMILIES, CircuitParams, build_circuit, closed_form_report, MODE_A, MODE_B, MODE_C
from .quantifiers import RESIDUAL_NAMES, RESIDUAL_TOL, QuantifierReport, check_monogamy

DEFAULT_STEPS = 101
COLUMNS = ("D_BA", "D_BC", "D_sum", "Ent_BA", "Ent_BC", "Ent_prod", "S_coll", "g_BA", "g_BC", "M_B", "residuals")
_PARAM_NAMES = tuple(f.name for f in fields(CircuitParams))


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over ``range = (start, stop, steps)``.

    ``tied`` lists further parameters set equal to the swept value on
    every row (e.g. ``eta_B = eta0`` or ``n_B = n_F``).
    """

    scenario: str
    fixed: Dict[str, float]
    sweep_var: str
    range: Tuple[float, float, int]
    outputs: Tuple[str, ...]
    tied: Tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        if self.scenario not in FAMILIES:
            raise ValueError(f"unknown scenario family {self.scenario!r}; expected one of {FAMILIES}")
        for name in (self.sweep_var, *self.tied, *self.fixed):
            if name not in _PARAM_NAMES:
                raise ValueError(f"{name!r} is not a circuit parameter")
        start, stop, steps = self.range
        if int(steps) != steps or steps < 2:
            raise ValueError("a sweep needs at least 2 steps")
        object.__setattr__(self, "range", (float(start), float(stop), int(steps)))
        for col in self.outputs:
            if col not in COLUMNS:
                raise ValueError(f"unknown output column {col!r}; expected a subset of {COLUMNS}")
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "tied", tuple(self.tied))
        # Endpoints must be valid parameter sets; raises NonPhysicalParameters otherwise.
        self.params_at(start)
        self.params_at(stop)

    @property
    def values(self) -> np.ndarray:
        start, stop, steps = self.range
        return np.linspace(start, stop, steps)

    def params_at(self, value: float) -> CircuitParams:
        data = {"r": 0.0, "eta0": 0.5, **self.fixed}
        for name in (self.sweep_var, *self.tied):
            data[name] = float(value)
        return CircuitParams(**data)

    def header(self) -> List[str]:
        cols = [self.sweep_var]
        for col in self.outputs:
            cols.extend(RESIDUAL_NAMES if col == "residuals" else [col])
        return cols


@dataclass(frozen=True)
class SweepRow:
    value: float
    columns: Dict[str, float] = field(default_factory=dict)

    def residuals_ok(self, tol: float = RESIDUAL_TOL) -> bool:
        return all(self.columns[k] >= -tol for k in RESIDUAL_NAMES if k in self.columns)

    def finite(self) -> bool:
        return all(math.isfinite(v) for v in self.columns.values())


def _columns(report: QuantifierReport, outputs: Sequence[str]) -> Dict[str, float]:
    derived = {
        "D_sum": report.D_BA + report.D_BC,
        "Ent_prod": report.Ent_BA * report.Ent_BC,
    }
    out = {}
    for col in outputs:
        if col == "residuals":
            out.update(report.residuals)
        else:
            out[col] = derived[col] if col in derived else getattr(report, col)
    return out


def evaluate(params: CircuitParams, closed_form: bool = False) -> QuantifierReport:
    if closed_form:
        return closed_form_report(params)
    return check_monogamy(build_circuit(params), MODE_B, MODE_A, MODE_C)


def run_sweep(spec: SweepSpec, closed_form: bool = False) -> List[SweepRow]:
    """Evaluate every grid point; rows come back in grid order."""
    return [SweepRow(float(v), _columns(evaluate(spec.params_at(v), closed_form), spec.outputs)) for v in spec.values]


def format_number(x: float) -> str:
    """12 significant digits; ``g`` switches to exponent form below 1e-4. ``-0`` prints as ``0``."""
    return format(float(x) + 0.0, ".12g")


def to_csv(spec: SweepSpec, rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    header = spec.header()
    buf.write(",".join(header) + "\n")
    for row in rows:
        cells = [format_number(row.value)] + [format_number(row.columns[c]) for c in header[1:]]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def write_csv(spec: SweepSpec, rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(to_csv(spec, rows))


# -- figure presets ----------------------------------------------------------------

_D = ("D_BA", "D_BC", "D_sum", "S_coll", "residuals")
_ENT = ("Ent_BA", "Ent_BC", "Ent_prod", "M_B", "S_coll", "g_BA", "g_BC", "residuals")
_S = ("S_coll", "residuals")
_G = ("g_BA", "g_BC", "residuals")
_ETA = (0.0, 1.0, DEFAULT_STEPS)
_NTH = (0.0, 3.0, DEFAULT_STEPS)


def _spec(scenario, fixed, var, outputs, tied=(), rng=_ETA, description=""):
    return SweepSpec(scenario, fixed, var, rng, outputs, tied, description)


PRESETS: Dict[str, SweepSpec] = {
    "fig3a": _spec("ideal", {"r": 0.5}, "eta0", _D, description="D vs eta0, no extra loss, r=0.5"),
    "fig3b": _spec("ideal", {"r": 2.0}, "eta0", _D, description="D vs eta0, no extra loss, r=2"),
    "fig4a": _spec("equal_loss", {"r": 0.5}, "eta0", _D, ("etaB",), description="D vs eta0 with etaB=eta0, r=0.5"),
    "fig4b": _spec("equal_loss", {"r": 2.0}, "eta0", _D, ("etaB",), description="D vs eta0 with etaB=eta0, r=2"),
    "fig4c": _spec("equal_loss", {"r": 0.5}, "eta0", _S, ("etaB",), description="S_coll vs eta0 with etaB=eta0, r=0.5"),
    "fig4d": _spec("equal_loss", {"r": 2.0}, "eta0", _S, ("etaB",), description="S_coll vs eta0 with etaB=eta0, r=2"),
    "fig5a": _spec("loss_B", {"r": 0.5, "eta0": 0.5}, "etaB", _D, description="D vs etaB, eta0=0.5, r=0.5"),
    "fig5b": _spec("loss_B", {"r": 2.0, "eta0": 0.5}, "etaB", _D, description="D vs etaB, eta0=0.5, r=2"),
    "fig6a": _spec("loss_AC", {"r": 2.0, "eta0": 0.5}, "etaA", _D, ("etaC",), description="D vs etaA=etaC, eta0=0.5, r=2"),
    "fig6b": _spec("loss_AC", {"r": 2.0, "eta0": 0.8}, "etaA", _D, ("etaC",), description="D vs etaA=etaC, eta0=0.8, r=2"),
    "fig6c": _spec("loss_AC", {"r": 2.0, "eta0": 0.5}, "etaA", _D, description="D vs etaA, etaC=1, eta0=0.5, r=2"),
    "fig6d": _spec("loss_AC", {"r": 2.0, "eta0": 0.8}, "etaA", _D, description="D vs etaA, etaC=1, eta0=0.8, r=2"),
    "fig6e": _spec("loss_AC", {"r": 2.0, "eta0": 0.5}, "etaA", _S, ("etaC",), description="S_coll vs etaA=etaC, r=2"),
    "fig7a": _spec("thermal", {"r": 1.0, "eta0": 0.2}, "nB", _D, ("nF",), _NTH, "D vs n_th, eta0=0.2, r=1"),
    "fig7b": _spec("thermal", {"r": 1.0, "eta0": 0.5}, "nB", _D, ("nF",), _NTH, "D vs n_th, eta0=0.5, r=1"),
    "fig7c": _spec("thermal", {"r": 1.0, "eta0": 0.8}, "nB", _D, ("nF",), _NTH, "D vs n_th, eta0=0.8, r=1"),
    "fig7e": _spec("thermal", {"r": 1.0, "eta0": 0.5}, "nB", _S, ("nF",), _NTH, "S_coll vs n_th, r=1"),
    "fig8a": _spec("ideal", {"r": 0.5}, "eta0", _ENT, description="Ent vs eta0, no extra loss, r=0.5"),
    "fig8b": _spec("ideal", {"r": 2.0}, "eta0", _ENT, description="Ent vs eta0, no extra loss, r=2"),
    "fig8c": _spec("ideal", {"r": 0.5}, "eta0", _G, description="g_sym vs eta0, r=0.5"),
    "fig8d": _spec("ideal", {"r": 2.0}, "eta0", _G, description="g_sym vs eta0, r=2"),
    "fig9a": _spec("equal_loss", {"r": 0.5}, "etaB", _ENT, ("eta0",), description="Ent vs etaB=eta0, r=0.5"),
    "fig9b": _spec("equal_loss", {"r": 2.0}, "etaB", _ENT, ("eta0",), description="Ent vs etaB=eta0, r=2"),
    "fig9c": _spec("equal_loss", {"r": 0.5}, "etaB", _G, ("eta0",), description="g_sym vs etaB=eta0, r=0.5"),
    "fig9d": _spec("equal_loss", {"r": 2.0}, "etaB", _G, ("eta0",), description="g_sym vs etaB=eta0, r=2"),
    "fig10a": _spec("loss_B", {"r": 2.0, "eta0": 0.5}, "etaB", _ENT, description="Ent vs etaB, eta0=0.5, r=2"),
    "fig10b": _spec("loss_B", {"r": 2.0, "eta0": 0.8}, "etaB", _ENT, description="Ent vs etaB, eta0=0.8, r=2"),
    "fig11a": _spec("loss_AC", {"r": 2.0, "eta0": 0.5}, "etaA", _ENT, ("etaC",), description="Ent vs etaA=etaC, eta0=0.5"),
    "fig11b": _spec("loss_AC", {"r": 2.0, "eta0": 0.8}, "etaA", _ENT, ("etaC",), description="Ent vs etaA=etaC, eta0=0.8"),
    "fig11c": _spec("loss_AC", {"r": 2.0, "eta0": 0.5}, "etaA", _ENT, description="Ent vs etaA, etaC=1, eta0=0.5"),
    "fig11d": _spec("loss_AC", {"r": 2.0, "eta0": 0.8}, "etaA", _ENT, description="Ent vs etaA, etaC=1, eta0=0.8"),
    "fig11e": _spec("loss_AC", {"r": 2.0, "eta0": 0.5}, "etaA", _G, ("etaC",), description="g_sym vs etaA=etaC, eta0=0.5"),
    "fig12a": _spec("thermal", {"r": 1.0, "eta0": 0.8}, "nB", _ENT, ("nF",), _NTH, "Ent vs n_th, eta0=0.8, r=1"),
    "fig12b": _spec("thermal", {"r": 1.0, "eta0": 0.5}, "nB", _ENT, ("nF",), _NTH, "Ent vs n_th, eta0=0.5, r=1"),
}

# Bare figure names resolve to one representative panel (r=2 where the figure has one).
ALIASES = {"fig4": "fig4b", "fig5": "fig5a", "fig6": "fig6a", "fig7": "fig7b", "fig8": "fig8b",
           "fig9": "fig9b", "fig10": "fig10a", "fig11": "fig11a", "fig12": "fig12a", "fig3": "fig3b"}


def get_preset(name: str) -> SweepSpec:
    key = ALIASES.get(name, name)
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS) + sorted(ALIASES)}")
    return PRESETS[key]

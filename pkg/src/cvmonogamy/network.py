"""The tripartite circuit: a two-mode squeezed pair (B, F) with F split into A and C.

Two independent routes are provided. :func:`build_circuit` constructs the
state from Gaussian operations; :func:`closed_form_report` evaluates the
printed analytic expressions for each scenario family without any matrix
algebra. Each one is the oracle for the other.

Output mode order is always ``(B, A, C)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Dict

from .gaussian import (
    GaussianState,
    TwoModeReduced,
    apply_beamsplitter,
    apply_loss,
    tensor,
    thermal_seeded_tms,
    vacuum_state,
)
from .quantifiers import CORRELATION_FLOOR, QuantifierReport, ent_closed_form, ent_opt_reduced, g_sym, monogamy_bound_MB

MODE_B, MODE_A, MODE_C = 0, 1, 2

FAMILIES = ("ideal", "loss_B", "equal_loss", "loss_AC", "thermal")


class NonPhysicalParameters(ValueError):
    """Parameter values outside their physical domain."""


class NoClosedFormError(ValueError):
    """No printed analytic expression covers this parameter combination."""


@dataclass(frozen=True)
class CircuitParams:
    r: float
    eta0: float
    etaB: float = 1.0
    etaA: float = 1.0
    etaC: float = 1.0
    nB: float = 0.0
    nF: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError(f"{f.name} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise NonPhysicalParameters(f"{f.name} must be finite")
            object.__setattr__(self, f.name, float(value))
        for name in ("eta0", "etaB", "etaA", "etaC"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise NonPhysicalParameters(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        for name in ("nB", "nF"):
            if getattr(self, name) < 0:
                raise NonPhysicalParameters(f"{name} must be >= 0, got {getattr(self, name)}")

    @classmethod
    def from_dict(cls, data: Dict) -> "CircuitParams":
        if not isinstance(data, dict):
            raise TypeError("circuit parameters must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise KeyError(f"unknown parameter(s): {sorted(unknown)}")
        missing = {"r", "eta0"} - set(data)
        if missing:
            raise KeyError(f"missing required parameter(s): {sorted(missing)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "CircuitParams":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    def replace(self, **changes) -> "CircuitParams":
        data = self.to_dict()
        data.update(changes)
        return CircuitParams(**data)


def effective_eta_F(params: CircuitParams) -> float:
    """Total transmission of F through the splitter and the A/C losses."""
    return params.eta0 * params.etaA + (1 - params.eta0) * params.etaC


def build_circuit(params: CircuitParams) -> GaussianState:
    """Construct the three-mode state ``(B, A, C)``.

    Thermal-seeded squeezer on (B, F), loss on B, then F meets a vacuum on a
    splitter of transmission ``eta0`` (A keeps the ``sqrt(eta0)`` share of F,
    C the ``sqrt(1 - eta0)`` share), then loss on A and on C.
    """
    state = thermal_seeded_tms(params.r, params.nB, params.nF)
    state = apply_loss(state, MODE_B, params.etaB)
    state = tensor(state, vacuum_state(1))
    # Ancilla sits on the first port so that both outputs carry +F.
    state = apply_beamsplitter(state, MODE_C, MODE_A, params.eta0)
    state = apply_loss(state, MODE_A, params.etaA)
    return apply_loss(state, MODE_C, params.etaC)


# -- closed forms ------------------------------------------------------------------


def scenario_family(params: CircuitParams) -> str:
    """Which printed formula set covers ``params``; raises :class:`NoClosedFormError` otherwise."""
    p = params
    thermal = p.nB > 0 or p.nF > 0
    loss_b = p.etaB < 1
    loss_ac = p.etaA < 1 or p.etaC < 1
    if thermal:
        if loss_b or loss_ac:
            raise NoClosedFormError("thermal seeding combined with extra loss has no printed closed form")
        return "thermal"
    if loss_b and loss_ac:
        raise NoClosedFormError("loss on B combined with loss on A/C has no printed closed form")
    if loss_ac:
        return "loss_AC"
    if loss_b:
        return "equal_loss" if p.etaB == p.eta0 else "loss_B"
    return "ideal"


def closed_form_covariances(params: CircuitParams) -> Dict[str, TwoModeReduced]:
    """Printed (n, m, c) for the pairs BA and BC; ``c_p = -c_x`` throughout."""
    family = scenario_family(params)
    ch, sh = math.cosh(2 * params.r), math.sinh(2 * params.r)
    e0, eB = params.eta0, params.etaB
    if family == "thermal":
        N = params.nF + params.nB + 1
        d = params.nB - params.nF
        ba = (N * ch + d, e0 * N * ch - e0 * d + 1 - e0, math.sqrt(e0) * N * sh)
        bc = (N * ch + d, (1 - e0) * N * ch - (1 - e0) * d + e0, math.sqrt(1 - e0) * N * sh)
    elif family == "loss_AC":
        tA, tC = e0 * params.etaA, (1 - e0) * params.etaC
        ba = (ch, tA * ch + 1 - tA, math.sqrt(params.etaA * e0) * sh)
        bc = (ch, tC * ch + 1 - tC, math.sqrt(params.etaC * (1 - e0)) * sh)
    else:
        # ideal, loss_B and equal_loss share one set (etaB = 1 for ideal)
        nb = eB * ch + (1 - eB)
        ba = (nb, e0 * ch + (1 - e0), math.sqrt(e0) * math.sqrt(eB) * sh)
        bc = (nb, (1 - e0) * ch + e0, math.sqrt(1 - e0) * math.sqrt(eB) * sh)
    return {
        "BA": TwoModeReduced(ba[0], ba[1], ba[2], -ba[2]),
        "BC": TwoModeReduced(bc[0], bc[1], bc[2], -bc[2]),
    }


def _closed_form_D(params: CircuitParams, family: str):
    r, e0, eB = params.r, params.eta0, params.etaB
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    if family == "ideal":
        D_BA = (e0 * ch + (1 - e0) + ch - 2 * math.sqrt(e0) * sh) / 2
        D_BC = ((1 - e0) * ch + e0 + ch - 2 * math.sqrt(1 - e0) * sh) / 2
    elif family == "loss_B":
        D_BA = (eB * ch + (1 - eB) + e0 * ch + (1 - e0) - 2 * math.sqrt(eB) * math.sqrt(e0) * sh) / 2
        D_BC = (eB * ch + 1 - eB + (1 - e0) * ch + e0 - 2 * math.sqrt(eB) * math.sqrt(1 - e0) * sh) / 2
    elif family == "equal_loss":
        D_BA = 1 + eB * (math.exp(-2 * r) - 1)
        D_BC = (ch + 1 - 2 * math.sqrt(eB * (1 - eB)) * sh) / 2
    elif family == "loss_AC":
        eA, eC = params.etaA, params.etaC
        D_BA = (e0 * eA * ch + (1 - e0 * eA) + ch - 2 * math.sqrt(e0 * eA) * sh) / 2
        D_BC = ((1 - e0) * eC * ch + 1 - eC + e0 * eC + ch - 2 * math.sqrt(eC * (1 - e0)) * sh) / 2
    else:
        N = params.nB + params.nF + 1
        d = params.nB - params.nF
        D_BA = 0.5 * (N * ch + d + e0 * N * ch - e0 * d + (1 - e0) - 2 * math.sqrt(e0) * N * sh)
        D_BC = 0.5 * (N * ch + d + (1 - e0) * N * ch - (1 - e0) * d + e0 - 2 * math.sqrt(1 - e0) * N * sh)
    return D_BA, D_BC


def _closed_form_S(params: CircuitParams, family: str) -> float:
    r, eB = params.r, params.etaB
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    if family == "ideal":
        return 1 / ch
    if family in ("loss_B", "equal_loss"):
        return eB * ch + (1 - eB) - eB * sh ** 2 / ch
    if family == "loss_AC":
        eF = effective_eta_F(params)
        return 1 - eB * (ch - 1) * (2 * eF - 1) / (1 - eF + eF * ch)
    if params.nB == params.nF:
        return (2 * params.nB + 1) / ch
    N = params.nF + params.nB + 1
    d = params.nB - params.nF
    n_bf, m_bf, c_bf = N * ch + d, N * ch - d, N * sh
    return n_bf - c_bf ** 2 / m_bf


def _closed_form_gains(params: CircuitParams, family: str, cov: Dict[str, TwoModeReduced]):
    """Printed symmetry gains; an uncorrelated pair falls back to numeric minimization of its printed moments."""
    r = params.r
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)

    def ideal_gain(e):
        lead = ch * (1 - e) - (1 - e)
        return (lead + math.sqrt((ch * (1 - e) - 1 + e) ** 2 + 4 * e * sh ** 2)) / (2 * math.sqrt(e) * sh)

    gains = []
    for key, e in (("BA", params.eta0), ("BC", 1 - params.eta0)):
        red = cov[key]
        if abs(red.c_x) <= CORRELATION_FLOOR:
            gains.append(ent_opt_reduced(red)[1])
        elif family == "ideal":
            gains.append(ideal_gain(e))
        else:
            gains.append(g_sym(red))
    return tuple(gains)


def closed_form_report(params: CircuitParams) -> QuantifierReport:
    """All quantifiers from the printed expressions of the matching scenario family.

    Pair steering ``S_BA``, ``S_BC`` are composed as ``n - c^2 / m`` from the
    printed covariances. The optimal gains of these X-P symmetric states are
    the symmetry gains, so ``Ent`` and ``Ent_sym`` coincide here.
    """
    family = scenario_family(params)
    cov = closed_form_covariances(params)
    D_BA, D_BC = _closed_form_D(params, family)
    S = _closed_form_S(params, family)
    g_BA, g_BC = _closed_form_gains(params, family, cov)
    Ent_BA = ent_closed_form(cov["BA"], g_BA)
    Ent_BC = ent_closed_form(cov["BC"], g_BC)
    S_BA = cov["BA"].n - cov["BA"].c_x ** 2 / cov["BA"].m
    S_BC = cov["BC"].n - cov["BC"].c_x ** 2 / cov["BC"].m
    M_B = monogamy_bound_MB(g_BA, g_BC, S)
    norm = (1 + g_BA ** 2) * (1 + g_BC ** 2)
    return QuantifierReport(
        D_BA=D_BA,
        D_BC=D_BC,
        Ent_BA=Ent_BA,
        Ent_BC=Ent_BC,
        g_opt_BA=g_BA,
        g_opt_BC=g_BC,
        g_BA=g_BA,
        g_BC=g_BC,
        Ent_sym_BA=Ent_BA,
        Ent_sym_BC=Ent_BC,
        S_BA=S_BA,
        S_BC=S_BC,
        S_coll=S,
        S_coll_fixed=S,
        M_B=M_B,
        r1=D_BA + D_BC - 1,
        r2=D_BA + D_BC - max(1.0, S),
        r3_product=Ent_BA * Ent_BC - max(1.0, S ** 2) / norm,
        r3_sum=Ent_BA + Ent_BC - S * (2 + g_BA ** 2 + g_BC ** 2) / norm,
        r4=Ent_BA * Ent_BC - M_B,
    )

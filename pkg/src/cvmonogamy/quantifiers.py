"""Entanglement and EPR-steering quantifiers and the monogamy residuals built from them.

Naming follows the steered-party-first convention: ``Ent_BA`` puts the gain
on mode A (``X_B - g X_A``), ``S_BA`` is the steering of B by A, and
``S_coll`` is the steering of B by the pair (A, C).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .gaussian import (
    GaussianState,
    Quadrature,
    TwoModeReduced,
    _check_mode,
    apply_phase_rotation,
    conditional_variance,
    solve_symmetric,
    reduced_two_mode,
    symplectic_form,
)
from .optimize import grid_then_golden, periodic_grid_then_golden

RESIDUAL_TOL = 1e-9
GAIN_LOG_BRACKET = (math.log(1e-6), math.log(1e6))
GAIN_TOL = 1e-10
CORRELATION_FLOOR = 1e-12

X, P = 0.0, math.pi / 2


class UncorrelatedModesError(ValueError):
    """Raised when the symmetric gain is undefined because ``|c_x|`` is ~0."""


def _distinct(state: GaussianState, *modes: int) -> List[int]:
    checked = [_check_mode(state, m) for m in modes]
    if len(set(checked)) != len(checked):
        raise ValueError(f"modes must be distinct, got {modes}")
    return checked


# -- TDGCZ sum criterion --------------------------------------------------------


def duan_D(state: GaussianState, i: int, j: int, phases: Tuple[float, float] = None) -> float:
    """``[Var(X_i - X_j) + Var(P_i + P_j)] / 4``; entanglement is certified when < 1.

    ``phases`` optionally rotates modes i and j first, for states that are not
    in the two-mode-squeezed phase convention.
    """
    i, j = _distinct(state, i, j)
    if phases is not None:
        state = apply_phase_rotation(apply_phase_rotation(state, i, phases[0]), j, phases[1])
    V = state.cov
    xi, pi, xj, pj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    var_x = V[xi, xi] + V[xj, xj] - 2 * V[xi, xj]
    var_p = V[pi, pi] + V[pj, pj] + 2 * V[pi, pj]
    return float(var_x + var_p) / 4.0


# -- inference variances and steering --------------------------------------


def optimal_inference(state: GaussianState, target: Quadrature, steerers: Sequence[int]) -> Tuple[float, List[float]]:
    """Smallest conditional variance of ``target`` over one quadrature per steerer mode.

    Any linear estimator built from ``(X_k, P_k)`` of a steerer mode is a
    multiple of a single rotated quadrature of that mode, so the optimum over
    measurement angles equals the Schur complement over *all* steerer
    quadratures. The realizing angle for mode k is the direction of its
    regression weights. Returns the variance and those angles.
    """
    n = state.num_modes
    t_mode = _check_mode(state, target[0])
    modes = [_check_mode(state, m) for m in steerers]
    if t_mode in modes or len(set(modes)) != len(modes):
        raise ValueError("steerers must be distinct and exclude the target mode")
    t = np.zeros(2 * n)
    t[2 * t_mode] = math.cos(target[1])
    t[2 * t_mode + 1] = math.sin(target[1])
    V = state.cov
    var_t = float(t @ V @ t)
    if not modes:
        return var_t, []
    idx = np.ravel([[2 * m, 2 * m + 1] for m in modes])
    s_mt = V[idx] @ t
    weights = solve_symmetric(V[np.ix_(idx, idx)], s_mt)
    variance = var_t - float(s_mt @ weights)
    angles = [math.atan2(weights[2 * k + 1], weights[2 * k]) % math.pi for k in range(len(modes))]
    return variance, angles


def search_inference(
    state: GaussianState, target: Quadrature, steerers: Sequence[int], num: int = 64, tol: float = 1e-10
) -> Tuple[float, List[float]]:
    """Angle search for the best one-quadrature-per-mode conditioning.

    Nested periodic line searches: the first steerer angle is scanned on a
    grid of ``num`` points over ``[0, pi)`` and refined by golden section,
    and every trial value minimizes over the remaining angles the same way.
    Slower than coordinate descent but immune to its stalling in narrow
    curved valleys. Kept as an independent route to :func:`optimal_inference`.
    """
    modes = [_check_mode(state, m) for m in steerers]
    t_mode = _check_mode(state, target[0])
    if t_mode in modes or len(set(modes)) != len(modes):
        raise ValueError("steerers must be distinct and exclude the target mode")
    if not modes:
        return conditional_variance(state, target, []), []

    def value_at(angles):
        return conditional_variance(state, target, list(zip(modes, angles)))

    def nested(prefix: List[float]) -> Tuple[float, List[float]]:
        if len(prefix) == len(modes):
            return value_at(prefix), prefix
        a, _ = periodic_grid_then_golden(lambda a: nested(prefix + [a])[0], math.pi, num=num, tol=tol)
        return nested(prefix + [a])

    return nested([])


def _inference_pair(state, steered, steerers, optimize_angles):
    """Conditional variances of X and P of ``steered`` given ``steerers``."""
    if optimize_angles:
        vx, _ = optimal_inference(state, (steered, X), steerers)
        vp, _ = optimal_inference(state, (steered, P), steerers)
    else:
        vx = conditional_variance(state, (steered, X), [(m, X) for m in steerers])
        vp = conditional_variance(state, (steered, P), [(m, P) for m in steerers])
    return vx, vp


def steering_S_pair(state: GaussianState, steered: int, steerer: int, optimize_angles: bool = True) -> float:
    """``S_{steered|steerer} = Delta_inf X * Delta_inf P``; steering is certified when < 1.

    Without ``optimize_angles`` X is inferred from X and P from P of the
    steerer; with it the steerer quadratures are chosen optimally.
    """
    steered, steerer = _distinct(state, steered, steerer)
    vx, vp = _inference_pair(state, steered, [steerer], optimize_angles)
    return math.sqrt(max(vx, 0.0) * max(vp, 0.0))


def steering_S_collective(
    state: GaussianState, steered: int, steerers: Sequence[int], optimize_angles: bool = True
) -> float:
    """Steering of one mode by joint quadrature measurements on several modes."""
    if len(steerers) == 0:
        raise ValueError("need at least one steering mode")
    modes = _distinct(state, steered, *steerers)
    vx, vp = _inference_pair(state, modes[0], modes[1:], optimize_angles)
    return math.sqrt(max(vx, 0.0) * max(vp, 0.0))


# -- EPR variance-product quantifier --------------------------------------------


def _pair_moments(V: np.ndarray, i: int, j: int) -> Tuple[float, ...]:
    xi, pi, xj, pj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    return tuple(float(v) for v in (V[xi, xi], V[xi, xj], V[xj, xj], V[pi, pi], V[pi, pj], V[pj, pj]))


def _ent_value(moments, g_x, g_p):
    vxi, cx, vxj, vpi, cp, vpj = moments
    var_x = vxi - 2 * g_x * cx + g_x * g_x * vxj
    var_p = vpi + 2 * g_p * cp + g_p * g_p * vpj
    return np.sqrt(np.maximum(var_x * var_p, 0.0)) / (1 + g_x * g_p)


def _ent_scalar(moments, g):
    vxi, cx, vxj, vpi, cp, vpj = moments
    prod = (vxi - 2 * g * cx + g * g * vxj) * (vpi + 2 * g * cp + g * g * vpj)
    return math.sqrt(prod) / (1 + g * g) if prod > 0 else 0.0


def ent_g(state: GaussianState, i: int, j: int, g_x: float, g_p: float = None) -> float:
    """``Delta(X_i - g_x X_j) Delta(P_i + g_p P_j) / (1 + g_x g_p)``; ``g_p`` defaults to ``g_x``.

    Below 1 certifies entanglement for any real gains with a positive denominator.
    """
    i, j = _distinct(state, i, j)
    g_p = g_x if g_p is None else g_p
    if 1 + g_x * g_p <= 0:
        raise ValueError("gains give a non-positive denominator 1 + g_x g_p")
    return float(_ent_value(_pair_moments(state.cov, i, j), g_x, g_p))


def _valley_seeds(moments, sign: float) -> List[float]:
    """``log|g|`` where the X or the P factor of Ent is smallest, for gains of the given sign.

    Without X-P symmetry Ent can have two narrow valleys, one near each of
    these points, and a coarse grid may step over both.
    """
    vxi, cx, vxj, vpi, cp, vpj = moments
    seeds = []
    for g in (cx / vxj, -cp / vpj):
        if g * sign > 0:
            seeds.append(math.log(abs(g)))
    return seeds


def _minimize_gain(moments) -> Tuple[float, float]:
    lo, hi = GAIN_LOG_BRACKET
    best = (math.inf, 0.0)
    for sign in (1.0, -1.0):
        def f(u, sign=sign):
            return _ent_scalar(moments, sign * math.exp(u))

        def f_vec(u, sign=sign):
            g = sign * np.exp(u)
            return _ent_value(moments, g, g)

        u, val = grid_then_golden(f, lo, hi, num=64, tol=GAIN_TOL, f_vec=f_vec, extra=_valley_seeds(moments, sign))
        if val < best[0]:
            best = (val, sign * math.exp(u))
    val, g = _polish_gain(moments, *best)
    # Ent_ij(g) = Ent_ji(1/g), so the g -> 0 and g -> inf limits both count
    # for reciprocity. The infinite limit is reported at the positive bracket edge.
    # Near-ties go to the limits so flat cases (uncorrelated pairs) get a definite gain.
    vxi, _, vxj, vpi, _, vpj = moments
    at_zero, at_inf = math.sqrt(vxi * vpi), math.sqrt(vxj * vpj)
    slack = 1 + 1e-12
    if at_zero <= val * slack and at_zero <= at_inf * slack:
        return at_zero, 0.0
    if at_inf <= val * slack:
        return at_inf, math.exp(hi)
    return val, g


def _polish_gain(moments, val: float, g: float, steps: int = 4) -> Tuple[float, float]:
    """Newton steps on the stationarity condition of ``Ent^2 = N(g) / (1 + g^2)^2``.

    The minimum is flat, so golden section pins ``g`` only to ~sqrt(eps);
    the root of ``N'(g)(1 + g^2) - 4 g N(g)`` is sharp. A step that moves far
    or raises ``Ent`` beyond roundoff is rejected.
    """
    vxi, cx, vxj, vpi, cp, vpj = moments
    a0, a1, a2, b0, b1, b2 = vxi, -2 * cx, vxj, vpi, 2 * cp, vpj
    n0, n1, n2 = a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a1 * b1 + a2 * b0
    n3, n4 = a1 * b2 + a2 * b1, a2 * b2
    # the g^5 terms cancel, leaving a quartic s0 + s1 g + ... + s4 g^4
    s0, s1, s2, s3, s4 = n1, 2 * n2 - 4 * n0, 3 * (n3 - n1), 4 * n4 - 2 * n2, -n3
    x = g
    for _ in range(steps):
        slope = s1 + x * (2 * s2 + x * (3 * s3 + x * 4 * s4))
        if slope == 0:
            break
        x -= (s0 + x * (s1 + x * (s2 + x * (s3 + x * s4)))) / slope
    x = float(x)
    if not math.isfinite(x) or abs(x - g) > 1e-6 * (1 + abs(g)):
        return val, g
    fx = _ent_scalar(moments, x)
    # Ent itself carries ~1e-12 relative cancellation noise at large squeezing.
    return (fx, x) if fx <= val * (1 + 1e-10) else (val, g)


def ent_opt(state: GaussianState, i: int, j: int) -> Tuple[float, float]:
    """Minimize the single-gain quantifier over real ``g``; returns ``(Ent, g)``.

    The search runs over ``log|g|`` in ``[1e-6, 1e6]`` for each sign.
    """
    i, j = _distinct(state, i, j)
    return _minimize_gain(_pair_moments(state.cov, i, j))


def ent_opt_reduced(reduced: TwoModeReduced) -> Tuple[float, float]:
    """:func:`ent_opt` for an X-P symmetric pair given only its ``(n, m, c_x, c_p)`` summary."""
    return _minimize_gain((reduced.n, reduced.c_x, reduced.m, reduced.n, reduced.c_p, reduced.m))


def g_sym(reduced: TwoModeReduced) -> float:
    """Symmetry gain ``[n - m + sqrt((n - m)^2 + 4c^2)] / (2c)`` from the X moments.

    Carries the sign of ``c_x``. Raises :class:`UncorrelatedModesError` when
    ``|c_x| <= 1e-12``.
    """
    n, m, c = reduced.n, reduced.m, reduced.c_x
    if abs(c) <= CORRELATION_FLOOR:
        raise UncorrelatedModesError("modes are uncorrelated; minimize numerically instead")
    root = math.sqrt((n - m) ** 2 + 4 * c * c)
    if n >= m:
        return (n - m + root) / (2 * c)
    # Same root, rearranged to avoid cancellation when m > n.
    return 2 * c / (root + m - n)


def ent_closed_form(reduced: TwoModeReduced, g: float) -> float:
    """``(n - 2 g c + g^2 m) / (1 + g^2)`` for X-P symmetric pairs."""
    return (reduced.n - 2 * g * reduced.c_x + g * g * reduced.m) / (1 + g * g)


def monogamy_bound_MB(g_BA: float, g_BC: float, S_collective: float) -> float:
    """``max(1, S^2) / ((1 + g_BA^2)(1 + g_BC^2))``."""
    return max(1.0, S_collective ** 2) / ((1 + g_BA ** 2) * (1 + g_BC ** 2))


def ppt_symplectic_eigenvalue(state: GaussianState, i: int, j: int) -> float:
    """Smallest symplectic eigenvalue of the partially transposed (i, j) covariance.

    Values below 1 mean the pair is entangled (PPT criterion).
    """
    i, j = _distinct(state, i, j)
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    Vr = state.cov[np.ix_(idx, idx)]
    T = np.diag([1.0, 1.0, 1.0, -1.0])
    eig = np.abs(np.linalg.eigvals(1j * symplectic_form(2) @ T @ Vr @ T))
    return float(np.min(eig))


# -- monogamy report -------------------------------------------------------------


RESIDUAL_NAMES = ("r1", "r2", "r3_product", "r3_sum", "r4")


@dataclass(frozen=True)
class QuantifierReport:
    """Every quantifier for one (B, A, C) role assignment.

    Residuals are LHS - RHS of the five monogamy inequalities, so a
    non-negative value means the inequality holds.
    """

    D_BA: float
    D_BC: float
    Ent_BA: float
    Ent_BC: float
    g_opt_BA: float
    g_opt_BC: float
    g_BA: float
    g_BC: float
    Ent_sym_BA: float
    Ent_sym_BC: float
    S_BA: float
    S_BC: float
    S_coll: float
    S_coll_fixed: float
    M_B: float
    r1: float
    r2: float
    r3_product: float
    r3_sum: float
    r4: float

    @property
    def residuals(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in RESIDUAL_NAMES}

    @property
    def min_residual(self) -> float:
        return min(self.residuals.values())

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _gain_with_fallback(reduced: TwoModeReduced, numeric_gain: float) -> float:
    try:
        return g_sym(reduced)
    except UncorrelatedModesError:
        return numeric_gain


def check_monogamy(state: GaussianState, B: int, A: int, C: int, optimize_angles: bool = True) -> QuantifierReport:
    """Evaluate all quantifiers and the five monogamy residuals with B as the shared mode.

    ``r3_*`` use the numerically optimal gains; ``r4`` evaluates both pair
    quantifiers at the symmetry gains (falling back to the numeric gain for
    an uncorrelated pair), which is the gain choice the bound ``M_B`` uses.
    """
    B, A, C = _distinct(state, B, A, C)
    V = state.cov

    D_BA = duan_D(state, B, A)
    D_BC = duan_D(state, B, C)
    S_BA = steering_S_pair(state, B, A, optimize_angles)
    S_BC = steering_S_pair(state, B, C, optimize_angles)
    S_coll = steering_S_collective(state, B, [A, C], optimize_angles)
    S_fixed = S_coll if not optimize_angles else steering_S_collective(state, B, [A, C], False)

    mom_BA, mom_BC = _pair_moments(V, B, A), _pair_moments(V, B, C)
    Ent_BA, g_opt_BA = _minimize_gain(mom_BA)
    Ent_BC, g_opt_BC = _minimize_gain(mom_BC)
    g_BA = _gain_with_fallback(reduced_two_mode(state, B, A), g_opt_BA)
    g_BC = _gain_with_fallback(reduced_two_mode(state, B, C), g_opt_BC)
    Ent_sym_BA = _ent_scalar(mom_BA, g_BA)
    Ent_sym_BC = _ent_scalar(mom_BC, g_BC)
    M_B = monogamy_bound_MB(g_BA, g_BC, S_coll)

    norm = (1 + g_opt_BA ** 2) * (1 + g_opt_BC ** 2)
    return QuantifierReport(
        D_BA=D_BA,
        D_BC=D_BC,
        Ent_BA=Ent_BA,
        Ent_BC=Ent_BC,
        g_opt_BA=g_opt_BA,
        g_opt_BC=g_opt_BC,
        g_BA=g_BA,
        g_BC=g_BC,
        Ent_sym_BA=Ent_sym_BA,
        Ent_sym_BC=Ent_sym_BC,
        S_BA=S_BA,
        S_BC=S_BC,
        S_coll=S_coll,
        S_coll_fixed=S_fixed,
        M_B=M_B,
        r1=D_BA + D_BC - 1.0,
        r2=D_BA + D_BC - max(1.0, S_coll),
        r3_product=Ent_BA * Ent_BC - max(1.0, S_coll ** 2) / norm,
        r3_sum=Ent_BA + Ent_BC - S_coll * (2 + g_opt_BA ** 2 + g_opt_BC ** 2) / norm,
        r4=Ent_sym_BA * Ent_sym_BC - M_B,
    )

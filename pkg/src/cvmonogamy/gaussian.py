"""Multimode Gaussian states as (mean, covariance) pairs.

Quadratures are ordered ``(X1, P1, X2, P2, ...)`` and scaled so that the
vacuum has ``Var(X) = Var(P) = 1``; the uncertainty relation then reads
``dX dP >= 1`` and physicality is ``cov + iJ >= 0`` with ``J`` built from
2x2 blocks ``[[0, 1], [-1, 0]]``.

All transforms return new states; a :class:`GaussianState` is never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import scipy.linalg

PHYSICALITY_TOL = 1e-9
PINV_RCOND = 1e-12

# (mode index, quadrature angle in radians); angle 0 is X, pi/2 is P.
Quadrature = Tuple[int, float]


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and symmetric covariance matrix of an n-mode Gaussian state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be square with even size, got {cov.shape}")
        if cov.shape[0] == 0:
            raise ValueError("a state needs at least one mode")
        mean = np.array(self.mean, dtype=float).reshape(-1)
        if mean.shape[0] != cov.shape[0]:
            raise ValueError("mean and covariance sizes differ")
        if not (np.all(np.isfinite(cov)) and np.all(np.isfinite(mean))):
            raise ValueError("state contains non-finite entries")
        cov = 0.5 * (cov + cov.T)
        cov.setflags(write=False)
        mean.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @property
    def num_modes(self) -> int:
        return self.cov.shape[0] // 2

    def __repr__(self):
        return f"GaussianState(num_modes={self.num_modes})"


@dataclass(frozen=True)
class TwoModeReduced:
    """Covariance summary ``(n, m, c_x, c_p)`` of an ordered mode pair (I, J).

    ``n = Var X_I``, ``m = Var X_J``, ``c_x = Cov(X_I, X_J)`` and
    ``c_p = Cov(P_I, P_J)``. For two-mode-squeezed-like states ``c_p = -c_x``.
    """

    n: float
    m: float
    c_x: float
    c_p: float

    def swapped(self) -> "TwoModeReduced":
        return TwoModeReduced(self.m, self.n, self.c_x, self.c_p)


def symplectic_form(num_modes: int) -> np.ndarray:
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _check_mode(state: GaussianState, mode: int) -> int:
    if not isinstance(mode, (int, np.integer)) or isinstance(mode, bool):
        raise TypeError(f"mode index must be an integer, got {mode!r}")
    if not 0 <= mode < state.num_modes:
        raise IndexError(f"mode {mode} out of range for {state.num_modes}-mode state")
    return int(mode)


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmission must lie in [0, 1], got {eta}")
    return eta


def _transform(state: GaussianState, S: np.ndarray) -> GaussianState:
    return GaussianState(S @ state.mean, S @ state.cov @ S.T)


# -- constructors -----------------------------------------------------------


def vacuum_state(num_modes: int) -> GaussianState:
    if num_modes < 1:
        raise ValueError("num_modes must be >= 1")
    return GaussianState(np.zeros(2 * num_modes), np.eye(2 * num_modes))


def thermal_state(occupations: Sequence[float]) -> GaussianState:
    """Product of thermal modes; mode k has ``Var X = Var P = 2 n_k + 1``."""
    occ = np.asarray(occupations, dtype=float).reshape(-1)
    if occ.size == 0:
        raise ValueError("need at least one occupation number")
    if np.any(occ < 0) or not np.all(np.isfinite(occ)):
        raise ValueError("thermal occupations must be finite and non-negative")
    return GaussianState(np.zeros(2 * occ.size), np.diag(np.repeat(2 * occ + 1, 2)))


def tensor(*states: GaussianState) -> GaussianState:
    """Direct sum of covariances; modes are concatenated in argument order."""
    mean = np.concatenate([s.mean for s in states])
    size = mean.size
    cov = np.zeros((size, size))
    k = 0
    for s in states:
        d = s.cov.shape[0]
        cov[k:k + d, k:k + d] = s.cov
        k += d
    return GaussianState(mean, cov)


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum: ``Var X = cosh 2r``, ``<X1 X2> = -<P1 P2> = sinh 2r``."""
    return thermal_seeded_tms(r, 0.0, 0.0)


def thermal_seeded_tms(r: float, n_B: float, n_F: float) -> GaussianState:
    """Thermal modes (B, F) with occupations ``n_B``, ``n_F`` passed through a two-mode squeezer."""
    if not np.isfinite(r):
        raise ValueError("squeeze parameter must be finite")
    return apply_two_mode_squeezing(thermal_state([n_B, n_F]), 0, 1, r)


# -- symplectic / CP maps ----------------------------------------------------


def apply_two_mode_squeezing(state: GaussianState, mode_i: int, mode_j: int, r: float) -> GaussianState:
    """Two-mode squeezer: ``X_i -> cosh r X_i + sinh r X_j``, ``P_i -> cosh r P_i - sinh r P_j``."""
    i, j = _check_mode(state, mode_i), _check_mode(state, mode_j)
    if i == j:
        raise ValueError("two-mode squeezing needs two distinct modes")
    if not np.isfinite(r):
        raise ValueError("squeeze parameter must be finite")
    ch, sh = np.cosh(r), np.sinh(r)
    S = np.eye(2 * state.num_modes)
    S[2 * i, 2 * i] = S[2 * j, 2 * j] = ch
    S[2 * i + 1, 2 * i + 1] = S[2 * j + 1, 2 * j + 1] = ch
    S[2 * i, 2 * j] = S[2 * j, 2 * i] = sh
    S[2 * i + 1, 2 * j + 1] = S[2 * j + 1, 2 * i + 1] = -sh
    return _transform(state, S)


def apply_beamsplitter(state: GaussianState, mode_i: int, mode_j: int, eta: float) -> GaussianState:
    """Mix two modes with amplitude transmission ``sqrt(eta)``.

    ``a_i -> sqrt(eta) a_i + sqrt(1-eta) a_j`` and
    ``a_j -> -sqrt(1-eta) a_i + sqrt(eta) a_j``; the same real rotation acts
    on the X and P quadratures, so ``eta = 1`` is the identity.
    """
    i, j = _check_mode(state, mode_i), _check_mode(state, mode_j)
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    eta = _check_eta(eta)
    t, q = np.sqrt(eta), np.sqrt(1.0 - eta)
    S = np.eye(2 * state.num_modes)
    for k in (0, 1):
        S[2 * i + k, 2 * i + k] = t
        S[2 * i + k, 2 * j + k] = q
        S[2 * j + k, 2 * i + k] = -q
        S[2 * j + k, 2 * j + k] = t
    return _transform(state, S)


def apply_phase_rotation(state: GaussianState, mode: int, theta: float) -> GaussianState:
    """Rotate one mode's phase space: ``X -> cos X + sin P``, ``P -> -sin X + cos P``."""
    k = _check_mode(state, mode)
    c, s = np.cos(theta), np.sin(theta)
    S = np.eye(2 * state.num_modes)
    S[2 * k:2 * k + 2, 2 * k:2 * k + 2] = [[c, s], [-s, c]]
    return _transform(state, S)


def apply_loss(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """Pure loss of transmission ``eta``.

    Built as vacuum ancilla + beam splitter + trace rather than the direct
    ``eta V + (1 - eta) I`` map, which the tests use as an independent check.
    """
    k = _check_mode(state, mode)
    eta = _check_eta(eta)
    n = state.num_modes
    widened = tensor(state, vacuum_state(1))
    mixed = apply_beamsplitter(widened, k, n, eta)
    return partial_trace(mixed, list(range(n)))


def partial_trace(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Restrict to the listed modes, in the given order."""
    keep = [_check_mode(state, m) for m in keep]
    if not keep:
        raise ValueError("keep list is empty")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate modes in keep list {keep}")
    idx = np.ravel([[2 * m, 2 * m + 1] for m in keep])
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def reduced_two_mode(state: GaussianState, i: int, j: int) -> TwoModeReduced:
    i, j = _check_mode(state, i), _check_mode(state, j)
    if i == j:
        raise ValueError("reduced_two_mode needs two distinct modes")
    V = state.cov
    return TwoModeReduced(
        n=float(V[2 * i, 2 * i]),
        m=float(V[2 * j, 2 * j]),
        c_x=float(V[2 * i, 2 * j]),
        c_p=float(V[2 * i + 1, 2 * j + 1]),
    )


# -- quadrature statistics --------------------------------------------------


def quadrature_vector(num_modes: int, quad: Quadrature) -> np.ndarray:
    mode, angle = quad
    u = np.zeros(2 * num_modes)
    u[2 * mode] = np.cos(angle)
    u[2 * mode + 1] = np.sin(angle)
    return u


def quadrature_variance(state: GaussianState, quad: Quadrature) -> float:
    _check_mode(state, quad[0])
    u = quadrature_vector(state.num_modes, quad)
    return float(u @ state.cov @ u)


def pinv_symmetric(M: np.ndarray, rcond: float = PINV_RCOND) -> np.ndarray:
    """Pseudoinverse of a symmetric matrix, dropping eigenvalues below ``rcond * max|eig|``."""
    w, Q = np.linalg.eigh(M)
    keep = np.abs(w) > rcond * np.max(np.abs(w)) if w.size else w > 0
    return (Q[:, keep] / w[keep]) @ Q[:, keep].T


def solve_symmetric(M: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``M^+ b`` for symmetric PSD ``M``: Cholesky when ``M`` is definite, eigen-pseudoinverse otherwise."""
    try:
        return scipy.linalg.cho_solve(scipy.linalg.cho_factor(M, check_finite=False), b, check_finite=False)
    except np.linalg.LinAlgError:
        return pinv_symmetric(M) @ b


def schur_variance(cov: np.ndarray, t: np.ndarray, V: np.ndarray) -> float:
    """``Var(t) - S_tv pinv(S_vv) S_vt`` for a target row ``t`` and conditioner rows ``V``."""
    var_t = float(t @ cov @ t)
    if V.shape[0] == 0:
        return var_t
    s_tv = V @ cov @ t
    s_vv = V @ cov @ V.T
    return var_t - float(s_tv @ solve_symmetric(s_vv, s_tv))


def conditional_variance(state: GaussianState, target: Quadrature, conditioners: Sequence[Quadrature]) -> float:
    """Average variance of ``target`` left after optimal inference from ``conditioners``.

    For Gaussian states the average conditional variance is the Schur
    complement. Conditioners must sit on modes other than the target mode
    and carry at most one quadrature per mode (they must be jointly
    measurable).
    """
    t_mode = _check_mode(state, target[0])
    modes = [_check_mode(state, q[0]) for q in conditioners]
    if t_mode in modes:
        raise ValueError("target mode also appears among the conditioners")
    if len(set(modes)) != len(modes):
        raise ValueError("at most one quadrature per conditioning mode")
    n = state.num_modes
    t = quadrature_vector(n, target)
    V = np.array([quadrature_vector(n, q) for q in conditioners]).reshape(len(modes), 2 * n)
    return schur_variance(state.cov, t, V)


def is_physical(state: GaussianState, tol: float = PHYSICALITY_TOL) -> Tuple[bool, float]:
    """Check ``cov + iJ >= 0``; returns the verdict and the smallest eigenvalue."""
    H = state.cov + 1j * symplectic_form(state.num_modes)
    worst = float(np.linalg.eigvalsh(H)[0])
    return worst >= -tol, worst

"""One-dimensional minimizers used for gain and quadrature-angle optimization."""

from __future__ import annotations

import math
from typing import Callable, Sequence, Tuple

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10) -> Tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the best point seen; the final bracket is no
    wider than ``tol``. End points are compared too, so a monotone ``f``
    yields the better end.
    """
    a, b = min(a, b), max(a, b)
    fa, fb = f(a), f(b)
    best_x, best_f = (a, fa) if fa <= fb else (b, fb)
    h = b - a
    if h <= tol:
        return best_x, best_f
    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if fc < fd:
            b, d, fd = d, c, fc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= INV_PHI
            d = a + INV_PHI * h
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def grid_then_golden(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    num: int = 64,
    tol: float = 1e-10,
    f_vec: Callable[[np.ndarray], np.ndarray] = None,
    extra: Sequence[float] = (),
) -> Tuple[float, float]:
    """Coarse grid scan followed by golden-section refinement of the best cell.

    ``f_vec`` is an optional vectorized version of ``f`` for the scan.
    ``extra`` adds known candidate points in ``[lo, hi]`` to the grid, which
    keeps narrow valleys near them from falling between grid points.
    """
    inside = [x for x in extra if lo < x < hi]
    grid = np.unique(np.concatenate([np.linspace(lo, hi, num), inside]))
    values = f_vec(grid) if f_vec is not None else np.array([f(x) for x in grid])
    k = int(np.argmin(values))
    left = grid[max(k - 1, 0)]
    right = grid[min(k + 1, grid.size - 1)]
    x, fx = golden_section(f, left, right, tol)
    if values[k] < fx:
        return float(grid[k]), float(values[k])
    return x, fx


def periodic_grid_then_golden(
    f: Callable[[float], float], period: float, num: int = 64, tol: float = 1e-10
) -> Tuple[float, float]:
    """Minimize a periodic ``f`` over one period (grid of ``num`` points, then golden refine)."""
    step = period / num
    grid = np.arange(num) * step
    values = np.array([f(x) for x in grid])
    k = int(np.argmin(values))
    x, fx = golden_section(f, grid[k] - step, grid[k] + step, tol)
    if values[k] < fx:
        return float(grid[k] % period), float(values[k])
    return x % period, fx

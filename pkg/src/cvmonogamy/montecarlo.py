"""Sampling oracle for inference variances.

Quadrature records of a Gaussian state are jointly normal with the state's
mean and covariance, so i.i.d. multivariate-normal draws reproduce every
joint quadrature statistic. The estimators here never touch a Schur
complement: the binned one discretizes the average conditional variance
directly, the regression one fits least squares to the samples.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.linalg import lapack

from .gaussian import GaussianState, Quadrature, is_physical

CHUNK_ROWS = 1 << 16
MIN_PER_BIN = 100
MAGIC = b"CVMC1"
_HEADER = struct.Struct("<5sIQ")


@dataclass(frozen=True, eq=False)
class SampleBatch:
    count: int
    seed: int
    data: np.ndarray  # (count, 2 * num_modes), columns X1, P1, X2, P2, ...

    @property
    def num_modes(self) -> int:
        return self.data.shape[1] // 2

    def quadrature(self, quad: Quadrature) -> np.ndarray:
        mode, angle = quad
        return math.cos(angle) * self.data[:, 2 * mode] + math.sin(angle) * self.data[:, 2 * mode + 1]


def pivoted_cholesky(cov: np.ndarray) -> np.ndarray:
    """Factor ``L`` with ``L @ L.T == cov``, robust to (near-)singular ``cov``."""
    c, piv, rank, info = lapack.dpstrf(np.array(cov, dtype=float, order="F"), lower=1, tol=-1.0)
    if info < 0:
        raise np.linalg.LinAlgError(f"dpstrf failed with info={info}")
    L = np.tril(c)
    L[:, rank:] = 0.0
    perm = piv - 1
    out = np.empty_like(L)
    out[perm] = L
    return out


def sample_wigner(state: GaussianState, count: int, seed: int) -> SampleBatch:
    """Draw ``count`` phase-space samples from the state's Wigner function.

    Rows are generated in fixed-size chunks, each from its own substream
    ``SeedSequence(seed, spawn_key=(k,))``, so the batch depends only on
    ``(seed, count)`` and chunks could be produced in any order.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    ok, worst = is_physical(state)
    if not ok:
        raise ValueError(f"state is not physical (min eigenvalue {worst:.3g})")
    L = pivoted_cholesky(state.cov)
    dim = L.shape[0]
    data = np.empty((count, dim))
    for k, start in enumerate(range(0, count, CHUNK_ROWS)):
        stop = min(start + CHUNK_ROWS, count)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
        data[start:stop] = rng.standard_normal((stop - start, dim)) @ L.T
    data += state.mean
    return SampleBatch(count=count, seed=seed, data=data)


def default_bins(count: int, dims: int) -> int:
    """Largest per-dimension bin count keeping ``MIN_PER_BIN`` samples per cell on average."""
    return max(1, int(math.floor((count / MIN_PER_BIN) ** (1.0 / dims) + 1e-9)))


def _quantile_labels(values: np.ndarray, num_bins: int) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    labels = np.empty(values.size, dtype=np.int64)
    labels[order] = np.arange(values.size) * num_bins // values.size
    return labels


def empirical_conditional_variance(
    batch: SampleBatch,
    target: Quadrature,
    conditioners: Sequence[Quadrature],
    num_bins: int = None,
    return_stderr: bool = False,
) -> Union[float, Tuple[float, float]]:
    """Binned average conditional variance of ``target`` given ``conditioners``.

    Each conditioner is cut into ``num_bins`` equal-population bins and the
    cells are their product. Within-cell variances are pooled with the
    usual one-degree-of-freedom-per-cell correction. Coarse bins bias the
    result upward, since a cell mean is a piecewise-constant fit.
    """
    dims = len(conditioners)
    t = batch.quadrature(target)
    if dims == 0:
        var = float(np.var(t, ddof=1))
        return (var, var * math.sqrt(2.0 / (t.size - 1))) if return_stderr else var
    if num_bins is None:
        num_bins = default_bins(batch.count, dims)
    cells = np.zeros(batch.count, dtype=np.int64)
    for quad in conditioners:
        cells = cells * num_bins + _quantile_labels(batch.quadrature(quad), num_bins)
    counts = np.bincount(cells)
    occupied = int(np.count_nonzero(counts))
    if batch.count / occupied < MIN_PER_BIN:
        raise ValueError(
            f"{batch.count} samples over {occupied} occupied bins is below {MIN_PER_BIN} per bin; "
            "use fewer bins or more samples"
        )
    sums = np.bincount(cells, weights=t)
    sq = np.bincount(cells, weights=t * t)
    used = counts > 1
    within = sq[used] - sums[used] ** 2 / counts[used]
    dof = int(counts[used].sum() - used.sum())
    var = float(within.sum() / dof)
    if return_stderr:
        return var, var * math.sqrt(2.0 / dof)
    return var


def regression_conditional_variance(
    batch: SampleBatch, target: Quadrature, conditioners: Sequence[Quadrature], return_stderr: bool = False
) -> Union[float, Tuple[float, float]]:
    """Residual variance of a least-squares fit of ``target`` on ``conditioners`` (plus intercept).

    Unbiased for Gaussian data; its expectation is the Schur complement.
    """
    t = batch.quadrature(target)
    design = np.column_stack([np.ones(batch.count)] + [batch.quadrature(q) for q in conditioners])
    coef, *_ = np.linalg.lstsq(design, t, rcond=None)
    resid = t - design @ coef
    dof = batch.count - design.shape[1]
    var = float(resid @ resid / dof)
    if return_stderr:
        return var, var * math.sqrt(2.0 / dof)
    return var


def empirical_linear_variance(batch: SampleBatch, target: Quadrature, other: Quadrature, gain: float) -> Tuple[float, float]:
    """Sample variance of ``target - gain * other`` and its standard error."""
    z = batch.quadrature(target) - gain * batch.quadrature(other)
    var = float(np.var(z, ddof=1))
    return var, var * math.sqrt(2.0 / (batch.count - 1))


# -- binary dump -----------------------------------------------------------------


def write_batch(batch: SampleBatch, path) -> None:
    """Write ``CVMC1`` + u32 num_modes + u64 count, then little-endian float64 rows."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, batch.num_modes, batch.count))
        fh.write(np.ascontiguousarray(batch.data, dtype="<f8").tobytes())


def read_batch(path, seed: int = 0) -> SampleBatch:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError("truncated batch header")
        magic, num_modes, count = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        raw = fh.read()
    expected = count * 2 * num_modes * 8
    if len(raw) != expected:
        raise ValueError(f"expected {expected} payload bytes, found {len(raw)}")
    data = np.frombuffer(raw, dtype="<f8").reshape(count, 2 * num_modes).astype(float)
    return SampleBatch(count=count, seed=seed, data=data)

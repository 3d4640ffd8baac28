"""Numerical oracles for Haar integrals over USp(2n).

Two independent routes to ``int prod_j tr(U^j)^{a_j} dU``:

* ``moment_quadrature`` -- tensor Gauss quadrature against the eigenvalue
  density.  Substituting x_k = cos(2 pi theta_k) turns the density into the
  Chebyshev-second-kind weight sqrt(1-x^2) times the squared Vandermonde in
  the x_k, so Gauss nodes for that weight integrate the (polynomial)
  integrand *exactly* once the per-variable degree bound is met.  The result
  is authoritative up to float roundoff, not an approximation.

* ``moment_mc`` / ``sample_haar_usp`` -- i.i.d. Haar samples via quaternionic
  Gram-Schmidt of a Gaussian quaternionic matrix.  Sampling is blocked with
  per-block seeds derived from the root seed, so results are bit-for-bit
  reproducible and independent of the worker count.

Angles are measured in turns (eigenvalues e^(2 pi i theta)), theta in
[0, 1/2], throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Iterator

import numpy as np

from .errors import CostGuard
from .partitions import Partition

MC_BLOCK_SIZE = 4096  # samples per seed block; fixed so results never depend on threads
_MAX_GRID_POINTS = 4_000_000


@dataclass(frozen=True)
class EigenAngles:
    """Fundamental eigenangles of a USp(2n) matrix, in turns, ascending."""

    theta: tuple[float, ...]

    def __post_init__(self):
        last = 0.0
        for t in self.theta:
            if not 0.0 <= t <= 0.5:
                raise ValueError(f"angle {t} outside [0, 1/2]")
            if t < last:
                raise ValueError("angles must be ascending")
            last = t

    @property
    def n(self) -> int:
        return len(self.theta)


@dataclass(frozen=True)
class QuadratureConfig:
    n: int
    nodes_per_dim: int


@dataclass(frozen=True)
class MCConfig:
    n: int
    sample_count: int
    rng_seed: int

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")


def trace_power(e: EigenAngles, j: int) -> float:
    """tr(U^j) = sum_k 2 cos(2 pi j theta_k)."""
    return math.fsum(2.0 * math.cos(2.0 * math.pi * j * t) for t in e.theta)


def weyl_weight_usp(e: EigenAngles) -> float:
    """Unnormalized eigenangle density of USp(2n):
    prod_{p<r} (2cos 2pi theta_p - 2cos 2pi theta_r)^2 * prod_k (2 sin 2pi theta_k)^2."""
    cosv = [2.0 * math.cos(2.0 * math.pi * t) for t in e.theta]
    weight = 1.0
    for p in range(len(cosv)):
        for r in range(p + 1, len(cosv)):
            weight *= (cosv[p] - cosv[r]) ** 2
    for t in e.theta:
        weight *= (2.0 * math.sin(2.0 * math.pi * t)) ** 2
    return weight


def quadrature_nodes(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes/weights for the weight sqrt(1-x^2) on [-1, 1].

    Closed form: x_i = cos(i pi/(N+1)), w_i = pi/(N+1) sin^2(i pi/(N+1));
    exact for polynomial degree <= 2N-1.
    """
    i = np.arange(1, count + 1, dtype=np.longdouble)
    angles = i * np.longdouble(math.pi) / (count + 1)
    return np.cos(angles), (np.longdouble(math.pi) / (count + 1)) * np.sin(angles) ** 2


def default_nodes(n: int, a: Partition, margin: int = 2) -> int:
    """Smallest exact node count for the self-normalized moment integrand.

    Per variable the squared Vandermonde contributes degree 2(n-1) and the
    trace product at most size(a), so 2N-1 >= 2(n-1) + size(a) is exact.
    """
    degree = 2 * (n - 1) + a.size
    return (degree + 2) // 2 + margin


def moment_quadrature(n: int, a: Partition, cfg: QuadratureConfig | None = None) -> float:
    """Self-normalized quadrature of prod_j tr(U^j)^{a_j} over USp(2n).

    Exact (up to roundoff) whenever cfg.nodes_per_dim meets the
    ``default_nodes`` bound.  Guarded to n <= 4 / moderate grids.
    """
    if cfg is None:
        cfg = QuadratureConfig(n, default_nodes(n, a))
    count = cfg.nodes_per_dim
    if n > 4:
        raise CostGuard(f"quadrature limited to n <= 4, got n = {n}")
    if count**n > _MAX_GRID_POINTS:
        raise CostGuard(f"grid {count}^{n} exceeds {_MAX_GRID_POINTS} points")

    x, w = quadrature_nodes(count)
    theta = np.arccos(x) / (2 * np.longdouble(math.pi))

    def on_axis(vec: np.ndarray, axis: int) -> np.ndarray:
        shape = [1] * n
        shape[axis] = count
        return vec.reshape(shape)

    weight = np.ones((1,) * n, dtype=np.longdouble)
    for axis in range(n):
        weight = weight * on_axis(w, axis)
    vandermonde_sq = np.ones((1,) * n, dtype=np.longdouble)
    for p in range(n):
        for r in range(p + 1, n):
            diff = 2 * on_axis(x, p) - 2 * on_axis(x, r)
            vandermonde_sq = vandermonde_sq * diff * diff

    integrand = weight * vandermonde_sq
    denominator = integrand.sum()
    for j, m in a.items:
        tj = np.zeros((1,) * n, dtype=np.longdouble)
        cos_j = 2 * np.cos(2 * np.longdouble(math.pi) * j * theta)
        for axis in range(n):
            tj = tj + on_axis(cos_j, axis)
        integrand = integrand * tj**m
    return float(integrand.sum() / denominator)


# ---------------------------------------------------------------------------
# Monte Carlo sampling


def _haar_matrix_batch(n: int, batch: int, rng: np.random.Generator) -> np.ndarray:
    """`batch` Haar matrices from the unitary symplectic group, as (2n, 2n)
    complex blocks with columns [v_1..v_n | Tv_1..Tv_n].

    Quaternionic Gram-Schmidt: draw Gaussian columns c_k in C^{2n}, project
    against the span of the previous columns and their quaternionic partners
    T(c) = (-conj(w), conj(u)) for c = (u, w), and normalize by the (real,
    positive) norm -- so the factorization is the unique quaternionic QR and
    left invariance of the Gaussian law makes the result Haar.
    """
    two_n = 2 * n
    cols = np.empty((batch, two_n, two_n), dtype=np.complex128)
    for k in range(n):
        c = rng.standard_normal((batch, two_n)) + 1j * rng.standard_normal((batch, two_n))
        if k:
            prev = cols[:, :, : 2 * k]
            coef = np.matmul(prev.conj().transpose(0, 2, 1), c[:, :, None])
            c = c - np.matmul(prev, coef)[:, :, 0]
        c = c / np.linalg.norm(c, axis=1, keepdims=True)
        cols[:, :, 2 * k] = c
        cols[:, :, 2 * k + 1] = np.concatenate([-c[:, n:].conj(), c[:, :n].conj()], axis=1)
    order = np.empty(two_n, dtype=int)
    order[:n] = 2 * np.arange(n)
    order[n:] = 2 * np.arange(n) + 1
    return cols[:, :, order]


def _haar_angles_batch(n: int, batch: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenangles (in turns, ascending) of `batch` Haar USp(2n) samples.

    The Hermitian part of a sample has spectrum {cos 2 pi theta_k}, each
    value doubled (conjugate eigenvalue pairs), so the angles come from an
    eigvalsh of half the cost of a full nonsymmetric decomposition.
    """
    q = _haar_matrix_batch(n, batch, rng)
    h = 0.5 * (q + q.conj().transpose(0, 2, 1))
    eigs = np.linalg.eigvalsh(h)  # ascending; doubly degenerate cos values
    cosines = eigs[:, ::2]
    theta = np.arccos(np.clip(cosines, -1.0, 1.0)) / (2.0 * math.pi)
    theta.sort(axis=1)
    return theta


def _block_seed(cfg: MCConfig, block_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=cfg.rng_seed, spawn_key=(block_index,))


def _batch_size(n: int) -> int:
    return 512 if n >= 16 else 8192


def trace_product_batch(theta: np.ndarray, items: tuple[tuple[int, int], ...]) -> np.ndarray:
    """prod_j tr(U^j)^{a_j} per sample for an angle batch (rows = samples)."""
    out = np.ones(theta.shape[0])
    for j, m in items:
        tj = (2.0 * np.cos(2.0 * math.pi * j * theta)).sum(axis=1)
        out = out * tj**m
    return out


def _mc_block(args) -> tuple:
    """Worker: sums of the statistic columns and their squares over one block."""
    n, cfg, block_index, count, stat_fn, stat_args = args
    rng = np.random.default_rng(_block_seed(cfg, block_index))
    sums = None
    sq_sums = None
    step = _batch_size(n)
    done = 0
    while done < count:
        take = min(step, count - done)
        theta = _haar_angles_batch(n, take, rng)
        values = stat_fn(theta, *stat_args)  # (take, n_stats)
        if values.ndim == 1:
            values = values[:, None]
        # per-column reductions: bit-identical whether columns are computed
        # together or in separate equal-seed runs
        s = np.array([values[:, k].sum() for k in range(values.shape[1])])
        s2 = np.array([(values[:, k] * values[:, k]).sum() for k in range(values.shape[1])])
        sums = s if sums is None else sums + s
        sq_sums = s2 if sq_sums is None else sq_sums + s2
        done += take
    return block_index, sums, sq_sums


def _moment_stat(theta: np.ndarray, items: tuple[tuple[int, int], ...]) -> np.ndarray:
    return trace_product_batch(theta, items)


def run_mc(
    n: int,
    cfg: MCConfig,
    stat_fn,
    stat_args: tuple,
    n_stats: int,
    threads: int = 1,
) -> list[tuple[float, float]]:
    """Blocked, seed-deterministic Monte Carlo driver.

    ``stat_fn(theta, *stat_args)`` maps an angle batch to per-sample
    statistic columns; returns (mean, stderr) per column.  The block
    decomposition and the reduction order are fixed, so the output is
    identical for every ``threads`` value.
    """
    total = cfg.sample_count
    blocks = []
    idx = 0
    start = 0
    while start < total:
        count = min(MC_BLOCK_SIZE, total - start)
        blocks.append((n, cfg, idx, count, stat_fn, stat_args))
        idx += 1
        start += count

    if threads > 1 and len(blocks) > 1:
        with get_context("fork").Pool(processes=threads) as pool:
            results = pool.map(_mc_block, blocks, chunksize=1)
        results.sort(key=lambda r: r[0])
    else:
        results = [_mc_block(b) for b in blocks]

    out = []
    for col in range(n_stats):
        s = math.fsum(float(r[1][col]) for r in results)
        s2 = math.fsum(float(r[2][col]) for r in results)
        mean = s / total
        if total > 1:
            var = max(s2 - total * mean * mean, 0.0) / (total - 1)
            stderr = math.sqrt(var / total)
        else:
            stderr = 0.0
        out.append((mean, stderr))
    return out


def moment_mc(n: int, a: Partition, cfg: MCConfig, threads: int = 1) -> tuple[float, float]:
    """Sample mean and standard error of prod_j tr(U^j)^{a_j} over Haar USp(2n)."""
    if not a:
        return (1.0, 0.0)
    [(mean, stderr)] = run_mc(n, cfg, _moment_stat, (a.items,), 1, threads)
    return mean, stderr


def sample_haar_usp(cfg: MCConfig) -> Iterator[EigenAngles]:
    """Stream of cfg.sample_count i.i.d. Haar USp(2n) eigenangle sets.

    Uses the same block/seed layout as run_mc, so a given (seed, n) always
    yields the same stream.
    """
    remaining = cfg.sample_count
    block_index = 0
    while remaining > 0:
        count = min(MC_BLOCK_SIZE, remaining)
        rng = np.random.default_rng(_block_seed(cfg, block_index))
        step = _batch_size(cfg.n)
        done = 0
        while done < count:
            take = min(step, count - done)
            for row in _haar_angles_batch(cfg.n, take, rng):
                yield EigenAngles(tuple(float(t) for t in row))
            done += take
        remaining -= count
        block_index += 1

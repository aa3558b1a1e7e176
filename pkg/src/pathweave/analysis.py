"""Single-relational analysis algorithms applied to path matrices.

A path matrix is treated as a weighted directed network. Geodesic metrics
use hop counts over the {0,1} support (the first power of the support with
a positive (i, j) entry gives the shortest path length, which breadth-first
traversal computes directly). Rank and diffusion algorithms row-normalize
by weighted out-sums. Mixing coefficients treat each nonzero entry as one
path carrying its aggregated weight, so all weights enter as fractions and
the results are invariant under uniform rescaling of the matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import AnalysisError
from .kernels import PathMatrix, clip

_TINY = 1e-300


@dataclass(frozen=True)
class GeodesicResult:
    """All-pairs hop counts plus the derived geodesic metrics.

    distances[i, j] is inf when j is unreachable from i; eccentricity and
    closeness are NaN for vertices that reach nothing else. Closeness is the
    mean shortest path over reached vertices, with the reach count alongside.
    """

    distances: np.ndarray
    eccentricity: np.ndarray
    radius: float | None
    diameter: float | None
    closeness: np.ndarray
    reach_counts: np.ndarray


@dataclass(frozen=True)
class PageRankConfig:
    delta: float = 0.85
    epsilon: float = 1e-10
    max_iters: int = 1000

    def __post_init__(self):
        if not (0.0 < self.delta <= 1.0):
            raise AnalysisError(f"delta must be in (0, 1], got {self.delta}")
        if self.epsilon <= 0:
            raise AnalysisError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise AnalysisError("max_iters must be at least 1")


def shortest_paths(z: PathMatrix) -> GeodesicResult:
    """BFS hop distances over the support of z, plus eccentricity, radius,
    diameter, and closeness."""
    n = z.n
    support = clip(z).explicit().astype(np.float64)
    dist = csgraph.shortest_path(support, method="D", unweighted=True, directed=True)
    np.fill_diagonal(dist, 0.0)
    off = dist.copy()
    np.fill_diagonal(off, np.inf)
    finite = np.isfinite(off)
    reach = finite.sum(axis=1)
    ecc = np.full(n, np.nan)
    close = np.full(n, np.nan)
    for i in range(n):
        if reach[i]:
            ecc[i] = off[i][finite[i]].max()
            close[i] = off[i][finite[i]].mean()
    finite_ecc = ecc[~np.isnan(ecc)]
    radius = float(finite_ecc.min()) if finite_ecc.size else None
    diameter = float(finite_ecc.max()) if finite_ecc.size else None
    return GeodesicResult(
        distances=dist,
        eccentricity=ecc,
        radius=radius,
        diameter=diameter,
        closeness=close,
        reach_counts=reach.astype(np.int64),
    )


def _row_normalized(z: PathMatrix):
    """Row-stochastic rescaling of z; returns (matrix, dangling row mask)."""
    w = z.explicit().astype(np.float64).tocsr()
    out = np.asarray(w.sum(axis=1)).ravel()
    dangling = out <= 0
    inv = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, out))
    normalized = sp.csr_array(sp.diags_array(inv) @ w)
    return normalized, dangling


def pagerank_matrix(z: PathMatrix, delta: float) -> np.ndarray:
    """Densely materialized merged matrix: delta past the out-weight
    normalized support, (1 - delta) teleportation, dangling rows uniform."""
    n = z.n
    normalized, dangling = _row_normalized(z)
    p1 = normalized.toarray()
    p1[dangling] = 1.0 / n
    return delta * p1 + (1.0 - delta) / n


def pagerank(z: PathMatrix, cfg: PageRankConfig = PageRankConfig()) -> np.ndarray:
    """Stationary energy vector of the merged, weighted walk matrix.

    Iterates pi <- pi Z until the L2 step difference drops below epsilon;
    the result sums to one. Raises after max_iters with the final residual.
    """
    n = z.n
    if n < 1:
        raise AnalysisError("empty matrix")
    normalized, dangling = _row_normalized(z)
    pi = np.full(n, 1.0 / n)
    residual = np.inf
    for _ in range(cfg.max_iters):
        spread_mass = cfg.delta * float(pi[dangling].sum())
        nxt = cfg.delta * (pi @ normalized) + (spread_mass + (1.0 - cfg.delta)) / n
        nxt /= nxt.sum()
        residual = float(np.linalg.norm(nxt - pi))
        pi = nxt
        if residual < cfg.epsilon:
            return pi
    raise AnalysisError(
        f"pagerank did not converge within {cfg.max_iters} iterations "
        f"(residual {residual:.3e} >= epsilon {cfg.epsilon:.3e})"
    )


def spreading_activation(
    z: PathMatrix,
    seed: np.ndarray,
    steps: int,
    decay: float = 1.0,
    threshold: float = 0.0,
) -> np.ndarray:
    """Finite-step energy propagation with decay and hard thresholding.

    Each step sends the current energy along out-weight-normalized edges,
    scales it by `decay`, zeroes entries below `threshold`, and accumulates.
    Returns the total flow through each vertex including the seed.
    """
    if steps < 0:
        raise AnalysisError("steps must be nonnegative")
    if not (0.0 <= decay <= 1.0):
        raise AnalysisError(f"decay must be in [0, 1], got {decay}")
    if threshold < 0:
        raise AnalysisError("threshold must be nonnegative")
    seed = np.asarray(seed, dtype=np.float64)
    if seed.shape != (z.n,):
        raise AnalysisError(f"seed must have length {z.n}")
    if (seed < 0).any() or not np.isfinite(seed).all():
        raise AnalysisError("seed energies must be finite and nonnegative")
    normalized, _ = _row_normalized(z)
    pi = seed.copy()
    acc = seed.copy()
    for _ in range(steps):
        pi = decay * (pi @ normalized)
        pi[pi < threshold] = 0.0
        acc += pi
    return acc


def _entries(z: PathMatrix):
    coo = z.explicit().tocoo()
    if coo.nnz == 0:
        raise AnalysisError("empty path matrix")
    return coo.row, coo.col, coo.data.astype(np.float64)


def _property_values(values, n, rows, cols):
    vals = np.asarray(values)
    if vals.shape != (n,):
        raise AnalysisError(f"property must supply one value per vertex ({n})")
    return vals


def assortativity_scalar(z: PathMatrix, values) -> float:
    """Weighted correlation of tail and head property values over all paths.

    Each nonzero entry is one path whose weight is its fraction of the total
    path weight; on a unit-weight boolean matrix this reduces to the
    ordinary edge-list correlation.
    """
    rows, cols, weights = _entries(z)
    vals = _property_values(values, z.n, rows, cols).astype(np.float64)
    if not np.isfinite(vals[rows]).all() or not np.isfinite(vals[cols]).all():
        raise AnalysisError("scalar property missing (non-finite) on a path endpoint")
    total = weights.sum()
    jv = vals[rows]
    kv = vals[cols]
    mj = (weights * jv).sum() / total
    mk = (weights * kv).sum() / total
    cov_jk = (weights * (jv - mj) * (kv - mk)).sum() / total
    cov_jj = (weights * (jv - mj) ** 2).sum() / total
    cov_kk = (weights * (kv - mk) ** 2).sum() / total
    if cov_jj <= _TINY or cov_kk <= _TINY:
        raise AnalysisError("degenerate property: zero variance on tails or heads")
    return float(cov_jk / np.sqrt(cov_jj * cov_kk))


def assortativity_categorical(z: PathMatrix, labels) -> float:
    """Categorical mixing coefficient over path-weight fractions.

    e_aa is the weight fraction of paths staying inside category a; i_a and
    j_a are the tail- and head-side fractions. r = 1 iff all weight stays
    within categories."""
    rows, cols, weights = _entries(z)
    labels = list(labels)
    if len(labels) != z.n:
        raise AnalysisError(f"property must supply one value per vertex ({z.n})")
    for idx in np.concatenate([rows, cols]):
        if labels[idx] is None:
            raise AnalysisError("categorical property missing on a path endpoint")
    total = weights.sum()
    e_aa: dict = {}
    i_a: dict = {}
    j_a: dict = {}
    for i, j, w in zip(rows, cols, weights):
        a, b = labels[i], labels[j]
        frac = w / total
        i_a[a] = i_a.get(a, 0.0) + frac
        j_a[b] = j_a.get(b, 0.0) + frac
        if a == b:
            e_aa[a] = e_aa.get(a, 0.0) + frac
    s = sum(i_a.get(a, 0.0) * j_a.get(a, 0.0) for a in set(i_a) | set(j_a))
    if 1.0 - s <= 1e-12:
        raise AnalysisError("degenerate: one category")
    return float((sum(e_aa.values()) - s) / (1.0 - s))

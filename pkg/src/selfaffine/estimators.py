"""Attractor sampling and box-counting dimension estimates.

All randomness comes from NumPy's Philox4x64 counter-based generator
seeded with the caller's 64-bit integer, so a seed pins the output.
"""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, InvalidInputError

POINT_BUDGET = 4_000_000
SCAN_CHUNK = 1 << 15


def make_rng(seed):
    """Philox generator for a 64-bit seed."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidInputError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    seed: int = 0
    generator: str = ""

    def __len__(self):
        return len(self.points)

    @property
    def d(self):
        return self.points.shape[1]


def _scan_compose(linears, translations):
    """Inclusive prefix compositions ``g_t o ... o g_0`` (Hillis-Steele)."""
    L = linears.copy()
    T = translations.copy()
    offset = 1
    m = len(L)
    while offset < m:
        Lp, Tp = L[:-offset], T[:-offset]
        Lc, Tc = L[offset:], T[offset:]
        newT = np.einsum("nij,nj->ni", Lc, Tp) + Tc
        newL = np.einsum("nij,njk->nik", Lc, Lp)
        L[offset:], T[offset:] = newL, newT
        offset *= 2
    return L, T


def chaos_game(ifs, n_points, seed=0, burn_in=100):
    """Random-iteration sample of the attractor.

    Starts at the origin and applies maps chosen uniformly at random; the
    first ``burn_in`` iterates are dropped. The orbit is evaluated in
    chunks by a parallel prefix scan over affine compositions, which yields
    the same orbit as stepping one map at a time (up to rounding).
    """
    ifs.require_valid()
    if n_points < 1:
        raise InvalidInputError(f"n_points must be positive, got {n_points}")
    if burn_in < 0:
        raise InvalidInputError(f"burn_in must be non-negative, got {burn_in}")
    rng = make_rng(seed)
    total = burn_in + n_points
    choice = rng.integers(0, ifs.k, size=total)
    linears, translations = ifs.linears, ifs.translations
    x = np.zeros(ifs.d)
    orbit = np.empty((total, ifs.d))
    for start in range(0, total, SCAN_CHUNK):
        idx = choice[start : start + SCAN_CHUNK]
        L, T = _scan_compose(linears[idx], translations[idx])
        pts = L @ x + T
        orbit[start : start + len(idx)] = pts
        x = pts[-1]
    return PointCloud(orbit[burn_in:].copy(), seed, "chaos_game/philox")


def _tree_points(ifs, depth, sigma=0.0, rng=None, budget=POINT_BUDGET):
    if depth < 0:
        raise InvalidInputError(f"depth must be non-negative, got {depth}")
    ifs.require_valid()
    k, d = ifs.k, ifs.d
    if k**depth > budget:
        raise BudgetExceededError(f"{k}^{depth} points exceeds the budget {budget}", limit=budget)
    linears, translations = ifs.linears, ifs.translations
    L = np.eye(d)[None]
    T = np.zeros((1, d))
    for level in range(depth):
        p = len(T)
        if rng is None:
            eps = np.zeros((p, k, d))
        else:
            eps = sigma * (2.0 * rng.random((p, k, d)) - 1.0)
        shifted = translations[None, :, :] + eps
        # T_ui = L_u (a_i + eps_ui) + T_u, summed in a fixed order
        newT = np.broadcast_to(T[:, None, :], (p, k, d)).copy()
        for j in range(d):
            newT += L[:, None, :, j] * shifted[:, :, j, None]
        T = newT.reshape(p * k, d)
        if level + 1 < depth:
            L = np.einsum("pij,kjl->pkil", L, linears).reshape(p * k, d, d)
    return T


def deterministic_points(ifs, depth, budget=POINT_BUDGET):
    """``f_w(0)`` for every word of length ``depth``, in lexicographic order."""
    return PointCloud(_tree_points(ifs, depth, budget=budget), 0, f"depth/{depth}")


def randomized_attractor(ifs, depth, sigma, seed=0, budget=POINT_BUDGET):
    """Level-``depth`` points with random translation errors.

    Every node of the construction tree gets its own perturbation, uniform
    on ``[-sigma, sigma]^d`` and added to the translation of the map applied
    there. ``sigma = 0`` reproduces :func:`deterministic_points` bit for bit.
    """
    if sigma < 0:
        raise InvalidInputError(f"sigma must be non-negative, got {sigma}")
    pts = _tree_points(ifs, depth, float(sigma), make_rng(seed), budget)
    return PointCloud(pts, seed, f"randomized/philox/sigma={sigma:g}")


BoxCountSeries = namedtuple("BoxCountSeries", ["scales", "counts", "n_points"])
BoxDimFit = namedtuple("BoxDimFit", ["slope", "intercept", "max_residual"])


def dyadic_scales(j0, j1):
    """``[2**-j0, ..., 2**-j1]``."""
    if j1 < j0:
        raise InvalidInputError(f"empty scale range {j0}..{j1}")
    return 2.0 ** -np.arange(j0, j1 + 1)


def _count_cells(points, delta):
    cells = np.floor(points / delta).astype(np.int64)
    cells -= cells.min(axis=0)
    spans = cells.max(axis=0) + 1
    if np.prod(spans.astype(float)) < 2.0**62:
        key = np.zeros(len(cells), dtype=np.int64)
        for j in range(cells.shape[1]):
            key = key * spans[j] + cells[:, j]
        return len(np.unique(key))
    return len(np.unique(cells, axis=0))


def box_count(cloud, scales):
    """Occupied cells of the origin-anchored grid of side ``delta``.

    Cells are half-open, ``[m delta, (m + 1) delta)`` in every coordinate.
    ``cloud`` is a :class:`PointCloud` or an ``(N, d)`` array.
    """
    points = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    if points.ndim != 2 or len(points) == 0:
        raise InvalidInputError("box counting needs a non-empty (N, d) point array")
    scales = np.asarray(scales, dtype=float).reshape(-1)
    if scales.size == 0 or np.any(scales <= 0) or np.any(scales > 1):
        raise InvalidInputError("scales must lie in (0, 1]")
    if np.any(np.diff(scales) >= 0):
        raise InvalidInputError("scales must be strictly decreasing")
    counts = np.array([_count_cells(points, delta) for delta in scales])
    return BoxCountSeries(scales, counts, len(points))


def boxdim_estimate(series):
    """Least-squares slope of ``log N(delta)`` against ``log(1/delta)``."""
    scales = np.asarray(series.scales, dtype=float)
    counts = np.asarray(series.counts, dtype=float)
    if len(scales) < 3:
        raise InvalidInputError(f"need at least 3 scales for a fit, got {len(scales)}")
    x = np.log(1.0 / scales)
    y = np.log(counts)
    X = np.stack([x, np.ones_like(x)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(X, y, rcond=None)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return BoxDimFit(float(slope), float(intercept), residual)


def estimate_box_dimension(ifs, n_points=100_000, seed=0, scales=None, burn_in=100):
    """Chaos-game sample followed by a box-count fit; returns ``(fit, series)``."""
    if scales is None:
        scales = dyadic_scales(3, 8)
    cloud = chaos_game(ifs, n_points, seed, burn_in)
    series = box_count(cloud, scales)
    return boxdim_estimate(series), series

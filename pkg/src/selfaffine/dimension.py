"""Similarity dimension, singular value function, pressure and its zero."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, InvalidInputError
from .ifs import MAX_WORD_LENGTH
from .linalg_small import as_matrix, log_singular_values_batch, singular_values

ENUMERATION_BUDGET = 20_000_000
# words per vectorised block of the enumeration
BLOCK_WORDS = 1 << 16
# cache per-word log singular values below this many floats
CACHE_FLOATS = 8_000_000


def similarity_dimension(ratios, tol=1e-12):
    """The ``s >= 0`` with ``sum(r**s for r in ratios) == 1``.

    Bisection on ``[0, s_hi]``, doubling ``s_hi`` until the sum drops below
    one; stops once the residual is under ``tol``.

    >>> round(similarity_dimension([0.5, 0.5, 0.5]), 10)
    1.5849625007
    """
    r = np.asarray(ratios, dtype=float).reshape(-1)
    if r.size == 0:
        raise InvalidInputError("need at least one ratio")
    if np.any(~np.isfinite(r)) or np.any(r <= 0.0) or np.any(r >= 1.0):
        raise InvalidInputError(f"ratios must lie in (0, 1), got {r.tolist()}")
    if r.size == 1:
        return 0.0
    logs = np.log(r)

    def excess(s):
        return float(np.sum(np.exp(s * logs))) - 1.0

    lo, hi = 0.0, 1.0
    while excess(hi) >= 0.0:
        lo, hi = hi, 2.0 * hi
    while True:
        mid = 0.5 * (lo + hi)
        f = excess(mid)
        if abs(f) < tol or mid in (lo, hi):
            return mid
        if f > 0.0:
            lo = mid
        else:
            hi = mid


def log_svf(log_sv, s):
    """``log phi^s`` from log singular values (last axis, descending).

    For ``s >= d`` the function continues as ``|det|^(s/d)``.
    """
    log_sv = np.asarray(log_sv, dtype=float)
    d = log_sv.shape[-1]
    if s < 0:
        raise InvalidInputError(f"s must be non-negative, got {s}")
    if s >= d:
        return (s / d) * np.sum(log_sv, axis=-1)
    l = int(math.floor(s))
    out = np.sum(log_sv[..., :l], axis=-1)
    frac = s - l
    if frac > 0.0:
        out = out + frac * log_sv[..., l]
    return out


def svf(M, s):
    """Singular value function ``phi^s(M)``.

    ``alpha_1 ... alpha_l * alpha_{l+1}^(s - l)`` with ``l = floor(s)`` for
    ``0 <= s < d``, and ``|det M|^(s/d)`` beyond.

    >>> svf([[0.5, 0.0], [0.0, 0.25]], 1.5)
    0.25
    """
    M = as_matrix(M)
    sv = singular_values(M)
    if np.any(sv <= 0.0):
        raise InvalidInputError("phi^s needs an invertible matrix")
    return float(np.exp(log_svf(np.log(sv), s)))


def _logsumexp(x):
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return -np.inf
    m = float(np.max(x))
    if not np.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(x - m))))


def _level_products(linears, log_dets, n):
    """All products of ``n`` letters in lexicographic word order."""
    d = linears.shape[1]
    P = np.eye(d)[None]
    L = np.zeros(1)
    for _ in range(n):
        P = np.einsum("kij,njl->knil", linears, P).reshape(-1, d, d)
        L = (log_dets[:, None] + L[None, :]).reshape(-1)
    return P, L


def check_budget(k, n, budget=ENUMERATION_BUDGET):
    if n < 1:
        raise InvalidInputError(f"word length must be at least 1, got {n}")
    if n > MAX_WORD_LENGTH:
        raise InvalidInputError(f"word length {n} exceeds the cap {MAX_WORD_LENGTH}")
    if k**n > budget:
        raise BudgetExceededError(f"{k}^{n} = {k**n} words exceeds the enumeration budget {budget}", limit=budget)


def iter_log_singular_values(ifs, n, budget=ENUMERATION_BUDGET):
    """Yield log singular values of ``A_w`` for all ``|w| = n`` in blocks.

    Blocks come in lexicographic word order. Each block multiplies one
    prefix product into a shared table of suffix products, so no product is
    formed from scratch.
    """
    ifs.require_valid()
    k = ifs.k
    check_budget(k, n, budget)
    linears = ifs.linears
    log_dets = np.log(np.abs(np.linalg.det(linears)))
    n_suffix = n
    while n_suffix > 1 and k**n_suffix > BLOCK_WORDS:
        n_suffix -= 1
    suffix, suffix_ld = _level_products(linears, log_dets, n_suffix)
    prefix, prefix_ld = _level_products(linears, log_dets, n - n_suffix)
    for P, ld in zip(prefix, prefix_ld):
        block = np.einsum("ij,njl->nil", P, suffix)
        yield log_singular_values_batch(block, ld + suffix_ld)


class _PressureTable:
    """Evaluates ``P_n(s)``, caching per-word log singular values when small."""

    def __init__(self, ifs, n, budget=ENUMERATION_BUDGET):
        self.ifs, self.n, self.budget = ifs, n, budget
        check_budget(ifs.k, n, budget)
        self.cached = None
        if ifs.k**n * ifs.d <= CACHE_FLOATS:
            self.cached = list(iter_log_singular_values(ifs, n, budget))

    def blocks(self):
        if self.cached is not None:
            return iter(self.cached)
        return iter_log_singular_values(self.ifs, self.n, self.budget)

    def __call__(self, s):
        total = -np.inf
        for block in self.blocks():
            total = np.logaddexp(total, _logsumexp(log_svf(block, s)))
        return float(total) / self.n


def pressure_approx(ifs, s, n, budget=ENUMERATION_BUDGET):
    """Finite-level pressure ``(1/n) log sum_{|w|=n} phi^s(A_w)``.

    Exhaustive over all ``k**n`` words; raises :class:`BudgetExceededError`
    past ``budget`` words.
    """
    return _PressureTable(ifs, n, budget)(s)


def log_word_sum(ifs, s, n, budget=ENUMERATION_BUDGET):
    """``log sum_{|w|=n} phi^s(A_w)``, i.e. ``n * P_n(s)``."""
    return n * pressure_approx(ifs, s, n, budget)


@dataclass(frozen=True)
class PressureCurve:
    """``P_n`` sampled on a grid, with its zero ``s_n``.

    ``clamped`` is set when ``P_n`` is still positive at the top of the
    search interval ``2d``; ``above_dimension`` when the zero exceeds ``d``
    and therefore relies on the ``|det|^(s/d)`` continuation.
    """

    depth: int
    samples: np.ndarray
    zero: float
    clamped: bool = False
    above_dimension: bool = False

    @property
    def s(self):
        return self.samples[:, 0]

    @property
    def values(self):
        return self.samples[:, 1]


def affinity_dimension(ifs, n, tol=1e-10, budget=ENUMERATION_BUDGET, grid=41):
    """Zero ``s_n`` of ``P_n`` on ``[0, 2d]`` by bisection.

    ``P_n`` is strictly decreasing because every ``A_w`` is a strict
    contraction. By subadditivity ``s_n`` bounds the singular dimension from
    above and ``s_{2n} <= s_n``. ``tol`` is the final bracket width.
    """
    if tol < 1e-12:
        raise InvalidInputError(f"tol must be at least 1e-12, got {tol}")
    P = _PressureTable(ifs, n, budget)
    d = ifs.d
    top = 2.0 * d
    clamped = False
    if P(0.0) <= 0.0:
        zero = 0.0
    elif P(top) > 0.0:
        zero, clamped = top, True
    else:
        lo, hi = 0.0, top
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if P(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        zero = 0.5 * (lo + hi)
    s_grid = np.linspace(0.0, top, grid) if grid else np.empty(0)
    samples = np.array([(s, P(s)) for s in s_grid]).reshape(-1, 2)
    return PressureCurve(n, samples, zero, clamped, zero > d)


def affinity_dimension_sequence(ifs, depths, tol=1e-10, budget=ENUMERATION_BUDGET):
    """``{n: s_n}`` for each requested depth."""
    return {n: affinity_dimension(ifs, n, tol, budget, grid=0).zero for n in depths}

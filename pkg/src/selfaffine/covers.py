"""Stopping-time word sets and the ellipse/ball covers built on them."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, InvalidInputError, UnsupportedDimensionError
from .ifs import MAX_WORD_LENGTH, bounding_radius, compose
from .linalg_small import svd_small


@dataclass(frozen=True)
class StoppingSet:
    """Words where the running product of ratios first drops below ``delta``.

    ``words`` are 0-based index tuples in lexicographic order.
    """

    delta: float
    words: list

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    @property
    def max_length(self):
        return max(len(w) for w in self.words)


def stopping_set(ifs, delta, max_length=MAX_WORD_LENGTH, ratios=None):
    """All words ``w`` with ``lambda_w < delta <= lambda_{w without last letter}``.

    ``lambda_w`` is the product of the operator norms of the letters of
    ``w``. Expansion is depth first and accumulates log-ratios. Raises
    :class:`BudgetExceededError` instead of truncating if a word would need
    more than ``max_length`` letters.
    """
    if not 0.0 < delta < 1.0:
        raise InvalidInputError(f"delta must lie in (0, 1), got {delta}")
    if ratios is None:
        ifs.require_valid()
        ratios = ifs.ratios()
    logs = np.log(np.asarray(ratios, dtype=float))
    log_delta = math.log(delta)
    k = len(logs)
    words = []
    # stack of (word, log product); children pushed in reverse for lexicographic output
    stack = [((i,), logs[i]) for i in reversed(range(k))]
    while stack:
        word, lp = stack.pop()
        if lp < log_delta:
            words.append(word)
            continue
        if len(word) >= max_length:
            raise BudgetExceededError(
                f"delta={delta} needs words longer than the cap {max_length}", limit=max_length
            )
        stack.extend((word + (i,), lp + logs[i]) for i in reversed(range(k)))
    return StoppingSet(float(delta), words)


@dataclass(frozen=True, eq=False)
class Ellipse:
    """``{center + sum_j t_j semi_lengths[j] axes[:, j] : |t| <= 1}``.

    ``axes`` holds orthonormal direction vectors as columns, ordered like
    ``semi_lengths`` (descending).
    """

    center: np.ndarray
    axes: np.ndarray
    semi_lengths: np.ndarray

    @property
    def d(self):
        return self.center.shape[0]

    @property
    def angle(self):
        """Direction of the major axis in the plane, in radians."""
        if self.d != 2:
            raise UnsupportedDimensionError("angle is only defined in the plane")
        return math.atan2(self.axes[1, 0], self.axes[0, 0])

    def local(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return (points - self.center) @ self.axes

    def contains(self, points, tol=1e-12):
        y = self.local(points)
        semi = np.asarray(self.semi_lengths)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(semi > 0, y / semi, np.where(np.abs(y) <= tol, 0.0, np.inf))
        return np.sum(q * q, axis=1) <= 1.0 + tol

    def boundary(self, n):
        """``n`` equally spaced (in parameter) boundary points; plane only."""
        if self.d != 2:
            raise UnsupportedDimensionError("boundary sampling is only implemented in the plane")
        t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        local = np.stack([self.semi_lengths[0] * np.cos(t), self.semi_lengths[1] * np.sin(t)], axis=1)
        return local @ self.axes.T + self.center


def cylinder_cover(ifs, words, R=None):
    """One ellipse ``f_w(B(0, R))`` per word.

    With ``R`` at least the bounding radius the union covers the attractor.
    Working in the normalisation where the bounding ball is the unit ball and
    scaling back gives the same numbers: centre ``f_w(0)``, semi-axes
    ``R * alpha_j(A_w)`` along the left singular vectors of ``A_w``.
    """
    if R is None:
        R = bounding_radius(ifs)
    if R <= 0:
        raise InvalidInputError(f"radius must be positive, got {R}")
    out = []
    for w in words:
        f = compose(ifs, w)
        U, sigma = svd_small(f.linear)
        out.append(Ellipse(f.translation.copy(), U, R * sigma))
    return out


def union_contains(ellipses, points, tol=1e-12):
    """Boolean mask: which points lie in at least one ellipse."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    hit = np.zeros(len(points), dtype=bool)
    for e in ellipses:
        todo = ~hit
        if not todo.any():
            break
        hit[todo] = e.contains(points[todo], tol)
    return hit


def _half_height(x, a1, a2):
    return a2 * math.sqrt(max(0.0, 1.0 - (x / a1) ** 2))


def ball_cover_from_ellipse(e, r):
    """Centres of radius-``r`` balls covering a planar ellipse.

    The major axis is swept left to right in columns. A column
    ``[x_a, x_b]`` of the ellipse fits in the rectangle
    ``[x_a, x_b] x [-H, H]`` where ``H`` is the largest half-height over the
    column; it is covered by ``m`` balls stacked across the minor axis, which
    works exactly when ``((x_b - x_a)/2)^2 + (H/m)^2 <= r^2``. Each column
    takes the ``m`` with the largest advance per ball (or the fewest balls
    that finish the sweep). When ``r`` is well above the minor semi-axis
    every column has ``m = 1`` and all centres sit on the major axis; an
    ellipse inside ``B(center, r)`` gets a single ball.
    """
    if r <= 0:
        raise InvalidInputError(f"cover radius must be positive, got {r}")
    if e.d != 2:
        raise UnsupportedDimensionError("ball covers are only constructed in the plane")
    a1, a2 = float(e.semi_lengths[0]), float(e.semi_lengths[1])
    if a1 <= r:
        return e.center[None, :].copy()
    r2 = r * r

    def column_height(xa, xb):
        if xa <= 0.0 <= xb:
            return a2
        return _half_height(xb if xb < 0.0 else xa, a1, a2)

    def reach(xa, m):
        def fits(xb):
            return (0.5 * (xb - xa)) ** 2 + (column_height(xa, xb) / m) ** 2 <= r2

        if fits(a1):
            return a1
        lo, hi = xa, a1
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if fits(mid):
                lo = mid
            else:
                hi = mid
        return lo

    local = []
    xa = -a1
    while xa < a1:
        m0 = int(math.floor(_half_height(xa, a1, a2) / r)) + 1
        options = [(m, reach(xa, m)) for m in range(m0, m0 + 4)]
        finishing = [(m, xb) for m, xb in options if xb >= a1]
        if finishing:
            m, xb = finishing[0]
        else:
            m, xb = max(options, key=lambda o: ((o[1] - xa) / o[0], -o[0]))
        if xb <= xa:
            raise RuntimeError("ball cover sweep made no progress")
        H = column_height(xa, xb)
        xc = 0.5 * (xa + xb)
        local.extend((xc, -H + (2 * j + 1) * H / m) for j in range(m))
        xa = xb
    local = np.asarray(local)
    return local @ e.axes.T + e.center


def ball_cover_from_ellipses(ellipses, r):
    """Concatenated ball covers, in ellipse order."""
    parts = [ball_cover_from_ellipse(e, r) for e in ellipses]
    return np.concatenate(parts) if parts else np.empty((0, 2))

"""Dense linear algebra for small square matrices (2 <= d <= 4).

The plane gets closed-form formulas. For d = 3, 4 singular values come
from one-sided (Hestenes) Jacobi rotations, which diagonalise ``M.T @ M``
implicitly without forming it, so small singular values of long matrix
products keep their relative accuracy.

Every function also accepts a stack of matrices with shape ``(N, d, d)``
through the ``*_batch`` variants; the word enumerations in
:mod:`selfaffine.dimension` rely on those.
"""

import numpy as np

from .errors import InvalidInputError

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
# in the iterative path, squared singular values below this (relative to the
# largest entry) are round-off and become exact zeros
ZERO_SQUARED = 1e-30


def as_matrix(M):
    """Return ``M`` as a float square array, checking shape and finiteness."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {M.shape}")
    if not 1 <= M.shape[0] <= 4:
        raise InvalidInputError(f"matrix dimension {M.shape[0]} outside 1..4")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix has non-finite entries")
    return M


def _as_stack(Ms):
    Ms = np.asarray(Ms, dtype=float)
    if Ms.ndim != 3 or Ms.shape[1] != Ms.shape[2]:
        raise InvalidInputError(f"expected shape (N, d, d), got {Ms.shape}")
    if not np.all(np.isfinite(Ms)):
        raise InvalidInputError("matrix stack has non-finite entries")
    return Ms


def determinant(M):
    M = as_matrix(M)
    if M.shape[0] == 2:
        return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    return float(np.linalg.det(M))


def _sv2(Ms):
    # closed form for 2x2: alpha_{1,2} = (h1 +- h2) / 2 with
    # h1 = |(a + d, c - b)|, h2 = |(a - d, b + c)|; the smaller value is
    # recovered as |det| / alpha_1 to avoid cancellation.
    a, b = Ms[:, 0, 0], Ms[:, 0, 1]
    c, d = Ms[:, 1, 0], Ms[:, 1, 1]
    h1 = np.hypot(a + d, c - b)
    h2 = np.hypot(a - d, b + c)
    s1 = 0.5 * (h1 + h2)
    det = np.abs(a * d - b * c)
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = np.where(s1 > 0, det / s1, 0.0)
    s2 = np.minimum(s2, s1)
    return np.stack([s1, s2], axis=1)


def _one_sided_jacobi(Ms):
    """Orthogonalise the columns of every matrix in the stack.

    Returns ``(sigma, U)`` where ``sigma`` has shape (N, d) (unsorted) and
    ``U`` holds the rotated columns, i.e. ``M @ V = U`` with orthogonal V.
    """
    U = Ms.copy()
    d = U.shape[1]
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(d - 1):
            for q in range(p + 1, d):
                up, uq = U[:, :, p], U[:, :, q]
                alpha = np.einsum("ni,ni->n", up, up)
                beta = np.einsum("ni,ni->n", uq, uq)
                gamma = np.einsum("ni,ni->n", up, uq)
                scale = np.sqrt(alpha * beta)
                active = np.abs(gamma) > JACOBI_TOL * scale
                if not np.any(active):
                    continue
                rotated = True
                g = np.where(active, gamma, 1.0)
                with np.errstate(over="ignore"):
                    # an infinite zeta means a negligible rotation, t = 0
                    zeta = (beta - alpha) / (2.0 * g)
                    t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = cs * t
                cs = np.where(active, cs, 1.0)[:, None]
                sn = np.where(active, sn, 0.0)[:, None]
                new_p = cs * up - sn * uq
                new_q = sn * up + cs * uq
                U[:, :, p] = new_p
                U[:, :, q] = new_q
        if not rotated:
            break
    sigma = np.sqrt(np.einsum("nij,nij->nj", U, U))
    return sigma, U


def _normalised(Ms):
    # rescale each matrix by its largest entry so products of many
    # contractions cannot underflow inside the squared sums
    scale = np.max(np.abs(Ms), axis=(1, 2))
    safe = np.where(scale > 0, scale, 1.0)
    return Ms / safe[:, None, None], scale


def singular_values_batch(Ms):
    """Singular values of a stack of matrices, each row sorted descending."""
    Ms = _as_stack(Ms)
    unit, scale = _normalised(Ms)
    if Ms.shape[1] == 1:
        sv = np.abs(unit[:, :, 0])
    elif Ms.shape[1] == 2:
        sv = _sv2(unit)
    else:
        sv, _ = _one_sided_jacobi(unit)
        sv = -np.sort(-sv, axis=1)
        sv = np.where(sv * sv < ZERO_SQUARED, 0.0, sv)
    return sv * scale[:, None]


def log_singular_values_batch(Ms, log_abs_det=None):
    """Natural logs of the singular values of a stack of matrices.

    Parameters
    ----------
    Ms : array_like, shape (N, d, d)
    log_abs_det : array_like, shape (N,), optional
        Exact ``log|det|`` per matrix when the caller knows it (for word
        products it is a sum of per-letter terms). In the plane it then
        replaces the smallest singular value's computed logarithm, which
        would otherwise inherit the cancellation in ``ad - bc``.

    Returns
    -------
    ndarray, shape (N, d)
        Descending along axis 1. Zero singular values give ``-inf``.
    """
    Ms = _as_stack(Ms)
    unit, scale = _normalised(Ms)
    with np.errstate(divide="ignore"):
        log_scale = np.log(scale)
        if Ms.shape[1] == 2 and log_abs_det is not None:
            a, b = unit[:, 0, 0], unit[:, 0, 1]
            c, d = unit[:, 1, 0], unit[:, 1, 1]
            s1 = 0.5 * (np.hypot(a + d, c - b) + np.hypot(a - d, b + c))
            log1 = np.log(s1) + log_scale
            log2 = np.asarray(log_abs_det, dtype=float) - log1
            return np.stack([log1, np.minimum(log2, log1)], axis=1)
        sv = singular_values_batch(unit)
        return np.log(sv) + log_scale[:, None]


def singular_values(M):
    """Singular values ``alpha_1 >= ... >= alpha_d >= 0`` of a small matrix.

    These are the semi-axis lengths of the ellipsoid ``M(B(0, 1))``, i.e.
    square roots of the eigenvalues of ``M.T @ M``.

    Examples
    --------
    >>> singular_values([[0.5, 0.0], [0.0, -0.3]])
    array([0.5, 0.3])
    """
    M = as_matrix(M)
    return singular_values_batch(M[None])[0]


def operator_norm(M):
    """Spectral norm, the largest singular value."""
    return float(singular_values(M)[0])


def svd_small(M):
    """Left singular vectors and singular values.

    Returns ``(U, sigma)`` with orthonormal columns ``U[:, j]`` giving the
    direction of the semi-axis of length ``sigma[j]`` of ``M(B(0, 1))``.
    """
    M = as_matrix(M)
    d = M.shape[0]
    sigma = singular_values(M)
    if d == 1:
        return np.ones((1, 1)), sigma
    if d == 2:
        a, b = M[0]
        c, e = M[1]
        # principal axis of M M^T
        theta = 0.5 * np.arctan2(2.0 * (a * c + b * e), a * a + b * b - c * c - e * e)
        ct, st = np.cos(theta), np.sin(theta)
        return np.array([[ct, -st], [st, ct]]), sigma
    unit, _ = _normalised(M[None])
    sv, cols = _one_sided_jacobi(unit)
    sv, cols = sv[0], cols[0]
    order = np.argsort(-sv, kind="stable")
    sv, cols = sv[order], cols[:, order]
    U = np.zeros((d, d))
    keep = sv > np.sqrt(ZERO_SQUARED) * max(sv[0], 1e-300)
    U[:, keep] = cols[:, keep] / sv[keep]
    if not np.all(keep):
        # complete the basis for (numerically) rank-deficient input
        q, _ = np.linalg.qr(np.hstack([U[:, keep], np.eye(d)]))
        U[:, ~keep] = q[:, np.count_nonzero(keep):d]
    return U, sigma

"""Compliant-axis selection: uncentered PCA over per-demo mean motions plus a BIC score.

Motion left over after removing the desired-direction component must
have been caused by the environment, so the subspace spanned by the
per-demonstration mean directions tells us which axes need zero
stiffness. An information criterion (ln(n) k - 2 ln L with n = number of
demonstrations and k = number of axes) picks the smallest subspace that
explains the means under an isotropic demonstration-noise model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NoInput, NonOrthonormalAxes

_ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class ComplianceResult:
    """Chosen number of compliant axes, their directions and the BIC table."""

    n_axes: int
    axes: np.ndarray  # (3, n_axes) orthonormal columns
    bic: np.ndarray  # scores for d = 0..3 (inf where excluded)
    residuals: np.ndarray  # (J, 3) residual vectors at the chosen d
    eigenvalues: np.ndarray
    means: np.ndarray  # (J, 3) input means after desired-direction removal

    def __post_init__(self):
        for name in ("axes", "bic", "residuals", "eigenvalues", "means"):
            a = np.asarray(getattr(self, name), dtype=float)
            a.flags.writeable = False
            object.__setattr__(self, name, a)


def remove_desired_component(
    means: Sequence[np.ndarray], direction: np.ndarray
) -> list[np.ndarray]:
    """Project each mean onto the plane orthogonal to the desired direction."""
    d = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(d) - 1.0) > 1e-9:
        raise ValueError("direction must be unit length")
    return [np.asarray(m, dtype=float) - np.dot(m, d) * d for m in means]


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0.0 else v


def pca_ranks(vectors: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors/values of the uncentered second-moment matrix, descending.

    Uncentered on purpose: means near the origin must read as "no
    residual motion", which mean-centering would erase.
    """
    X = np.asarray(vectors, dtype=float).reshape(-1, 3)
    if len(X) == 0:
        raise NoInput("pca_ranks requires at least one vector")
    M = X.T @ X / len(X)
    evals, evecs = np.linalg.eigh(M)
    order = np.argsort(evals)[::-1]
    evals = np.maximum(evals[order], 0.0)
    evecs = evecs[:, order]
    for j in range(3):
        evecs[:, j] = _canonical_sign(evecs[:, j])
    return evecs, evals


def residuals(vectors: Sequence[np.ndarray], d: int, basis: Optional[np.ndarray] = None) -> np.ndarray:
    """Residuals (I - V_d V_d^T) x for the rank-d PCA approximation.

    d = 0 returns the inputs unchanged; d = 3 returns zeros. basis
    overrides the eigenvectors (columns) when the caller already has them.
    """
    if d not in (0, 1, 2, 3):
        raise ValueError("d must be in 0..3")
    X = np.asarray(vectors, dtype=float).reshape(-1, 3)
    if d == 0:
        return X.copy()
    V = basis if basis is not None else pca_ranks(X)[0]
    Vd = V[:, :d]
    return X - X @ Vd @ Vd.T


def _log_likelihood(eps: np.ndarray, sigma: float) -> float:
    """Sum of log N(eps_j | 0, sigma^2 I_3)."""
    sq = float(np.sum(eps * eps))
    J = len(eps)
    return -1.5 * J * np.log(2.0 * np.pi * sigma * sigma) - sq / (2.0 * sigma * sigma)


def select_num_axes(
    means: Sequence[np.ndarray], direction: Optional[np.ndarray], sigma_demo: float
) -> ComplianceResult:
    """Pick how many compliant axes explain the per-demo means, and which.

    When a desired direction exists its component is removed first and
    three compliant axes are excluded (they would contradict the
    direction). With a single demonstration the information criterion is
    degenerate (ln 1 = 0), so the smallest d whose residuals all fall
    under 2 * sigma_demo is chosen instead.
    """
    J = len(means)
    if J == 0:
        raise NoInput("select_num_axes requires at least one demonstration mean")
    if sigma_demo <= 0.0:
        raise ValueError("sigma_demo must be > 0")

    if direction is not None:
        data = np.asarray(remove_desired_component(means, direction), dtype=float)
    else:
        data = np.asarray(means, dtype=float).reshape(-1, 3)

    if direction is not None:
        # PCA restricted to the plane orthogonal to the direction, so the
        # returned axes are orthogonal to it by construction.
        from .direction import _any_orthonormal

        e1 = _any_orthonormal(np.asarray(direction, dtype=float))
        e2 = np.cross(direction, e1)
        B = np.column_stack([e1, e2])
        coords = data @ B
        M2 = coords.T @ coords / J
        evals2, evecs2 = np.linalg.eigh(M2)
        order = np.argsort(evals2)[::-1]
        V = B @ evecs2[:, order]
        for j in range(V.shape[1]):
            V[:, j] = _canonical_sign(V[:, j])
        evals = np.concatenate([np.maximum(evals2[order], 0.0), [0.0]])
        max_d = 2
    else:
        V, evals = pca_ranks(data)
        max_d = 3

    bic = np.full(4, np.inf)
    log_likes = {}
    eps_by_d = {}
    for d in range(0, 4):
        if d <= max_d:
            eps = residuals(data, d, basis=V if d > 0 else None)
        else:
            eps = np.zeros_like(data)  # excluded candidate, score left at inf
        eps_by_d[d] = eps
        if d <= max_d:
            log_likes[d] = _log_likelihood(eps, sigma_demo)
            bic[d] = np.log(J) * d - 2.0 * log_likes[d]

    if J == 1:
        chosen = 0
        for d in range(0, max_d + 1):
            if float(np.max(np.linalg.norm(eps_by_d[d], axis=1))) < 2.0 * sigma_demo:
                chosen = d
                break
        else:
            chosen = max_d
    else:
        finite = [d for d in range(4) if np.isfinite(bic[d])]
        chosen = min(finite, key=lambda d: (bic[d], d))

    axes = V[:, :chosen] if chosen > 0 else np.zeros((3, 0))
    return ComplianceResult(
        n_axes=chosen,
        axes=axes,
        bic=bic,
        residuals=eps_by_d[chosen],
        eigenvalues=evals,
        means=data,
    )


def stiffness_matrix(axes: Sequence[np.ndarray] | np.ndarray, k: float) -> np.ndarray:
    """k (I - sum u u^T): full stiffness except along the compliant axes.

    axes may be an iterable of unit 3-vectors or a (3, n) column matrix;
    they must be pairwise orthonormal.
    """
    A = np.asarray(axes, dtype=float)
    if A.size == 0:
        cols = np.zeros((3, 0))
    elif A.ndim == 1:
        cols = A.reshape(3, 1)
    elif A.shape[0] == 3:
        cols = A
    else:
        cols = A.T
    if cols.shape[1] > 3:
        raise NonOrthonormalAxes("at most three compliant axes in 3-D")
    G = cols.T @ cols
    if not np.allclose(G, np.eye(cols.shape[1]), atol=1e-6):
        raise NonOrthonormalAxes("compliant axes must be pairwise orthonormal")
    if cols.shape[1] == 3:
        return np.zeros((3, 3))  # full orthonormal basis: projector is exactly I
    K = k * (np.eye(3) - cols @ cols.T)
    return 0.5 * (K + K.T)

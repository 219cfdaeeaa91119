"""Paired canonical correlation analysis and the pseudo-pairing baseline.

`cca_fit` is the supervised oracle: whiten each view symmetrically, take
the SVD of the whitened cross-covariance, and read the canonical
correlations off the singular values. `pseudo_pair` supplies the
unsupervised stand-in pairing (nearest exemplar under cosine similarity)
so the same solver doubles as the pseudo-label baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDirectionError,
    MissingCrossCovarianceError,
    NotPositiveDefiniteError,
    ShapeMismatchError,
    ValidationError,
    ZeroRowError,
)
from .alignment import CovarianceBundle
from .store import matrix_data


@dataclass(frozen=True)
class CcaSolution:
    """Projection pair, canonical correlations (non-increasing), and the
    ridge added to both within-view covariances."""

    h_s_star: np.ndarray
    h_e_star: np.ndarray
    correlations: np.ndarray
    regularization_eps: float


def _inverse_sqrt(sigma: np.ndarray, eps: float, name: str) -> np.ndarray:
    ridged = sigma + eps * np.eye(sigma.shape[0])
    w, v = np.linalg.eigh(ridged)
    if w.min() <= 0.0:
        raise NotPositiveDefiniteError(
            f"{name} + {eps:g}*I has eigenvalue {w.min():.3g} <= 0"
        )
    return (v / np.sqrt(w)) @ v.T


def default_eps(bundle: CovarianceBundle) -> float:
    """Ridge scale 1e-6 * mean diagonal magnitude of the two covariances."""
    d = bundle.dims
    return 1e-6 * (np.trace(bundle.sigma11) + np.trace(bundle.sigma22)) / (2.0 * d)


def cca_fit(bundle: CovarianceBundle, k: int, eps: float | None = None) -> CcaSolution:
    """Top-k canonical directions via symmetric whitening plus SVD.

    The solution satisfies the whitening constraint
    H*^T (Sigma + eps I) H* = I on both views. `eps=None` applies the
    default trace-scaled ridge; pass 0.0 for the unregularized solve.

    Correlations lie in [0, 1] when the bundle comes from a consistent
    row pairing (the composite covariance is then PSD). A pseudo pairing
    with repeated exemplar rows can push them slightly above 1; that
    inflation is a property of the biased pairing, so it is reported
    rather than clamped.
    """
    if bundle.sigma12 is None:
        raise MissingCrossCovarianceError("cca_fit needs paired covariances")
    d = bundle.dims
    if not 1 <= k <= d:
        raise ValidationError(f"need 1 <= k <= {d}, got k={k}")
    if eps is None:
        eps = default_eps(bundle)
    if eps < 0:
        raise ValidationError(f"eps must be >= 0, got {eps}")
    isqrt1 = _inverse_sqrt(bundle.sigma11, eps, "sigma11")
    isqrt2 = _inverse_sqrt(bundle.sigma22, eps, "sigma22")
    u, s, vt = np.linalg.svd(isqrt1 @ bundle.sigma12 @ isqrt2)
    return CcaSolution(
        h_s_star=isqrt1 @ u[:, :k],
        h_e_star=isqrt2 @ vt[:k].T,
        correlations=s[:k].copy(),
        regularization_eps=float(eps),
    )


def cca_objective(h_s, h_e, bundle: CovarianceBundle) -> float:
    """Single-direction correlation ratio
    (h_s^T Sigma12 h_e) / sqrt((h_s^T Sigma11 h_s)(h_e^T Sigma22 h_e));
    invariant to positive rescaling of either direction."""
    if bundle.sigma12 is None:
        raise MissingCrossCovarianceError("cca_objective needs paired covariances")
    hs = np.asarray(h_s, dtype=np.float64).reshape(-1)
    he = np.asarray(h_e, dtype=np.float64).reshape(-1)
    if hs.shape[0] != bundle.dims or he.shape[0] != bundle.dims:
        raise ShapeMismatchError(
            f"directions must be {bundle.dims}-vectors, got {hs.shape[0]} and {he.shape[0]}"
        )
    var_s = float(hs @ bundle.sigma11 @ hs)
    var_e = float(he @ bundle.sigma22 @ he)
    if var_s <= 1e-300 or var_e <= 1e-300:
        raise DegenerateDirectionError("direction has zero within-view variance")
    return float(hs @ bundle.sigma12 @ he) / np.sqrt(var_s * var_e)


def trace_alignment(h_s, h_e, sigma12) -> float:
    """Tr(h_s^T Sigma12 h_e): the cross-domain correlation mass kept by a
    map pair. With h_e = (h_s^{-1})^T this equals Tr(Sigma12) exactly."""
    hs = np.asarray(h_s, dtype=np.float64)
    he = np.asarray(h_e, dtype=np.float64)
    s12 = np.asarray(sigma12, dtype=np.float64)
    if hs.ndim != 2 or he.ndim != 2 or s12.ndim != 2:
        raise ShapeMismatchError("trace_alignment takes matrices")
    if hs.shape[0] != s12.shape[0] or s12.shape[1] != he.shape[0]:
        raise ShapeMismatchError(
            f"incompatible shapes {hs.shape}, {s12.shape}, {he.shape}"
        )
    if hs.shape[1] != he.shape[1]:
        raise ShapeMismatchError(
            f"projection widths differ: {hs.shape[1]} vs {he.shape[1]}"
        )
    return float(np.trace(hs.T @ s12 @ he))


def pseudo_pair(z_s, z_e) -> np.ndarray:
    """Nearest-exemplar pseudo pairing under cosine similarity.

    Returns an (N_s, 2) alignment mapping every synthetic row to its best
    exemplar row; exact ties resolve to the lower exemplar index. The map
    need not be injective.
    """
    zs = matrix_data(z_s)
    ze = matrix_data(z_e)
    if zs.shape[1] != ze.shape[1]:
        raise ShapeMismatchError(f"dims differ: {zs.shape[1]} vs {ze.shape[1]}")
    for name, z in (("synthetic", zs), ("exemplar", ze)):
        norms = np.linalg.norm(z, axis=1)
        small = np.nonzero(norms <= 1e-12)[0]
        if small.size:
            raise ZeroRowError(int(small[0]), f"{name} row {small[0]} has zero norm")
    qs = zs / np.linalg.norm(zs, axis=1)[:, None]
    pe = ze / np.linalg.norm(ze, axis=1)[:, None]
    sims = qs @ pe.T
    nearest = np.argmax(sims, axis=1)  # first occurrence wins exact ties
    return np.stack([np.arange(zs.shape[0]), nearest], axis=1)

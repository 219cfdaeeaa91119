"""Stage-I alignment: shared encoder stand-ins and covariance diagnostics.

Deep backbones stay out of this package; `SharedEncoder` covers the
identity map, a fixed linear projection, and externally precomputed
features. Covariances use divisor n (matching the outer-product
definitions the cross-domain analysis is written in), and the alignment
score compares the diagonally-standardized cross-covariance to the
identity: lower means the two domains already agree dimension by
dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyPairingError,
    MissingCrossCovarianceError,
    ShapeMismatchError,
    ValidationError,
    ZeroVarianceDimensionError,
)
from .store import EmbeddingMatrix, matrix_data


@dataclass(frozen=True)
class SharedEncoder:
    """Encoder applied identically to both domains before disentanglement.

    kind: "identity", "fixed_linear" (requires full-column-rank weight),
    or "external" (features were produced elsewhere; passes through).
    """

    kind: str = "identity"
    weight: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("identity", "fixed_linear", "external"):
            raise ValidationError(f"unknown encoder kind {self.kind!r}")
        if self.kind == "fixed_linear":
            if self.weight is None:
                raise ValidationError("fixed_linear encoder needs a weight matrix")
            w = np.asarray(self.weight, dtype=np.float64)
            if w.ndim != 2:
                raise ShapeMismatchError(f"weight must be 2-d, got shape {w.shape}")
            # no rank deficiency: full column rank when embedding, full row
            # rank when reducing (a dimension-reducing W cannot have full
            # column rank, but must not collapse output dimensions either)
            if np.linalg.matrix_rank(w) < min(w.shape):
                raise ValidationError("fixed_linear weight must not be rank-deficient")
            object.__setattr__(self, "weight", w)
        elif self.weight is not None:
            raise ValidationError(f"{self.kind} encoder takes no weight")


def apply_encoder(x: EmbeddingMatrix, enc: SharedEncoder) -> EmbeddingMatrix:
    """Row-wise encoding; identity and external kinds return the input."""
    if enc.kind in ("identity", "external"):
        return x
    w = enc.weight
    if x.dims != w.shape[1]:
        raise ShapeMismatchError(
            f"encoder expects {w.shape[1]}-dim rows, got {x.dims}"
        )
    return EmbeddingMatrix(x.data @ w.T, ids=x.ids, domain_tag=x.domain_tag)


@dataclass(frozen=True)
class CovarianceBundle:
    """Per-domain covariances, optional cross-covariance, and the means used."""

    sigma11: np.ndarray
    sigma22: np.ndarray
    sigma12: np.ndarray | None
    mean_s: np.ndarray
    mean_e: np.ndarray
    n_pairs: int = 0

    @property
    def dims(self) -> int:
        return self.sigma11.shape[0]


def identity_alignment(n: int) -> np.ndarray:
    """Row alignment pairing row i with row i, as an (n, 2) index array."""
    idx = np.arange(n)
    return np.stack([idx, idx], axis=1)


def compute_covariances(
    z_s, z_e, pairing: np.ndarray | None = None
) -> CovarianceBundle:
    """Sigma11/Sigma22 over each full domain and, when a row alignment is
    supplied, Sigma12 over exactly the aligned rows.

    Centering uses each domain's full-sample mean (stored in the bundle)
    and all divisors are n, not n-1.
    """
    zs = matrix_data(z_s)
    ze = matrix_data(z_e)
    if zs.shape[1] != ze.shape[1]:
        raise ShapeMismatchError(f"dims differ: {zs.shape[1]} vs {ze.shape[1]}")
    if zs.shape[0] < 1 or ze.shape[0] < 1:
        raise ValidationError("need at least one row per domain")
    mean_s = zs.mean(axis=0)
    mean_e = ze.mean(axis=0)
    cs = zs - mean_s
    ce = ze - mean_e
    sigma11 = (cs.T @ cs) / zs.shape[0]
    sigma22 = (ce.T @ ce) / ze.shape[0]
    sigma11 = (sigma11 + sigma11.T) / 2.0
    sigma22 = (sigma22 + sigma22.T) / 2.0

    sigma12 = None
    n_pairs = 0
    if pairing is not None:
        pairs = np.asarray(pairing)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ShapeMismatchError(
                f"pairing must have shape (n_pairs, 2), got {pairs.shape}"
            )
        if pairs.shape[0] == 0:
            raise EmptyPairingError("pairing contains no pairs")
        if pairs[:, 0].min() < 0 or pairs[:, 0].max() >= zs.shape[0]:
            raise ValidationError("pairing indexes outside the synthetic rows")
        if pairs[:, 1].min() < 0 or pairs[:, 1].max() >= ze.shape[0]:
            raise ValidationError("pairing indexes outside the exemplar rows")
        n_pairs = pairs.shape[0]
        sigma12 = (cs[pairs[:, 0]].T @ ce[pairs[:, 1]]) / n_pairs
    return CovarianceBundle(
        sigma11=sigma11,
        sigma22=sigma22,
        sigma12=sigma12,
        mean_s=mean_s,
        mean_e=mean_e,
        n_pairs=n_pairs,
    )


def alignment_fnorm(bundle: CovarianceBundle) -> float:
    """|| standardized Sigma12 - I ||_F; lower means better alignment.

    Standardization divides by the per-dimension standard deviations taken
    from the Sigma11/Sigma22 diagonals (no full whitening), so the score is
    invariant to positive per-dimension rescaling of either view.
    """
    if bundle.sigma12 is None:
        raise MissingCrossCovarianceError(
            "alignment score needs a cross-covariance (supply a pairing)"
        )
    d_s = np.sqrt(np.diag(bundle.sigma11))
    d_e = np.sqrt(np.diag(bundle.sigma22))
    for name, d in (("synthetic", d_s), ("exemplar", d_e)):
        bad = np.nonzero(d <= 0.0)[0]
        if bad.size:
            raise ZeroVarianceDimensionError(
                f"{name} dimension {bad[0]} has zero variance"
            )
    standardized = bundle.sigma12 / np.outer(d_s, d_e)
    return float(np.linalg.norm(standardized - np.eye(bundle.dims)))

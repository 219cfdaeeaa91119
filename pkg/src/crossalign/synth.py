"""Paired two-view synthetic data: shared non-Gaussian latents observed
through two linear transformations plus independent Gaussian noise.

Ground truth (latents, mixing matrices, identity pairing) is retained so
recovery and retrieval quality can be scored exactly. All sampling is
driven by explicit seeds through `numpy.random.default_rng`; identical
seeds give bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDistributionError, ShapeMismatchError, ValidationError
from .store import DomainTag, EmbeddingMatrix


@dataclass(frozen=True)
class SourceDistribution:
    """Latent source distribution; every supported kind is non-Gaussian,
    which linear ICA identifiability requires."""

    kind: str = "laplace"  # laplace | uniform | student_t
    scale: float = 1.0
    dof: float = 5.0  # student_t only; must exceed 2 for finite variance

    def __post_init__(self):
        if self.kind not in ("laplace", "uniform", "student_t"):
            raise InvalidDistributionError(f"unknown source kind {self.kind!r}")
        if self.scale <= 0:
            raise InvalidDistributionError(f"scale must be positive, got {self.scale}")
        if self.kind == "student_t" and self.dof <= 2:
            raise InvalidDistributionError(
                f"student_t needs dof > 2 for finite variance, got {self.dof}"
            )

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.kind == "laplace":
            return rng.laplace(0.0, self.scale, shape)
        if self.kind == "uniform":
            return rng.uniform(-self.scale, self.scale, shape)
        return self.scale * rng.standard_t(self.dof, shape)


@dataclass(frozen=True)
class SyntheticDataset:
    """Two paired views of shared latents, with full generation provenance.

    Row i of `view_s` and row i of `view_e` come from the same latent row,
    so `pairing` is always the identity permutation.
    """

    sources: EmbeddingMatrix
    view_s: EmbeddingMatrix
    view_e: EmbeddingMatrix
    mixing_s: np.ndarray
    mixing_e: np.ndarray
    noise_scale: float
    pairing: np.ndarray
    seed: int


def sample_sources(
    n: int, d: int, dist: SourceDistribution, seed: int
) -> EmbeddingMatrix:
    """Draw an n x d latent matrix with i.i.d. columns from `dist`."""
    if n < 1 or d < 1:
        raise ValidationError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    z = dist.sample(rng, (n, d))
    return EmbeddingMatrix(z, domain_tag=DomainTag.LATENT)


def make_random_mixing(
    out_dims: int,
    in_dims: int,
    seed: int,
    min_singular_value: float = 0.1,
) -> np.ndarray:
    """Random out_dims x in_dims mixing with smallest singular value at least
    `min_singular_value`.

    Entries are Gaussian with variance 1/in_dims so that unit-variance
    latents produce roughly unit-variance observations; singular values
    below the floor are lifted to it.
    """
    if out_dims < in_dims:
        raise ValidationError(
            f"mixing needs out_dims >= in_dims, got {out_dims} < {in_dims}"
        )
    if min_singular_value <= 0:
        raise ValidationError("min_singular_value must be positive")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((out_dims, in_dims)) / np.sqrt(in_dims)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s[-1] < min_singular_value:
        s = np.maximum(s, min_singular_value)
        a = (u * s) @ vt
    return a


def relative_rotation(dims: int, gap: float, seed: int) -> np.ndarray:
    """Orthogonal matrix close to the identity: the domain-gap knob.

    Builds a random skew-symmetric direction K with unit spectral norm and
    returns its Cayley transform at scale `gap`, a rotation of roughly
    `gap` radians. gap = 0 gives the identity exactly. Right-multiplying a
    mixing by this matrix yields a second mixing that sees rotated latents,
    mimicking a mild cross-domain misalignment.
    """
    if gap < 0:
        raise ValidationError(f"gap must be >= 0, got {gap}")
    if gap == 0:
        return np.eye(dims)
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((dims, dims))
    k = (b - b.T) / 2.0
    k = k / np.linalg.norm(k, ord=2)
    half = 0.5 * gap * k
    eye = np.eye(dims)
    return np.linalg.solve(eye - half, eye + half)


def generate_views(
    sources: EmbeddingMatrix,
    mixing_s: np.ndarray,
    mixing_e: np.ndarray,
    noise_scale: float,
    seed: int,
) -> SyntheticDataset:
    """Observe the latents through two mixings plus i.i.d. Gaussian noise.

    View noise is Gaussian by design even though sources are not, so the
    shared signal carries the only non-Gaussian structure.
    """
    z = sources.data
    mixing_s = np.asarray(mixing_s, dtype=np.float64)
    mixing_e = np.asarray(mixing_e, dtype=np.float64)
    for name, a in (("mixing_s", mixing_s), ("mixing_e", mixing_e)):
        if a.ndim != 2 or a.shape[1] != z.shape[1]:
            raise ShapeMismatchError(
                f"{name} has shape {a.shape}, expected (*, {z.shape[1]})"
            )
    if noise_scale < 0:
        raise ValidationError(f"noise_scale must be >= 0, got {noise_scale}")
    n = z.shape[0]
    rng = np.random.default_rng(seed)
    xs = z @ mixing_s.T
    xe = z @ mixing_e.T
    if noise_scale > 0:
        xs = xs + noise_scale * rng.standard_normal(xs.shape)
        xe = xe + noise_scale * rng.standard_normal(xe.shape)
    view_s = EmbeddingMatrix(
        xs, ids=[f"s{i:06d}" for i in range(n)], domain_tag=DomainTag.SYNTHETIC
    )
    view_e = EmbeddingMatrix(
        xe, ids=[f"e{i:06d}" for i in range(n)], domain_tag=DomainTag.EXEMPLAR
    )
    return SyntheticDataset(
        sources=sources,
        view_s=view_s,
        view_e=view_e,
        mixing_s=mixing_s,
        mixing_e=mixing_e,
        noise_scale=float(noise_scale),
        pairing=np.arange(n),
        seed=int(seed),
    )


def generate_distractors(
    m: int,
    dims: int,
    dist: SourceDistribution,
    mixing: np.ndarray,
    seed: int,
    noise_scale: float = 0.0,
) -> EmbeddingMatrix:
    """Pool padding: fresh latents through an existing mixing, paired with
    nothing. `dims` is the latent dimensionality and must match the mixing.

    Sharing the exemplar mixing makes distractors distributionally
    indistinguishable from exemplars (hard negatives). m = 0 yields an
    empty matrix and evaluation falls back to an exemplar-only pool.
    """
    if m < 0:
        raise ValidationError(f"need m >= 0, got {m}")
    mixing = np.asarray(mixing, dtype=np.float64)
    if mixing.ndim != 2 or mixing.shape[1] != dims:
        raise ShapeMismatchError(
            f"mixing has shape {mixing.shape}, expected (*, {dims})"
        )
    rng = np.random.default_rng(seed)
    z = dist.sample(rng, (m, dims))
    x = z @ mixing.T
    if noise_scale > 0:
        x = x + noise_scale * rng.standard_normal(x.shape)
    return EmbeddingMatrix(
        x.reshape(m, mixing.shape[0]),
        ids=[f"d{i:06d}" for i in range(m)],
        domain_tag=DomainTag.DISTRACTOR,
    )

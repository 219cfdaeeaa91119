"""Infomax objective for dual-domain linear disentanglement.

A square map `h` acts on a feature row z as h^T z, i.e. column d of `h`
produces output coordinate d. The per-domain score

    infomax(h, Z) = ln|det h| + mu * entropy(h, Z)

is maximized; the trainer minimizes the combined objective

    J = -infomax(h_s, Z_s) - infomax(h_e, Z_e) + lam * regularizer(h_s, h_e)

All gradients here are closed-form and are checked against central finite
differences in the test suite.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    ShapeMismatchError,
    SingularMapError,
    ValidationError,
    ZeroVarianceDimensionError,
)
from .store import EmbeddingMatrix, matrix_data

DET_FLOOR = 1e-12
_LOG_DET_FLOOR = np.log(DET_FLOOR)
_LN2 = np.log(2.0)

REG_VARIANTS = ("cross", "self_orth", "hshe")


def _square(h, name: str = "map") -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got shape {h.shape}")
    return h


def log_abs_det(h: np.ndarray) -> float:
    """ln|det h| via a pivoted factorization; SingularMapError below the
    |det| = 1e-12 floor."""
    sign, logdet = np.linalg.slogdet(h)
    if sign == 0 or logdet < _LOG_DET_FLOOR:
        raise SingularMapError(f"|det| below {DET_FLOOR:g} (log|det|={logdet:.3g})")
    return float(logdet)


def entropy_term(h, z_batch) -> float:
    """(1/(nD)) sum of ln(1 - tanh(h_d^T z_i)^2) over samples i and columns d.

    Uses the identity ln(1 - tanh(u)^2) = 2(ln 2 - |u| - ln(1 + e^(-2|u|)))
    which never underflows; the result is always <= 0.
    """
    h = _square(h)
    z = matrix_data(z_batch)
    if z.ndim != 2 or z.shape[1] != h.shape[0]:
        raise ShapeMismatchError(
            f"batch shape {z.shape} incompatible with {h.shape[0]}x{h.shape[0]} map"
        )
    if z.shape[0] < 1:
        raise ValidationError("entropy term needs at least one sample")
    u = np.abs(z @ h)
    terms = 2.0 * (_LN2 - u - np.log1p(np.exp(-2.0 * u)))
    return float(terms.mean())


def entropy_gradient(h, z_batch) -> np.ndarray:
    """Gradient of entropy_term with respect to h: -(2/(nD)) Z^T tanh(Z h)."""
    h = _square(h)
    z = matrix_data(z_batch)
    n, d = z.shape
    return -(2.0 / (n * d)) * (z.T @ np.tanh(z @ h))


def infomax_loss(h, z_batch, mu: float) -> float:
    """ln|det h| + mu * entropy_term(h, z_batch). This is the maximized
    quantity; the trainer minimizes its negation."""
    return log_abs_det(np.asarray(h, dtype=np.float64)) + mu * entropy_term(h, z_batch)


def regularizer(h_s, h_e, variant: str = "self_orth") -> float:
    """Orthogonality penalty tying the two maps to the identity's equivalence
    class. Variants:

      cross      ||h_e h_s^T - I||_F
      self_orth  (||h_e h_e^T - I||_F + ||h_s h_s^T - I||_F) / 2
      hshe       ||h_s^T h_e - I||_F
    """
    h_s = _square(h_s, "h_s")
    h_e = _square(h_e, "h_e")
    if h_s.shape != h_e.shape:
        raise ShapeMismatchError(f"map shapes differ: {h_s.shape} vs {h_e.shape}")
    eye = np.eye(h_s.shape[0])
    if variant == "cross":
        return float(np.linalg.norm(h_e @ h_s.T - eye))
    if variant == "self_orth":
        return 0.5 * float(
            np.linalg.norm(h_e @ h_e.T - eye) + np.linalg.norm(h_s @ h_s.T - eye)
        )
    if variant == "hshe":
        return float(np.linalg.norm(h_s.T @ h_e - eye))
    raise ValidationError(f"unknown regularizer variant {variant!r}")


def _fnorm_direction(m: np.ndarray) -> np.ndarray:
    """d||M||_F/dM = M/||M||_F, with subgradient 0 at the zero matrix."""
    norm = np.linalg.norm(m)
    if norm == 0.0:
        return np.zeros_like(m)
    return m / norm


def regularizer_gradients(h_s, h_e, variant: str = "self_orth"):
    """Gradients of `regularizer` with respect to (h_s, h_e)."""
    h_s = _square(h_s, "h_s")
    h_e = _square(h_e, "h_e")
    eye = np.eye(h_s.shape[0])
    if variant == "cross":
        g = _fnorm_direction(h_e @ h_s.T - eye)
        return g.T @ h_e, g @ h_s
    if variant == "self_orth":
        g_s = _fnorm_direction(h_s @ h_s.T - eye)
        g_e = _fnorm_direction(h_e @ h_e.T - eye)
        return g_s @ h_s, g_e @ h_e
    if variant == "hshe":
        g = _fnorm_direction(h_s.T @ h_e - eye)
        return h_e @ g.T, h_s @ g
    raise ValidationError(f"unknown regularizer variant {variant!r}")


def objective_terms(h_s, h_e, z_s_batch, z_e_batch, lam: float, mu: float,
                    variant: str = "self_orth") -> dict:
    """Minimized objective value plus its component breakdown."""
    logdet_s = log_abs_det(np.asarray(h_s, dtype=np.float64))
    logdet_e = log_abs_det(np.asarray(h_e, dtype=np.float64))
    ent_s = entropy_term(h_s, z_s_batch)
    ent_e = entropy_term(h_e, z_e_batch)
    im_s = logdet_s + mu * ent_s
    im_e = logdet_e + mu * ent_e
    reg = regularizer(h_s, h_e, variant)
    return {
        "objective": -im_s - im_e + lam * reg,
        "infomax_s": im_s,
        "infomax_e": im_e,
        "reg": reg,
        "logdet_s": logdet_s,
        "logdet_e": logdet_e,
        "entropy_s": ent_s,
        "entropy_e": ent_e,
    }


def objective_gradients(h_s, h_e, z_s_batch, z_e_batch, lam: float, mu: float,
                        variant: str = "self_orth"):
    """Gradients of the minimized objective with respect to (h_s, h_e).

    The ln|det| contribution is the inverse transpose and carries no data
    dependence, so it is exact regardless of the entropy mini-batch.
    """
    h_s = _square(h_s, "h_s")
    h_e = _square(h_e, "h_e")
    try:
        inv_s_t = np.linalg.inv(h_s).T
        inv_e_t = np.linalg.inv(h_e).T
    except np.linalg.LinAlgError as exc:
        raise SingularMapError(f"map not invertible: {exc}") from exc
    g_s = -(inv_s_t + mu * entropy_gradient(h_s, z_s_batch))
    g_e = -(inv_e_t + mu * entropy_gradient(h_e, z_e_batch))
    if lam != 0.0:
        r_s, r_e = regularizer_gradients(h_s, h_e, variant)
        g_s = g_s + lam * r_s
        g_e = g_e + lam * r_e
    return g_s, g_e


def transform(h, z):
    """Apply the map: row i of the output is h^T times row i of the input.

    EmbeddingMatrix in, EmbeddingMatrix out (ids and tag preserved);
    bare arrays pass through as arrays.
    """
    h = np.asarray(h, dtype=np.float64)
    data = matrix_data(z)
    if h.ndim != 2 or data.shape[1] != h.shape[0]:
        raise ShapeMismatchError(
            f"cannot apply {h.shape} map to {data.shape[1]}-dim rows"
        )
    out = data @ h
    if isinstance(z, EmbeddingMatrix):
        return z.with_data(out)
    return out


def pearson_correlation_matrix(z) -> np.ndarray:
    """D x D pairwise Pearson correlations of the columns of z."""
    data = matrix_data(z)
    if data.shape[0] < 2:
        raise ValidationError("need at least 2 samples for correlations")
    centered = data - data.mean(axis=0)
    std = np.sqrt((centered ** 2).mean(axis=0))
    bad = np.nonzero(std <= 0.0)[0]
    if bad.size:
        raise ZeroVarianceDimensionError(f"column {bad[0]} has zero variance")
    scaled = centered / std
    corr = (scaled.T @ scaled) / data.shape[0]
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def mean_abs_off_diagonal(matrix: np.ndarray) -> float:
    """Average |entry| off the diagonal; the before/after training diagnostic."""
    m = np.asarray(matrix, dtype=np.float64)
    d = m.shape[0]
    if d < 2:
        return 0.0
    mask = ~np.eye(d, dtype=bool)
    return float(np.abs(m[mask]).mean())


def amari_distance(estimated_unmixing, true_mixing) -> float:
    """Permutation/sign/scale-invariant recovery score of P = W A.

    Zero exactly when P is a scaled permutation; grows with residual mixing.
    """
    w = np.asarray(estimated_unmixing, dtype=np.float64)
    a = np.asarray(true_mixing, dtype=np.float64)
    if w.ndim != 2 or a.ndim != 2 or w.shape[1] != a.shape[0]:
        raise ShapeMismatchError(
            f"cannot form product of shapes {w.shape} and {a.shape}"
        )
    p = w @ a
    if p.shape[0] != p.shape[1]:
        raise ShapeMismatchError(f"product must be square, got {p.shape}")
    m = p.shape[0]
    p_sq = p ** 2
    rows = np.sum(p_sq.sum(axis=1) / p_sq.max(axis=1) - 1.0)
    cols = np.sum(p_sq.sum(axis=0) / p_sq.max(axis=0) - 1.0)
    return float((rows + cols) / (2.0 * m))

"""Dual-domain disentanglement trainer.

Both square maps start from the identity (or a seeded random orthogonal
matrix), receive one shared Adam step per mini-batch pair, and are
monitored for invertibility once per epoch. Mini-batches are drawn
independently per domain; there is no pairing in the unsupervised setting.
Everything is driven by TrainConfig.seed, so identical configs produce
bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ShapeMismatchError, SingularMapError, ValidationError
from .infomax import (
    DET_FLOOR,
    REG_VARIANTS,
    objective_gradients,
    objective_terms,
)
from .store import matrix_data

INIT_MODES = ("identity", "random_same", "random_diff")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the disentanglement stage.

    `lam` weights the orthogonality regularizer and `mu` the entropy term.
    Defaults follow the reference configuration: Adam at learning rate
    0.001, batch 1024, 10 epochs, self-orthogonality regularizer.
    """

    lam: float = 0.1
    mu: float = 1.0
    learning_rate: float = 0.001
    epochs: int = 10
    batch_size: int = 1024
    reg_variant: str = "self_orth"
    init_mode: str = "identity"
    seed: int = 0
    init_seed: int | None = None       # defaults to seed
    init_seed_e: int | None = None     # random_diff only; defaults to init_seed + 1
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        if self.lam < 0:
            raise ValidationError(f"lam must be >= 0, got {self.lam}")
        if self.mu <= 0:
            raise ValidationError(f"mu must be > 0, got {self.mu}")
        if self.learning_rate <= 0:
            raise ValidationError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 0:
            raise ValidationError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ValidationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.reg_variant not in REG_VARIANTS:
            raise ValidationError(f"unknown reg_variant {self.reg_variant!r}")
        if self.init_mode not in INIT_MODES:
            raise ValidationError(f"unknown init_mode {self.init_mode!r}")

    def seeds(self) -> tuple[int, int]:
        s = self.seed if self.init_seed is None else self.init_seed
        e = s + 1 if self.init_seed_e is None else self.init_seed_e
        return s, e

    def to_dict(self) -> dict:
        return {
            "lam": self.lam,
            "mu": self.mu,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "reg_variant": self.reg_variant,
            "init_mode": self.init_mode,
            "seed": self.seed,
            "init_seed": self.seeds()[0],
            "init_seed_e": self.seeds()[1],
            "adam_beta1": self.adam_beta1,
            "adam_beta2": self.adam_beta2,
            "adam_eps": self.adam_eps,
        }


@dataclass(frozen=True)
class AdamState:
    """Per-parameter first/second moment accumulators and step counter."""

    m_s: np.ndarray
    v_s: np.ndarray
    m_e: np.ndarray
    v_e: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, dims: int) -> "AdamState":
        z = lambda: np.zeros((dims, dims))
        return cls(m_s=z(), v_s=z(), m_e=z(), v_e=z(), step=0)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    objective: float
    infomax_s: float
    infomax_e: float
    reg: float
    logdet_s: float
    logdet_e: float

    def as_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "objective": self.objective,
            "infomax_s": self.infomax_s,
            "infomax_e": self.infomax_e,
            "reg": self.reg,
            "logdet_s": self.logdet_s,
            "logdet_e": self.logdet_e,
        }


@dataclass(frozen=True)
class LinearMapPair:
    """The two trained square maps plus optimizer state and history."""

    h_s: np.ndarray
    h_e: np.ndarray
    init_mode: str
    adam: AdamState
    history: tuple[EpochRecord, ...] = ()

    @property
    def dims(self) -> int:
        return self.h_s.shape[0]


def _haar_orthogonal(dims: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform random orthogonal matrix (QR with sign correction)."""
    q, r = np.linalg.qr(rng.standard_normal((dims, dims)))
    return q * np.sign(np.diag(r))


def initialize_pair(dims: int, cfg: TrainConfig) -> LinearMapPair:
    """Fresh map pair per cfg.init_mode.

    Random modes draw orthogonal matrices: both maps must stay invertible
    throughout training and the regularizers vanish exactly on orthogonal
    maps, so this is the natural random starting point. `random_same`
    gives both domains one shared draw; `random_diff` gives independent
    draws, which is the configuration expected to break alignment.
    """
    if cfg.init_mode == "identity":
        h_s = np.eye(dims)
        h_e = np.eye(dims)
    else:
        seed_s, seed_e = cfg.seeds()
        h_s = _haar_orthogonal(dims, np.random.default_rng(seed_s))
        if cfg.init_mode == "random_same":
            h_e = h_s.copy()
        else:
            h_e = _haar_orthogonal(dims, np.random.default_rng(seed_e))
    return LinearMapPair(
        h_s=h_s, h_e=h_e, init_mode=cfg.init_mode, adam=AdamState.zeros(dims)
    )


def adam_step(pair: LinearMapPair, grads, cfg: TrainConfig) -> LinearMapPair:
    """One bias-corrected Adam update of both maps; returns a new pair.

    Entrywise:  m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;
                h <- h - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
    """
    g_s, g_e = grads
    st = pair.adam
    t = st.step + 1
    b1, b2 = cfg.adam_beta1, cfg.adam_beta2
    c1 = 1.0 - b1 ** t
    c2 = 1.0 - b2 ** t

    def update(h, m, v, g):
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        h = h - cfg.learning_rate * (m / c1) / (np.sqrt(v / c2) + cfg.adam_eps)
        return h, m, v

    h_s, m_s, v_s = update(pair.h_s, st.m_s, st.v_s, np.asarray(g_s, dtype=np.float64))
    h_e, m_e, v_e = update(pair.h_e, st.m_e, st.v_e, np.asarray(g_e, dtype=np.float64))
    return replace(
        pair,
        h_s=h_s,
        h_e=h_e,
        adam=AdamState(m_s=m_s, v_s=v_s, m_e=m_e, v_e=v_e, step=t),
    )


def total_objective(pair: LinearMapPair, z_s_batch, z_e_batch, cfg: TrainConfig):
    """Minimized objective at the pair's current maps, with breakdown."""
    terms = objective_terms(
        pair.h_s, pair.h_e, z_s_batch, z_e_batch, cfg.lam, cfg.mu, cfg.reg_variant
    )
    return terms["objective"], terms


def analytic_gradient(pair: LinearMapPair, z_s_batch, z_e_batch, cfg: TrainConfig):
    """Closed-form gradients of the minimized objective for both maps."""
    return objective_gradients(
        pair.h_s, pair.h_e, z_s_batch, z_e_batch, cfg.lam, cfg.mu, cfg.reg_variant
    )


def _epoch_order(rng: np.random.Generator, n: int, needed: int) -> np.ndarray:
    """Shuffled row indices covering `needed` draws, reshuffling on wrap."""
    chunks = [rng.permutation(n)]
    total = n
    while total < needed:
        chunks.append(rng.permutation(n))
        total += n
    return np.concatenate(chunks)[:needed]


def _check_invertible(pair: LinearMapPair):
    for name, h in (("h_s", pair.h_s), ("h_e", pair.h_e)):
        sign, logdet = np.linalg.slogdet(h)
        if sign == 0 or logdet < math.log(DET_FLOOR):
            raise SingularMapError(
                f"{name} lost invertibility at epoch {len(pair.history)}", pair=pair
            )


def train(z_s, z_e, cfg: TrainConfig) -> LinearMapPair:
    """Run the full disentanglement stage over centered features.

    Every step draws one mini-batch per domain (independently shuffled),
    computes the combined objective gradient, and applies one shared Adam
    update to both maps. History records the full-data objective breakdown
    once per epoch; invertibility is checked at the same cadence. On a
    SingularMapError the partial pair (with history) rides on the exception.
    """
    zs = matrix_data(z_s)
    ze = matrix_data(z_e)
    if zs.shape[1] != ze.shape[1]:
        raise ShapeMismatchError(
            f"domain dims differ: {zs.shape[1]} vs {ze.shape[1]}"
        )
    n_s, dims = zs.shape
    n_e = ze.shape[0]
    if n_s < 1 or n_e < 1:
        raise ValidationError("both domains need at least one sample")
    if cfg.batch_size > max(n_s, n_e):
        raise ValidationError(
            f"batch_size {cfg.batch_size} exceeds the larger domain ({max(n_s, n_e)})"
        )

    rng = np.random.default_rng(cfg.seed)
    pair = initialize_pair(dims, cfg)
    steps_per_epoch = math.ceil(max(n_s, n_e) / cfg.batch_size)

    for epoch in range(cfg.epochs):
        order_s = _epoch_order(rng, n_s, steps_per_epoch * cfg.batch_size)
        order_e = _epoch_order(rng, n_e, steps_per_epoch * cfg.batch_size)
        for k in range(steps_per_epoch):
            lo, hi = k * cfg.batch_size, (k + 1) * cfg.batch_size
            try:
                grads = objective_gradients(
                    pair.h_s,
                    pair.h_e,
                    zs[order_s[lo:hi]],
                    ze[order_e[lo:hi]],
                    cfg.lam,
                    cfg.mu,
                    cfg.reg_variant,
                )
            except SingularMapError as exc:
                exc.pair = pair
                raise
            pair = adam_step(pair, grads, cfg)
        _check_invertible(pair)
        terms = objective_terms(
            pair.h_s, pair.h_e, zs, ze, cfg.lam, cfg.mu, cfg.reg_variant
        )
        record = EpochRecord(
            epoch=epoch + 1,
            objective=terms["objective"],
            infomax_s=terms["infomax_s"],
            infomax_e=terms["infomax_e"],
            reg=terms["reg"],
            logdet_s=terms["logdet_s"],
            logdet_e=terms["logdet_e"],
        )
        pair = replace(pair, history=pair.history + (record,))
    return pair

"""Cosine-similarity retrieval and its quality metrics.

Rankings are exhaustive (the full pool is ordered for every query) with
exact similarity ties broken by ascending pool index, so results are
deterministic across platforms. Average precision follows the plain
sum-of-precisions definition: AP = sum_k P(k) * Rel(k) / n_rel over the
whole ranked list, no interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyRelevantSetError,
    ShapeMismatchError,
    ValidationError,
    ZeroRowError,
)
from .store import EmbeddingMatrix, matrix_data

DEFAULT_KS = (1, 5, 10, 100)


def cosine_similarity(a, b) -> float:
    """dot(a, b) / (|a| |b|), in [-1, 1]."""
    av = np.asarray(a, dtype=np.float64).reshape(-1)
    bv = np.asarray(b, dtype=np.float64).reshape(-1)
    if av.shape != bv.shape:
        raise ShapeMismatchError(f"vector lengths differ: {av.shape[0]} vs {bv.shape[0]}")
    na = np.linalg.norm(av)
    nb = np.linalg.norm(bv)
    if na <= 1e-12:
        raise ZeroRowError(0, "first vector has zero norm")
    if nb <= 1e-12:
        raise ZeroRowError(1, "second vector has zero norm")
    return float(av @ bv / (na * nb))


def _unit_rows(data: np.ndarray, what: str) -> np.ndarray:
    norms = np.linalg.norm(data, axis=1)
    small = np.nonzero(norms <= 1e-12)[0]
    if small.size:
        raise ZeroRowError(int(small[0]), f"{what} row {small[0]} has zero norm")
    return data / norms[:, None]


def _rank_by_similarity(sims: np.ndarray) -> np.ndarray:
    # lexsort's last key dominates: descending similarity, then pool index
    return np.lexsort((np.arange(sims.shape[0]), -sims))


def retrieve(query, pool, top: int) -> np.ndarray:
    """Indices of the `top` pool rows by descending cosine similarity."""
    pool_data = matrix_data(pool)
    qv = np.asarray(query, dtype=np.float64).reshape(-1)
    if qv.shape[0] != pool_data.shape[1]:
        raise ShapeMismatchError(
            f"query dim {qv.shape[0]} vs pool dim {pool_data.shape[1]}"
        )
    if not 1 <= top <= pool_data.shape[0]:
        raise ValidationError(f"need 1 <= top <= {pool_data.shape[0]}, got {top}")
    qn = np.linalg.norm(qv)
    if qn <= 1e-12:
        raise ZeroRowError(0, "query has zero norm")
    sims = _unit_rows(pool_data, "pool") @ (qv / qn)
    return _rank_by_similarity(sims)[:top]


def recall_at_k(ranked, relevant, k: int) -> float:
    """|relevant within top-k| / |relevant|."""
    rel = set(int(i) for i in relevant)
    if not rel:
        raise EmptyRelevantSetError("relevant set is empty")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    hits = sum(1 for idx in list(ranked)[:k] if int(idx) in rel)
    return hits / len(rel)


def average_precision(ranked, relevant) -> float:
    """Sum of precision-at-hit over the full ranked list, divided by the
    relevant count. A lone relevant item at rank r contributes 1/r."""
    rel = set(int(i) for i in relevant)
    if not rel:
        raise EmptyRelevantSetError("relevant set is empty")
    n_rel = len(rel)
    ap = 0.0
    hits = 0
    for pos, idx in enumerate(ranked, start=1):
        if int(idx) in rel:
            hits += 1
            ap += (hits / pos) / n_rel
    return ap


@dataclass(frozen=True)
class RetrievalTask:
    """Queries scored against a pool, with per-query relevant pool indices."""

    queries: EmbeddingMatrix
    pool: EmbeddingMatrix
    relevance: dict[int, frozenset[int]]
    ks: tuple[int, ...] = DEFAULT_KS

    def __post_init__(self):
        if self.pool.rows < 1:
            raise ValidationError("pool is empty")
        if not self.relevance:
            raise ValidationError("no queries have relevance sets")
        cleaned: dict[int, frozenset[int]] = {}
        for q, rel in self.relevance.items():
            q = int(q)
            if not 0 <= q < self.queries.rows:
                raise ValidationError(f"query index {q} outside {self.queries.rows} rows")
            rel = frozenset(int(i) for i in rel)
            if not rel:
                raise EmptyRelevantSetError(f"query {q} has an empty relevant set")
            if min(rel) < 0 or max(rel) >= self.pool.rows:
                raise ValidationError(
                    f"query {q} references pool indices outside {self.pool.rows} rows"
                )
            cleaned[q] = rel
        object.__setattr__(self, "relevance", cleaned)
        ks = tuple(int(k) for k in self.ks)
        if not ks or any(k < 1 for k in ks):
            raise ValidationError(f"cutoffs must be >= 1, got {ks}")
        object.__setattr__(self, "ks", ks)


@dataclass(frozen=True)
class PerQueryResult:
    query_id: str
    best_rank: int          # 1-based rank of the first relevant hit
    average_precision: float
    recalls: dict[int, float]


@dataclass(frozen=True)
class MetricsReport:
    """Aggregate Recall@K per cutoff, mAP, and the per-query table."""

    recall_at_k: dict[int, float]
    map_score: float
    per_query: tuple[PerQueryResult, ...]
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "recall_at_k": {str(k): v for k, v in sorted(self.recall_at_k.items())},
            "map": self.map_score,
            "n_queries": len(self.per_query),
            "config": self.config,
            "per_query": [
                {
                    "query_id": r.query_id,
                    "best_rank": r.best_rank,
                    "average_precision": r.average_precision,
                    "recalls": {str(k): v for k, v in sorted(r.recalls.items())},
                }
                for r in self.per_query
            ],
        }


def evaluate(task: RetrievalTask) -> MetricsReport:
    """Rank the full pool for every query with a relevance set, then
    aggregate Recall@K (mean over queries) and mAP (mean AP)."""
    pool_unit = _unit_rows(task.pool.data, "pool")
    query_unit = _unit_rows(task.queries.data, "query")
    query_ids = task.queries.row_ids()

    per_query: list[PerQueryResult] = []
    order = sorted(task.relevance.keys())
    sims_all = query_unit[order] @ pool_unit.T
    ap_values = np.empty(len(order))
    recall_values = {k: np.empty(len(order)) for k in task.ks}
    for row, q in enumerate(order):
        ranking = _rank_by_similarity(sims_all[row])
        rel = task.relevance[q]
        # positions of the relevant hits, ascending; the metrics below use
        # exactly the arithmetic of recall_at_k / average_precision
        positions = np.nonzero(np.isin(ranking, list(rel)))[0]
        best_rank = int(positions[0]) + 1
        n_rel = len(rel)
        ap = 0.0
        for j, pos in enumerate(positions, start=1):
            ap += (j / (int(pos) + 1)) / n_rel
        recalls = {
            k: int(np.count_nonzero(positions < k)) / n_rel for k in task.ks
        }
        ap_values[row] = ap
        for k in task.ks:
            recall_values[k][row] = recalls[k]
        per_query.append(
            PerQueryResult(
                query_id=query_ids[q],
                best_rank=best_rank,
                average_precision=ap,
                recalls=recalls,
            )
        )
    report_config = {
        "pool_size": task.pool.rows,
        "n_queries": len(order),
        "ks": list(task.ks),
        "tie_break": "ascending pool index",
        "ranked_list_length": task.pool.rows,
        "self_match_exclusion": "none (queries and pool are separate sets)",
    }
    return MetricsReport(
        recall_at_k={k: float(np.mean(recall_values[k])) for k in task.ks},
        map_score=float(np.mean(ap_values)),
        per_query=tuple(per_query),
        config=report_config,
    )

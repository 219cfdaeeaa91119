import numpy as np
import pytest

from crossalign.errors import InvalidDistributionError, ShapeMismatchError, ValidationError
from crossalign.store import DomainTag
from crossalign.synth import (
    SourceDistribution,
    generate_distractors,
    generate_views,
    make_random_mixing,
    relative_rotation,
    sample_sources,
)


def excess_kurtosis(x: np.ndarray) -> float:
    x = x - x.mean()
    m2 = (x ** 2).mean()
    m4 = (x ** 4).mean()
    return m4 / m2 ** 2 - 3.0


def test_laplace_moments():
    m = sample_sources(100_000, 1, SourceDistribution("laplace", 1.0), 42)
    col = m.data[:, 0]
    assert abs(col.mean()) < 0.02
    # Laplace excess kurtosis is exactly 3
    assert 2.7 <= excess_kurtosis(col) <= 3.3


def test_uniform_kurtosis():
    m = sample_sources(100_000, 1, SourceDistribution("uniform", 1.0), 43)
    # uniform excess kurtosis is exactly -1.2
    assert -1.3 <= excess_kurtosis(m.data[:, 0]) <= -1.1


def test_student_t_is_heavy_tailed():
    m = sample_sources(100_000, 1, SourceDistribution("student_t", 1.0, dof=6.0), 44)
    assert excess_kurtosis(m.data[:, 0]) > 1.0


def test_sampling_is_deterministic():
    dist = SourceDistribution("laplace", 2.0)
    a = sample_sources(500, 3, dist, 7)
    b = sample_sources(500, 3, dist, 7)
    assert np.array_equal(a.data, b.data)
    assert a.domain_tag is DomainTag.LATENT


def test_invalid_distributions():
    with pytest.raises(InvalidDistributionError):
        SourceDistribution("student_t", 1.0, dof=2.0)
    with pytest.raises(InvalidDistributionError):
        SourceDistribution("gaussian", 1.0)
    with pytest.raises(InvalidDistributionError):
        SourceDistribution("laplace", 0.0)
    with pytest.raises(ValidationError):
        sample_sources(0, 3, SourceDistribution("laplace", 1.0), 1)


def test_source_columns_pass_independence_smoke():
    m = sample_sources(10_000, 4, SourceDistribution("laplace", 1.0), 11)
    corr = np.corrcoef(m.data.T)
    off = corr[~np.eye(4, dtype=bool)]
    assert np.all(np.abs(off) < 0.05)


def test_mixing_respects_singular_floor():
    a = make_random_mixing(3, 3, seed=5, min_singular_value=0.1)
    assert np.linalg.svd(a)[1].min() >= 0.1 - 1e-12


def test_mixing_rectangular_rank():
    a = make_random_mixing(4, 2, seed=6, min_singular_value=0.05)
    s = np.linalg.svd(a)[1]
    assert a.shape == (4, 2)
    assert np.sum(s > 1e-10) == 2


def test_mixing_shape_rule():
    with pytest.raises(ValidationError):
        make_random_mixing(1, 2, seed=0)


def test_mixing_deterministic():
    assert np.array_equal(
        make_random_mixing(5, 5, seed=9), make_random_mixing(5, 5, seed=9)
    )


def test_relative_rotation_is_orthogonal():
    r = relative_rotation(6, 0.4, seed=3)
    assert np.allclose(r @ r.T, np.eye(6), atol=1e-12)
    assert np.array_equal(relative_rotation(6, 0.0, seed=3), np.eye(6))


def test_views_identity_transport():
    z = sample_sources(50, 3, SourceDistribution("laplace", 1.0), 1)
    eye = np.eye(3)
    ds = generate_views(z, eye, eye, 0.0, 2)
    assert np.array_equal(ds.view_s.data, z.data)
    assert np.array_equal(ds.view_e.data, z.data)
    assert np.array_equal(ds.pairing, np.arange(50))


def test_views_scaling():
    z = sample_sources(20, 2, SourceDistribution("uniform", 1.0), 3)
    ds = generate_views(z, 2.0 * np.eye(2), np.eye(2), 0.0, 4)
    assert np.all(np.abs(ds.view_s.data - 2.0 * z.data) < 1e-12)


def test_views_construction_identity_noiseless():
    z = sample_sources(100, 3, SourceDistribution("laplace", 1.0), 5)
    a_s = make_random_mixing(3, 3, 6)
    a_e = make_random_mixing(3, 3, 7)
    ds = generate_views(z, a_s, a_e, 0.0, 8)
    assert np.max(np.abs(ds.view_s.data - z.data @ a_s.T)) < 1e-9
    assert np.max(np.abs(ds.view_e.data - z.data @ a_e.T)) < 1e-9


def test_views_noise_variance():
    z = sample_sources(1000, 4, SourceDistribution("laplace", 1.0), 9)
    a = make_random_mixing(4, 4, 10)
    ds = generate_views(z, a, a, 0.1, 11)
    resid = ds.view_s.data - z.data @ a.T
    # noise-variance Monte-Carlo oracle: E[resid^2] = 0.01
    assert 0.008 <= (resid ** 2).mean() <= 0.012


def test_views_shape_mismatch():
    z = sample_sources(10, 3, SourceDistribution("laplace", 1.0), 12)
    with pytest.raises(ShapeMismatchError):
        generate_views(z, np.eye(4), np.eye(4), 0.0, 13)


def test_views_deterministic():
    z = sample_sources(30, 2, SourceDistribution("laplace", 1.0), 14)
    a = make_random_mixing(2, 2, 15)
    d1 = generate_views(z, a, a, 0.5, 16)
    d2 = generate_views(z, a, a, 0.5, 16)
    assert np.array_equal(d1.view_s.data, d2.view_s.data)
    assert np.array_equal(d1.view_e.data, d2.view_e.data)


def test_distractors_empty_pool():
    d = generate_distractors(0, 3, SourceDistribution("laplace", 1.0), np.eye(3), 17)
    assert d.rows == 0
    assert d.dims == 3


def test_distractors_deterministic():
    dist = SourceDistribution("laplace", 1.0)
    a = make_random_mixing(3, 3, 18)
    d1 = generate_distractors(10_000, 3, dist, a, 19)
    d2 = generate_distractors(10_000, 3, dist, a, 19)
    assert np.array_equal(d1.data, d2.data)
    assert d1.domain_tag is DomainTag.DISTRACTOR


def test_distractors_never_duplicate_exemplars():
    dist = SourceDistribution("laplace", 1.0)
    z = sample_sources(200, 3, dist, 20)
    a = make_random_mixing(3, 3, 21)
    ds = generate_views(z, a, a, 0.0, 22)
    dis = generate_distractors(1000, 3, dist, a, 23)
    # exhaustive comparison oracle
    for row in dis.data:
        assert not np.any(np.all(ds.view_e.data == row, axis=1))


def test_exact_unmixing_recovers_recall_one():
    # with zero noise and square invertible mixings, transporting each view
    # through the inverse mixing makes query i's nearest exemplar row i
    from crossalign.infomax import transform
    from crossalign.retrieval import RetrievalTask, evaluate

    dist = SourceDistribution("laplace", 1.0)
    z = sample_sources(150, 4, dist, 24)
    a_s = make_random_mixing(4, 4, 25)
    a_e = make_random_mixing(4, 4, 26)
    ds = generate_views(z, a_s, a_e, 0.0, 27)
    queries = transform(np.linalg.inv(a_s).T, ds.view_s)
    pool = transform(np.linalg.inv(a_e).T, ds.view_e)
    report = evaluate(
        RetrievalTask(
            queries=queries,
            pool=pool,
            relevance={i: {i} for i in range(150)},
            ks=(1,),
        )
    )
    assert report.recall_at_k[1] == 1.0

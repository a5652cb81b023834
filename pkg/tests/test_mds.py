import math

import numpy as np
import pytest

from oracles import pairwise_distances
from sciprofile import (Dissimilarity, Embedding, add_factor_poles, classical_mds, distance_matrix,
                        extract_factors, load_fixture, procrustes, smacof, stress1)
from sciprofile.mds import read_embedding_csv


def planted(rng, n):
    x = rng.uniform(-10, 10, (n, 2))
    labels = [f"p{i}" for i in range(n)]
    return Embedding(labels, x), Dissimilarity(labels, pairwise_distances(x))


def test_add_poles_rows_and_labels():
    rows, labels = add_factor_poles(np.full((80, 3), 0.3), [f"c{i}" for i in range(80)])
    assert rows.shape == (83, 3)
    assert labels[-3:] == ("F1", "F2", "F3")
    np.testing.assert_array_equal(rows[80], [1, 0, 0])


def test_add_poles_from_model():
    model = extract_factors(load_fixture("annexB_all").without_world())
    rows, labels = add_factor_poles(model, None)
    assert rows.shape == (38, 3) and len(labels) == 38


def test_add_poles_requires_three_factors():
    with pytest.raises(ValueError):
        add_factor_poles(np.zeros((2, 2)), ["a", "b"])


def test_pole_distances():
    d = distance_matrix(np.eye(3), ["F1", "F2", "F3"])
    off = d.d[~np.eye(3, dtype=bool)]
    np.testing.assert_allclose(off, math.sqrt(2), rtol=1e-15)


def test_identical_rows_distance_zero():
    d = distance_matrix([[0.3, 0.4, 0.1], [0.3, 0.4, 0.1]], ["a", "b"])
    assert d.d[0, 1] == 0.0


def test_cosine_orthogonal_is_one():
    d = distance_matrix([[1, 0, 0], [0, 1, 0]], ["a", "b"], metric="cosine")
    assert d.d[0, 1] == pytest.approx(1.0)


@pytest.mark.parametrize("rows, metric", [([[0, 0], [1, 1]], "cosine"), ([[1, 1], [1, 2]], "manhattan")])
def test_distance_errors(rows, metric):
    with pytest.raises(ValueError):
        distance_matrix(rows, ["a", "b"], metric)


@pytest.mark.parametrize("d", [[[0, 1], [2, 0]], [[1, 0], [0, 1]], [[0, -1], [-1, 0]]])
def test_dissimilarity_validation(d):
    with pytest.raises(ValueError):
        Dissimilarity(["a", "b"], d)


def test_classical_collinear():
    d = Dissimilarity("ABC", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    e = classical_mds(d)
    got = pairwise_distances(e.x)
    np.testing.assert_allclose(got, d.d, atol=1e-9)


def test_classical_equilateral():
    d = Dissimilarity("ABC", 1.0 - np.eye(3))
    np.testing.assert_allclose(pairwise_distances(classical_mds(d).x), d.d, atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_classical_recovers_planted(seed):
    truth, d = planted(np.random.default_rng(seed), 10)
    e = classical_mds(d)
    _, rmse = procrustes(truth, e)
    assert rmse <= 1e-8
    assert np.abs(e.x.mean(axis=0)).max() <= 1e-10


def test_classical_reports_non_euclidean():
    d = Dissimilarity("ABCD", [[0, 1, 1, 5], [1, 0, 1, 1], [1, 1, 0, 1], [5, 1, 1, 0]])
    e = classical_mds(d)
    assert any("not Euclidean" in note for note in e.diagnostics)
    assert np.all(np.isfinite(e.x))


def test_classical_too_few_items():
    with pytest.raises(ValueError):
        classical_mds(Dissimilarity("AB", [[0, 1], [1, 0]]))


def test_smacof_exact_start_is_fixed_point():
    truth, d = planted(np.random.default_rng(7), 9)
    e = smacof(d, init=truth)
    assert e.iterations == 1
    assert e.stress1 <= 1e-12


def test_smacof_planted_classical_init():
    _, d = planted(np.random.default_rng(8), 15)
    assert smacof(d).stress1 <= 1e-8


@pytest.mark.parametrize("seed", range(20))
def test_smacof_monotone(seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.1, 5, (12, 12))
    d = Dissimilarity([f"i{i}" for i in range(12)], np.triu(a, 1) + np.triu(a, 1).T)
    e = smacof(d, init="random", seed=seed)
    h = np.array(e.history)
    assert np.all(np.diff(h) <= 1e-12 * h[0])
    assert e.stress1 >= 0 and np.all(np.isfinite(e.x))


def test_smacof_random_init_is_seeded():
    _, d = planted(np.random.default_rng(1), 8)
    assert np.array_equal(smacof(d, "random", seed=4).x, smacof(d, "random", seed=4).x)


def test_smacof_zero_dissimilarities():
    d = Dissimilarity("ABC", np.zeros((3, 3)))
    e = smacof(d, init=np.ones((3, 2)))
    assert e.iterations == 0 and e.diagnostics


def test_smacof_bad_init_shape():
    _, d = planted(np.random.default_rng(1), 5)
    with pytest.raises(ValueError):
        smacof(d, init=np.zeros((4, 2)))


def test_stress1_examples():
    truth, d = planted(np.random.default_rng(2), 6)
    assert stress1(truth, d) <= 1e-15
    assert stress1(Embedding(truth.labels, 2 * truth.x), d) > 0
    pair = Dissimilarity("AB", [[0, 1], [1, 0]])
    assert stress1(Embedding("AB", [[0, 0], [1, 0]]), pair) == 0.0


def test_stress1_label_mismatch():
    with pytest.raises(ValueError):
        stress1(Embedding("AB", [[0, 0], [1, 0]]), Dissimilarity("BA", [[0, 1], [1, 0]]))


def test_procrustes_rotation_translation():
    x = np.random.default_rng(0).normal(size=(8, 2))
    r = np.array([[0.0, -1.0], [1.0, 0.0]])
    ex = Embedding(range(8), x)
    _, rmse = procrustes(ex, Embedding(range(8), x @ r + [3.0, -2.0]))
    assert rmse <= 1e-12


def test_procrustes_reflection():
    x = np.random.default_rng(1).normal(size=(8, 2))
    _, rmse = procrustes(Embedding(range(8), x), Embedding(range(8), x * [-1, 1]))
    assert rmse <= 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_procrustes_perturbation_bound(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(10, 2))
    delta = 0.1
    y = x.copy()
    direction = rng.normal(size=2)
    y[rng.integers(10)] += delta * direction / np.linalg.norm(direction)
    _, rmse = procrustes(Embedding(range(10), x), Embedding(range(10), y))
    assert rmse <= delta


def test_label_permutation_invariance():
    truth, d = planted(np.random.default_rng(5), 12)
    perm = np.random.default_rng(6).permutation(12)
    labels = [d.labels[i] for i in perm]
    dp = Dissimilarity(labels, d.d[np.ix_(perm, perm)])
    a, b = smacof(d), smacof(dp)
    np.testing.assert_allclose(pairwise_distances(b.x), pairwise_distances(a.x)[np.ix_(perm, perm)],
                               atol=1e-8)


def test_poles_alone_equilateral():
    d = distance_matrix(np.eye(3), ["F1", "F2", "F3"])
    dist = pairwise_distances(smacof(d).x)[np.triu_indices(3, 1)]
    assert dist.max() / dist.min() <= 1.02


def test_embedding_csv_round_trip():
    e = Embedding(["AA", "B,B"], [[0.5, -1.25], [1 / 3, 2.0]])
    back = read_embedding_csv(e.to_csv())
    assert back.labels == e.labels
    np.testing.assert_allclose(back.x, e.x, rtol=1e-8)

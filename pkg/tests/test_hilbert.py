import itertools
import math

import numpy as np
import pytest
from sklearn.base import clone

from pdwasser import (
    FiniteMetricSpace,
    HilbertCertifier,
    SizeLimitExceeded,
    Verdict,
    certify,
    distance_matrix,
    distortion_probe,
    gram_from_distances,
    lemma_embed,
    mds_embed,
)
from pdwasser.hilbert import certificate_to_dict, distortion, family_metric, probe_csv, sample_family
from pdwasser.lemma import lp_distance_matrix

TRIANGLE = np.ones((3, 3)) - np.eye(3)
# center 0 at distance 1 from three leaves that are pairwise 2 apart
STAR = np.array([[0, 1, 1, 1], [1, 0, 2, 2], [1, 2, 0, 2], [1, 2, 2, 0]], dtype=float)


def _euclid(x):
    return np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2))


def test_gram_examples():
    np.testing.assert_array_equal(gram_from_distances([[0.0]]), [[0.0]])
    # two points at distance 2: centred at +-1, Gram [[1, -1], [-1, 1]]
    G = gram_from_distances([[0, 2], [2, 0]])
    np.testing.assert_allclose(G, [[1, -1], [-1, 1]], atol=1e-15)
    np.testing.assert_allclose(sorted(np.linalg.eigvalsh(G)), [0, 2], atol=1e-14)
    # unit triangle: circumradius 1/sqrt(3), total inertia 1 split over two axes
    np.testing.assert_allclose(sorted(np.linalg.eigvalsh(gram_from_distances(TRIANGLE))), [0, 0.5, 0.5], atol=1e-14)


def test_gram_rows_sum_to_zero(rng):
    x = rng.standard_normal((7, 3))
    G = gram_from_distances(_euclid(x))
    np.testing.assert_allclose(G.sum(axis=1), 0, atol=1e-12)
    np.testing.assert_array_equal(G, G.T)


def test_certify_star_is_not_embeddable():
    cert = certify(STAR)
    assert cert.verdict is Verdict.NOT_EMBEDDABLE
    assert cert.points is None
    # independent eigensolver on the same centred matrix
    n = 4
    J = np.eye(n) - 1.0 / n
    expected = np.sort(np.linalg.eigvals(-0.5 * J @ (STAR**2) @ J).real)[::-1]
    np.testing.assert_allclose(cert.eigenvalues, expected, atol=1e-12)
    assert cert.worst_negative == pytest.approx(-0.25, abs=1e-12)
    assert cert.ratio == pytest.approx(0.125, abs=1e-12)


def test_certify_sorted_descending_and_embeddable(rng):
    cert = certify(_euclid(rng.standard_normal((10, 3))))
    assert cert.verdict is Verdict.EMBEDDABLE
    assert np.all(np.diff(cert.eigenvalues) <= 0)
    assert cert.points.shape == (10, 3)


def test_certify_rejects_bad_tol():
    with pytest.raises(ValueError):
        certify(TRIANGLE, tol=0)


def test_single_point():
    cert = certify([[0.0]])
    assert cert.verdict is Verdict.EMBEDDABLE
    X, report = mds_embed([[0.0]])
    assert X.shape == (1, 0)
    assert report.multiplicative_distortion == 1.0


def test_mds_triangle():
    X, report = mds_embed(TRIANGLE)
    assert X.shape == (3, 2)
    assert report.multiplicative_distortion == pytest.approx(1.0, abs=1e-12)


def test_mds_star_distorts():
    X, report = mds_embed(STAR)
    assert report.multiplicative_distortion > 1 + 1e-3
    # negative directions are dropped, so nothing shrinks
    assert report.rho_minus_gap == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_mds_recovers_euclidean_configurations(rng, k):
    for _ in range(5):
        x = rng.uniform(-5, 5, size=(int(rng.integers(2, 33)), k))
        D = _euclid(x)
        assert certify(D).verdict is Verdict.EMBEDDABLE
        X, report = mds_embed(D)
        assert abs(report.multiplicative_distortion - 1) <= 1e-6
        assert X.shape[1] <= k
        np.testing.assert_allclose(_euclid(X), D, atol=1e-8 * D.max())


def test_distortion_is_scale_free(rng):
    x = rng.standard_normal((6, 2))
    D = _euclid(x)
    report = distortion(D, 3.0 * x)
    assert report.rho_plus_gap == pytest.approx(3.0)
    assert report.rho_minus_gap == pytest.approx(1 / 3.0)
    assert report.multiplicative_distortion == pytest.approx(1.0)


def test_distortion_degenerate_cases():
    D = np.array([[0, 1], [1, 0]], dtype=float)
    assert math.isinf(distortion(D, [[0.0], [0.0]]).multiplicative_distortion)
    assert math.isinf(distortion(np.zeros((2, 2)), [[0.0], [1.0]]).multiplicative_distortion)
    assert distortion(np.zeros((2, 2)), [[0.0], [0.0]]).multiplicative_distortion == 1.0


@pytest.mark.parametrize("p", [1, 2.5, 4])
def test_isometry_transfer(rng, p):
    for d in (2, 3):
        cube = np.array(list(itertools.product([0.0, 1.0], repeat=d)))
        for pts in (cube, rng.uniform(-3, 3, size=(7, d))):
            direct = certify(lp_distance_matrix(pts, p))
            via = certify(distance_matrix(lemma_embed(pts, p), p))
            np.testing.assert_allclose(via.eigenvalues, direct.eigenvalues, rtol=0, atol=1e-8)
            assert via.verdict == direct.verdict


@pytest.mark.parametrize("s", [1e-3, 0.5, 7.0, 1e4])
def test_scale_equivariance(rng, s):
    for D in (STAR, lp_distance_matrix(rng.uniform(size=(8, 3)), 4)):
        base = certify(D)
        scaled = certify(FiniteMetricSpace(D).scaled(s))
        np.testing.assert_allclose(scaled.eigenvalues, s**2 * base.eigenvalues, atol=1e-12 * s**2 * np.abs(base.eigenvalues).max())
        assert scaled.verdict == base.verdict


def test_permutation_invariance(rng):
    D = lp_distance_matrix(rng.uniform(size=(9, 3)), 3)
    perm = rng.permutation(9)
    a = certify(D).eigenvalues
    b = certify(FiniteMetricSpace(D).relabeled(perm)).eigenvalues
    np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize(
    "bad",
    [
        np.zeros((2, 3)),
        np.zeros((0, 0)),
        [[0, 1], [2, 0]],
        [[1, 1], [1, 0]],
        [[0, -1], [-1, 0]],
        [[0, np.nan], [np.nan, 0]],
        [[0, 1, 5], [1, 0, 1], [5, 1, 0]],
    ],
)
def test_metric_space_validation(bad):
    with pytest.raises(ValueError):
        FiniteMetricSpace(bad)


def test_metric_space_triangle_slack():
    FiniteMetricSpace([[0, 1, 2 * (1 + 1e-12)], [1, 0, 1], [2 * (1 + 1e-12), 1, 0]])


def test_probe_euclidean_negative_control():
    rows = distortion_probe("euclidean", 2, [4, 8, 16, 32], seed=5)
    assert [r.n for r in rows] == [4, 8, 16, 32]
    assert all(r.ratio < 1e-9 for r in rows)
    assert all(abs(r.mds_distortion - 1) < 1e-6 for r in rows)


def test_probe_via_diagrams_matches_lp():
    lp = distortion_probe("lp", 4, [3, 6, 12], seed=11)
    via = distortion_probe("via-diagrams", 4, [3, 6, 12], seed=11)
    for a, b in zip(lp, via):
        assert abs(a.ratio - b.ratio) <= 1e-8
        assert abs(a.worst_negative - b.worst_negative) <= 1e-8


def test_probe_is_deterministic():
    a = probe_csv(distortion_probe("lp", 3, [4, 9], seed=1))
    b = probe_csv(distortion_probe("lp", 3, [4, 9], seed=1))
    assert a == b
    assert a.splitlines()[0] == "n,worst_negative,ratio,mds_distortion"
    # rows do not depend on which other sizes are requested
    c = probe_csv(distortion_probe("lp", 3, [9], seed=1))
    assert a.splitlines()[2] == c.splitlines()[1]


def test_probe_limits():
    with pytest.raises(SizeLimitExceeded):
        distortion_probe("euclidean", 2, [512], seed=0)
    with pytest.raises(SizeLimitExceeded):
        distortion_probe("euclidean", 2, [4, 20], seed=0, cap=16)
    with pytest.raises(ValueError):
        distortion_probe("euclidean", 2, [8, 4], seed=0)
    with pytest.raises(ValueError):
        distortion_probe("nope", 2, [4], seed=0)


def test_sample_family_shapes():
    cube = sample_family("hypercube", 8, seed=0, order=4)
    assert sorted(map(tuple, cube)) == sorted(itertools.product([0.0, 1.0], repeat=3))
    assert len({tuple(r) for r in sample_family("hypercube", 5, seed=0, order=4)}) == 5
    ball = sample_family("lp", 200, seed=0, order=3)
    assert np.all((np.abs(ball) ** 3).sum(axis=1) <= 1 + 1e-12)
    np.testing.assert_array_equal(ball, sample_family("random-lp-ball", 200, seed=0, order=3))
    assert family_metric("euclidean", 5, 0, 2).n == 5


def test_certificate_json_record():
    cert = certify(STAR)
    rec = certificate_to_dict(cert, p=2, distortion_value=mds_embed(STAR)[1].multiplicative_distortion)
    assert set(rec) == {"n", "p", "eigenvalues", "worst_negative", "ratio", "verdict", "distortion"}
    assert rec["verdict"] == "NOT_EMBEDDABLE" and rec["n"] == 4


def test_hilbert_certifier_estimator(rng):
    x = rng.standard_normal((12, 3))
    est = HilbertCertifier(tol=1e-9)
    Y = est.fit_transform(_euclid(x))
    assert est.embeddable_
    assert est.n_components_ == 3 == Y.shape[1]
    np.testing.assert_allclose(_euclid(Y), _euclid(x), atol=1e-9)
    assert not clone(est).fit(STAR).embeddable_
    assert est.get_params() == {"tol": 1e-9}

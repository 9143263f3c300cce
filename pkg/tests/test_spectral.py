import numpy as np
import pytest

from walkshield import spectral
from walkshield.errors import CapabilityError, ConvergenceError, DomainError
from walkshield.graph import from_edges
from walkshield.walks import trace_power

from conftest import complete, cycle, er_graph, path, random_connected, star


def dense_spectrum(g):
    return np.linalg.eigvalsh(g.adjacency.toarray().astype(float))


def test_k2():
    assert spectral.lambda_max(path(2)).lambda_max == pytest.approx(1.0, abs=1e-9)


def test_star_k14():
    r = spectral.lambda_max(star(4))
    assert r.lambda_max == pytest.approx(2.0, abs=1e-9)
    assert np.linalg.norm(r.eigvec) == pytest.approx(1.0, abs=1e-12)
    assert (r.eigvec >= 0).all()


def test_edgeless_graph_is_zero():
    r = spectral.lambda_max(from_edges(3, []))
    assert r.lambda_max == 0.0 and not r.eigvec.any()


def test_bipartite_does_not_stall():
    # even cycles and paths have the symmetric eigenvalue -lambda
    for g in (cycle(6), path(5), star(7)):
        assert spectral.lambda_max(g).lambda_max == pytest.approx(dense_spectrum(g)[-1], abs=1e-8)


def test_deterministic_given_seed():
    g = er_graph(200, 0.05, 3)
    a = spectral.lambda_max(g, seed=5)
    b = spectral.lambda_max(g, seed=5)
    assert a.lambda_max == b.lambda_max and np.array_equal(a.eigvec, b.eigvec)


def test_convergence_error_carries_iterate():
    with pytest.raises(ConvergenceError) as info:
        spectral.lambda_max(er_graph(300, 0.05, 1), tol=1e-15, max_iter=3)
    assert info.value.best.iterations == 3


def test_residual_within_tolerance():
    for g in random_connected(20, (5, 50), seed=4):
        r = spectral.lambda_max(g)
        a = g.adjacency.toarray().astype(float)
        res = np.linalg.norm(a @ r.eigvec - r.lambda_max * r.eigvec)
        assert res <= spectral.DEFAULT_TOL * max(r.lambda_max, 1.0)
        assert r.lambda_max == pytest.approx(dense_spectrum(g)[-1], rel=1e-9)


def second_eigen_magnitude(g):
    return abs(dense_spectrum(g)[-2])


@pytest.mark.parametrize("g,expected", [
    (path(2), 1.0),
    (from_edges(4, [(0, 1), (2, 3)]), 1.0),
    (path(3), 0.0),
])
def test_lambda2_fixtures(g, expected):
    # expected values match the dense oracle: |second largest algebraic eigenvalue|
    assert second_eigen_magnitude(g) == pytest.approx(expected, abs=1e-12)
    assert spectral.lambda_2(g) == pytest.approx(expected, abs=1e-6)


def test_lambda2_matches_dense_oracle():
    for g in random_connected(15, (4, 10), seed=11) + [complete(5), cycle(7), star(5)]:
        assert spectral.lambda_2(g) == pytest.approx(second_eigen_magnitude(g), abs=1e-6)


@pytest.mark.parametrize("g,s,expected", [
    (star(4), [0], 100.0),
    (complete(3), [1], 50.0),
    (path(2), [], 0.0),
    (path(3), [0], 100 * (np.sqrt(2) - 1) / np.sqrt(2)),
])
def test_eigendrop_fixtures(g, s, expected):
    assert spectral.eigendrop_percent(g, s) == pytest.approx(expected, abs=1e-6)


def test_eigendrop_zero_lambda():
    with pytest.raises(DomainError):
        spectral.eigendrop_percent(from_edges(2, []), [0])


def test_eigendrop_monotone_in_set():
    rng = np.random.default_rng(8)
    for g in random_connected(30, (6, 50), seed=9):
        order = rng.permutation(g.n)
        sizes = sorted(rng.choice(np.arange(g.n), size=3, replace=False))
        drops = [spectral.eigendrop_percent(g, order[:s]) for s in sizes]
        assert all(0.0 <= d <= 100.0 for d in drops)
        assert drops == sorted(drops) or np.allclose(drops, sorted(drops), atol=1e-7)


@pytest.mark.parametrize("g,expected", [(path(2), 0.5), (path(3), 0.5)])
def test_trace_dominance_fixtures(g, expected):
    ev = dense_spectrum(g)
    assert ev.max() ** 8 / np.sum(ev ** 8) == pytest.approx(expected, abs=1e-12)
    assert spectral.trace_dominance_ratio(g, 8) == pytest.approx(expected, abs=1e-9)


def test_trace_dominance_rejects_odd_and_large():
    with pytest.raises(DomainError):
        spectral.trace_dominance_ratio(path(3), 5)
    with pytest.raises(CapabilityError):
        spectral.trace_dominance_ratio(path(30), 8, dense_limit=10)


def test_trace_matches_spectral_sum():
    for g in random_connected(25, (3, 50), seed=12):
        ev = dense_spectrum(g)
        for p in (2, 4, 6, 8):
            assert trace_power(g, p) == int(round(np.sum(ev ** p)))
            assert trace_power(g, p) == pytest.approx(np.sum(ev ** p), rel=1e-6)

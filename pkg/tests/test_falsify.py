from types import SimpleNamespace

import numpy as np
import pytest

from unitforce.configs import fig1_q8
from unitforce.errors import BadParameter, DimMismatch, NumericalError
from unitforce.falsify import (COUNTEREXAMPLE_FOUND, NO_COUNTEREXAMPLE, STRESS_TOL, EmbeddingProblem,
                               edge_residuals, optimize, recover_run, stress)
from unitforce.witness import canonical_witness

H = 1e-6


@pytest.fixture(scope="module")
def fig1():
    return EmbeddingProblem.from_witness(canonical_witness("9/4"))


def simplex_pairs(problem):
    W = canonical_witness("9/4")
    cfg = fig1_q8(1)
    ids = [W.points.index(cfg.points[f"p{i}"]) for i in range(1, 9)]
    return [(a, b) for k, a in enumerate(ids) for b in ids[k + 1:]]


def fd_gradient(problem, x, penalty):
    g = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = H
        g[k] = (stress(problem, x + e, penalty)[0] - stress(problem, x - e, penalty)[0]) / (2 * H)
    return g


def rel_error(a, b):
    scale = np.linalg.norm(a) + np.linalg.norm(b)
    return 0.0 if scale == 0 else float(np.linalg.norm(a - b) / scale)


def test_shape(fig1):
    assert fig1.n == 19 and len(fig1.edges) == 89 and fig1.forced == pytest.approx(1.5)


def test_exact_embedding_residual(fig1):
    value, grad = stress(fig1, fig1.initial.ravel(), 0.0)
    assert value <= 1e-14 * len(fig1.edges)
    assert value < 1e-18
    assert np.abs(grad).max() < 1e-12


def test_stretched_edge():
    X = np.zeros((2, 8))
    X[1, 0] = 2.0
    p = EmbeddingProblem(2, [(0, 1)], (0, 1), 2.0)
    assert stress(p, X.ravel(), 0.0)[0] == 9.0
    # penalty inactive when already outside the band
    q = EmbeddingProblem(2, [(0, 1)], (0, 1), 1.0, delta=0.5)
    assert stress(q, X.ravel(), 100.0)[0] == 9.0
    assert edge_residuals(p, X.ravel())[0] == pytest.approx(1.0)


def test_gradient_fd_random(fig1):
    rng = np.random.default_rng(7)
    for k in range(100):
        if k % 3 == 0:
            x = rng.uniform(-2, 2, size=fig1.n * 8)
        else:
            x = fig1.initial.ravel() + rng.normal(0, 0.05 * (1 + k % 5), size=fig1.n * 8)
        penalty = float(rng.choice([0.0, 1.0, 100.0]))
        g = stress(fig1, x, penalty)[1]
        assert rel_error(g, fd_gradient(fig1, x, penalty)) <= 1e-6


def test_gradient_penalty_active():
    rng = np.random.default_rng(3)
    p = EmbeddingProblem(3, [(0, 1), (1, 2)], (0, 2), 1.0, delta=0.5)
    for _ in range(20):
        X = rng.normal(size=(3, 8))
        X[2] = X[0] + rng.normal(size=8) * 0.1 + np.eye(8)[0]   # |x - y| near forced
        x = X.ravel()
        g = stress(p, x, 10.0)[1]
        assert rel_error(g, fd_gradient(p, x, 10.0)) <= 1e-6


def test_errors(fig1):
    with pytest.raises(NumericalError):
        stress(fig1, np.full(fig1.n * 8, np.nan))
    with pytest.raises(DimMismatch):
        stress(fig1, np.zeros(5))
    with pytest.raises(BadParameter):
        EmbeddingProblem(2, [(0, 1)], (0, 1), 1.0, delta=0.0)
    with pytest.raises(BadParameter):
        EmbeddingProblem(2, [(0, 2)], (0, 1), 1.0)
    with pytest.raises(BadParameter):
        optimize(fig1, restarts=0)
    with pytest.raises(DimMismatch):
        EmbeddingProblem.from_witness(SimpleNamespace(dim=3))


def test_sanity_from_exact(fig1):
    rep = optimize(fig1, restarts=1, schedule=(0.0,), noise=0.0, box_fraction=0.0)
    assert rep.best_stress < 1e-18
    assert abs(rep.best_distance - 1.5) < 1e-9


def test_determinism_and_monotone(fig1):
    a = optimize(fig1, seed=5, restarts=3, max_iters=300)
    b = optimize(fig1, seed=5, restarts=3, max_iters=300)
    assert a.to_json() == b.to_json()
    for rec in a.records:
        assert rec.final_stress <= rec.initial_stress


def test_rigid(fig1):
    rep = optimize(fig1, seed=0, restarts=20)
    assert rep.verdict == NO_COUNTEREXAMPLE
    assert len(rep.records) == 20 and rep.stress_tol == STRESS_TOL


def test_nonrigid_folds(fig1):
    loose = fig1.without_edges(simplex_pairs(fig1))
    assert len(loose.edges) == 89 - 28
    rep = optimize(loose, seed=0, restarts=20)
    assert rep.verdict == COUNTEREXAMPLE_FOUND
    assert rep.best_stress < STRESS_TOL and abs(rep.best_distance - 1.5) > 0.1


def test_recover_fig1(fig1):
    r = recover_run(fig1, 0)
    assert r.stress < 1e-12 and abs(r.distance - 1.5) < 1e-6


def test_recover_base():
    p = EmbeddingProblem.from_witness(canonical_witness(1))
    r = recover_run(p, 0)
    assert r.stress < 1e-20 and abs(r.distance - 1.0) < 1e-9


@pytest.mark.slow
def test_recover_bound_set():
    p = EmbeddingProblem.from_witness(canonical_witness("1/16", bound=True))
    converged = []
    for s in range(4):
        r = recover_run(p, s, restarts=1, noise=0.1)
        if r.stress < 1e-12:
            converged.append(r.distance)
    assert len(converged) >= 2
    assert all(d <= 0.25 + 1e-6 for d in converged)

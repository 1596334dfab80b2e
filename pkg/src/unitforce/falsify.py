"""Numerical search for unit-preserving embeddings that break a forced distance.

Minimizes

    sum over unit edges (|f(u) - f(v)|^2 - 1)^2
      + penalty * max(0, delta^2 - (|f(x) - f(y)| - forced)^2)^2

over float embeddings in R^8.  A zero-stress minimizer with the target pair
outside the band |t - forced| <= delta would be a counterexample to the
forcing claim; a rigid witness should never produce one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import BadParameter, DimMismatch, NumericalError

NO_COUNTEREXAMPLE = "NO_COUNTEREXAMPLE"
COUNTEREXAMPLE_FOUND = "COUNTEREXAMPLE_FOUND"

DIM = 8
STRESS_TOL = 1e-12
DEFAULT_SCHEDULE = (1.0, 10.0, 100.0, 1e3, 1e4)


@dataclass
class EmbeddingProblem:
    n: int
    edges: np.ndarray              # (E, 2) int
    target: tuple[int, int]
    forced: float
    delta: float = 0.1
    initial: np.ndarray | None = None   # (n, 8) float, usually the exact coordinates

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.delta <= 0:
            raise BadParameter(f"delta must be positive, got {self.delta}")
        if len(self.edges) and (self.edges.min() < 0 or self.edges.max() >= self.n):
            raise BadParameter("edge references a missing vertex")
        i, j = self.target
        if not (0 <= i < self.n and 0 <= j < self.n) or i == j:
            raise BadParameter(f"bad target pair {self.target}")
        if self.initial is not None:
            self.initial = np.asarray(self.initial, dtype=float).reshape(self.n, DIM)

    @classmethod
    def from_witness(cls, W, delta: float = 0.1) -> "EmbeddingProblem":
        if W.dim != DIM:
            raise DimMismatch(f"embeddings live in R^8, witness has dimension {W.dim}")
        i, j, sq = W.target
        coords = np.array([p.to_floats() for p in W.points], dtype=float)
        return cls(W.num_points, W.edges, (i, j), math.sqrt(float(sq)), delta, coords)

    def without_edges(self, pairs) -> "EmbeddingProblem":
        drop = {(min(a, b), max(a, b)) for a, b in pairs}
        keep = [k for k, (a, b) in enumerate(self.edges.tolist()) if (min(a, b), max(a, b)) not in drop]
        return EmbeddingProblem(self.n, self.edges[keep], self.target, self.forced, self.delta,
                                self.initial)


def _as_matrix(problem: EmbeddingProblem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size != DIM * problem.n:
        raise DimMismatch(f"embedding needs {DIM * problem.n} coordinates, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise NumericalError("non-finite coordinates in embedding")
    return x.reshape(problem.n, DIM)


def stress(problem: EmbeddingProblem, x, penalty: float = 1.0) -> tuple[float, np.ndarray]:
    """Objective value and its analytic gradient (flat, same layout as ``x``)."""
    X = _as_matrix(problem, x)
    u, v = problem.edges[:, 0], problem.edges[:, 1]
    D = X[u] - X[v]
    r = np.einsum("ij,ij->i", D, D) - 1.0
    value = float(r @ r)
    G = np.zeros_like(X)
    gD = (4.0 * r)[:, None] * D
    np.add.at(G, u, gD)
    np.add.at(G, v, -gD)
    if penalty:
        i, j = problem.target
        d = X[i] - X[j]
        t = math.sqrt(float(d @ d))
        gap = t - problem.forced
        h = problem.delta ** 2 - gap * gap
        if h > 0:
            value += penalty * h * h
            if t > 0:
                g = (-4.0 * penalty * h * gap / t) * d
                G[i] += g
                G[j] -= g
    return value, G.ravel()


def edge_residuals(problem: EmbeddingProblem, x) -> np.ndarray:
    """|f(u) - f(v)| - 1 per edge, computed directly from lengths."""
    X = _as_matrix(problem, x)
    return np.linalg.norm(X[problem.edges[:, 0]] - X[problem.edges[:, 1]], axis=1) - 1.0


def target_distance(problem: EmbeddingProblem, x) -> float:
    X = _as_matrix(problem, x)
    i, j = problem.target
    return float(np.linalg.norm(X[i] - X[j]))


@dataclass
class RestartRecord:
    index: int
    start: str               # "noise" or "box"
    iterations: int
    initial_stress: float    # objective at the final penalty weight
    final_stress: float
    edge_stress: float       # penalty-free stress at the returned embedding
    distance: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FalsifyReport:
    restarts: int
    seed: int
    delta: float
    forced: float
    stress_tol: float
    schedule: tuple[float, ...]
    best_stress: float
    best_distance: float
    verdict: str
    records: list[RestartRecord] = field(default_factory=list)
    best_embedding: np.ndarray | None = None

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "verdict": self.verdict,
            "restarts": self.restarts,
            "seed": self.seed,
            "delta": self.delta,
            "forced": self.forced,
            "stress_tol": self.stress_tol,
            "penalty_schedule": list(self.schedule),
            "best_stress": self.best_stress,
            "best_distance": self.best_distance,
            "records": [r.to_json() for r in self.records],
        }


def _descend(problem, x0, penalty: float, max_iters: int) -> tuple[np.ndarray, int]:
    fun = lambda x: stress(problem, x, penalty)
    res = minimize(fun, x0, jac=True, method="L-BFGS-B",
                   options={"maxiter": max_iters, "ftol": 0.0, "gtol": 1e-14, "maxcor": 20})
    x = res.x
    # the line search only accepts decreasing steps, but keep the guard explicit
    if fun(x)[0] > fun(x0)[0]:
        return x0, res.nit
    return x, res.nit


def _start(problem: EmbeddingProblem, rng, noise: float, box_fraction: float):
    base = problem.initial if problem.initial is not None else np.zeros((problem.n, DIM))
    if rng.random() < box_fraction:
        half = max(1.0, float(np.abs(base).max()) + 1.0)
        return rng.uniform(-half, half, size=base.shape).ravel(), "box"
    return (base + rng.normal(0.0, noise, size=base.shape)).ravel(), "noise"


def _run(problem, x0, schedule, max_iters):
    """Ramp the penalty; return the best checkpoint under the final weight."""
    final_w = schedule[-1]
    score = lambda x: stress(problem, x, final_w)[0]
    best_x, best_v = x0, score(x0)
    initial = best_v
    x, iters = x0, 0
    for w in schedule:
        x, it = _descend(problem, x, w, max_iters)
        iters += it
        v = score(x)
        if v <= best_v:
            best_x, best_v = x, v
    return best_x, iters, initial, best_v


def _is_counterexample(problem, x, stress_tol: float) -> bool:
    s = stress(problem, x, 0.0)[0]
    gap = abs(target_distance(problem, x) - problem.forced)
    return s < stress_tol and gap > problem.delta


def _reverified(problem, x, stress_tol: float) -> bool:
    """Independent recomputation from edge lengths before a counterexample is declared."""
    X = _as_matrix(problem, x)
    lengths = np.linalg.norm(X[problem.edges[:, 0]] - X[problem.edges[:, 1]], axis=1)
    s = float(np.sum((lengths ** 2 - 1.0) ** 2))
    i, j = problem.target
    t = float(np.linalg.norm(X[i] - X[j]))
    return s < stress_tol and abs(t - problem.forced) > problem.delta


def optimize(problem: EmbeddingProblem, seed: int = 0, restarts: int = 20, max_iters: int = 2000,
             *, schedule=DEFAULT_SCHEDULE, stress_tol: float = STRESS_TOL,
             noise: float = 0.3, box_fraction: float = 0.25) -> FalsifyReport:
    if restarts < 1:
        raise BadParameter("restarts must be >= 1")
    schedule = tuple(float(w) for w in schedule)
    records: list[RestartRecord] = []
    outcomes = []
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        x0, kind = _start(problem, rng, noise, box_fraction)
        x, iters, initial, final = _run(problem, x0, schedule, max_iters)
        es = stress(problem, x, 0.0)[0]
        dist = target_distance(problem, x)
        records.append(RestartRecord(r, kind, iters, initial, final, es, dist))
        outcomes.append(x)

    found = [k for k, x in enumerate(outcomes) if _is_counterexample(problem, x, stress_tol)]
    found = [k for k in found if _reverified(problem, outcomes[k], stress_tol)]
    if found:
        best = min(found, key=lambda k: records[k].edge_stress)
        verdict = COUNTEREXAMPLE_FOUND
    else:
        outside = [k for k, rec in enumerate(records)
                   if abs(rec.distance - problem.forced) > problem.delta]
        pool = outside or list(range(restarts))
        best = min(pool, key=lambda k: records[k].edge_stress)
        verdict = NO_COUNTEREXAMPLE
    return FalsifyReport(restarts, seed, problem.delta, problem.forced, stress_tol, schedule,
                         records[best].edge_stress, records[best].distance, verdict, records,
                         outcomes[best].reshape(problem.n, DIM))


@dataclass
class Recovery:
    distance: float
    stress: float
    embedding: np.ndarray


def recover_run(problem: EmbeddingProblem, seed: int = 0, restarts: int = 5,
                max_iters: int = 5000, noise: float = 0.3) -> Recovery:
    """Zero-penalty descent from random starts; the lowest-stress embedding wins."""
    best = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        x0, _ = _start(problem, rng, noise, 0.0)
        x, _, _, _ = _run(problem, x0, (0.0,), max_iters)
        s = stress(problem, x, 0.0)[0]
        if best is None or s < best[1]:
            best = (x, s)
    x, s = best
    return Recovery(target_distance(problem, x), s, x.reshape(problem.n, DIM))


def recover(problem: EmbeddingProblem, seed: int = 0) -> float:
    return recover_run(problem, seed).distance

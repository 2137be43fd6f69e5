"""d-regular expander graphs: construction, spectrum, walks, Chernoff bound.

Graphs are stored as rotation maps: a (V, d) table whose row v lists the
endpoints of the d edge labels at vertex v. Self-loops and multi-edges are
kept, so regularity is exact. The shipped family is the 8-regular affine
construction on Z_n x Z_n whose eight maps come in inverse pairs

    (x+y, y), (x-y, y), (x+y+1, y), (x-y-1, y),
    (x, y+x), (x, y-x), (x, y+x+1), (x, y-x-1)     (all mod n),

with second-eigenvalue bound 5*sqrt(2) ~ 7.071 independent of n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qhashlab import _kernels

MARGULIS_DEGREE = 8
MARGULIS_LAMBDA_BOUND = 5.0 * math.sqrt(2.0)

DEFAULT_DENSE_LIMIT = 4096
POWER_ITER_TOL = 1e-8
POWER_ITER_MAX = 100_000


@dataclass(frozen=True, eq=False)
class RotationGraph:
    """d-regular multigraph given by an explicit (V, d) neighbor table."""

    neighbors: np.ndarray

    def __post_init__(self):
        nbr = np.ascontiguousarray(self.neighbors, dtype=np.int64)
        if nbr.ndim != 2 or nbr.shape[0] < 1 or nbr.shape[1] < 1:
            raise ValueError("neighbor table must be a non-empty (V, d) array")
        if nbr.min() < 0 or nbr.max() >= nbr.shape[0]:
            raise ValueError("neighbor entries must be vertex indices")
        nbr.setflags(write=False)
        object.__setattr__(self, "neighbors", nbr)

    @property
    def vertex_count(self) -> int:
        return self.neighbors.shape[0]

    @property
    def degree(self) -> int:
        return self.neighbors.shape[1]

    def neighbor(self, v: int, label: int) -> int:
        return int(self.neighbors[v, label])

    def adjacency_matrix(self) -> np.ndarray:
        """Dense adjacency with multi-edge counts."""
        v = self.vertex_count
        a = np.zeros((v, v), dtype=np.float64)
        rows = np.repeat(np.arange(v), self.degree)
        np.add.at(a, (rows, self.neighbors.ravel()), 1.0)
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Adjacency-matrix product without materializing the matrix."""
        out = np.zeros_like(x)
        for i in range(self.degree):
            out += x[self.neighbors[:, i]]
        return out

    def edge_multiset_symmetric(self) -> bool:
        """Whether edge multiplicity u->v equals v->u for all pairs."""
        a = self.adjacency_matrix()
        return bool(np.array_equal(a, a.T))


@dataclass(frozen=True)
class WalkRecord:
    """A seeded walk: start vertex, edge labels, and the visited chain.

    visited[k] is the vertex reached after applying labels[k]; the start
    vertex itself is not part of `visited`, so len(visited) == len(labels).
    """

    start: int
    labels: tuple[int, ...]
    visited: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.visited):
            raise ValueError("labels and visited must have equal length")

    @property
    def length(self) -> int:
        return len(self.labels)

    def replay(self, graph: RotationGraph) -> tuple[int, ...]:
        """Regenerate the visited chain from (start, labels) on `graph`."""
        if self.length == 0:
            return ()
        path = _kernels.walk_path(
            graph.neighbors, self.start, np.asarray(self.labels, dtype=np.int64)
        )
        return tuple(int(v) for v in path)


@dataclass(frozen=True)
class GillmanParams:
    """Inputs of the expander Chernoff bound for walk sums.

    steps: walk length; deviation: allowed |sum - expectation|; gap:
    one minus the normalized second eigenvalue, in (0, 1]; n_q: initial
    distribution factor (1 for the uniform start); f_sup: sup norm of the
    summed function.
    """

    steps: int
    deviation: float
    gap: float
    n_q: float = 1.0
    f_sup: float = 1.0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be a positive integer")
        if self.deviation < 0:
            raise ValueError("deviation must be >= 0")
        if not 0.0 < self.gap <= 1.0:
            raise ValueError("gap must lie in (0, 1]")
        if self.n_q < 1.0:
            raise ValueError("n_q must be >= 1")
        if self.f_sup <= 0.0:
            raise ValueError("f_sup must be positive")


def margulis_graph(n: int) -> RotationGraph:
    """8-regular affine expander on Z_n x Z_n (vertex (x, y) at index x*n+y)."""
    if n < 2:
        raise ValueError(f"side length must be >= 2, got {n}")
    v = np.arange(n * n, dtype=np.int64)
    xs, ys = np.divmod(v, n)
    cols = [
        (xs + ys) % n * n + ys,
        (xs - ys) % n * n + ys,
        (xs + ys + 1) % n * n + ys,
        (xs - ys - 1) % n * n + ys,
        xs * n + (ys + xs) % n,
        xs * n + (ys - xs) % n,
        xs * n + (ys + xs + 1) % n,
        xs * n + (ys - xs - 1) % n,
    ]
    return RotationGraph(np.stack(cols, axis=1))


def spectral_lambda(
    graph: RotationGraph,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    tol: float = POWER_ITER_TOL,
    max_iter: int = POWER_ITER_MAX,
) -> float:
    """max(|lambda_2|, |lambda_V|) of the adjacency matrix.

    Dense symmetric eigendecomposition up to `dense_limit` vertices; beyond
    that, power iteration on the adjacency operator with the all-ones
    eigenvector (eigenvalue d, the largest) deflated out.
    """
    v = graph.vertex_count
    if v == 1:
        return 0.0
    if v <= dense_limit:
        ev = np.linalg.eigvalsh(graph.adjacency_matrix())[::-1]
        return float(max(abs(ev[1]), abs(ev[-1])))
    return _power_lambda(graph, tol, max_iter)


def _power_lambda(graph: RotationGraph, tol: float, max_iter: int) -> float:
    # B = A - (d/V) * ones: removes the top eigenpair of a regular graph.
    # ||B x_k|| -> max|lambda(B)| even when +lambda and -lambda coexist,
    # since only squared eigenvalues enter the norm ratio.
    d = graph.degree
    rng = np.random.default_rng(0xB5EC)
    x = rng.standard_normal(graph.vertex_count)
    x -= x.mean()
    x /= np.linalg.norm(x)
    prev = np.inf
    for _ in range(max_iter):
        y = graph.matvec(x) - d * x.mean()
        est = float(np.linalg.norm(y))
        if est == 0.0:
            return 0.0
        x = y / est
        x -= x.mean()  # re-deflate against float drift
        nx = np.linalg.norm(x)
        if nx == 0.0:
            return 0.0
        x /= nx
        if abs(est - prev) <= tol * max(1.0, est):
            return est
        prev = est
    raise RuntimeError(f"power iteration did not converge in {max_iter} steps")


def random_walk(graph: RotationGraph, t: int, seed: int) -> WalkRecord:
    """Uniform start vertex, then t uniform edge labels, from one seeded stream."""
    if t < 0:
        raise ValueError(f"walk length must be >= 0, got {t}")
    rng = np.random.default_rng(seed)
    start = int(rng.integers(graph.vertex_count))
    labels = rng.integers(0, graph.degree, size=t, dtype=np.int64)
    return walk_from_labels(graph, start, tuple(int(x) for x in labels))


def walk_from_labels(graph: RotationGraph, start: int, labels: tuple[int, ...]) -> WalkRecord:
    """Deterministic walk record from an explicit start and label sequence."""
    if not 0 <= start < graph.vertex_count:
        raise ValueError(f"start vertex {start} outside graph")
    if len(labels) == 0:
        return WalkRecord(start, (), ())
    visited = _kernels.walk_path(
        graph.neighbors, start, np.asarray(labels, dtype=np.int64)
    )
    return WalkRecord(start, tuple(int(x) for x in labels), tuple(int(v) for v in visited))


def gillman_bound(p: GillmanParams) -> float:
    """Chernoff-type tail bound 4*n_q*exp(-(dev/f_sup)^2 * gap / (20*steps)).

    An upper bound on Pr[|sum_k f(x_k) - steps*E f| >= dev] for a stationary
    walk; may exceed 1 (it is a bound, not a probability estimate).
    """
    expo = (p.deviation / p.f_sup) ** 2 * p.gap / (20.0 * p.steps)
    return 4.0 * p.n_q * math.exp(-expo)


def walk_randomness_bits(t: int, d: int, vertex_count: int) -> int:
    """Random bits to seed a walk: ceil(log2 V) + t * ceil(log2 d)."""
    if t < 0 or d < 1 or vertex_count < 1:
        raise ValueError("need t >= 0, d >= 1, V >= 1")
    return _ceil_log2(vertex_count) + t * _ceil_log2(d)


def _ceil_log2(x: int) -> int:
    return (int(x) - 1).bit_length()

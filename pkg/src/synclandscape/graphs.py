"""Weighted undirected graphs: generators, metrics and edge-list I/O.

Graphs are stored as dense symmetric ``float64`` weight matrices with a
zero diagonal. Every generator returns a :class:`WeightedGraph`, whose
constructor validates symmetry, sign and diagonal exactly.
"""

from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidParameterError, InvalidSizeError, ParseError
from .seeding import rng_from_seed

__all__ = [
    "WeightedGraph",
    "GraphMetrics",
    "from_edges",
    "gen_path",
    "gen_cycle",
    "gen_complete",
    "gen_wsg",
    "gen_bipartite_wsg",
    "gen_er",
    "metrics",
    "is_connected",
    "laplacian",
    "save_edge_list",
    "load_edge_list",
    "format_edge_list",
    "parse_edge_list",
]

MAX_DENSE_N = 4000


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Symmetric nonnegative weight matrix with zero diagonal.

    The matrix is copied on construction and made read-only, so a graph can
    be shared between workers without defensive copies.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidSizeError(f"weights must be square, got shape {w.shape}")
        n = w.shape[0]
        if n < 1:
            raise InvalidSizeError("graph needs at least one vertex")
        if n > MAX_DENSE_N:
            raise InvalidSizeError(f"n={n} exceeds the dense storage cap {MAX_DENSE_N}")
        if not np.all(np.isfinite(w)):
            raise InvalidParameterError("weights must be finite")
        if not np.array_equal(w, w.T):
            raise InvalidParameterError("weights must be exactly symmetric")
        if np.any(np.diag(w) != 0.0):
            raise InvalidParameterError("diagonal weights must be zero")
        if np.any(w < 0.0):
            raise InvalidParameterError("weights must be nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def edges(self) -> list[tuple[int, int, float]]:
        """Upper-triangle edges ``(i, j, w)`` with ``i < j``, row-major."""
        iu, ju = np.nonzero(np.triu(self.weights, 1))
        return [(int(i), int(j), float(self.weights[i, j])) for i, j in zip(iu, ju)]

    def num_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def is_binary(self) -> bool:
        w = self.weights
        return bool(np.all((w == 0.0) | (w == 1.0)))

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash(self.weights.tobytes())

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={self.num_edges()})"


@dataclass(frozen=True)
class GraphMetrics:
    min_degree: float
    degree_ratio: float
    connected: bool
    laplacian_lambda2: float


def from_edges(n: int, edges: Iterable[tuple]) -> WeightedGraph:
    """Build a graph from ``(i, j)`` or ``(i, j, w)`` tuples."""
    w = np.zeros((n, n))
    for e in edges:
        i, j = int(e[0]), int(e[1])
        val = float(e[2]) if len(e) > 2 else 1.0
        w[i, j] = w[j, i] = val
    return WeightedGraph(w)


def _check_wsg_k(n: int, k: int) -> None:
    if n < 3:
        raise InvalidSizeError(f"ring needs n >= 3, got {n}")
    if not 1 <= k <= (n - 1) // 2:
        raise InvalidParameterError(f"k must be in [1, {(n - 1) // 2}] for n={n}, got {k}")


def _circulant_ring(n: int, k: int) -> np.ndarray:
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    ring_dist = np.minimum(gap, n - gap)
    return ((ring_dist >= 1) & (ring_dist <= k)).astype(np.float64)


def gen_path(n: int) -> WeightedGraph:
    if n < 2:
        raise InvalidSizeError(f"path needs n >= 2, got {n}")
    w = np.zeros((n, n))
    i = np.arange(n - 1)
    w[i, i + 1] = w[i + 1, i] = 1.0
    return WeightedGraph(w)


def gen_cycle(n: int) -> WeightedGraph:
    if n < 3:
        raise InvalidSizeError(f"cycle needs n >= 3, got {n}")
    w = np.array(gen_path(n).weights)
    w[0, n - 1] = w[n - 1, 0] = 1.0
    return WeightedGraph(w)


def gen_complete(n: int) -> WeightedGraph:
    if n < 2:
        raise InvalidSizeError(f"complete graph needs n >= 2, got {n}")
    return WeightedGraph(np.ones((n, n)) - np.eye(n))


def gen_wsg(n: int, k: int) -> WeightedGraph:
    """Ring of ``n`` nodes, each linked to its ``k`` nearest neighbours per side."""
    _check_wsg_k(n, k)
    return WeightedGraph(_circulant_ring(n, k))


def gen_bipartite_wsg(n: int, k: int) -> WeightedGraph:
    """``2n`` vertices with the ring matrix ``A_k`` in both off-diagonal blocks."""
    _check_wsg_k(n, k)
    ak = _circulant_ring(n, k)
    w = np.zeros((2 * n, 2 * n))
    w[:n, n:] = ak
    w[n:, :n] = ak
    return WeightedGraph(w)


def gen_er(n: int, p: float, seed: int) -> WeightedGraph:
    """Erdős–Rényi G(n, p).

    One uniform draw per unordered pair, pairs enumerated ``i < j``
    row-major; the pair gets an edge iff its draw is ``< p``.
    """
    if n < 1:
        raise InvalidSizeError(f"n must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")
    rng = rng_from_seed(seed)
    iu, ju = np.triu_indices(n, 1)
    draws = rng.random(iu.size)
    w = np.zeros((n, n))
    w[iu, ju] = (draws < p).astype(np.float64)
    w[ju, iu] = w[iu, ju]
    return WeightedGraph(w)


def laplacian(g: WeightedGraph) -> np.ndarray:
    return np.diag(g.degrees()) - g.weights


def is_connected(g: WeightedGraph) -> bool:
    """Breadth-first search from vertex 0 over positive-weight edges."""
    n = g.n
    adj = g.weights > 0
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u] & ~seen):
            seen[v] = True
            queue.append(int(v))
    return bool(seen.all())


def metrics(g: WeightedGraph) -> GraphMetrics:
    """Degree statistics, connectivity and algebraic connectivity.

    A single vertex counts as connected with ``laplacian_lambda2 = 0`` and
    ``degree_ratio = 0``; both are undefined there and these are conventions.
    """
    n = g.n
    deg = g.degrees()
    min_degree = float(deg.min())
    if n == 1:
        return GraphMetrics(min_degree, 0.0, True, 0.0)
    eigs = np.linalg.eigvalsh(laplacian(g))
    lam2 = float(eigs[1])
    # eigvalsh returns ~1e-16 noise instead of exact zeros
    if abs(lam2) <= 1e-9 * n:
        lam2 = 0.0
    return GraphMetrics(
        min_degree=min_degree,
        degree_ratio=min_degree / (n - 1),
        connected=is_connected(g),
        laplacian_lambda2=lam2,
    )


# ---------------------------------------------------------------------------
# Edge-list text format
#
#   n <count>          (header; "n=<count>" is also accepted)
#   i j [w]            (0-indexed, whitespace separated, w defaults to 1)
#   # comment
# ---------------------------------------------------------------------------

_HEADER = re.compile(r"^n\s*(?:=|\s)\s*(\d+)$")


def format_edge_list(g: WeightedGraph) -> str:
    lines = [f"n {g.n}"]
    for i, j, w in g.edges():
        lines.append(f"{i} {j} {w!r}")
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> WeightedGraph:
    n = None
    w = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError(f"expected header 'n <count>', got {raw.strip()!r}", lineno)
            n = int(m.group(1))
            if n < 1:
                raise ParseError("vertex count must be positive", lineno)
            w = np.zeros((n, n))
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'i j [w]', got {raw.strip()!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            val = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"non-numeric field in {raw.strip()!r}", lineno) from None
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"vertex index out of range [0, {n})", lineno)
        if i == j:
            raise ParseError(f"self-loop on vertex {i}", lineno)
        if not np.isfinite(val) or val < 0:
            raise ParseError(f"weight must be finite and nonnegative, got {val}", lineno)
        if w[i, j] != 0.0 and w[i, j] != val:
            raise ParseError(
                f"edge ({i}, {j}) repeated with conflicting weight {val} != {w[i, j]}", lineno
            )
        w[i, j] = w[j, i] = val
    if n is None:
        raise ParseError("missing header 'n <count>'")
    return WeightedGraph(w)


def save_edge_list(g: WeightedGraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))


def load_edge_list(path: str | os.PathLike) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())

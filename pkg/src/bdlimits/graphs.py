"""Finite connected simple graphs and adjacency-patterned interaction matrices.

A Graph stores an undirected edge set over vertices 0..num_vertices-1 and is
immutable once built.  Interaction matrices are plain float ndarrays whose
off-diagonal entries may be nonzero only on edges; diagonals are free
(every vertex counts as adjacent to itself for interaction purposes, but
the adjacency matrix and vertex degrees count true edges only).
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DisconnectedGraphError,
    InvalidEdgeError,
    PatternViolationError,
)


class Graph:
    """Finite connected simple graph on vertices 0..num_vertices-1."""

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]]):
        if num_vertices < 1:
            raise InvalidEdgeError(f"num_vertices must be positive, got {num_vertices}")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidEdgeError(f"self-loop at vertex {u}")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise InvalidEdgeError(
                    f"edge ({u}, {v}) out of range for {num_vertices} vertices"
                )
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InvalidEdgeError(f"duplicate edge ({u}, {v})")
            seen.add(key)
        self.num_vertices = int(num_vertices)
        self.edges = frozenset(seen)
        self._check_connected()
        adj = np.zeros((self.num_vertices, self.num_vertices))
        for u, v in self.edges:
            adj[u, v] = 1.0
            adj[v, u] = 1.0
        adj.setflags(write=False)
        self._adjacency = adj
        self._neighbors = tuple(
            np.flatnonzero(adj[x]).astype(np.int64) for x in range(self.num_vertices)
        )

    def _check_connected(self) -> None:
        if self.num_vertices == 1:
            return
        reached = {0}
        queue = deque([0])
        nbrs: dict[int, list[int]] = {x: [] for x in range(self.num_vertices)}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if v not in reached:
                    reached.add(v)
                    queue.append(v)
        if len(reached) != self.num_vertices:
            missing = sorted(set(range(self.num_vertices)) - reached)
            raise DisconnectedGraphError(
                f"vertices {missing} are not reachable from vertex 0"
            )

    def adjacency_matrix(self) -> np.ndarray:
        """Symmetric 0/1 matrix with zero diagonal; entry (x,y)=1 iff {x,y} is an edge."""
        return self._adjacency

    def neighbors(self, x: int) -> np.ndarray:
        """Indices of vertices adjacent to x (x itself excluded)."""
        self._check_vertex(x)
        return self._neighbors[x]

    def degree(self, x: int) -> int:
        """Number of edges incident to x."""
        self._check_vertex(x)
        return int(self._adjacency[x].sum())

    @property
    def degrees(self) -> np.ndarray:
        return self._adjacency.sum(axis=1).astype(np.int64)

    def _check_vertex(self, x: int) -> None:
        if not (0 <= x < self.num_vertices):
            raise IndexError(f"vertex {x} out of range [0, {self.num_vertices})")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.num_vertices == other.num_vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.num_vertices, self.edges))

    def __repr__(self) -> str:
        return f"Graph(num_vertices={self.num_vertices}, edges={sorted(self.edges)})"


def build_graph(num_vertices: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Validate and build a connected simple graph."""
    return Graph(num_vertices, edges)


def incidence_matrix(g: Graph) -> np.ndarray:
    """Adjacency matrix of g: symmetric 0/1, zero diagonal.

    The diagonal stays zero even though every vertex is interaction-adjacent
    to itself; diagonal interaction weight is carried separately (see
    ``alpha_beta_matrix``).
    """
    return g.adjacency_matrix()


def validate_interaction(g: Graph, matrix) -> np.ndarray:
    """Check that a square matrix respects the adjacency pattern of g.

    Off-diagonal entries must vanish at non-adjacent pairs; diagonal entries
    are unrestricted.  Returns a read-only float copy.
    """
    m = np.array(matrix, dtype=float)
    n = g.num_vertices
    if m.shape != (n, n):
        raise DimensionMismatchError(
            f"matrix shape {m.shape} does not match {n} vertices"
        )
    adj = g.adjacency_matrix()
    allowed = adj + np.eye(n)
    bad = (m != 0.0) & (allowed == 0.0)
    if bad.any():
        x, y = np.argwhere(bad)[0]
        raise PatternViolationError(int(x), int(y), float(m[x, y]))
    m.setflags(write=False)
    return m


def degree(g: Graph, x: int) -> int:
    """Number of edges incident to vertex x."""
    return g.degree(x)


def alpha_beta_matrix(g: Graph, alpha: float, beta: float) -> np.ndarray:
    """The interaction matrix alpha*E + beta*adjacency(g)."""
    n = g.num_vertices
    m = alpha * np.eye(n) + beta * g.adjacency_matrix()
    m.setflags(write=False)
    return m


def path_graph(num_vertices: int) -> Graph:
    """Path 0-1-...-(k-1)."""
    return Graph(num_vertices, [(i, i + 1) for i in range(num_vertices - 1)])


def star_graph(num_leaves: int) -> Graph:
    """Star with center 0 and leaves 1..m."""
    return Graph(num_leaves + 1, [(0, i) for i in range(1, num_leaves + 1)])


def cycle_graph(num_vertices: int) -> Graph:
    """Cycle on k >= 3 vertices."""
    if num_vertices < 3:
        raise InvalidEdgeError("cycle needs at least 3 vertices")
    edges = [(i, (i + 1) % num_vertices) for i in range(num_vertices)]
    return Graph(num_vertices, edges)


def complete_graph(num_vertices: int) -> Graph:
    """Complete graph on k vertices."""
    edges = [
        (i, j) for i in range(num_vertices) for j in range(i + 1, num_vertices)
    ]
    return Graph(num_vertices, edges)


def single_vertex() -> Graph:
    return Graph(1, [])


def parse_graph_text(text: str) -> Graph:
    """Parse the plain graph format: 'n <num_vertices>' then 'e <u> <v>' lines.

    Blank lines and lines starting with '#' are ignored.
    """
    num_vertices = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n" and len(parts) == 2:
            if num_vertices is not None:
                raise InvalidEdgeError(f"line {lineno}: repeated 'n' line")
            num_vertices = int(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            if num_vertices is None:
                raise InvalidEdgeError(f"line {lineno}: 'e' before 'n'")
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise InvalidEdgeError(f"line {lineno}: unrecognized line {line!r}")
    if num_vertices is None:
        raise InvalidEdgeError("missing 'n <num_vertices>' line")
    return Graph(num_vertices, edges)


def load_graph(path) -> Graph:
    """Read a graph from a text file in the 'n/e' format."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def graph_to_text(g: Graph) -> str:
    lines = [f"n {g.num_vertices}"]
    lines += [f"e {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def edges_from_adjacency(adj: Sequence[Sequence[float]]) -> set[tuple[int, int]]:
    """Edge set read off an adjacency matrix (upper triangle, nonzero entries)."""
    a = np.asarray(adj)
    return {
        (int(i), int(j))
        for i, j in zip(*np.nonzero(np.triu(a, k=1)))
    }

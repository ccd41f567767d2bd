"""Immutable simple graphs stored as per-vertex adjacency bitsets."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .values import INF


def _bits(mask: int):
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Finite simple graph on vertices 0..n-1.

    ``adj[v]`` is an int whose bit ``u`` is set iff ``uv`` is an edge.
    Degrees and components are computed at construction; all-pairs
    distances are computed on first access and then cached.
    """

    __slots__ = ("n", "adj", "degrees", "components", "_dist", "_hash")

    def __init__(self, n: int, adj: Sequence[int]):
        if n < 1:
            raise ParameterError("a graph needs at least one vertex")
        if len(adj) != n:
            raise ParameterError(f"expected {n} adjacency rows, got {len(adj)}")
        full = (1 << n) - 1
        adj = tuple(int(a) for a in adj)
        for v, a in enumerate(adj):
            if a & ~full:
                raise ParameterError(f"vertex {v} has a neighbour outside 0..{n - 1}")
            if (a >> v) & 1:
                raise ParameterError(f"self-loop at vertex {v}")
            for u in _bits(a):
                if not (adj[u] >> v) & 1:
                    raise ParameterError(f"adjacency not symmetric at {v},{u}")
        self.n = n
        self.adj = adj
        self.degrees = tuple(a.bit_count() for a in adj)
        self.components = self._find_components()
        self._dist = None
        self._hash = hash((n, adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def from_matrix(cls, matrix) -> "Graph":
        m = np.asarray(matrix, dtype=bool)
        n = m.shape[0]
        adj = []
        for v in range(n):
            row = 0
            for u in np.flatnonzero(m[v]):
                row |= 1 << int(u)
            adj.append(row)
        return cls(n, adj)

    # basic queries

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return self._hash

    def __len__(self):
        return self.n

    @property
    def order(self) -> int:
        return self.n

    @property
    def size(self) -> int:
        return sum(self.degrees) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges():
            m[u, v] = m[v, u] = True
        return m

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def isolated_count(self) -> int:
        """d0(G): the number of isolated vertices."""
        return sum(1 for d in self.degrees if d == 0)

    def is_connected(self) -> bool:
        return len(self.components) == 1

    # derived graphs

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full & ~a & ~(1 << v) for v, a in enumerate(self.adj)])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which vertex v is renamed perm[v]."""
        if sorted(perm) != list(range(self.n)):
            raise ParameterError("relabel needs a permutation of 0..n-1")
        adj = [0] * self.n
        for v, a in enumerate(self.adj):
            row = 0
            for u in _bits(a):
                row |= 1 << perm[u]
            adj[perm[v]] = row
        return Graph(self.n, adj)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, with vertices renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            row = 0
            for u in _bits(self.adj[v]):
                if u in index:
                    row |= 1 << index[u]
            adj.append(row)
        return Graph(len(vertices), adj)

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        return Graph(self.n + other.n, list(self.adj) + [a << shift for a in other.adj])

    def add_isolated(self, count: int = 1) -> "Graph":
        return Graph(self.n + count, list(self.adj) + [0] * count)

    def remove_vertex(self, v: int) -> "Graph":
        return self.induced([u for u in range(self.n) if u != v])

    # connectivity and distances

    def _find_components(self) -> tuple[tuple[int, ...], ...]:
        seen = 0
        comps = []
        for s in range(self.n):
            if (seen >> s) & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(tuple(_bits(comp)))
        return tuple(comps)

    def bfs(self, source: int) -> list:
        """Distances from source; INF for unreachable vertices."""
        dist = [INF] * self.n
        dist[source] = 0
        reached = 1 << source
        frontier = reached
        d = 0
        while frontier:
            d += 1
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~reached
            reached |= frontier
            for v in _bits(frontier):
                dist[v] = d
        return dist

    @property
    def distances(self) -> tuple[tuple, ...]:
        if self._dist is None:
            self._dist = tuple(tuple(self.bfs(s)) for s in range(self.n))
        return self._dist

    def dist(self, u: int, v: int):
        return self.distances[u][v]

    def eccentricities(self) -> list:
        return [max(row) for row in self.distances]

    def radius(self):
        return min(self.eccentricities())

    def diameter(self):
        return max(self.eccentricities())

    def shortest_path(self, u: int, v: int) -> list[int]:
        """Lexicographically first shortest path from u to v (by vertex index)."""
        d = self.distances
        if d[u][v] is INF:
            raise ParameterError(f"no path between {u} and {v}")
        path = [u]
        cur = u
        while cur != v:
            for w in _bits(self.adj[cur]):
                if d[w][v] == d[cur][v] - 1:
                    cur = w
                    break
            path.append(cur)
        return path


@dataclass(frozen=True)
class MetricsReport:
    n: int
    edges: int
    degrees: tuple[int, ...]
    max_degree: int
    isolated: int
    distances: tuple[tuple, ...]
    eccentricities: tuple
    radius: object
    diameter: object
    centers: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    component_types: dict

    def to_json(self) -> dict:
        def enc(x):
            return "inf" if x is INF else x

        return {
            "n": self.n,
            "edges": self.edges,
            "degrees": list(self.degrees),
            "max_degree": self.max_degree,
            "d0": self.isolated,
            "eccentricities": [enc(e) for e in self.eccentricities],
            "radius": enc(self.radius),
            "diameter": enc(self.diameter),
            "centers": list(self.centers),
            "components": [list(c) for c in self.components],
            "component_types": dict(self.component_types),
        }


def metrics(g: Graph) -> MetricsReport:
    from .graphio import to_graph6

    ecc = tuple(g.eccentricities())
    rad = min(ecc)
    types = Counter()
    for comp in g.components:
        h = g.induced(list(comp))
        types[to_graph6(canonical_graph(h)) if h.n > 1 else to_graph6(h)] += 1
    return MetricsReport(
        n=g.n,
        edges=g.size,
        degrees=g.degrees,
        max_degree=g.max_degree,
        isolated=g.isolated_count,
        distances=g.distances,
        eccentricities=ecc,
        radius=rad,
        diameter=max(ecc),
        centers=tuple(v for v in range(g.n) if ecc[v] == rad),
        components=g.components,
        component_types=dict(sorted(types.items())),
    )


def canonical_graph(g: Graph) -> Graph:
    from .canon import canonical_labeling

    return g.relabel(canonical_labeling(g))


def twins(g: Graph) -> list[tuple[int, int]]:
    """Pairs (u, v), u < v, such that no third vertex is adjacent to exactly one of them."""
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            diff = (g.adj[u] ^ g.adj[v]) & ~((1 << u) | (1 << v))
            if not diff:
                out.append((u, v))
    return out


def is_twin_free(g: Graph) -> bool:
    return not twins(g)

"""Deterministic graph generators and seeded random sources."""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .graph import Graph

SEED_MAX = 2**64 - 1


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) keyed by an explicit 64-bit seed."""
    if seed is None:
        raise ParameterError("a seed is required for random families")
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ParameterError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(seed: int, *path: int) -> int:
    """Child seed for task ``path`` under ``seed``; independent of scheduling."""
    ss = np.random.SeedSequence([int(seed), *[int(p) for p in path]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _check_n(n, lo=1):
    if not isinstance(n, (int, np.integer)) or n < lo:
        raise ParameterError(f"order must be an integer >= {lo}, got {n!r}")
    return int(n)


def path(n: int) -> Graph:
    n = _check_n(n)
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    n = _check_n(n, 3)
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    n = _check_n(n)
    full = (1 << n) - 1
    return Graph(n, [full & ~(1 << v) for v in range(n)])


def empty(n: int) -> Graph:
    n = _check_n(n)
    return Graph(n, [0] * n)


def star(k: int) -> Graph:
    """K_{1,k}: center 0 joined to leaves 1..k."""
    k = _check_n(k, 0)
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    if not graphs:
        raise ParameterError("disjoint_union needs at least one graph")
    out = graphs[0]
    for g in graphs[1:]:
        out = out.disjoint_union(g)
    return out


def complement(g: Graph) -> Graph:
    return g.complement()


def gnp(n: int, p: float, seed: int) -> Graph:
    """G(n,p): one uniform draw per pair, pairs in lexicographic order."""
    n = _check_n(n)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"edge probability must lie in [0,1], got {p}")
    rng = make_rng(seed)
    draws = rng.random(n * (n - 1) // 2)
    adj = [0] * n
    idx = 0
    for u in range(n):
        for v in range(u + 1, n):
            if draws[idx] < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            idx += 1
    return Graph(n, adj)


def random_labeled_tree(n: int, seed: int) -> Graph:
    """Uniform labeled tree via a random Pruefer sequence."""
    n = _check_n(n)
    if n == 1:
        return Graph(1, [0])
    if n == 2:
        return Graph.from_edges(2, [(0, 1)])
    rng = make_rng(seed)
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [w for w in range(n) if degree[w] == 1]
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def multiple(g: Graph, m: int) -> Graph:
    """m disjoint copies of g."""
    if m < 1:
        raise ParameterError("need at least one copy")
    return disjoint_union(*([g] * m))


FAMILIES = (
    "path",
    "cycle",
    "complete",
    "empty",
    "star",
    "disjoint_union",
    "complement",
    "gnp",
    "random_labeled_tree",
)


def generate(family: str, params: dict | None = None, seed: int | None = None) -> Graph:
    """Dispatch by family name. ``params`` holds the family's arguments."""
    params = dict(params or {})
    if family == "path":
        return path(params["n"])
    if family == "cycle":
        return cycle(params["n"])
    if family == "complete":
        return complete(params["n"])
    if family == "empty":
        return empty(params["n"])
    if family == "star":
        return star(params["k"])
    if family == "disjoint_union":
        return disjoint_union(*params["graphs"])
    if family == "complement":
        return complement(params["graph"])
    if family == "gnp":
        return gnp(params["n"], params.get("p", 0.5), seed)
    if family == "random_labeled_tree":
        return random_labeled_tree(params["n"], seed)
    raise ParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")

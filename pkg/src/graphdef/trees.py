"""Tree utilities: separators, rooted canonical codes, asymmetric rooted trees."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, ResourceError
from .graph import Graph, _bits


def is_tree(g: Graph) -> bool:
    return g.is_connected() and g.size == g.n - 1


def _require_tree(g: Graph):
    if not is_tree(g):
        raise DomainError("input graph is not a tree")


def rooted_codes(g: Graph, root: int, parent: int = -1) -> tuple[dict[int, str], dict[int, int]]:
    """AHU codes of every subtree hanging below ``root`` (avoiding ``parent``), plus parent links.

    Works on any acyclic graph; iterative to keep deep paths safe.
    """
    order = []
    stack = [(root, parent)]
    par = {root: parent}
    while stack:
        v, p = stack.pop()
        order.append(v)
        for u in _bits(g.adj[v]):
            if u != p:
                par[u] = v
                stack.append((u, v))
    codes = {}
    for v in reversed(order):
        kids = sorted(codes[u] for u in _bits(g.adj[v]) if u != par[v])
        codes[v] = "(" + "".join(kids) + ")"
    return codes, par


def rooted_code(g: Graph, root: int, parent: int = -1) -> str:
    """AHU code of the subtree at ``root`` that avoids ``parent``."""
    return rooted_codes(g, root, parent)[0][root]


def centers(g: Graph) -> list[int]:
    ecc = g.eccentricities()
    r = min(ecc)
    return [v for v in range(g.n) if ecc[v] == r]


def tree_code(g: Graph) -> str:
    """Canonical code of an unrooted tree (minimum rooted code over its centres)."""
    _require_tree(g)
    return min(rooted_code(g, c) for c in centers(g))


def tree_separator(g: Graph) -> int:
    """Smallest vertex v such that every component of T - v has at most n//2 vertices."""
    _require_tree(g)
    n = g.n
    order, par = [], [-1] * n
    stack = [0]
    seen = 1
    while stack:
        v = stack.pop()
        order.append(v)
        for u in _bits(g.adj[v] & ~seen):
            seen |= 1 << u
            par[u] = v
            stack.append(u)
    size = [1] * n
    for v in reversed(order):
        if par[v] >= 0:
            size[par[v]] += size[v]
    for v in range(n):
        parts = [size[u] for u in _bits(g.adj[v]) if par[u] == v]
        parts.append(n - size[v])
        if max(parts) <= n // 2:
            return v
    raise AssertionError("every tree has a separator")


def branches(g: Graph, w: int) -> list[str]:
    """Rooted codes of the branches of T - w, each rooted at its neighbour of w."""
    return [rooted_code(g, u, w) for u in _bits(g.adj[w])]


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree on 0..m-1 given by a parent array; the root has parent -1."""

    parent: tuple[int, ...]

    def __post_init__(self):
        roots = [v for v, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise DomainError("a rooted tree needs exactly one root")
        g = self.to_graph()
        if not is_tree(g):
            raise DomainError("parent relation is not a tree")

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def height(self) -> int:
        depth = {}

        def d(v):
            if v not in depth:
                p = self.parent[v]
                depth[v] = 0 if p == -1 else d(p) + 1
            return depth[v]

        return max(d(v) for v in range(self.size))

    def to_graph(self) -> Graph:
        return Graph.from_edges(len(self.parent), [(v, p) for v, p in enumerate(self.parent) if p >= 0])

    def code(self) -> str:
        return rooted_code(self.to_graph(), self.root)

    @classmethod
    def from_code(cls, code: str) -> "RootedTree":
        parent = []
        stack = []
        for ch in code:
            if ch == "(":
                parent.append(stack[-1] if stack else -1)
                stack.append(len(parent) - 1)
            elif ch == ")":
                stack.pop()
            else:
                raise ValueError(f"bad rooted-tree code character {ch!r}")
        return cls(tuple(parent))


@lru_cache(maxsize=None)
def _asym_codes(k: int) -> tuple[str, ...]:
    if k == 0:
        return ("()",)
    prev = _asym_codes(k - 1)
    out = []
    for mask in range(1 << len(prev)):
        kids = sorted(prev[i] for i in range(len(prev)) if (mask >> i) & 1)
        out.append("(" + "".join(kids) + ")")
    return tuple(sorted(out))


def enumerate_asym_rooted_trees(k: int, allow_large: bool = False) -> list[RootedTree]:
    """All asymmetric rooted trees of height <= k (one per rooted isomorphism type)."""
    if k < 0:
        raise ValueError("height bound must be non-negative")
    if k >= 5 or (k == 4 and not allow_large):
        raise ResourceError("asymmetric rooted trees are enumerated for k <= 3 (k = 4 behind allow_large)")
    return [RootedTree.from_code(c) for c in _asym_codes(k)]


def asym_rooted_codes(k: int) -> tuple[str, ...]:
    return _asym_codes(k)


def is_asymmetric_rooted_code(code: str) -> bool:
    """True iff no vertex of the rooted tree has two isomorphic child subtrees."""
    tree = RootedTree.from_code(code)
    g = tree.to_graph()
    for v in range(g.n):
        kids = [rooted_code(g, u, v) for u in _bits(g.adj[v]) if u != tree.parent[v]]
        if len(kids) != len(set(kids)):
            return False
    return True


def enumerate_trees(n: int) -> list[Graph]:
    """All unlabeled free trees of order n, one representative each (leaf augmentation)."""
    if n < 1:
        raise ValueError("order must be positive")
    if n > 12:
        raise ResourceError("free-tree enumeration is limited to n <= 12")
    level = {"()": Graph(1, [0])}
    for m in range(2, n + 1):
        nxt = {}
        for t in level.values():
            for v in range(t.n):
                adj = list(t.adj) + [1 << v]
                adj[v] |= 1 << (m - 1)
                g = Graph(m, adj)
                code = tree_code(g)
                if code not in nxt:
                    nxt[code] = g
        level = nxt
    return [level[c] for c in sorted(level)]


def tree_from_code(code: str) -> Graph:
    return RootedTree.from_code(code).to_graph()


def tree_from_parents(parents: Sequence[int]) -> Graph:
    return RootedTree(tuple(parents)).to_graph()

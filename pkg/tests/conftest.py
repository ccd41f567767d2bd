"""Shared hypothesis strategies and slow-but-obvious reference implementations."""

from __future__ import annotations

from itertools import permutations, product

from hypothesis import settings
from hypothesis import strategies as st

from graphdef.graph import Graph
from graphdef.logic import Adj, And, CountExists, Eq, Exists, Forall, Not, Or

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

VARS = ("x", "y", "z")


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def _atoms():
    v = st.sampled_from(VARS)
    return st.one_of(st.builds(Eq, v, v), st.builds(Adj, v, v))


def formulas(max_leaves=12, counting=True):
    v = st.sampled_from(VARS)

    def extend(children):
        options = [
            st.builds(Not, children),
            st.builds(lambda a, b: And(a, b), children, children),
            st.builds(lambda a, b: Or(a, b), children, children),
            st.builds(Exists, v, children),
            st.builds(Forall, v, children),
        ]
        if counting:
            options.append(st.builds(CountExists, st.integers(1, 3), v, children))
        return st.one_of(options)

    return st.recursive(_atoms(), extend, max_leaves=max_leaves)


def close(phi):
    """Existentially close the free variables so the result is a sentence."""
    for var in sorted(phi.free):
        phi = Exists(var, phi)
    return phi


# reference implementations


def naive_eval(g: Graph, f, env: dict) -> bool:
    """Direct recursive Tarski semantics, no compilation or sharing."""
    if isinstance(f, Eq):
        return env[f.x] == env[f.y]
    if isinstance(f, Adj):
        return g.has_edge(env[f.x], env[f.y])
    if isinstance(f, Not):
        return not naive_eval(g, f.sub, env)
    if isinstance(f, And):
        return all(naive_eval(g, s, env) for s in f.subs)
    if isinstance(f, Or):
        return any(naive_eval(g, s, env) for s in f.subs)
    if isinstance(f, Exists):
        return any(naive_eval(g, f.body, {**env, f.var: a}) for a in range(g.n))
    if isinstance(f, Forall):
        return all(naive_eval(g, f.body, {**env, f.var: a}) for a in range(g.n))
    if isinstance(f, CountExists):
        return sum(naive_eval(g, f.body, {**env, f.var: a}) for a in range(g.n)) >= f.m
    raise TypeError(f)


def brute_canonical(g: Graph) -> tuple:
    """Lexicographically least edge set over all relabelings."""
    best = None
    for perm in permutations(range(g.n)):
        code = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges()))
        if best is None or code < best:
            best = code
    return (g.n, best)


def brute_classes(n: int) -> int:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    seen = set()
    for bits in product((0, 1), repeat=len(pairs)):
        g = Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])
        seen.add(brute_canonical(g))
    return len(seen)


def floyd_warshall(g: Graph):
    inf = float("inf")
    d = [[0 if u == v else (1 if g.has_edge(u, v) else inf) for v in range(g.n)] for u in range(g.n)]
    for k in range(g.n):
        for i in range(g.n):
            for j in range(g.n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def _partial_iso(g, h, pairs) -> bool:
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[:i]:
            if (a == c) != (b == d) or g.has_edge(a, c) != h.has_edge(b, d):
                return False
    return True


def naive_spoiler_wins(g, h, r, pairs=(), pebbles=None) -> bool:
    """Spoiler wins the r-round game from ``pairs`` (plain game, or k pebbles when given)."""
    if not _partial_iso(g, h, list(pairs)):
        return True
    if r == 0:
        return False
    if pebbles is not None and len(pairs) == pebbles:
        options = [pairs[:i] + pairs[i + 1:] for i in range(len(pairs))]
    else:
        options = [pairs]
    for base in options:
        for a in range(g.n):
            if all(naive_spoiler_wins(g, h, r - 1, base + ((a, b),), pebbles) for b in range(h.n)):
                return True
        for b in range(h.n):
            if all(naive_spoiler_wins(g, h, r - 1, base + ((a, b),), pebbles) for a in range(g.n)):
                return True
    return False


def naive_depth(g, h, cap=8):
    for r in range(cap + 1):
        if naive_spoiler_wins(g, h, r):
            return r
    return None


def naive_color_refinement(g: Graph, h: Graph, rounds: int):
    """Joint 1-WL by dictionaries; returns per-round colour multisets of g and h."""
    cols = [0] * (g.n + h.n)
    out = []
    for _ in range(rounds + 1):
        out.append((sorted(cols[: g.n]), sorted(cols[g.n:])))
        sigs = []
        for i in range(g.n + h.n):
            graph, v, off = (g, i, 0) if i < g.n else (h, i - g.n, g.n)
            sigs.append((cols[i], tuple(sorted(cols[off + u] for u in graph.neighbors(v)))))
        ranks = {s: k for k, s in enumerate(sorted(set(sigs)))}
        cols = [ranks[s] for s in sigs]
    return out

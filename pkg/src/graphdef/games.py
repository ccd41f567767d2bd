"""Exact Ehrenfeucht game solvers.

A configuration is a tuple of pebbled pairs (g, h) sorted by g. It is alive
for Duplicator iff the pairs form a partial isomorphism. Duplicator's legal
replies to a Spoiler move are computed as a bitmask over the other graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canon import iso
from .errors import ParameterError, PreconditionError, ResourceError
from .graph import Graph, _bits
from .values import INF, to_json

DEFAULT_BUDGET = 5_000_000


@dataclass
class GameResult:
    value: object
    rounds_explored: int = 0
    configs_visited: int = 0
    exact: bool = True
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "value": to_json(self.value),
            "rounds_explored": self.rounds_explored,
            "configs_visited": self.configs_visited,
            "exact": self.exact,
        }
        out.update(self.extra)
        return out


def _require_noniso(g: Graph, h: Graph):
    if iso(g, h):
        raise PreconditionError("the graphs are isomorphic; game values are defined for non-isomorphic pairs")


def replies(adj_from, adj_to, n_to, pairs_from, pairs_to, used_to, a) -> int:
    """Bitmask of vertices b in the other graph such that adding (a, b) keeps a partial isomorphism.

    pairs_from/pairs_to are aligned vertex sequences; a must be unpebbled.
    """
    mask = ((1 << n_to) - 1) & ~used_to
    row = adj_from[a]
    for u, v in zip(pairs_from, pairs_to):
        if (row >> u) & 1:
            mask &= adj_to[v]
        else:
            mask &= ~adj_to[v]
        if not mask:
            break
    return mask


def is_partial_iso(g: Graph, h: Graph, pairs) -> bool:
    pairs = list(pairs)
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i + 1:]:
            if (a == c) != (b == d):
                return False
            if g.has_edge(a, c) != h.has_edge(b, d):
                return False
    return True


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count > self.limit:
            raise ResourceError(
                f"game search exceeded its budget of {self.limit} configurations; "
                "try the pebbled variant with a small pebble count"
            )


class _PlainSolver:
    """Rank recursion for Ehr_r with optional switch budget (alternation variant)."""

    def __init__(self, g: Graph, h: Graph, switches=None, budget=DEFAULT_BUDGET):
        self.g, self.h = g, h
        self.switches = switches
        self.budget = _Budget(budget)
        # memo[key] = (largest r known lost, smallest r known won)
        self.memo: dict = {}

    def wins(self, pairs: tuple, r: int, last=None, used=0) -> bool:
        key = (pairs, last, used) if self.switches is not None else pairs
        lost_upto, won_from = self.memo.get(key, (0, None))
        if won_from is not None and r >= won_from:
            return True
        if r <= lost_upto:
            return False
        self.budget.tick()
        result = self._search(pairs, r, last, used)
        lost_upto, won_from = self.memo.get(key, (0, None))
        if result:
            won_from = r if won_from is None else min(won_from, r)
        else:
            lost_upto = max(lost_upto, r)
        self.memo[key] = (lost_upto, won_from)
        return result

    def _moves(self, pairs, last, used):
        g, h = self.g, self.h
        gs = [p[0] for p in pairs]
        hs = [p[1] for p in pairs]
        gused = sum(1 << a for a in gs)
        hused = sum(1 << b for b in hs)
        out = []
        for side in (0, 1):
            cost = 0
            if self.switches is not None:
                cost = 1 if (last is not None and side != last) else 0
                if used + cost > self.switches:
                    continue
            if side == 0:
                for a in range(g.n):
                    if not (gused >> a) & 1:
                        rep = replies(g.adj, h.adj, h.n, gs, hs, hused, a)
                        out.append((side, a, rep, used + cost))
            else:
                for b in range(h.n):
                    if not (hused >> b) & 1:
                        rep = replies(h.adj, g.adj, g.n, hs, gs, gused, b)
                        out.append((side, b, rep, used + cost))
        return out

    def _search(self, pairs, r, last, used) -> bool:
        moves = self._moves(pairs, last, used)
        for side, x, rep, u2 in moves:
            if rep == 0:
                return True
        if r == 1:
            return False
        # cheapest-looking moves first: fewer replies
        moves.sort(key=lambda m: m[2].bit_count())
        for side, x, rep, u2 in moves:
            ok = True
            for y in _bits(rep):
                pair = (x, y) if side == 0 else (y, x)
                child = tuple(sorted(pairs + (pair,)))
                if not self.wins(child, r - 1, side, u2):
                    ok = False
                    break
            if ok:
                return True
        return False


def depth_result(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET, check: bool = True) -> GameResult:
    if check:
        _require_noniso(g, h)
    cap = min(g.n, h.n) + 1
    solver = _PlainSolver(g, h, budget=budget)
    for r in range(1, cap + 1):
        if solver.wins((), r):
            return GameResult(r, r, solver.budget.count)
    raise AssertionError("depth exceeded min(v(G),v(H))+1; inputs must be isomorphic")


def depth(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET) -> int:
    """D(G,H): least r such that Spoiler wins the r-round game without moving pebbles."""
    return depth_result(g, h, budget).value


def spoiler_wins(g: Graph, h: Graph, r: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether Spoiler wins the r-round game (no isomorphism precondition)."""
    if r == 0:
        return False
    return _PlainSolver(g, h, budget=budget).wins((), r)


def alt_depth_result(g: Graph, h: Graph, a, budget: int = DEFAULT_BUDGET) -> GameResult:
    if a is not INF and (not isinstance(a, int) or a < 0):
        raise ParameterError("switch budget must be a non-negative integer or INF")
    _require_noniso(g, h)
    if a is INF:
        res = depth_result(g, h, budget, check=False)
        return res
    cap = min(g.n, h.n) + 1
    solver = _PlainSolver(g, h, switches=a, budget=budget)
    for r in range(1, cap + 1):
        if solver.wins((), r, None, 0):
            return GameResult(r, r, solver.budget.count)
    raise AssertionError("alternation-bounded depth exceeded min(v(G),v(H))+1")


def alt_depth(g: Graph, h: Graph, a, budget: int = DEFAULT_BUDGET) -> int:
    """D_a(G,H): Spoiler may change graphs in at most a rounds (the first choice is free)."""
    return alt_depth_result(g, h, a, budget).value


# pebble game by retrograde analysis


def _enumerate_pi_states(g: Graph, h: Graph, k: int, budget: _Budget):
    """All partial isomorphisms with at most k pairs, as sorted tuples."""
    states = [()]
    index = {(): 0}
    frontier = [()]
    for _ in range(k):
        nxt = []
        for s in frontier:
            gs = [p[0] for p in s]
            hs = [p[1] for p in s]
            hused = sum(1 << b for b in hs)
            start = gs[-1] + 1 if gs else 0
            for a in range(start, g.n):
                rep = replies(g.adj, h.adj, h.n, gs, hs, hused, a)
                for b in _bits(rep):
                    t = s + ((a, b),)
                    index[t] = len(states)
                    states.append(t)
                    nxt.append(t)
                    budget.tick()
        frontier = nxt
    return states, index


def pebble_depth_result(g: Graph, h: Graph, k: int, budget: int = DEFAULT_BUDGET,
                        check: bool = True) -> GameResult:
    if not isinstance(k, int) or k < 1:
        raise ParameterError("pebble count must be a positive integer")
    if check:
        _require_noniso(g, h)
    bud = _Budget(budget)
    states, index = _enumerate_pi_states(g, h, k, bud)
    n_states = len(states)

    # M-nodes: (t, side, x) -> number of unresolved replies
    counters: dict[tuple[int, int, int], int] = {}
    f = [None] * n_states  # placement value for states with < k pairs
    val = [None] * n_states
    buckets: dict[int, list[int]] = {}

    for ti, t in enumerate(states):
        if len(t) >= k:
            continue
        gs = [p[0] for p in t]
        hs = [p[1] for p in t]
        gused = sum(1 << a for a in gs)
        hused = sum(1 << b for b in hs)
        immediate = False
        for a in range(g.n):
            if (gused >> a) & 1:
                continue
            cnt = replies(g.adj, h.adj, h.n, gs, hs, hused, a).bit_count()
            counters[(ti, 0, a)] = cnt
            immediate |= cnt == 0
        for b in range(h.n):
            if (hused >> b) & 1:
                continue
            cnt = replies(h.adj, g.adj, g.n, hs, gs, gused, b).bit_count()
            counters[(ti, 1, b)] = cnt
            immediate |= cnt == 0
        bud.tick()
        if immediate:
            f[ti] = 1
            buckets.setdefault(1, []).append(ti)

    def supersets(t):
        # states of size k that contain t (|t| = k - 1)
        gs = [p[0] for p in t]
        hs = [p[1] for p in t]
        hused = sum(1 << b for b in hs)
        gused = sum(1 << a for a in gs)
        for a in range(g.n):
            if (gused >> a) & 1:
                continue
            for b in _bits(replies(g.adj, h.adj, h.n, gs, hs, hused, a)):
                yield index[tuple(sorted(t + ((a, b),)))]

    level = 1
    rounds = 0
    while level in buckets:
        rounds = level
        queue = buckets.pop(level)
        for ti in queue:
            v = f[ti]
            resolved = [ti]
            if len(states[ti]) == k - 1:
                for si in supersets(states[ti]):
                    if val[si] is None:
                        val[si] = v
                        resolved.append(si)
            val[ti] = v
            for si in resolved:
                s = states[si]
                for p in s:
                    rest = tuple(q for q in s if q != p)
                    tj = index[rest]
                    for key in ((tj, 0, p[0]), (tj, 1, p[1])):
                        c = counters[key] - 1
                        counters[key] = c
                        if c == 0 and f[tj] is None:
                            f[tj] = v + 1
                            buckets.setdefault(v + 1, []).append(tj)
        level += 1
    value = f[0] if f[0] is not None else INF
    n = min(g.n, h.n)
    return GameResult(value, rounds, n_states, extra={"pebbles": k, "round_bound": n ** (k - 1) + k - 2})


def pebble_depth(g: Graph, h: Graph, k: int, budget: int = DEFAULT_BUDGET) -> object:
    """D^k(G,H): least r with a Spoiler win using k reusable pebbles, or INF."""
    return pebble_depth_result(g, h, k, budget).value


@dataclass(frozen=True)
class LowerBound:
    """Result of a width search that stopped at its pebble cap: the width is at least ``value``."""

    value: int

    def to_json(self):
        return {"at_least": self.value}


def width_result(g: Graph, h: Graph, max_pebbles: int | None = None,
                 budget: int = DEFAULT_BUDGET) -> GameResult:
    _require_noniso(g, h)
    cap = min(g.n, h.n) + 1
    limit = cap if max_pebbles is None else min(max_pebbles, cap)
    visited = 0
    for k in range(1, limit + 1):
        res = pebble_depth_result(g, h, k, budget, check=False)
        visited += res.configs_visited
        if res.value is not INF:
            return GameResult(k, res.value, visited, extra={"pebble_depth": to_json(res.value)})
    return GameResult(LowerBound(limit + 1), 0, visited, exact=False)


def width(g: Graph, h: Graph, max_pebbles: int | None = None, budget: int = DEFAULT_BUDGET):
    """W(G,H): least k with D^k(G,H) finite. Returns LowerBound if max_pebbles is reached."""
    return width_result(g, h, max_pebbles, budget).value

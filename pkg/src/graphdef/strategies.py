"""Named Spoiler strategies played against an exhaustive Duplicator.

A strategy is a small state machine: ``start`` builds the initial state from
the seeded configuration, ``move`` names Spoiler's next vertex, and
``update`` folds in Duplicator's reply. States are hashable so the driver can
memoise on (configuration, state, last side).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import GraphDefError, ParameterError, PreconditionError
from .games import is_partial_iso, replies
from .graph import Graph, _bits
from .sieve import is_weak_sieve, pattern
from .trees import is_tree, rooted_codes
from .values import is_finite

G_SIDE, H_SIDE = 0, 1


class StrategyError(GraphDefError):
    """The strategy met a configuration its case analysis does not cover."""


@dataclass
class PlayOutcome:
    won: bool
    rounds: int | None  # worst case over Duplicator's replies, counted from the seed
    switches: int | None  # worst-case number of graph changes (first choice free)
    cap: int
    lines: int = 0  # distinct (configuration, state) nodes explored
    failure: str | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"won_in": self.rounds} if self.won else {"survived": self.cap}
        out.update({"switches": self.switches, "nodes": self.lines})
        if self.failure:
            out["failure"] = self.failure
        out.update(self.extra)
        return out


def _dist(g: Graph, u: int, v: int):
    return g.dist(u, v)


def _mismatches(g: Graph, h: Graph, pairs):
    """Pebbled index pairs whose distances differ, keyed by the smaller distance."""
    out = []
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            dg = _dist(g, pairs[i][0], pairs[j][0])
            dh = _dist(h, pairs[i][1], pairs[j][1])
            if dg != dh:
                small = min(dg, dh)
                side = G_SIDE if dg == small else H_SIDE
                out.append((small, i, j, side))
    out.sort()
    return out


def halving_move(g: Graph, h: Graph, pairs):
    """Pebble the midpoint of a shortest path realising the smallest mismatched distance."""
    mism = _mismatches(g, h, pairs)
    if not mism:
        raise StrategyError("no pebbled pair has mismatched distances")
    d, i, j, side = mism[0]
    graph = g if side == G_SIDE else h
    a, b = pairs[i][side], pairs[j][side]
    path = graph.shortest_path(a, b)
    return side, path[(d + 1) // 2]


class Strategy:
    name = "strategy"

    def start(self, g: Graph, h: Graph, pairs):
        return None

    def move(self, g: Graph, h: Graph, pairs, state):
        raise NotImplementedError

    def update(self, g: Graph, h: Graph, pairs, state, side, vertex, reply):
        return state


class HalvingDistance(Strategy):
    """Repeatedly split the smallest distance mismatch in half."""

    name = "halving_distance"

    def start(self, g, h, pairs):
        if not _mismatches(g, h, pairs):
            raise PreconditionError("halving needs a pebbled pair with different distances")
        return None

    def move(self, g, h, pairs, state):
        return halving_move(g, h, pairs)


class WeakSieveStrategy(Strategy):
    """Pebble a weak sieve X of G, then finish by a short case analysis.

    After X all moves stay in one graph, so at most one switch is made.
    """

    name = "weak_sieve"

    def __init__(self, sieve):
        self.sieve = tuple(sieve)

    def start(self, g, h, pairs):
        if pairs:
            raise PreconditionError("the weak sieve strategy starts from the empty configuration")
        if not is_weak_sieve(g, self.sieve):
            raise PreconditionError("the supplied set is not a weak sieve of G")
        if not self.sieve:
            return self._analyse(g, h, ())
        return ("X", 0)

    def move(self, g, h, pairs, state):
        kind = state[0]
        if kind == "X":
            return G_SIDE, self.sieve[state[1]]
        if kind == "seq":  # fixed vertices in one graph
            return state[1], state[2][0]
        if kind == "sep":
            return self._separator(g, h, state)
        if kind in ("c", "d", "e", "f"):
            return state[1], state[2][0]
        raise StrategyError(f"unknown state {state!r}")

    def update(self, g, h, pairs, state, side, vertex, reply):
        kind = state[0]
        if kind == "X":
            i = state[1] + 1
            if i < len(self.sieve):
                return ("X", i)
            return self._analyse(g, h, pairs + ((vertex, reply) if side == G_SIDE else (reply, vertex),))
        if kind == "seq":
            rest = state[2][1:]
            if not rest:
                raise StrategyError("scripted moves exhausted without a win")
            return ("seq", state[1], rest)
        if kind == "d":
            # state: ("d", H, (w1, w2), ymap, z, done)
            _, s, todo, ymap, z, done = state
            done = done + ((todo[0], reply),)
            if len(todo) > 1:
                return ("d", s, todo[1:], ymap, z, done)
            for w, u in done:
                if u != z:
                    return ("sep", H_SIDE, u, w, ymap)
            raise StrategyError("both replies equal the sifted vertex")
        if kind == "c":
            _, s, todo, ymap = state
            return ("sep", G_SIDE, todo[0], reply, ymap)
        if kind == "e":
            _, s, todo, ymap = state
            return ("sep", H_SIDE, reply, todo[0], ymap)
        if kind == "f":
            _, s, todo, ymap, fmap = state
            z = todo[0]
            if reply != dict(fmap)[z]:
                return ("sep", G_SIDE, z, reply, ymap)
            if len(todo) > 1:
                return ("f", s, todo[1:], ymap, fmap)
            raise StrategyError("replies followed f on both vertices")
        if kind == "sep":
            raise StrategyError("separating move did not win")
        raise StrategyError(f"unknown state {state!r}")

    @staticmethod
    def _separator(g, h, state):
        _, side, a, b, ymap = state
        for y, y2 in ymap:
            if ((g.adj[a] >> y) & 1) != ((h.adj[b] >> y2) & 1):
                return (G_SIDE, y) if side == G_SIDE else (H_SIDE, y2)
        raise StrategyError("no separating vertex in the sifted set")

    def _analyse(self, g, h, pairs):
        xs = [a for a, _ in pairs]
        xh = [b for _, b in pairs]
        xset, xhset = set(xs), set(xh)
        # unique patterns on each side
        pg: dict[tuple, list[int]] = {}
        for v in range(g.n):
            if v not in xset:
                pg.setdefault(pattern(g, v, xs), []).append(v)
        ph: dict[tuple, list[int]] = {}
        for v in range(h.n):
            if v not in xhset:
                ph.setdefault(pattern(h, v, xh), []).append(v)
        for pat in sorted(pg):
            if len(pg[pat]) == 1 and len(ph.get(pat, ())) == 0:
                return ("seq", G_SIDE, (pg[pat][0],))
        for pat in sorted(ph):
            if len(ph[pat]) == 1 and len(pg.get(pat, ())) == 0:
                return ("seq", H_SIDE, (ph[pat][0],))
        for pat in sorted(pg):
            if len(pg[pat]) == 1 and len(ph[pat]) >= 2:
                return ("seq", H_SIDE, tuple(ph[pat][:2]))
        for pat in sorted(ph):
            if len(ph[pat]) == 1 and len(pg[pat]) >= 2:
                return ("seq", G_SIDE, tuple(pg[pat][:2]))
        # Y = S(X) corresponds bijectively to Y' = S(X')
        ymap = list(pairs)
        for pat in sorted(pg):
            if len(pg[pat]) == 1:
                ymap.append((pg[pat][0], ph[pat][0]))
        ymap.sort()
        for i in range(len(ymap)):
            for j in range(i + 1, len(ymap)):
                (a, b), (c, d) = ymap[i], ymap[j]
                if g.has_edge(a, c) != h.has_edge(b, d):
                    return ("seq", G_SIDE, tuple(v for v in (a, c) if v not in xset))
        ymap = tuple(ymap)
        yg = [a for a, _ in ymap]
        yh = [b for _, b in ymap]
        yset, yhset = set(yg), set(yh)
        zs = [v for v in range(g.n) if v not in yset]
        zh = [v for v in range(h.n) if v not in yhset]
        fmap = {}
        for z in zs:
            pz = pattern(g, z, yg)
            w = [v for v in zh if pattern(h, v, yh) == pz]
            if not w:
                return ("c", G_SIDE, (z,), ymap)
            if len(w) >= 2:
                return ("d", H_SIDE, tuple(w[:2]), ymap, z, ())
            fmap[z] = w[0]
        image = set(fmap.values())
        for v in zh:
            if v not in image:
                return ("e", H_SIDE, (v,), ymap)
        for i, z1 in enumerate(zs):
            for z2 in zs[i + 1:]:
                if g.has_edge(z1, z2) != h.has_edge(fmap[z1], fmap[z2]):
                    return ("f", G_SIDE, (z1, z2), ymap, tuple(sorted(fmap.items())))
        raise StrategyError("case analysis found no difference; graphs look isomorphic")


class TreeSeparatorStrategy(Strategy):
    """Tree strategy: halve distance mismatches, otherwise descend from a central vertex.

    With equal diameters Spoiler pebbles a central vertex c of G. If the reply
    has a different eccentricity, a farthest vertex exposes a distance
    mismatch. Otherwise both trees are rooted at the pebbled pair and Spoiler
    walks down a pair of non-isomorphic subtrees, at each step preferring
    (1) a child-count gap he can exhaust in at most two moves,
    (2) a child type missing on the other side,
    (3) one more copy of a type than the other side has.
    """

    name = "tree_separator"

    def __init__(self):
        self._codes = {}

    def _rooted(self, g, root):
        key = (id(g), root)
        if key not in self._codes:
            self._codes[key] = (g, rooted_codes(g, root))
        return self._codes[key][1]

    def start(self, g, h, pairs):
        if not (is_tree(g) and is_tree(h)):
            raise PreconditionError("the tree strategy needs two trees")
        if pairs:
            raise PreconditionError("the tree strategy starts from the empty configuration")
        dg, dh = g.diameter(), h.diameter()
        if dg != dh:
            big, graph = (G_SIDE, g) if dg > dh else (H_SIDE, h)
            a, b = _diametral_pair(graph)
            return ("seq", big, (a, b), "halve")
        ecc = g.eccentricities()
        c = min(range(g.n), key=lambda v: (ecc[v], v))
        return ("seq", G_SIDE, (c,), "centre")

    def move(self, g, h, pairs, state):
        kind = state[0]
        if kind == "halve":
            return halving_move(g, h, pairs)
        if kind == "seq":
            return state[1], state[2][0]
        if kind == "descend":
            return self._plan(g, h, state)[:2]
        if kind == "mult":
            return state[1], state[2][0]
        raise StrategyError(f"unknown state {state!r}")

    def update(self, g, h, pairs, state, side, vertex, reply):
        kind = state[0]
        pair = (vertex, reply) if side == G_SIDE else (reply, vertex)
        if kind == "halve":
            return state
        if kind == "seq":
            rest = state[2][1:]
            if rest:
                return ("seq", state[1], rest, state[3])
            if state[3] == "halve":
                return ("halve",)
            if state[3] == "centre":
                c, c2 = pair
                eg, eh = g.eccentricities()[c], h.eccentricities()[c2]
                if eg != eh:
                    sd, graph, v = (G_SIDE, g, c) if eg > eh else (H_SIDE, h, c2)
                    far = min(u for u in range(graph.n) if graph.dist(v, u) == max(eg, eh))
                    return ("seq", sd, (far,), "halve")
                return ("descend", c, c2, c, c2)
            if state[3] == "count":
                raise StrategyError("child-count gap did not win")
            raise StrategyError(f"unknown continuation {state[3]!r}")
        if kind == "descend":
            _, rg, rh, u, u2 = state
            plan = self._plan(g, h, state)
            if plan[2] == "count":
                rest = plan[3][1:]
                if not rest:
                    raise StrategyError("child-count gap did not win")
                return ("seq", side, rest, "count")
            if plan[2] == "missing":
                return ("descend", rg, rh, pair[0], pair[1])
            # multiplicity: pebble b+1 copies, then continue from a mismatched reply
            rest = plan[3][1:]
            return ("mult", side, rest, rg, rh, (pair,))
        if kind == "mult":
            _, s, todo, rg, rh, done = state
            done = done + (pair,)
            if todo[1:]:
                return ("mult", s, todo[1:], rg, rh, done)
            cg, _ = self._rooted(g, rg)
            ch, _ = self._rooted(h, rh)
            for a, b in done:
                if cg[a] != ch[b]:
                    return ("descend", rg, rh, a, b)
            raise StrategyError("all copies were matched by type")
        raise StrategyError(f"unknown state {state!r}")

    def _plan(self, g, h, state):
        """(side, vertex, rule, scripted vertices) for the current descent pair."""
        _, rg, rh, u, u2 = state
        cg, pg = self._rooted(g, rg)
        ch, ph = self._rooted(h, rh)
        if cg[u] == ch[u2]:
            raise StrategyError("descent reached isomorphic subtrees")
        kids_g = [v for v in _bits(g.adj[u]) if v != pg[u]]
        kids_h = [v for v in _bits(h.adj[u2]) if v != ph[u2]]
        if len(kids_g) != len(kids_h) and min(len(kids_g), len(kids_h)) <= 1:
            side, kids = (G_SIDE, kids_g) if len(kids_g) > len(kids_h) else (H_SIDE, kids_h)
            script = tuple(kids[: min(len(kids_g), len(kids_h)) + 1])
            return side, script[0], "count", script
        types_g: dict[str, list[int]] = {}
        for v in kids_g:
            types_g.setdefault(cg[v], []).append(v)
        types_h: dict[str, list[int]] = {}
        for v in kids_h:
            types_h.setdefault(ch[v], []).append(v)
        for t in sorted(types_g):
            if t not in types_h:
                return G_SIDE, types_g[t][0], "missing", (types_g[t][0],)
        for t in sorted(types_h):
            if t not in types_g:
                return H_SIDE, types_h[t][0], "missing", (types_h[t][0],)
        best = None
        for t in sorted(types_g):
            a, b = len(types_g[t]), len(types_h[t])
            if a != b:
                key = (min(a, b), t)
                if best is None or key < best[0]:
                    side, group = (G_SIDE, types_g[t]) if a > b else (H_SIDE, types_h[t])
                    best = (key, side, tuple(group[: min(a, b) + 1]))
        if best is None:
            raise StrategyError("children agree by type; subtrees should be isomorphic")
        _, side, script = best
        return side, script[0], "mult", script


def _diametral_pair(g: Graph) -> tuple[int, int]:
    d = g.diameter()
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if g.dist(a, b) == d:
                return a, b
    raise StrategyError("graph has no diametral pair")


STRATEGIES = ("halving_distance", "tree_separator", "weak_sieve")


def make_strategy(name: str, sieve=None) -> Strategy:
    if name == "halving_distance":
        return HalvingDistance()
    if name == "tree_separator":
        return TreeSeparatorStrategy()
    if name == "weak_sieve":
        if sieve is None:
            raise ParameterError("the weak sieve strategy needs a sieve")
        return WeakSieveStrategy(sieve)
    raise ParameterError(f"unknown strategy {name!r}")


def play(g: Graph, h: Graph, strategy, initial=(), cap: int | None = None,
         sieve=None) -> PlayOutcome:
    """Play a named Spoiler strategy against every Duplicator line.

    ``initial`` is a sequence of (g-vertex, h-vertex) seed pairs. Rounds and
    switches are worst cases over Duplicator's replies, counted after the seed.
    """
    if isinstance(strategy, str):
        strategy = make_strategy(strategy, sieve)
    initial = tuple(tuple(p) for p in initial)
    if not is_partial_iso(g, h, initial):
        return PlayOutcome(True, 0, 0, cap or 0)
    if cap is None:
        cap = g.n + h.n
    state0 = strategy.start(g, h, initial)
    memo: dict = {}

    def explore(pairs, state, last, depth):
        # returns (rounds, switches) from here, or None if Duplicator survives the cap
        key = (tuple(sorted(pairs)), state, last)
        if key in memo:
            res = memo[key]
            if res is None or res[0] <= cap - depth:
                return res
        if depth >= cap:
            return None
        side, x = strategy.move(g, h, pairs, state)
        gs = [p[0] for p in pairs]
        hs = [p[1] for p in pairs]
        if side == G_SIDE:
            if x in gs:
                raise StrategyError(f"strategy re-pebbled vertex {x} of G")
            rep = replies(g.adj, h.adj, h.n, gs, hs, sum(1 << b for b in hs), x)
        else:
            if x in hs:
                raise StrategyError(f"strategy re-pebbled vertex {x} of H")
            rep = replies(h.adj, g.adj, g.n, hs, gs, sum(1 << a for a in gs), x)
        cost = 1 if last is not None and last != side else 0
        worst_r, worst_s = 1, cost
        for y in _bits(rep):
            pair = (x, y) if side == G_SIDE else (y, x)
            nxt = strategy.update(g, h, pairs, state, side, x, y)
            sub = explore(pairs + (pair,), nxt, side, depth + 1)
            if sub is None:
                memo[key] = None
                return None
            worst_r = max(worst_r, 1 + sub[0])
            worst_s = max(worst_s, cost + sub[1])
        memo[key] = (worst_r, worst_s)
        return memo[key]

    try:
        res = explore(initial, state0, None, 0)
    except StrategyError as exc:
        return PlayOutcome(False, None, None, cap, len(memo), failure=str(exc))
    if res is None:
        return PlayOutcome(False, None, None, cap, len(memo))
    return PlayOutcome(True, res[0], res[1], cap, len(memo), extra={"strategy": strategy.name})


def halving_bound(d) -> int:
    """Extra moves allowed to the halving strategy from an initial smaller distance d."""
    if not is_finite(d) or d < 1:
        raise ParameterError("distance must be a positive integer")
    return math.ceil(math.log2(d)) if d > 1 else 0

"""Definability-level drivers: counting depth and width through WL,
identification maxima, sieves, extension property, two-switch witnesses,
Bernays-Schoenfinkel spectra and seeded random-graph experiments."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .canon import ENUMERATION_MAX, canonical_form, enumerate_graphs, iso
from .errors import ParameterError, PreconditionError, ResourceError
from .games import LowerBound, depth, width
from .generators import derive_seed, gnp, make_rng
from .graph import Graph, _bits, twins
from .graphio import to_graph6
from .logic import (
    Adj,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    bs_counts,
    compile_formula,
    conj,
    disj,
    prenex_prefix,
)
from .sieve import SieveReport, greedy_weak_sieve
from .values import INF, is_finite
from .wl import STANDARD, refine, vertex_colors

WL_K_CAP = 3
IDENTIFY_GAME_MAX = 6


def _require_noniso(g: Graph, h: Graph):
    if iso(g, h):
        raise PreconditionError("the graphs are isomorphic")


# counting logic through WL


def cd_pair(g: Graph, h: Graph, k: int):
    """cd^{k+1}(G,H) = 1 + least r at which the diagonal k-WL colourings differ."""
    if k < 1:
        raise ParameterError("k must be at least 1")
    _require_noniso(g, h)
    if g.n != h.n:
        return 1
    col = refine(g, h, k, STANDARD)
    for r in range(col.rounds + 1):
        if col.diag_aggregate(r, 0) != col.diag_aggregate(r, 1):
            return r + 1
    return INF


def wl_separates(g: Graph, h: Graph, k: int) -> bool:
    col = refine(g, h, k, STANDARD)
    return any(col.aggregate(r, 0) != col.aggregate(r, 1) for r in range(col.rounds + 1))


def cw_pair(g: Graph, h: Graph, max_k: int = WL_K_CAP):
    """cw(G,H) = 1 + least k whose standard k-WL separates; LowerBound past ``max_k``."""
    _require_noniso(g, h)
    if g.n != h.n:
        return 1
    for k in range(1, max_k + 1):
        if wl_separates(g, h, k):
            return k + 1
    return LowerBound(max_k + 2)


# identification over same-order graphs


@dataclass
class IdentificationReport:
    metric: str
    value: object
    witness: Graph | None
    compared: int

    def to_json(self) -> dict:
        v = self.value.to_json() if isinstance(self.value, LowerBound) else (
            "inf" if self.value is INF else self.value)
        return {
            "metric": self.metric,
            "value": v,
            "witness": to_graph6(self.witness) if self.witness is not None else None,
            "compared": self.compared,
        }


def _metric_key(v):
    if isinstance(v, LowerBound):
        return (1, v.value)
    if v is INF:
        return (2, 0)
    return (0, v)


def identification(g: Graph, metric: str = "depth", k: int | None = None) -> IdentificationReport:
    """Maximum of the pairwise metric over all same-order H not isomorphic to G."""
    if metric in ("depth", "width"):
        if g.n > IDENTIFY_GAME_MAX:
            raise ResourceError(f"game-based identification is limited to order {IDENTIFY_GAME_MAX}; sample instead")
    elif metric in ("cd", "cw"):
        if g.n > ENUMERATION_MAX:
            raise ResourceError(f"identification enumerates graphs up to order {ENUMERATION_MAX}; sample instead")
        if metric == "cd" and (k is None or k < 1):
            raise ParameterError("the cd metric needs k >= 1")
    else:
        raise ParameterError(f"unknown metric {metric!r}")
    code = canonical_form(g)
    best, witness, count = None, None, 0
    for h in enumerate_graphs(g.n):
        if canonical_form(h) == code:
            continue
        count += 1
        if metric == "depth":
            v = depth(g, h)
        elif metric == "width":
            v = width(g, h)
        elif metric == "cd":
            v = cd_pair(g, h, k)
        else:
            v = cw_pair(g, h)
        if best is None or _metric_key(v) > _metric_key(best):
            best, witness = v, h
    if best is None:
        best = 1 if metric in ("cd", "cw") else 0
    elif metric in ("cd", "cw") and is_finite(best):
        best = max(best, 1)
    return IdentificationReport(metric, best, witness, count)


# sieves and extension


def weak_sieve(g: Graph) -> SieveReport:
    return greedy_weak_sieve(g)


def extension_property(g: Graph, k: int) -> bool:
    """Every disjoint X, Y with |X u Y| <= k has a vertex outside both, adjacent to X only."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    n = g.n
    for s in range(0, min(k, n) + 1):
        for sub in combinations(range(n), s):
            smask = sum(1 << v for v in sub)
            seen = set()
            for z in range(n):
                if not (smask >> z) & 1:
                    seen.add(g.adj[z] & smask)
            if len(seen) < (1 << s):
                return False
    return True


@dataclass
class TwoSwitchWitness:
    graph: Graph
    quadruple: tuple[int, int, int, int]
    certified: bool

    def to_json(self) -> dict:
        return {"graph6": to_graph6(self.graph), "quadruple": list(self.quadruple), "certified": self.certified}


def _switch(g: Graph, w, x, y, z) -> Graph:
    adj = list(g.adj)
    for a, b in ((w, x), (y, z)):
        adj[a] &= ~(1 << b)
        adj[b] &= ~(1 << a)
    for a, b in ((x, y), (z, w)):
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    return Graph(g.n, adj)


def two_switch_witness(g: Graph, max_tries: int = 200) -> TwoSwitchWitness | None:
    """Swap wx, yz for xy, zw among equal-degree vertices, keeping 2-round colours.

    Quadruples are tried in lexicographic order; the first one whose result
    is certified non-isomorphic with identical round-2 vertex colours wins.
    """
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(g.degrees[v], []).append(v)
    tries = 0
    code = None
    for deg in sorted(groups):
        vs = groups[deg]
        if len(vs) < 4:
            continue
        for w, x in product(vs, repeat=2):
            if w == x or not g.has_edge(w, x):
                continue
            for y in vs:
                if y in (w, x) or g.has_edge(x, y):
                    continue
                for z in vs:
                    if z in (w, x, y) or not g.has_edge(y, z) or g.has_edge(z, w):
                        continue
                    h = _switch(g, w, x, y, z)
                    cg, ch = vertex_colors(g, h, 2)
                    if cg != ch:
                        continue
                    if code is None:
                        code = canonical_form(g)
                    tries += 1
                    if canonical_form(h) != code:
                        return TwoSwitchWitness(h, (w, x, y, z), True)
                    if tries >= max_tries:
                        return None
    return None


# Bernays-Schoenfinkel spectra


@dataclass
class SpectrumReport:
    sentence: str
    k: int
    l: int
    orders: dict[int, bool]
    witnesses: dict[int, str] = field(default_factory=dict)

    @property
    def spectrum(self) -> list[int]:
        return [n for n, ok in sorted(self.orders.items()) if ok]

    def to_json(self) -> dict:
        return {
            "sentence": self.sentence,
            "k": self.k,
            "l": self.l,
            "threshold_k_plus_l": self.k + self.l,
            "threshold_ramsey": (2 ** self.k) * (4 ** self.l),
            "orders": {str(n): ok for n, ok in sorted(self.orders.items())},
            "spectrum": self.spectrum,
            "witnesses": {str(n): w for n, w in sorted(self.witnesses.items())},
        }


BS_ENUM_MAX = 5
BS_SEARCH_MAX = 8
BS_BUDGET = 2_000_000


def _bs_parts(phi: Formula):
    counts = bs_counts(phi)
    if counts is None or phi.free:
        raise PreconditionError("expected a Bernays-Schoenfinkel sentence (prenex, existentials before universals)")
    k, l = counts
    prefix, matrix = prenex_prefix(phi)
    xs = [q.var for q in prefix[:k]]
    universal = prefix[k] if l else matrix
    return k, l, xs, universal


def _set_partitions(m: int):
    """Restricted growth strings of length m: block index per position."""
    def go(i, current, blocks):
        if i == m:
            yield tuple(current)
            return
        for b in range(blocks + 1):
            current.append(b)
            yield from go(i + 1, current, max(blocks, b + 1))
            current.pop()
    yield from go(0, [], 0)


def _bs_search(phi: Formula, n: int, budget: int = BS_BUDGET):
    """A labelled model of order n, as an adjacency list, or None.

    Witnesses sit on vertices 0..b-1 by their equality pattern. The universal
    part is hereditary, so partial graphs that already fail are pruned; other
    vertices are added with non-decreasing adjacency patterns to the witnesses.
    """
    k, l, xs, universal = _bs_parts(phi)
    check = compile_formula(universal)
    ticks = [0]

    def ok(adj, m, env):
        ticks[0] += 1
        if ticks[0] > budget:
            raise ResourceError("Bernays-Schoenfinkel model search exceeded its budget")
        return check.on_adjacency(adj, m, env)

    for blocks in _set_partitions(k) if k else [()]:
        b = max(blocks) + 1 if blocks else 0
        if b > n:
            continue
        env = {x: blocks[i] for i, x in enumerate(xs)}
        base_pairs = list(combinations(range(b), 2))
        for bits in range(1 << len(base_pairs)):
            adj = [0] * b
            for i, (u, v) in enumerate(base_pairs):
                if (bits >> i) & 1:
                    adj[u] |= 1 << v
                    adj[v] |= 1 << u
            if b and not ok(adj, b, env):
                continue

            def extend(adj, m, last_pattern):
                if m == n:
                    return adj
                for mask in range(1 << m):
                    pat = mask & ((1 << b) - 1)
                    if m > b and pat < last_pattern:
                        continue
                    new = [a | (((mask >> u) & 1) << m) for u, a in enumerate(adj)] + [mask]
                    if not ok(new, m + 1, env):
                        continue
                    found = extend(new, m + 1, pat)
                    if found is not None:
                        return found
                return None

            if b == 0:
                found = extend([], 0, 0)
            else:
                found = extend(adj, b, 0)
            if found is not None:
                return found
    return None


def bs_model(phi: Formula, n: int) -> Graph | None:
    """Some graph of order n satisfying the sentence, or None."""
    _bs_parts(phi)
    if n < 1:
        raise ParameterError("order must be positive")
    if n <= BS_ENUM_MAX:
        check = compile_formula(phi)
        for g in enumerate_graphs(n):
            if check(g):
                return g
        return None
    if n > BS_SEARCH_MAX:
        raise ResourceError(f"spectrum membership is decided up to order {BS_SEARCH_MAX}")
    adj = _bs_search(phi, n)
    return None if adj is None else Graph(n, adj)


def bs_spectrum(phi: Formula, max_order: int) -> SpectrumReport:
    k, l, _, _ = _bs_parts(phi)
    orders, witnesses = {}, {}
    for n in range(1, max_order + 1):
        g = bs_model(phi, n)
        orders[n] = g is not None
        if g is not None:
            witnesses[n] = to_graph6(g)
    return SpectrumReport(str(phi), k, l, orders, witnesses)


def bs_satisfiable(phi: Formula) -> bool:
    """Finite satisfiability, deciding only orders 1..max(k, 1)."""
    k, _, _, _ = _bs_parts(phi)
    return any(bs_model(phi, n) is not None for n in range(1, max(k, 1) + 1))


def random_bs_sentence(seed: int, max_k: int = 3, max_l: int = 2, clauses: int | None = None) -> Formula:
    """Seeded random sentence E x1..xk A y1..yl (CNF matrix over ~ and =)."""
    rng = make_rng(seed)
    k = int(rng.integers(1, max_k + 1))
    l = int(rng.integers(0, max_l + 1))
    xs = [f"x{i + 1}" for i in range(k)]
    ys = [f"y{i + 1}" for i in range(l)]
    names = xs + ys
    if clauses is None:
        clauses = int(rng.integers(1, 4))
    atoms = [(a, b) for a, b in combinations(names, 2)]
    if not atoms:
        atoms = [(names[0], names[0])]
    cnf = []
    for _ in range(clauses):
        width_ = int(rng.integers(1, 4))
        lits = []
        for _ in range(width_):
            a, b = atoms[int(rng.integers(0, len(atoms)))]
            atom = Adj(a, b) if (a != b and rng.random() < 0.6) else Eq(a, b)
            lits.append(Not(atom) if rng.random() < 0.5 else atom)
        cnf.append(disj(list(dict.fromkeys(lits))))
    body = conj(list(dict.fromkeys(cnf)))
    for y in reversed(ys):
        body = Forall(y, body)
    for x in reversed(xs):
        body = Exists(x, body)
    return body


def bs_witnesses(g: Graph, phi: Formula):
    """All existential witness tuples under which the universal part holds."""
    k, l, xs, universal = _bs_parts(phi)
    check = compile_formula(universal)
    out = []
    for tup in product(range(g.n), repeat=k):
        if check(g, dict(zip(xs, tup))):
            out.append(tup)
    return out


def clone_twin(g: Graph, twin_class, m: int) -> Graph:
    """Add m vertices that are twins of every member of ``twin_class``."""
    cls = sorted(set(twin_class))
    if not cls:
        raise PreconditionError("twin class must be non-empty")
    if m < 0:
        raise ParameterError("clone count must be non-negative")
    pairs = set(twins(g))
    for a, b in combinations(cls, 2):
        if (a, b) not in pairs:
            raise PreconditionError(f"vertices {a} and {b} are not twins")
    clique = len(cls) > 1 and g.has_edge(cls[0], cls[1])
    if len(cls) > 1 and any(g.has_edge(a, b) != clique for a, b in combinations(cls, 2)):
        raise PreconditionError("twin class members must share one mutual adjacency")
    n = g.n
    base = g.adj[cls[0]] & ~sum(1 << v for v in cls)
    adj = list(g.adj) + [0] * m
    new = list(range(n, n + m))
    for c in new:
        nb = base
        if clique:
            nb |= sum(1 << v for v in cls) | sum(1 << v for v in new if v != c)
        adj[c] = nb
        for u in _bits(nb):
            adj[u] |= 1 << c
    return Graph(n + m, adj)


# sampling


def estimate_sentence_probability(phi: Formula, n: int, samples: int, seed: int, p: float = 0.5) -> float:
    if phi.free:
        raise ParameterError("expected a sentence")
    if samples < 1:
        raise ParameterError("need at least one sample")
    check = compile_formula(phi)
    hits = sum(1 for i in range(samples) if check(gnp(n, p, derive_seed(seed, i))))
    return hits / samples


def exact_sentence_probability(phi: Formula, n: int) -> float:
    """Pr over all 2^C(n,2) labelled graphs on n vertices (n <= 6)."""
    if n > 6:
        raise ResourceError("exact probabilities are enumerated only up to order 6")
    check = compile_formula(phi)
    pairs = list(combinations(range(n), 2))
    hits = 0
    for bits in range(1 << len(pairs)):
        g = Graph.from_edges(n, [e for i, e in enumerate(pairs) if (bits >> i) & 1])
        hits += check(g)
    return hits / (1 << len(pairs))


# isolated vertices and component counts


@dataclass
class ComponentBoundReport:
    d0: int
    components: list[dict]
    condition_holds: bool
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"d0": self.d0, "components": self.components,
                "condition_holds": self.condition_holds, "checks": self.checks}


def component_count_bound_check(g: Graph, verify: bool = True) -> ComponentBoundReport:
    """Test c_F(G) + v(F) <= d0(G) + 1 for each component type and verify consequences by games."""
    if g.size == 0:
        raise PreconditionError("the bound needs a graph with at least one edge")
    d0 = g.isolated_count
    types: dict[bytes, list] = {}
    for comp in g.components:
        sub = g.induced(list(comp))
        types.setdefault(canonical_form(sub), [sub, 0])[1] += 1
    comps = []
    holds = True
    for code in sorted(types):
        sub, count = types[code]
        ok = count + sub.n <= d0 + 1
        holds &= ok
        comps.append({"graph6": to_graph6(sub), "count": count, "order": sub.n, "ok": ok})
    checks: dict = {"lower_width": d0 + 1, "lower_depth": d0 + 2}
    if verify and g.n <= 7:
        plus = g.add_isolated(1)
        dv = depth(g, plus)
        checks["depth_vs_extra_isolated"] = dv
        checks["depth_lower_bound_ok"] = dv >= d0 + 2
        if g.n <= 5:
            wv = width(g, plus)
            checks["width_vs_extra_isolated"] = wv
            checks["width_lower_bound_ok"] = wv >= d0 + 1
        if holds:
            checks["depth_equals_bound"] = dv == d0 + 2
            if g.n <= 5:
                ident = identification(g, "depth")
                checks["same_order_depth_max"] = ident.value
                checks["same_order_depth_ok"] = ident.value <= d0 + 2
    else:
        checks["note"] = "game verification skipped above order 7"
    return ComponentBoundReport(d0, comps, holds, checks)


# tower and log-star


def tower(i: int) -> int:
    if i < 0:
        raise ParameterError("tower index must be non-negative")
    if i > 5:
        raise ResourceError("Tower(i) is tabulated for i <= 5")
    t = 1
    for _ in range(i):
        t = 2 ** t
    return t


def log_star(n: int) -> int:
    if n < 1:
        raise ParameterError("log* needs n >= 1")
    i = 0
    while tower(i) < n:
        i += 1
    return i


@dataclass
class TowerTable:
    values: list[int]

    @classmethod
    def build(cls, upto: int = 5) -> "TowerTable":
        return cls([tower(i) for i in range(upto + 1)])

    def to_json(self) -> dict:
        # 2^65536 has too many digits for a readable report
        return {"tower": [f"2^{v.bit_length() - 1}" if v > 2 ** 53 else v for v in self.values]}

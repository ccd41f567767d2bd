"""Constructors for concrete defining and distinguishing formulas."""

from __future__ import annotations

from itertools import product

from .errors import ParameterError, ResourceError
from .graph import Graph
from .logic import (
    Adj,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    conj,
    disj,
    distinct,
    exists,
    forall,
    iff,
    implies,
    relativize,
)

GENERIC_MAX = 16
HINTIKKA_MAX_N = 6
HINTIKKA_MAX_K = 4


def generic_defining(g: Graph) -> Formula:
    """There are n distinct vertices with G's adjacencies, and no n+1 distinct vertices."""
    n = g.n
    if n > GENERIC_MAX:
        raise ResourceError(f"generic defining sentence is emitted for n <= {GENERIC_MAX}")
    xs = [f"x{i + 1}" for i in range(n + 1)]
    parts = []
    d = distinct(xs[:n])
    if d is not None:
        parts.append(d)
    for i in range(n):
        for j in range(i + 1, n):
            a = Adj(xs[i], xs[j])
            parts.append(a if g.has_edge(i, j) else Not(a))
    body = conj(parts) if parts else Eq(xs[0], xs[0])
    return And(exists(xs[:n], body), forall(xs, Not(distinct(xs))))


def _delta1(x: str, y: str) -> Formula:
    return Or(Adj(x, y), Eq(x, y))


def delta(n: int, style: str = "naive", x: str = "x", y: str = "y") -> Formula:
    """Formula with free x, y saying dist(x, y) <= n.

    naive: chain of n-1 existential intermediate vertices.
    halving: split the distance in halves with a fresh variable per level.
    three_var: the halving form recycling the three names x, y, z.
    n = 0 gives x=y.
    """
    if n < 0:
        raise ParameterError("distance bound must be non-negative")
    if n == 0:
        return Eq(x, y)
    if n == 1:
        return _delta1(x, y)
    if style == "naive":
        zs = [f"z{i}" for i in range(1, n)]
        chain = [x] + zs + [y]
        return exists(zs, conj([_delta1(chain[i], chain[i + 1]) for i in range(n)]))
    if style == "halving":
        counter = [0]

        def rec(m, a, b):
            if m == 1:
                return _delta1(a, b)
            counter[0] += 1
            z = f"z{counter[0]}"
            return Exists(z, And(rec(m // 2, a, z), rec(m - m // 2, z, b)))

        return rec(n, x, y)
    if style == "three_var":
        third = next(v for v in ("z", "w", "u") if v not in (x, y))
        names = (x, y, third)

        def rec(m, a, b):
            if m == 1:
                return _delta1(a, b)
            t = next(v for v in names if v not in (a, b))
            return Exists(t, And(rec(m // 2, a, t), rec(m - m // 2, t, b)))

        return rec(n, x, y)
    raise ParameterError(f"unknown delta style {style!r}")


def path_sentence(n: int, style: str = "naive") -> Formula:
    """Diameter n-1, maximum degree <= 2 and minimum degree <= 1."""
    if n < 2:
        raise ParameterError("path sentence needs n >= 2")
    diam = And(
        forall(["x", "y"], delta(n - 1, style)),
        Not(forall(["x", "y"], delta(n - 2, style))),
    )
    ys3 = ["y1", "y2", "y3"]
    maxdeg = Forall("x", Not(exists(ys3, conj([Adj("x", v) for v in ys3] + [distinct(ys3)]))))
    ys2 = ["y1", "y2"]
    mindeg = Exists("x", Not(exists(ys2, conj([Adj("x", v) for v in ys2] + [distinct(ys2)]))))
    return And(diam, maxdeg, mindeg)


def _atomic_diagram(g: Graph, tup: tuple[int, ...], names: list[str]) -> Formula:
    parts = []
    for i in range(len(tup)):
        for j in range(i + 1, len(tup)):
            if tup[i] == tup[j]:
                parts.append(Eq(names[i], names[j]))
            else:
                parts.append(Not(Eq(names[i], names[j])))
                a = Adj(names[i], names[j])
                parts.append(a if g.has_edge(tup[i], tup[j]) else Not(a))
    if not parts:
        return Eq(names[0], names[0])
    return conj(parts)


def hintikka(g: Graph, k: int) -> Formula:
    """Depth-k sentence true exactly on graphs that agree with g on all depth-k sentences."""
    if k < 1:
        raise ParameterError("hintikka depth must be at least 1")
    if g.n > HINTIKKA_MAX_N or k > HINTIKKA_MAX_K:
        raise ResourceError(
            f"hintikka emission is limited to n <= {HINTIKKA_MAX_N} and k <= {HINTIKKA_MAX_K}"
        )
    names = [f"x{i + 1}" for i in range(k)]
    memo: dict[tuple[int, ...], Formula] = {}

    def phi(tup):
        if tup in memo:
            return memo[tup]
        s = len(tup)
        if s == k:
            out = _atomic_diagram(g, tup, names)
        else:
            kids = {}
            for a in range(g.n):
                f = phi(tup + (a,))
                kids[f.digest] = f
            ordered = [kids[d] for d in sorted(kids)]
            var = names[s]
            out = And(conj([Exists(var, f) for f in ordered]), Forall(var, disj(ordered)))
        memo[tup] = out
        return out

    return phi(())


def extension_sentence(k: int) -> Formula:
    """Depth-k sentence expressing the (k-1)-extension property."""
    if k < 2:
        raise ParameterError("extension sentence needs k >= 2")
    xs = [f"x{i + 1}" for i in range(k - 1)]
    clauses = []
    for sigma in product((1, 0), repeat=k - 1):
        pattern = [Adj("z", x) if s else Not(Adj("z", x)) for x, s in zip(xs, sigma)]
        witness = Exists("z", conj([Not(Eq("z", x)) for x in xs] + pattern))
        clash = [
            Not(Eq(xs[i], xs[j]))
            for i in range(k - 1)
            for j in range(i + 1, k - 1)
            if sigma[i] != sigma[j]
        ]
        clauses.append(implies(conj(clash), witness) if clash else witness)
    return forall(xs, conj(clauses))


def _fresh(base: str, used) -> str:
    if base not in used:
        return base
    i = 1
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


def padding_sentence(phi_g: Formula) -> Formula:
    """Sentence defining the padded graph G* from a sentence defining G."""
    if phi_g.free:
        raise ParameterError("padding needs a sentence (no free variables)")
    used = set(phi_g.variables)
    c = _fresh("c", used)
    used.add(c)
    x1, x2, y, z = (_fresh(b, {c}) for b in ("p", "q", "s", "t"))

    def outside(v):
        return Not(Adj(v, c))

    inclusion = Forall(x1, implies(outside(x1), Forall(y, implies(Adj(x1, y), Adj(y, c)))))
    separated = forall(
        [x1, x2],
        implies(
            And(outside(x1), outside(x2), Not(Eq(x1, x2))),
            Exists(y, Not(iff(Adj(x1, y), Adj(x2, y)))),
        ),
    )
    downward = Forall(
        x1,
        implies(
            outside(x1),
            Forall(
                y,
                implies(
                    Adj(y, x1),
                    Exists(
                        x2,
                        And(outside(x2), Forall(z, iff(Adj(x2, z), And(Adj(x1, z), Not(Eq(z, y)))))),
                    ),
                ),
            ),
        ),
    )
    return Exists(c, And(relativize(phi_g, c), inclusion, separated, downward))

"""Sifting by adjacency patterns and the greedy weak-sieve construction."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph


def pattern(g: Graph, v: int, xs) -> tuple[int, ...]:
    return tuple((g.adj[v] >> x) & 1 for x in xs)


def classes(g: Graph, xs) -> list[tuple[int, ...]]:
    """Partition of V - X into classes of vertices with equal neighbourhoods in X."""
    xs = tuple(xs)
    xset = set(xs)
    groups: dict[tuple, list[int]] = {}
    for v in range(g.n):
        if v not in xset:
            groups.setdefault(pattern(g, v, xs), []).append(v)
    return sorted(tuple(c) for c in groups.values())


def sifted(g: Graph, xs) -> tuple[int, ...]:
    """X together with every vertex identified uniquely by its adjacencies to X."""
    out = set(xs)
    for c in classes(g, xs):
        if len(c) == 1:
            out.add(c[0])
    return tuple(sorted(out))


def is_weak_sieve(g: Graph, xs) -> bool:
    return len(sifted(g, sifted(g, xs))) == g.n


def is_sieve(g: Graph, xs) -> bool:
    return len(sifted(g, xs)) == g.n


@dataclass
class SieveReport:
    chosen: tuple[int, ...]
    classes: list[tuple[int, ...]]
    sifted: tuple[int, ...]
    weak_sieve: bool
    class_counts: list[int] = field(default_factory=list)  # |C(X)| after each greedy step

    @property
    def size(self) -> int:
        return len(self.chosen)

    def to_json(self) -> dict:
        return {
            "chosen": list(self.chosen),
            "size": self.size,
            "classes": [list(c) for c in self.classes],
            "sifted": list(self.sifted),
            "weak_sieve": self.weak_sieve,
            "class_counts": self.class_counts,
        }


def greedy_weak_sieve(g: Graph) -> SieveReport:
    """Grow X while some vertex strictly increases the number of classes.

    Each step takes the vertex with the largest class count, then higher degree, then lower index.
    """
    xs: list[int] = []
    current = len(classes(g, xs))
    counts = [current]
    while True:
        best = None
        for u in range(g.n):
            if u in xs:
                continue
            c = len(classes(g, xs + [u]))
            if c > current:
                key = (-c, -g.degrees[u], u)
                if best is None or key < best[0]:
                    best = (key, u, c)
        if best is None:
            break
        xs.append(best[1])
        current = best[2]
        counts.append(current)
    chosen = tuple(sorted(xs))
    return SieveReport(
        chosen=chosen,
        classes=classes(g, chosen),
        sifted=sifted(g, chosen),
        weak_sieve=is_weak_sieve(g, chosen),
        class_counts=counts,
    )

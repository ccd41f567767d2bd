"""k-dimensional Weisfeiler-Lehman refinement, standard and count-free.

Pairwise runs colour V(G)^k and V(H)^k jointly. Each round's colours are
dense ranks of the lexicographically sorted (old colour, signature) rows,
so ids are canonical and comparable across the two graphs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ResourceError
from .graph import Graph
from .values import INF

STANDARD = "standard"
COUNT_FREE = "count_free"
MAX_TUPLES = 1 << 22


def _isotype_ids(g: Graph, k: int) -> np.ndarray:
    """Per-tuple isotype code: for each i<j, 0 equal, 1 adjacent, 2 otherwise."""
    n = g.n
    idx = np.indices((n,) * k).reshape(k, -1)
    mat = g.matrix()
    code = np.zeros(idx.shape[1], dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = idx[i], idx[j]
            part = np.where(a == b, 0, np.where(mat[a, b], 1, 2))
            code = code * 3 + part
    return code


def _rank_rows(rows: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(rows, axis=0, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


@dataclass
class Coloring:
    k: int
    version: str
    n_g: int
    n_h: int | None
    history: list  # colour arrays over the joint tuple space, one per round
    stable_round: int | None  # first R with partition(R) == partition(R-1), if reached
    stab_g: int | None  # Stab_k(G)

    @property
    def rounds(self) -> int:
        return len(self.history) - 1

    def colors(self, r: int) -> np.ndarray:
        if r < 0:
            raise ParameterError("round must be non-negative")
        if r >= len(self.history):
            if self.stable_round is None:
                raise ParameterError(f"round {r} was not computed (max_rounds reached)")
            return self.history[-1]
        return self.history[r]

    def side(self, r: int, which: int) -> np.ndarray:
        c = self.colors(r)
        split = self.n_g ** self.k
        return c[:split] if which == 0 else c[split:]

    def aggregate(self, r: int, which: int):
        """Multiset (standard) or set (count-free) of colours on one side."""
        vals = self.side(r, which).tolist()
        if self.version == COUNT_FREE:
            return frozenset(vals)
        return Counter(vals)

    def diag(self, r: int, which: int) -> np.ndarray:
        n = self.n_g if which == 0 else self.n_h
        step = sum(n ** i for i in range(self.k))
        return self.side(r, which)[:: step][:n] if n > 0 else np.zeros(0, dtype=np.int64)

    def diag_aggregate(self, r: int, which: int):
        vals = self.diag(r, which).tolist()
        if self.version == COUNT_FREE:
            return frozenset(vals)
        return Counter(vals)

    def class_counts(self, which: int | None = None) -> list[int]:
        out = []
        for r in range(len(self.history)):
            c = self.history[r] if which is None else self.side(r, which)
            out.append(int(len(np.unique(c))))
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "version": self.version,
            "rounds": self.rounds,
            "stable_round": self.stable_round,
            "stab_g": self.stab_g,
            "class_counts": self.class_counts(),
            "class_counts_g": self.class_counts(0),
            "class_counts_h": self.class_counts(1) if self.n_h is not None else None,
        }


def _signatures_k1(mat: np.ndarray, colors: np.ndarray) -> np.ndarray:
    ncol = int(colors.max()) + 1
    onehot = np.zeros((len(colors), ncol), dtype=np.int64)
    onehot[np.arange(len(colors)), colors] = 1
    counts = mat.astype(np.int64) @ onehot
    return np.column_stack([colors, counts])


def _signatures_k(parts: list[tuple[int, int]], colors: np.ndarray, k: int, count_free: bool) -> np.ndarray:
    """Rows (old colour, sorted signature padded with -1) for every tuple."""
    width = max(n for n, _ in parts)
    base = int(colors.max()) + 1
    rows = []
    for n, offset in parts:
        c = colors[offset:offset + n ** k].reshape((n,) * k)
        # combined[u..., w] = sum_i C(u^{i,w}) * base^(k-1-i)
        combined = np.zeros((n,) * (k + 1), dtype=np.int64)
        for i in range(k):
            # move axis i of c to the last position; w replaces coordinate i
            sub = np.moveaxis(c, i, -1)  # axes: coords except i (in order), then w
            sub = np.expand_dims(sub, axis=i)  # broadcast over the replaced coordinate
            combined = combined * base + sub
        sig = combined.reshape(n ** k, n)
        sig = np.sort(sig, axis=1)
        if count_free:
            dup = np.zeros_like(sig, dtype=bool)
            dup[:, 1:] = sig[:, 1:] == sig[:, :-1]
            sig = np.where(dup, -1, sig)
            sig = np.sort(sig, axis=1)
        if n < width:
            sig = np.hstack([np.full((n ** k, width - n), -1, dtype=np.int64), sig])
        rows.append(sig)
    sigs = np.vstack(rows)
    return np.column_stack([colors, sigs])


def refine(g: Graph, h: Graph | None = None, k: int = 1, version: str = STANDARD,
           max_rounds: int | None = None) -> Coloring:
    if version not in (STANDARD, COUNT_FREE):
        raise ParameterError(f"unknown WL version {version!r}")
    if k < 1 or (version == COUNT_FREE and k < 2):
        raise ParameterError("k must be >= 1 (>= 2 for the count-free version)")
    graphs = [g] if h is None else [g, h]
    total = sum(x.n ** k for x in graphs)
    if total > MAX_TUPLES or (k >= 4 and max(x.n for x in graphs) > 20):
        raise ResourceError(f"{k}-WL on these orders exceeds the tuple budget ({total} tuples)")
    parts = []
    offset = 0
    for x in graphs:
        parts.append((x.n, offset))
        offset += x.n ** k

    if k == 1:
        colors = np.zeros(total, dtype=np.int64)
        mat = np.zeros((total, total), dtype=bool)
        for x, (_, off) in zip(graphs, parts):
            mat[off:off + x.n, off:off + x.n] = x.matrix()
    else:
        iso_codes = np.concatenate([_isotype_ids(x, k) for x in graphs])
        colors = _rank_rows(iso_codes[:, None])

    history = [colors]
    split = g.n ** k
    stable = None
    stab_g = None
    r = 0
    while max_rounds is None or r < max_rounds:
        r += 1
        if k == 1:
            rows = _signatures_k1(mat, colors)
        else:
            rows = _signatures_k(parts, colors, k, version == COUNT_FREE)
        new = _rank_rows(rows)
        history.append(new)
        if stab_g is None and len(np.unique(new[:split])) == len(np.unique(colors[:split])):
            stab_g = r
        if len(np.unique(new)) == len(np.unique(colors)):
            stable = r
            break
        colors = new
    return Coloring(k, version, g.n, None if h is None else h.n, history, stable, stab_g)


@dataclass(frozen=True)
class Verdict:
    non_isomorphic: bool
    round: int

    def to_json(self) -> dict:
        return {"verdict": "non_isomorphic" if self.non_isomorphic else "declared_isomorphic",
                "round": self.round}


def verdict(g: Graph, h: Graph, k: int = 1, version: str = STANDARD) -> Verdict:
    """Apply the termination rules: stop on differing colour multisets, or at Stab_k(G)."""
    col = refine(g, h, k, version)
    r = 0
    while True:
        if col.aggregate(r, 0) != col.aggregate(r, 1):
            return Verdict(True, r)
        if col.stab_g is not None and r >= col.stab_g:
            return Verdict(False, r)
        r += 1


def verdict_at(col: Coloring, r: int) -> bool:
    """True if the r-round algorithm reports non-isomorphism (differing aggregates at some round <= r)."""
    for s in range(r + 1):
        if col.aggregate(s, 0) != col.aggregate(s, 1):
            return True
    return False


def separates(g: Graph, h: Graph, k: int = 1, version: str = STANDARD) -> bool:
    return verdict(g, h, k, version).non_isomorphic


def diag_compare(g: Graph, h: Graph, k: int, version: str, r: int, coloring: Coloring | None = None) -> bool:
    """True iff the diagonal colour multisets (sets for count-free) agree at round r."""
    col = coloring or refine(g, h, k, version)
    return col.diag_aggregate(r, 0) == col.diag_aggregate(r, 1)


def full_compare(col: Coloring, r: int) -> bool:
    return col.aggregate(r, 0) == col.aggregate(r, 1)


def stab(g: Graph, k: int = 1, version: str = STANDARD) -> int:
    return refine(g, None, k, version).stab_g


def discrete_rounds(g: Graph):
    """Least r after which 1-WL colours are all singletons, or INF."""
    col = refine(g, None, 1)
    for r in range(len(col.history)):
        if len(np.unique(col.history[r])) == g.n:
            return r
    return INF


def vertex_colors(g: Graph, h: Graph, r: int) -> tuple[list[int], list[int]]:
    """Joint 1-WL colours of the vertices of g and h after r rounds."""
    col = refine(g, h, 1, STANDARD, max_rounds=r)
    c = col.history[min(r, len(col.history) - 1)]
    return c[: g.n].tolist(), c[g.n:].tolist()

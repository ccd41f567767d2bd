"""Canonical forms, isomorphism tests and enumeration of small graphs.

Orders up to EXHAUSTIVE_MAX use the minimum upper-triangle bitstring over
all vertex permutations (vectorised with numpy). Larger orders use colour
refinement with individualisation and backtracking, branching on the
smallest non-singleton cell and keeping the lexicographically smallest leaf.
"""

from __future__ import annotations

import itertools
import threading
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ResourceError
from .graph import Graph, _bits

EXHAUSTIVE_MAX = 8
ENUMERATION_MAX = 7

_lock = threading.Lock()


@lru_cache(maxsize=None)
def _perm_tables(n: int):
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    pi, pj = [], []
    for j in range(1, n):
        for i in range(j):
            pi.append(i)
            pj.append(j)
    pi = np.array(pi, dtype=np.int64)
    pj = np.array(pj, dtype=np.int64)
    npairs = len(pi)
    weights = np.array([1 << (npairs - 1 - k) for k in range(npairs)], dtype=np.int32)
    flat = perms[:, pi] * n + perms[:, pj]
    return perms, flat, weights


def _exhaustive_values(matrices: np.ndarray) -> np.ndarray:
    """For a (B, n, n) stack return the (B, n!) array of bitstring values."""
    b, n, _ = matrices.shape
    perms, flat, weights = _perm_tables(n)
    if n < 2:
        return np.zeros((b, len(perms)), dtype=np.int64)
    bits = matrices.reshape(b, n * n)[:, flat]  # (B, n!, npairs)
    return (bits * weights).sum(axis=2, dtype=np.int64)


def _bits_to_bytes(n: int, value: int) -> bytes:
    npairs = n * (n - 1) // 2
    nbytes = (npairs + 7) // 8
    return n.to_bytes(4, "big") + value.to_bytes(nbytes, "big")


def _exhaustive(g: Graph):
    values = _exhaustive_values(g.matrix()[None, :, :])[0]
    best = int(values.argmin())
    perms = _perm_tables(g.n)[0]
    p = perms[best]  # p[new] = old
    labeling = [0] * g.n
    for new, old in enumerate(p):
        labeling[int(old)] = new
    return int(values[best]), labeling


# colour refinement with individualisation


def refine_colors(adj: Sequence[int], colors: Sequence[int]) -> list[int]:
    """Equitable refinement; colours are dense ranks that respect the old order."""
    n = len(adj)
    colors = list(colors)
    ncls = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in _bits(adj[v])))) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == ncls:
            return new
        colors, ncls = new, len(ranks)


def _dense(colors: Sequence) -> list[int]:
    ranks = {c: i for i, c in enumerate(sorted(set(colors)))}
    return [ranks[c] for c in colors]


def _twin_classes(adj: Sequence[int], cell: Sequence[int]) -> list[int]:
    """One representative per class of mutually twin vertices in ``cell``."""
    reps = []
    for v in cell:
        for r in reps:
            mask = ~((1 << v) | (1 << r))
            if adj[v] & mask == adj[r] & mask:
                break
        else:
            reps.append(v)
    return reps


def _leaf_code(adj: Sequence[int], order: Sequence[int]) -> int:
    n = len(adj)
    chars = []
    for j in range(1, n):
        row = adj[order[j]]
        for i in range(j):
            chars.append("1" if (row >> order[i]) & 1 else "0")
    return int("".join(chars), 2) if chars else 0


def ir_canonical(adj: Sequence[int], init_colors: Sequence | None = None):
    """Individualisation-refinement canonical labelling.

    Returns (code, colour sequence in canonical order, labeling) where
    labeling[old] = new.
    """
    n = len(adj)
    base = _dense(init_colors) if init_colors is not None else [0] * n
    best = [None, None]  # (code, colorseq), order

    def search(colors):
        colors = refine_colors(adj, colors)
        classes = {}
        for v, c in enumerate(colors):
            classes.setdefault(c, []).append(v)
        if len(classes) == n:
            order = sorted(range(n), key=lambda v: colors[v])
            key = (_leaf_code(adj, order), tuple(base[v] for v in order))
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, order
            return
        cell_color, cell = min(
            ((c, vs) for c, vs in classes.items() if len(vs) > 1), key=lambda t: (len(t[1]), t[0])
        )
        for v in _twin_classes(adj, cell):
            search(_dense([(c, 0 if u == v else 1) for u, c in enumerate(colors)]))

    search(base)
    (code, colorseq), order = best
    labeling = [0] * n
    for new, old in enumerate(order):
        labeling[old] = new
    return code, colorseq, labeling


def canonical_labeling(g: Graph) -> list[int]:
    """labeling[v] = position of v in the canonical relabelling."""
    if g.n <= EXHAUSTIVE_MAX:
        return _exhaustive(g)[1]
    return ir_canonical(g.adj)[2]


def canonical_form(g: Graph) -> bytes:
    """Byte code, equal for two graphs iff they are isomorphic."""
    if g.n <= EXHAUSTIVE_MAX:
        value = _exhaustive(g)[0]
    else:
        value = ir_canonical(g.adj)[0]
    return _bits_to_bytes(g.n, value)


def iso(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.size != h.size or sorted(g.degrees) != sorted(h.degrees):
        return False
    return canonical_form(g) == canonical_form(h)


def automorphism_count(g: Graph) -> int:
    """Exact |Aut(G)| by exhaustion (n <= EXHAUSTIVE_MAX)."""
    if g.n > EXHAUSTIVE_MAX:
        raise ResourceError(f"automorphism counting is exhaustive only up to n={EXHAUSTIVE_MAX}")
    values = _exhaustive_values(g.matrix()[None, :, :])[0]
    return int((values == values[0]).sum())  # permutation 0 is the identity


def is_asymmetric(g: Graph) -> bool:
    if g.n <= EXHAUSTIVE_MAX:
        return automorphism_count(g) == 1
    colors = refine_colors(g.adj, [0] * g.n)
    cells = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    for cell in cells.values():
        if len(cell) < 2:
            continue
        v = cell[0]
        ref = ir_canonical(g.adj, [1 if u == v else 0 for u in range(g.n)])[:2]
        for w in cell[1:]:
            if ir_canonical(g.adj, [1 if u == w else 0 for u in range(g.n)])[:2] == ref:
                return False
    return True


# enumeration

_enum_cache: dict[int, tuple[Graph, ...]] = {}


def _canonical_batch(mats: np.ndarray) -> list[tuple[int, np.ndarray]]:
    out = []
    perms = _perm_tables(mats.shape[1])[0]
    for start in range(0, len(mats), 64):
        vals = _exhaustive_values(mats[start:start + 64])
        idx = vals.argmin(axis=1)
        for row, k in zip(vals, idx):
            out.append((int(row[k]), perms[k]))
    return out


def enumerate_graphs(n: int) -> tuple[Graph, ...]:
    """One canonical representative per isomorphism class of order n, sorted by code."""
    if n < 1:
        raise ValueError("order must be positive")
    if n > ENUMERATION_MAX:
        raise ResourceError(
            f"exhaustive enumeration is limited to n <= {ENUMERATION_MAX}; "
            "sample random graphs instead"
        )
    with _lock:
        if n in _enum_cache:
            return _enum_cache[n]
    if n == 1:
        result = (Graph(1, [0]),)
    else:
        prev = enumerate_graphs(n - 1)
        mats = []
        for g in prev:
            base = np.zeros((n, n), dtype=bool)
            base[: n - 1, : n - 1] = g.matrix()
            for subset in range(1 << (n - 1)):
                m = base.copy()
                for u in _bits(subset):
                    m[n - 1, u] = m[u, n - 1] = True
                mats.append(m)
        mats = np.stack(mats)
        found = {}
        for mat, (value, p) in zip(mats, _canonical_batch(mats)):
            if value not in found:
                found[value] = Graph.from_matrix(mat[np.ix_(p, p)])
        result = tuple(found[v] for v in sorted(found))
    with _lock:
        _enum_cache[n] = result
    return result


def enumerate_graphs_upto(n: int) -> list[Graph]:
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_graphs(k))
    return out

"""graph6 and edge-list text formats."""

from __future__ import annotations

from .errors import ParseError
from .graph import Graph

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("order too large for graph6")


def to_graph6(g: Graph, header: bool = False) -> str:
    """Encode g; upper triangle in column order x(0,1) x(0,2) x(1,2) x(0,3) ..."""
    bits = []
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            bits.append((row >> i) & 1)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return (HEADER if header else "") + _encode_n(g.n) + "".join(chars)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    offset = 0
    if s.startswith(HEADER):
        s = s[len(HEADER):]
        offset = len(HEADER)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"invalid graph6 byte {ch!r}", offset + i)
    if not s:
        raise ParseError("empty graph6 string", offset)
    vals = [ord(c) - 63 for c in s]
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 4 and vals[1] < 63:
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    elif len(vals) >= 8:
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    else:
        raise ParseError("truncated graph6 order field", offset + len(s))
    if n < 1:
        raise ParseError("graph6 order must be at least 1", offset)
    need_bits = n * (n - 1) // 2
    need = (need_bits + 5) // 6
    body = vals[pos:]
    if len(body) != need:
        raise ParseError(
            f"graph6 body has {len(body)} bytes, expected {need} for n={n}",
            offset + pos + min(len(body), need),
        )
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    # padding bits must be zero
    for extra in range(k, need * 6):
        if (body[extra // 6] >> (5 - extra % 6)) & 1:
            raise ParseError("nonzero padding bit in graph6 body", offset + pos + extra // 6)
    return Graph(n, adj)


def to_edge_list(g: Graph) -> str:
    """One "u v" line per edge; a leading "# n <order>" comment keeps isolated vertices."""
    lines = [f"# n {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse edge-list text. Order is taken from a "# n" comment, ``n``, or max index + 1."""
    edges = []
    declared = None
    pos = 0
    for line in text.splitlines(keepends=True):
        body = line.strip()
        if body.startswith("#"):
            parts = body[1:].split()
            if len(parts) == 2 and parts[0] == "n" and parts[1].isdigit():
                declared = int(parts[1])
        elif body:
            parts = body.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ParseError(f"expected 'u v' pair, got {body!r}", pos)
            u, v = int(parts[0]), int(parts[1])
            if u == v:
                raise ParseError(f"self-loop {u} {v}", pos)
            edges.append((u, v))
        pos += len(line)
    order = n if n is not None else declared
    if order is None:
        order = 1 + max((max(e) for e in edges), default=0)
    if any(max(e) >= order for e in edges):
        raise ParseError("edge endpoint exceeds declared order", pos)
    return Graph.from_edges(order, edges)


def read_graph(text: str, fmt: str = "auto") -> Graph:
    if fmt == "graph6" or (fmt == "auto" and "\n" not in text.strip() and " " not in text.strip()
                           and not text.strip().startswith("#")):
        return from_graph6(text)
    return from_edge_list(text)


def convert(text: str, from_format: str, to_format: str) -> str:
    if from_format == "graph6":
        g = from_graph6(text)
    elif from_format == "edge-list":
        g = from_edge_list(text)
    else:
        raise ValueError(f"unknown format {from_format!r}")
    if to_format == "graph6":
        return to_graph6(g)
    if to_format == "edge-list":
        return to_edge_list(g)
    raise ValueError(f"unknown format {to_format!r}")

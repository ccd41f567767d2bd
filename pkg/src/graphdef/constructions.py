"""Graph families with short definitions: padding, unite-and-conquer, universal asymmetric trees."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .canon import canonical_form
from .errors import DomainError, ParameterError, PreconditionError, ResourceError
from .graph import Graph, _bits
from .graphio import from_graph6, to_graph6
from .trees import _require_tree, asym_rooted_codes, branches, RootedTree

PAD_MAX = 16


@dataclass
class ConstructionProvenance:
    family: str
    params: dict
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.params, "notes": self.notes}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def pad(g: Graph) -> Graph:
    """G plus one vertex v_X per subset X of V(G), adjacent exactly to X.

    v_X gets index n + mask(X), so subsets follow binary-counter order and v_{} is isolated.
    """
    n = g.n
    if n > PAD_MAX:
        raise ResourceError(f"padding is built for orders up to {PAD_MAX}")
    total = n + (1 << n)
    adj = list(g.adj) + [0] * (1 << n)
    for mask in range(1 << n):
        v = n + mask
        adj[v] = mask
        for u in _bits(mask):
            adj[u] |= 1 << v
    return Graph(total, adj)


def unite_conquer(members) -> Graph:
    """Complement of the disjoint union of pairwise non-isomorphic graphs."""
    members = list(members)
    if len(members) < 2:
        raise PreconditionError("need at least two graphs")
    codes = [canonical_form(m) for m in members]
    for i, j in combinations(range(len(codes)), 2):
        if codes[i] == codes[j]:
            raise PreconditionError(f"members {i} and {j} are isomorphic")
    union = members[0]
    for m in members[1:]:
        union = union.disjoint_union(m)
    return union.complement()


def universal_asymmetric_tree(k: int, allow_large: bool = False) -> Graph:
    """A centre joined to the roots of all asymmetric rooted trees of height at most k-1."""
    if k < 3:
        raise PreconditionError("the universal asymmetric tree is defined for k >= 3")
    if k > 4:
        raise ResourceError("k >= 5 is out of reach (one branch per asymmetric rooted tree of height 4)")
    if k == 4 and not allow_large:
        raise ResourceError("k = 4 must be requested explicitly (allow_large=True)")
    parent = [-1]
    for code in asym_rooted_codes(k - 1):
        sub = RootedTree.from_code(code)
        offset = len(parent)
        for v, p in enumerate(sub.parent):
            parent.append(0 if p == -1 else p + offset)
    return RootedTree(tuple(parent)).to_graph()


def is_diverging(t: Graph) -> bool:
    """Every vertex splits the tree into pairwise non-isomorphic rooted branches."""
    try:
        _require_tree(t)
    except DomainError as exc:
        raise PreconditionError(str(exc)) from None
    for w in range(t.n):
        codes = branches(t, w)
        if len(set(codes)) != len(codes):
            return False
    return True


FAMILIES = {
    "pad": ("graph6",),
    "unite_conquer": ("members",),
    "universal_asymmetric_tree": ("k",),
}


def construct(family: str, params: dict) -> tuple[Graph, ConstructionProvenance]:
    """Build a family member and a provenance record that rebuilds it."""
    if family == "pad":
        g = from_graph6(params["graph6"])
        out = pad(g)
        notes = {"apex_order": "binary counter over subsets", "first_apex": g.n, "empty_set_vertex": g.n}
    elif family == "unite_conquer":
        members = [from_graph6(s) for s in params["members"]]
        out = unite_conquer(members)
        notes = {"member_orders": [m.n for m in members]}
    elif family == "universal_asymmetric_tree":
        k = int(params["k"])
        out = universal_asymmetric_tree(k, bool(params.get("allow_large", False)))
        notes = {"branches": len(asym_rooted_codes(k - 1)), "centre": 0}
    else:
        raise ParameterError(f"unknown construction {family!r}")
    return out, ConstructionProvenance(family, dict(params), notes)


def rebuild(prov: ConstructionProvenance) -> Graph:
    return construct(prov.family, prov.params)[0]


def describe(g: Graph) -> dict:
    return {"graph6": to_graph6(g), "order": g.n, "size": g.size}

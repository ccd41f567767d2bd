from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphdef.canon import enumerate_graphs, iso
from graphdef.constructions import (
    ConstructionProvenance,
    construct,
    is_diverging,
    pad,
    rebuild,
    unite_conquer,
    universal_asymmetric_tree,
)
from graphdef.errors import ParameterError, PreconditionError, ResourceError
from graphdef.generators import complete, cycle, disjoint_union, empty, path, star
from graphdef.graphio import to_graph6
from graphdef.trees import enumerate_trees, is_tree

from conftest import graphs


def _is_asymmetric(g):
    """Backtracking search for a non-identity automorphism."""
    def extend(image, used):
        v = len(image)
        if v == g.n:
            return image == list(range(g.n))
        for w in range(g.n):
            if w in used or g.degrees[w] != g.degrees[v]:
                continue
            if all(g.has_edge(u, v) == g.has_edge(image[u], w) for u in range(v)):
                image.append(w)
                used.add(w)
                ok = extend(image, used)
                image.pop()
                used.discard(w)
                if not ok:
                    return False
        return True

    return extend([], set())


# padding

def test_pad_of_single_vertex():
    assert iso(pad(complete(1)), disjoint_union(complete(2), empty(1)))


@given(graphs(max_n=5))
def test_pad_order_and_apex_neighbourhoods(g):
    p = pad(g)
    assert p.n == g.n + 2 ** g.n
    for mask in range(2 ** g.n):
        v = g.n + mask
        assert [u for u in p.neighbors(v) if u < g.n] == [u for u in range(g.n) if mask >> u & 1]
        assert all(u < g.n for u in p.neighbors(v))
    for u, w in combinations(range(g.n), 2):
        assert p.has_edge(u, w) == g.has_edge(u, w)


def test_pad_respects_isomorphism():
    for a, b in combinations(enumerate_graphs(3), 2):
        assert not iso(pad(a), pad(b))
    assert iso(pad(path(3)), pad(path(3).relabel([1, 0, 2])))


def test_pad_limit():
    with pytest.raises(ResourceError):
        pad(empty(17))


# unite and conquer

def test_unite_conquer_of_k1_and_k2():
    g = unite_conquer([complete(1), complete(2)])
    assert iso(g, path(3)) and g.diameter() == 2


@pytest.mark.parametrize("count", [2, 3, 4])
def test_unite_conquer_complement_components(count):
    members = [m for m in enumerate_graphs(4) if m.is_connected()][:count]
    g = unite_conquer(members)
    assert g.n == sum(m.n for m in members)
    assert len(g.complement().components) == count
    # each member's vertices form a block joined completely to the others
    offset = 0
    for m in members:
        for u in range(m.n):
            for v in range(g.n):
                inside = offset <= v < offset + m.n
                if not inside:
                    assert g.has_edge(offset + u, v)
        offset += m.n


def test_unite_conquer_relabel_covariance():
    a, b = path(3), star(3)
    g1 = unite_conquer([a, b])
    g2 = unite_conquer([a.relabel([2, 0, 1]), b.relabel([3, 2, 1, 0])])
    g3 = unite_conquer([b, a])
    assert iso(g1, g2) and iso(g1, g3)


def test_unite_conquer_preconditions():
    with pytest.raises(PreconditionError):
        unite_conquer([path(3), path(3).relabel([2, 1, 0])])
    with pytest.raises(PreconditionError):
        unite_conquer([path(3)])


# universal asymmetric trees

def test_universal_asymmetric_tree_k3():
    t = universal_asymmetric_tree(3)
    assert t.n == 11 and is_tree(t)
    assert _is_asymmetric(t)
    assert is_diverging(t)


def test_universal_asymmetric_tree_limits():
    for k in (0, 1, 2):
        with pytest.raises(PreconditionError):
            universal_asymmetric_tree(k)
    with pytest.raises(ResourceError):
        universal_asymmetric_tree(4)
    with pytest.raises(ResourceError):
        universal_asymmetric_tree(5, allow_large=True)


def test_diverging_examples():
    assert not is_diverging(path(3))
    assert is_diverging(path(2)) and is_diverging(path(1))
    with pytest.raises(PreconditionError):
        is_diverging(cycle(4))


@pytest.mark.parametrize("n", range(1, 9))
def test_asymmetric_trees_are_diverging(n):
    for t in enumerate_trees(n):
        if _is_asymmetric(t):
            assert is_diverging(t)


# provenance

@pytest.mark.parametrize("family, params", [
    ("pad", {"graph6": to_graph6(path(3))}),
    ("unite_conquer", {"members": [to_graph6(complete(1)), to_graph6(complete(2))]}),
    ("universal_asymmetric_tree", {"k": 3}),
])
def test_construct_and_rebuild(family, params):
    g, prov = construct(family, params)
    assert rebuild(prov) == g
    again = ConstructionProvenance(**{k: v for k, v in __import__("json").loads(prov.dumps()).items()})
    assert rebuild(again) == g


def test_unknown_family():
    with pytest.raises(ParameterError):
        construct("moebius", {})


@given(st.integers(1, 4))
def test_pad_has_one_isolated_vertex(n):
    # only the apex over the empty subset stays isolated
    assert pad(empty(n)).isolated_count == 1


def test_universal_asymmetric_tree_shape():
    t = universal_asymmetric_tree(3)
    assert t.radius() == 3 and t.eccentricities().count(3) == 1
    assert sorted(len(c) for c in t.remove_vertex(0).components) == [1, 2, 3, 4]


@pytest.mark.parametrize("seed", range(50))
def test_unite_conquer_diameter_two_on_random_sets(seed):
    from graphdef.generators import make_rng

    rng = make_rng(seed)
    pool = [g for n in range(1, 7) for g in enumerate_graphs(n)]
    size = int(rng.integers(2, 6))
    members = [pool[int(i)] for i in rng.choice(len(pool), size=size, replace=False)]
    assert unite_conquer(members).diameter() == 2


def test_pair_depth_bounded_by_member_identification():
    from graphdef.analysis import identification
    from graphdef.games import depth

    pool = [path(4), star(3), cycle(4), path(3).add_isolated(1)]
    ident = max(identification(g, "depth").value for g in pool)
    sets = list(combinations(range(4), 2))
    for s1, s2 in combinations(sets, 2):
        a = unite_conquer([pool[i] for i in s1]).complement()
        b = unite_conquer([pool[i] for i in s2]).complement()
        assert depth(a, b) <= ident + 3


def test_conquer_iteration_filter():
    from graphdef.scenarios import conquer_iteration, conquer_pool

    assert conquer_pool(5) == []
    pool = conquer_pool(5, max_depth=3)
    assert pool and all(g.diameter() == 2 for g in pool)
    out = conquer_iteration(5, 3, seed=1, max_depth=3)
    assert len(out["samples"]) == 3
    assert all(s["diameter"] == 2 and s["order"] == 5 * (len(pool) // 2) for s in out["samples"])
    assert conquer_iteration(5, 3, seed=1, max_depth=3) == out

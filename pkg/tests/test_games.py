from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphdef.canon import enumerate_graphs, enumerate_graphs_upto, iso
from graphdef.emitters import hintikka
from graphdef.errors import ParameterError, PreconditionError, ResourceError
from graphdef.games import (
    LowerBound,
    alt_depth,
    depth,
    depth_result,
    is_partial_iso,
    pebble_depth,
    spoiler_wins,
    width,
)
from graphdef.generators import complete, cycle, disjoint_union, empty, multiple, path, star
from graphdef.logic import evaluate
from graphdef.values import INF

from conftest import close, formulas, graphs, naive_depth, naive_spoiler_wins

PAIRS4 = [(g, h) for g, h in combinations(enumerate_graphs_upto(4), 2)]


def test_depth_examples():
    assert depth(complete(2), empty(2)) == 2
    assert depth(cycle(6), disjoint_union(cycle(3), cycle(3))) == 3


@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 6) for m in range(n + 1, 6)])
def test_complete_graphs(n, m):
    assert depth(complete(n), complete(m)) == n + 1


def test_two_vs_three_copies_of_p4():
    g, h = multiple(path(4), 2), multiple(path(4), 3)
    assert not spoiler_wins(g, h, 2)
    assert depth(g, h) >= 3


def test_isomorphic_inputs_rejected():
    with pytest.raises(PreconditionError):
        depth(path(3), path(3).relabel([2, 1, 0]))


def test_budget_refusal():
    with pytest.raises(ResourceError):
        depth_result(cycle(7), path(7), budget=10)


def test_partial_isomorphism():
    assert is_partial_iso(path(3), complete(3), [(0, 0), (1, 1)])
    assert not is_partial_iso(path(3), complete(3), [(0, 0), (2, 1)])
    assert not is_partial_iso(path(3), complete(3), [(0, 0), (0, 1)])


def test_depth_matches_naive_recursion_on_small_pairs():
    for g, h in PAIRS4:
        if g.n <= 3 or h.n <= 3:
            assert depth(g, h) == naive_depth(g, h)


def test_pebble_examples():
    assert pebble_depth(path(8), star(3), 3) <= 4
    assert pebble_depth(complete(3), complete(4), 3) is INF
    assert pebble_depth(cycle(6), disjoint_union(cycle(3), cycle(3)), 3) is not INF
    with pytest.raises(ParameterError):
        pebble_depth(path(3), path(4), 0)


def test_pebble_depth_matches_naive_recursion():
    small = [(g, h) for g, h in PAIRS4 if g.n + h.n <= 6]
    for g, h in small:
        for k in (1, 2):
            v = pebble_depth(g, h, k)
            wins = [naive_spoiler_wins(g, h, r, (), k) for r in range(6)]
            expected = wins.index(True) if any(wins) else INF
            if expected is INF:
                assert v is INF or v > 5
            else:
                assert v == expected


def test_width_examples():
    assert width(cycle(6), disjoint_union(cycle(3), cycle(3))) == 3
    for n in range(1, 5):
        assert width(complete(n), complete(n + 1)) == n + 1
    assert width(complete(3), complete(4), max_pebbles=2) == LowerBound(3)


def test_alt_depth_examples():
    assert alt_depth(complete(2), empty(2), 0) == 2
    assert alt_depth(complete(2), empty(2), INF) == 2
    with pytest.raises(ParameterError):
        alt_depth(complete(2), empty(2), -1)


@pytest.mark.parametrize("idx", range(0, len(PAIRS4), 7))
def test_game_value_invariants_exhaustive(idx):
    for g, h in PAIRS4[idx: idx + 7]:
        d = depth(g, h)
        assert d <= min(g.n, h.n) + 1
        assert depth(h, g) == d
        assert depth(g.complement(), h.complement()) == d
        pebbles = [pebble_depth(g, h, k) for k in range(1, 6)]
        for a, b in zip(pebbles, pebbles[1:]):
            assert a is INF or (b is not INF and b <= a)
        assert min(p for p in pebbles if p is not INF) == d
        assert pebble_depth(h, g, 2) == pebbles[1]
        assert pebble_depth(g.complement(), h.complement(), 2) == pebbles[1]
        w = width(g, h)
        assert w == width(h, g) == width(g.complement(), h.complement())
        d0, d1 = alt_depth(g, h, 0), alt_depth(g, h, 1)
        assert d <= d1 <= d0
        assert alt_depth(g, h, max(d - 1, 0)) == d


@pytest.mark.parametrize("idx", range(0, len(PAIRS4), 17))
def test_oracle_triangle(idx):
    for g, h in PAIRS4[idx: idx + 17]:
        d = depth(g, h)
        for k in range(1, 4):
            assert (d > k) == evaluate(h, hintikka(g, k))


@given(formulas(max_leaves=8, counting=False), st.sampled_from(PAIRS4))
def test_shallow_sentences_cannot_separate_equivalent_graphs(phi, pair):
    g, h = pair
    sentence = close(phi)
    if sentence.depth < depth(g, h):
        assert evaluate(g, sentence) == evaluate(h, sentence)


@given(graphs(max_n=5), graphs(max_n=5))
def test_depth_symmetric_and_capped(g, h):
    if iso(g, h):
        return
    d = depth(g, h)
    assert d == depth(h, g) and 1 <= d <= min(g.n, h.n) + 1


def test_same_order_maximum_frozen():
    # realised maxima of D(G,H) over same-order pairs, n = 2..5
    best = {n: max(depth(g, h) for g, h in combinations(enumerate_graphs(n), 2)) for n in range(2, 6)}
    assert best == {2: 2, 3: 2, 4: 3, 5: 3}

from itertools import combinations

import pytest

from graphdef.analysis import weak_sieve
from graphdef.canon import enumerate_graphs
from graphdef.errors import ParameterError, PreconditionError
from graphdef.games import depth
from graphdef.generators import cycle, gnp, path
from graphdef.graph import is_twin_free
from graphdef.scenarios import asymmetric_test_tree, tree_samples
from graphdef.strategies import halving_bound, make_strategy, play
from graphdef.trees import enumerate_trees

from conftest import naive_spoiler_wins


def test_halving_bound():
    assert [halving_bound(d) for d in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    with pytest.raises(ParameterError):
        halving_bound(0)


def test_halving_on_path_endpoints_against_cycle():
    p, c = path(9), cycle(9)
    for b in range(2, 9):
        out = play(p, c, "halving_distance", [(0, 0), (8, b)])
        assert out.won and out.rounds <= 3


@pytest.mark.parametrize("n", [5, 6])
def test_halving_wins_are_real(n):
    # every claimed win is confirmed by plain recursion from the same seed
    p, c = path(n), cycle(n)
    for x2 in range(1, n):
        for y2 in range(1, n):
            seed = ((0, 0), (x2, y2))
            if p.has_edge(0, x2) != c.has_edge(0, y2) or p.dist(0, x2) == c.dist(0, y2):
                continue
            out = play(p, c, "halving_distance", seed)
            assert out.won and out.rounds <= halving_bound(min(p.dist(0, x2), c.dist(0, y2)))
            assert naive_spoiler_wins(p, c, out.rounds, seed)


def test_halving_needs_a_distance_gap():
    with pytest.raises(PreconditionError):
        play(path(5), cycle(5), "halving_distance", [(0, 0), (1, 1)])


def test_seed_that_is_not_partial_isomorphism_is_won_at_once():
    out = play(path(3), path(3), "halving_distance", [(0, 0), (1, 2)])
    assert out.won and out.rounds == 0


@pytest.mark.parametrize("n", range(2, 6))
def test_weak_sieve_strategy_exhaustive(n):
    gs = enumerate_graphs(n)
    for g in gs:
        if not is_twin_free(g):
            continue
        rep = weak_sieve(g)
        for h in gs:
            if h == g:
                continue
            out = play(g, h, "weak_sieve", sieve=rep.chosen)
            assert out.won and out.rounds <= rep.size + 3 and out.switches <= 1
            assert out.rounds >= depth(g, h)


def test_weak_sieve_strategy_on_random_graph():
    g = gnp(7, 0.5, 1)
    assert is_twin_free(g)
    rep = weak_sieve(g)
    h = gnp(7, 0.5, 2)
    out = play(g, h, "weak_sieve", sieve=rep.chosen)
    assert out.won and out.rounds <= rep.size + 3


def test_weak_sieve_strategy_requires_a_sieve():
    with pytest.raises(ParameterError):
        make_strategy("weak_sieve")
    with pytest.raises(PreconditionError):
        play(path(4), cycle(4), "weak_sieve", sieve=())


@pytest.mark.parametrize("n", range(2, 8))
def test_tree_strategy_on_small_trees(n):
    trees = enumerate_trees(n)
    for a, b in combinations(trees, 2):
        out = play(a, b, "tree_separator")
        assert out.won and out.rounds >= depth(a, b)


def test_tree_strategy_on_asymmetric_test_tree():
    t = asymmetric_test_tree()
    assert t.n == 14 and t.radius() == 6
    for s in tree_samples(5, 6, 6, 12, 16):
        out = play(t, s, "tree_separator")
        assert out.won and out.rounds <= t.radius() + 2


def test_unknown_strategy():
    with pytest.raises(ParameterError):
        play(path(3), path(4), "telepathy")

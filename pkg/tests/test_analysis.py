from itertools import combinations

import pytest
from hypothesis import given

from graphdef import analysis
from graphdef.analysis import (
    LowerBound,
    bs_model,
    bs_satisfiable,
    bs_spectrum,
    bs_witnesses,
    cd_pair,
    clone_twin,
    component_count_bound_check,
    cw_pair,
    estimate_sentence_probability,
    exact_sentence_probability,
    extension_property,
    identification,
    log_star,
    random_bs_sentence,
    tower,
    two_switch_witness,
    weak_sieve,
)
from graphdef.canon import enumerate_graphs, enumerate_graphs_upto, iso
from graphdef.emitters import generic_defining
from graphdef.errors import ParameterError, PreconditionError, ResourceError
from graphdef.games import depth, pebble_depth, width
from graphdef.generators import complete, cycle, disjoint_union, empty, gnp, path
from graphdef.graph import is_twin_free
from graphdef.logic import compile_formula, evaluate
from graphdef.parser import parse
from graphdef.sieve import classes, is_weak_sieve
from graphdef.trees import enumerate_trees
from graphdef.values import INF

from conftest import graphs

C6 = cycle(6)
TWO_C3 = disjoint_union(cycle(3), cycle(3))


# counting logic

@pytest.mark.parametrize("n", range(2, 6))
def test_cd_of_complete_graphs(n):
    for h in enumerate_graphs(n):
        if not iso(h, complete(n)):
            assert cd_pair(complete(n), h, 1) == 2


def test_cd_and_cw_examples():
    assert cd_pair(path(3), path(4), 1) == 1
    assert cd_pair(C6, TWO_C3, 1) is INF
    # two rounds only see degrees and pair types, which agree
    assert cd_pair(C6, TWO_C3, 2) == 3
    assert cw_pair(C6, TWO_C3) == 3
    assert cw_pair(path(3), path(5)) == 1
    with pytest.raises(PreconditionError):
        cd_pair(path(3), path(3), 1)


def test_cw_lower_bound_past_the_cap():
    assert cw_pair(C6, TWO_C3, max_k=1) == LowerBound(3)


def test_counting_metrics_bounded_by_game_values():
    for g, h in combinations(enumerate_graphs_upto(5), 2):
        if g.n != h.n:
            continue
        for k in (1, 2):
            cd = cd_pair(g, h, k)
            d = pebble_depth(g, h, k + 1)
            assert cd is INF and d is INF or cd is not INF and (d is INF or cd <= d)
    for g, h in combinations(enumerate_graphs(5), 2):
        assert cw_pair(g, h) <= width(g, h)


def test_trees_have_counting_width_at_most_two():
    trees = [t for n in range(1, 9) for t in enumerate_trees(n)]
    assert max(cw_pair(a, b, max_k=1) for a, b in combinations(trees, 2)) == 2


# identification

def test_identification_examples():
    rep = identification(complete(4), "depth")
    assert rep.value == 2 and rep.compared == 10
    assert identification(complete(5), "cw").value == 2
    assert identification(path(4), "cd", 1).value == 2


@pytest.mark.parametrize("n", range(1, 6))
def test_identification_depth_bound(n):
    for g in enumerate_graphs(n):
        assert identification(g, "depth").value <= (n + 3) // 2


def test_identification_limits():
    with pytest.raises(ResourceError):
        identification(path(7), "depth")
    with pytest.raises(ParameterError):
        identification(path(3), "cd")
    with pytest.raises(ParameterError):
        identification(path(3), "colour")


# sieves

def test_weak_sieve_of_p4():
    rep = weak_sieve(path(4))
    assert rep.chosen == (1,) and rep.weak_sieve


@pytest.mark.parametrize("n", range(1, 7))
def test_weak_sieve_size_bound_exhaustive(n):
    for g in enumerate_graphs(n):
        if is_twin_free(g):
            rep = weak_sieve(g)
            assert rep.weak_sieve and rep.size <= (n - 1) // 2


@given(graphs(max_n=8))
def test_greedy_sieve_grows_class_count(g):
    rep = weak_sieve(g)
    for i, c in enumerate(rep.class_counts):
        assert c >= i + 1
    assert rep.class_counts[-1] == len(classes(g, rep.chosen))
    assert rep.weak_sieve == is_weak_sieve(g, rep.chosen)


def test_weak_sieve_small_on_random_graphs():
    import math

    n = 64
    sizes = sorted(weak_sieve(gnp(n, 0.5, s)).size for s in range(15))
    median = sizes[len(sizes) // 2]
    assert median <= math.log2(n) - math.log2(math.log(n)) + 5


# extension property

def test_extension_examples():
    assert not extension_property(complete(3), 1)
    assert extension_property(cycle(5), 1)
    assert extension_property(path(3), 0)


def test_extension_frequency_on_random_graphs():
    hits = sum(extension_property(gnp(64, 0.5, s), 2) for s in range(20))
    assert hits >= 18


# two-switch witnesses

def test_two_switch_examples():
    assert two_switch_witness(complete(4)) is None
    g = gnp(64, 0.5, 20240611)
    w = two_switch_witness(g)
    assert w is not None and w.certified and not iso(g, w.graph)
    assert cd_pair(g, w.graph, 1) >= 4
    assert g.degrees == w.graph.degrees


# Bernays-Schoenfinkel spectra

def test_spectrum_examples():
    assert bs_spectrum(parse("Ex.Ay.y=x"), 5).spectrum == [1]
    assert bs_spectrum(parse("Ex.Ey.(!x=y & x~y)"), 7).spectrum == list(range(2, 8))
    rep = bs_spectrum(parse("Ex.Ay.(x=y | x~y)"), 4)
    assert rep.to_json()["threshold_k_plus_l"] == 2 and rep.spectrum == [1, 2, 3, 4]


def test_spectrum_requires_bs_form():
    with pytest.raises(PreconditionError):
        bs_spectrum(parse("Ax.Ey.x~y"), 3)
    with pytest.raises(ResourceError):
        bs_model(parse("Ex.Ay.x=y"), 9)


@pytest.mark.parametrize("i", range(12))
def test_search_agrees_with_enumeration(i):
    phi = random_bs_sentence(1000 + i)
    check = compile_formula(phi)
    for n in (6, 7):
        expected = any(check(g) for g in enumerate_graphs(n))
        found = bs_model(phi, n)
        assert (found is not None) == expected
        if found is not None:
            assert evaluate(found, phi)


@pytest.mark.parametrize("i", range(25))
def test_small_model_property(i):
    phi = random_bs_sentence(i)
    rep = bs_spectrum(phi, 8)
    if rep.spectrum:
        assert min(rep.spectrum) <= max(rep.k, 1)
    assert bs_satisfiable(phi) == bool(rep.spectrum)


def test_random_sentences_are_seeded():
    assert random_bs_sentence(5) is random_bs_sentence(5)
    assert len({str(random_bs_sentence(s)) for s in range(20)}) > 10


# twin cloning

def _k23():
    from graphdef.graph import Graph

    return Graph.from_edges(5, [(a, b) for a in (0, 1) for b in (2, 3, 4)])


def test_clone_of_square_is_k23():
    assert iso(clone_twin(cycle(4), [0, 2], 1), _k23())


@pytest.mark.parametrize("m", [0, 1, 3])
def test_clone_grows_order(m):
    assert clone_twin(complete(3), [0, 1], m).n == 3 + m
    assert iso(clone_twin(complete(3), [0, 1], m), complete(3 + m))


def test_clone_preconditions():
    with pytest.raises(PreconditionError):
        clone_twin(path(4), [0, 1], 1)
    with pytest.raises(PreconditionError):
        clone_twin(path(3), [], 1)


def test_cloning_preserves_bs_truth():
    found = 0
    for s in range(200):
        phi = random_bs_sentence(5000 + s)
        k, l, _, _ = analysis._bs_parts(phi)
        if l == 0:
            continue
        for g in enumerate_graphs_upto(5):
            wits = bs_witnesses(g, phi)
            if not wits:
                continue
            for cls in _twin_classes(g):
                if len(cls) >= l and any(not set(cls) & set(w) for w in wits):
                    assert evaluate(clone_twin(g, cls, 2), phi)
                    found += 1
                    break
            else:
                continue
            break
    assert found >= 20


def _twin_classes(g):
    groups = {}
    for v in range(g.n):
        groups.setdefault(("open", g.adj[v]), []).append(v)
        groups.setdefault(("closed", g.adj[v] | 1 << v), []).append(v)
    return [tuple(v) for v in groups.values() if len(v) >= 2]


# probabilities

def test_probability_examples():
    assert estimate_sentence_probability(parse("Ex.x=x"), 5, 20, seed=1) == 1.0
    assert exact_sentence_probability(generic_defining(path(3)), 3) == 3 / 8
    est = estimate_sentence_probability(generic_defining(path(3)), 3, 400, seed=7)
    assert abs(est - 3 / 8) < 0.1
    with pytest.raises(ResourceError):
        exact_sentence_probability(parse("Ex.x=x"), 7)


# component bound

def test_component_bound_examples():
    g = disjoint_union(complete(2), empty(3))
    rep = component_count_bound_check(g)
    assert rep.condition_holds and rep.d0 == 3
    assert depth(g, g.add_isolated(1)) == 5 == rep.d0 + 2
    assert not component_count_bound_check(complete(2), verify=False).condition_holds
    with pytest.raises(PreconditionError):
        component_count_bound_check(empty(3))


@pytest.mark.parametrize("n", range(2, 6))
def test_width_lower_bound_from_isolated_vertices(n):
    for g in enumerate_graphs(n):
        if g.size:
            assert width(g, g.add_isolated(1)) >= g.isolated_count + 1


# tower

def test_tower_and_log_star():
    assert [tower(i) for i in range(5)] == [1, 2, 4, 16, 65536]
    assert log_star(65536) == 4 and log_star(1) == 0 and log_star(17) == 4
    with pytest.raises(ResourceError):
        tower(6)

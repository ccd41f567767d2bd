import math
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphdef.analysis import extension_property
from graphdef.canon import enumerate_graphs, enumerate_graphs_upto, iso
from graphdef.constructions import pad
from graphdef.emitters import (
    delta,
    extension_sentence,
    generic_defining,
    hintikka,
    padding_sentence,
    path_sentence,
)
from graphdef.errors import ParameterError, ResourceError
from graphdef.generators import complete, cycle, empty, gnp, path
from graphdef.logic import evaluate, measure, to_text
from graphdef.parser import parse
from graphdef.values import is_finite

from conftest import graphs


def test_generic_defining_p2():
    phi = generic_defining(path(2))
    assert phi.depth == 3
    hits = [g for g in enumerate_graphs_upto(3) if evaluate(g, phi)]
    assert len(hits) == 1 and iso(hits[0], path(2))


def test_generic_defining_k1_matches_p1_sentence():
    p1 = parse("Ax.Ay.x=y")
    for g in enumerate_graphs_upto(3):
        assert evaluate(g, generic_defining(complete(1))) == evaluate(g, p1)


@pytest.mark.parametrize("n", range(1, 6))
def test_generic_defining_depth_and_exactness(n):
    gs = enumerate_graphs(n)
    for g in gs:
        phi = generic_defining(g)
        assert phi.depth == n + 1
    # exactness checked against every class of the same order and one order up
    for g in gs[:6]:
        phi = generic_defining(g)
        for h in gs:
            assert evaluate(h, phi) == (h == g)
        if n < 5:
            assert not any(evaluate(h, phi) for h in enumerate_graphs(n + 1))


def test_generic_defining_limit():
    with pytest.raises(ResourceError):
        generic_defining(empty(17))


@pytest.mark.parametrize("style", ["naive", "halving", "three_var"])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_delta_matches_bfs(style, seed):
    g = gnp(20, 0.2, seed)
    # the naive chain quantifies n-1 vertices at once, so keep it short
    for n in ((1, 2, 3) if style == "naive" else (1, 3, 8)):
        phi = delta(n, style)
        for u in range(0, 20, 3):
            for v in range(20):
                d = g.dist(u, v)
                assert evaluate(g, phi, {"x": u, "y": v}) == (is_finite(d) and d <= n)


@pytest.mark.parametrize("n", range(1, 17))
def test_halving_delta_depth(n):
    assert delta(n, "halving").depth == math.ceil(math.log2(n))
    assert delta(n, "three_var").depth == math.ceil(math.log2(n))


def test_delta_zero_is_equality():
    assert to_text(delta(0)) == "x=y"
    with pytest.raises(ParameterError):
        delta(-1)


def test_path_sentence_examples():
    phi = path_sentence(4)
    assert evaluate(path(4), phi)
    assert not evaluate(cycle(4), phi) and not evaluate(path(5), phi)
    p3 = path_sentence(3)
    assert evaluate(path(3), p3) and not evaluate(complete(3), p3)


@pytest.mark.parametrize("n", range(2, 9))
def test_path_sentence_with_halving_defines_the_path(n):
    phi = path_sentence(n, "halving")
    # the maximum-degree clause alone has depth 4, which meets the bound at n = 2
    assert phi.depth < math.log2(n) + 3 or (n == 2 and phi.depth == 4)
    if n <= 6:
        for g in enumerate_graphs_upto(n if n < 6 else 6):
            assert evaluate(g, phi) == iso(g, path(n))


def test_hintikka_depth_one_is_universal():
    for g in enumerate_graphs_upto(3):
        phi = hintikka(g, 1)
        assert all(evaluate(h, phi) for h in enumerate_graphs_upto(4))


def test_hintikka_separates_k2_from_two_points():
    assert not evaluate(empty(2), hintikka(complete(2), 2))


def test_hintikka_limits():
    with pytest.raises(ResourceError):
        hintikka(empty(7), 2)
    with pytest.raises(ParameterError):
        hintikka(empty(2), 0)


@given(graphs(max_n=4), st.data())
def test_hintikka_is_isomorphism_invariant(g, data):
    perm = data.draw(st.permutations(list(range(g.n))))
    k = data.draw(st.integers(1, 3))
    a, b = hintikka(g, k), hintikka(g.relabel(perm), k)
    for h in enumerate_graphs_upto(4):
        assert evaluate(h, a) == evaluate(h, b)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hintikka_formula_equality_matches_game_equivalence(k):
    from graphdef.games import depth

    gs = enumerate_graphs_upto(4)
    sents = [hintikka(g, k) for g in gs]
    for i, j in combinations(range(len(gs)), 2):
        same = all(evaluate(h, sents[i]) == evaluate(h, sents[j]) for h in gs)
        assert same == (depth(gs[i], gs[j]) > k)


def test_extension_sentence_examples():
    e2 = extension_sentence(2)
    assert not evaluate(complete(3), e2)
    assert evaluate(cycle(5), e2)


@pytest.mark.parametrize("k", [2, 3])
def test_extension_sentence_matches_direct_checker(k):
    phi = extension_sentence(k)
    assert phi.depth == k
    for g in enumerate_graphs_upto(5):
        assert evaluate(g, phi) == extension_property(g, k - 1)


def test_padding_sentence_p1():
    phi_g = generic_defining(complete(1))
    phi = padding_sentence(phi_g)
    assert phi_g.depth == 2 and phi.depth == 5
    star = pad(complete(1))
    for g in enumerate_graphs_upto(4):
        assert evaluate(g, phi) == iso(g, star)


def test_padding_needs_a_sentence():
    with pytest.raises(ParameterError):
        padding_sentence(parse("x~y"))


@pytest.mark.parametrize("make", [lambda: generic_defining(path(3)), lambda: hintikka(cycle(4), 2),
                                  lambda: delta(7, "three_var"), lambda: path_sentence(5, "halving"),
                                  lambda: extension_sentence(3),
                                  lambda: padding_sentence(generic_defining(path(2)))])
def test_emitted_formulas_round_trip(make):
    phi = make()
    assert parse(to_text(phi)) == phi
    measure(phi)

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from omegamem import zoo
from omegamem.automata import accepts
from omegamem.combinatorics import (ExtractionError, LevelTree, NWord, NWordError, ProductEdge,
                                    ProductLasso, brute_force_regular, extract_regular,
                                    is_regular_word, is_simple, is_subrun, kappa_bound,
                                    kappa_digits, kappa_log10, p_subword, product_lasso,
                                    random_nword, random_regular_word, required_length,
                                    simplify_lasso, tree_extract_constant_labels, word_relation)

from conftest import random_word


def test_word_relations():
    assert word_relation("aabb", "a", "b") == "strongly-before"
    assert word_relation("abab", "a", "b") == "interleaved"
    w = "aaaccacabbbbccb"
    assert word_relation(w, "a", "b") == "strongly-before"
    assert word_relation(w, "c", "b") == "weakly-before"
    assert word_relation(w, "b", "c") == "none"


def test_word_relation_errors():
    with pytest.raises(NWordError):
        word_relation("aab", "a", "b")
    with pytest.raises(NWordError):
        word_relation("ab", "a", "a")
    with pytest.raises(NWordError):
        word_relation("ab", "a", "c")


def test_regular_three_word():
    res = is_regular_word("abbabacccdedeedfff")
    assert res
    assert res.blocks == [frozenset("ab"), frozenset("c"), frozenset("de"), frozenset("f")]


def test_abba_and_baab_are_regular():
    assert is_regular_word("abba").blocks == [frozenset("ab")]
    assert is_regular_word("baab").blocks == [frozenset("ab")]


def test_irregular_word_reports_pair():
    # a at 0,1,3 and b at 2,4,5: b is weakly after a but a^(1) < b^(0)
    res = is_regular_word("aababb")
    assert not res and res.pair == ("a", "b")


def test_p_subword():
    w = "ababaabbaaabbb"
    assert str(p_subword(w, range(7))) == w
    assert str(p_subword(w, [1, 4, 5])) == "abaabb"
    with pytest.raises(NWordError):
        p_subword(w, [7])


@pytest.mark.parametrize("seed", range(5))
def test_regular_words_stay_regular(seed):
    rng = random.Random(seed)
    for _ in range(200):
        w = random_regular_word("abcde"[:rng.randint(1, 5)], rng.randint(1, 6), rng)
        P = sorted(rng.sample(range(w.n), rng.randint(1, w.n)))
        assert is_regular_word(p_subword(w, P))


def test_extract_small():
    P = extract_regular(["aabbabba"], 2)
    assert P in brute_force_regular(["aabbabba"], 2)
    assert P == [0, 1]


def test_extract_trivial_cases():
    ab = NWord(tuple("ab" * 9), 9)
    P = extract_regular([ab], 3)
    assert is_regular_word(p_subword(ab, P)).blocks == [frozenset("ab")]
    sep = NWord(tuple("a" * 9 + "b" * 9), 9)
    assert extract_regular([sep], 3) == [0, 1, 2]


def test_extract_fails_when_too_short():
    with pytest.raises(ExtractionError):
        extract_regular(["aababb"], 2)


@pytest.mark.parametrize("seed", range(10))
def test_extract_on_random_words(seed):
    rng = random.Random(seed)
    n = 2
    letters = "abc"[:rng.randint(2, 3)]
    big = required_length(n, 1, len(letters))
    words = [random_nword(letters, big, rng)]
    P = extract_regular(words, n)
    assert len(P) == n
    assert all(is_regular_word(p_subword(w, P)) for w in words)


def test_required_length():
    assert required_length(2, 1, 2) == 4
    assert required_length(2, 2, 2) == 16


# ---------------------------------------------------------------- lassos

def _E(u, y, z, v):
    return ProductEdge(u, "a", (y, z), v)


def test_detour_is_compressed():
    # cycle 0 -> 1 -> (2 -> 1) x 4 -> 0, with the accepting minimum only on 0 -> 1
    cycle = [_E(0, 5, 0, 1)]
    for _ in range(4):
        cycle += [_E(1, 3, 3, 2), _E(2, 3, 3, 1)]
    cycle[3] = _E(1, 2, 3, 2)
    cycle.append(_E(1, 3, 3, 0))
    lasso = ProductLasso([], cycle)
    assert len(lasso.cycle) == 10
    out = simplify_lasso(lasso, 3)
    assert len(out.cycle) < len(lasso.cycle)
    assert is_simple(out, 2 * 3 * 3)
    assert out.cycle_min(0) == 2 and out.cycle_min(1) == 0
    assert is_subrun(out, lasso)


def test_simple_lasso_is_not_lengthened():
    lasso = ProductLasso([_E(0, 1, 1, 1)], [_E(1, 0, 0, 1)])
    out = simplify_lasso(lasso, 2)
    assert len(out.cycle) <= 1 and len(out.stem) <= 1


def test_broken_lasso_rejected():
    with pytest.raises(ValueError):
        ProductLasso([], [_E(0, 0, 0, 1)]).validate()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_simplify_random_products(seed):
    rng = random.Random(seed)
    na, nb = rng.randint(1, 4), rng.randint(1, 4)
    a = zoo.random_deterministic("ab", na, 4, rng)
    b = zoo.random_deterministic("ab", nb, 4, rng)
    w = random_word("ab", rng, max_prefix=6, max_period=8)
    lasso = product_lasso(a, b, w)
    n = max(na, nb)
    out = simplify_lasso(lasso, n)
    assert is_simple(out, 2 * n * n)
    assert out.cycle_min(0) == lasso.cycle_min(0)
    assert out.cycle_min(1) == lasso.cycle_min(1)
    assert is_subrun(out, lasso)
    assert (lasso.cycle_min(0) % 2 == 0) == accepts(a, w)


# ---------------------------------------------------------------- trees

def test_single_label_keeps_any_subtree():
    t = LevelTree.full(3, 2)
    res = tree_extract_constant_labels(t, {v: "x" for v in t.children}, 2)
    assert res.tree.branchings() == {2} and res.labels == ["x", "x"]


def test_pigeonhole_on_alternating_labels():
    t = LevelTree.full(8, 2)
    labels = {v: (v[-1] % 2 if v else 0) for v in t.children}
    res = tree_extract_constant_labels(t, labels, 2)
    kids = res.tree.children[()]
    assert len(kids) == 2 and labels[kids[0]] == labels[kids[1]]


@pytest.mark.parametrize("seed", range(10))
def test_random_labelled_trees(seed):
    rng = random.Random(seed)
    t = LevelTree.full(6, 3)
    labels = {v: rng.randrange(2) for v in t.children}
    # branching 6 is below the guaranteed 2 * 2^2 but usually suffices
    try:
        res = tree_extract_constant_labels(t, labels, 2)
    except ExtractionError:
        return
    for h, lab in enumerate(res.labels):
        assert {labels[v] for v in res.tree.level(h)} == {lab}
    assert res.tree.depth() == 3


def test_branching_below_bound_rejected():
    t = LevelTree.full(3, 3)
    labels = {v: len(v) % 2 for v in t.children}
    with pytest.raises(ExtractionError):
        tree_extract_constant_labels(t, labels, 2)


# ---------------------------------------------------------------- kappa

def test_kappa_minimal_inputs():
    # 1^2 * (3^((1*1*2)^2) * 2)^(1*2) = (81*2)^2
    assert kappa_bound(1, 1, 1, 2) == 26244


def test_kappa_digits():
    assert kappa_digits(1, 1, 1, 2) == 5
    assert kappa_digits(2, 2, 2, 2) == 35210
    x = kappa_bound(2, 2, 2, 2)
    assert 10 ** 35209 <= x < 10 ** 35210


def test_kappa_huge_values_are_reported_as_digits():
    with pytest.raises(OverflowError):
        kappa_bound(3, 3, 3, 6)
    assert kappa_digits(3, 3, 3, 6) > 10 ** 6


def test_kappa_monotone():
    grid = list(itertools.product([1, 2], [1, 2], [1, 2], [2, 4]))
    for x in grid:
        for i in range(4):
            y = list(x)
            y[i] = y[i] + (2 if i == 3 else 1)
            assert kappa_log10(*y) >= kappa_log10(*x)


def test_kappa_rejects_zero():
    with pytest.raises(ValueError):
        kappa_bound(0, 1, 1, 2)

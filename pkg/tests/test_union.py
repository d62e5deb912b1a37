import itertools
import random

import pytest

from omegamem import zoo
from omegamem.automata import (EPS, MemoryPartition, ParityAutomaton, UltimatelyPeriodicWord,
                               accepts, equivalent)
from omegamem.completeness import is_k_wise_eps_complete, sigma_part
from omegamem.solver import compute_memory
from omegamem.union import (UnionError, build_T, check_T, check_union, interleavings,
                            is_prefix_increasing, lex_less, liminf_union, t_step, tbar_steps,
                            union_automaton, union_completion, zero_free_transform)

from conftest import det


def tau(*items):
    """``tau(1, 3, "1*", 5)``: starred values belong to the second side."""
    out = []
    for x in items:
        if isinstance(x, str):
            out.append((2, int(x[:-1])))
        else:
            out.append((1, x))
    return tuple(out)


def test_worked_transition():
    t, tau2 = t_step(tau(1, 3, "1*", 5, "3*", "5*"), 3, 2)
    assert t == 3
    assert tau2 == tau(1, "1*", 3, 5, "3*", "5*")


@pytest.mark.parametrize("z", [1, 2, 3])
def test_zero_on_first_side_wins(z):
    for s in interleavings(3, 3):
        assert t_step(s, 0, z) == (0, s)


def test_smallest_case():
    assert t_step(tau(1, "1*"), 1, 1) == (1, tau("1*", 1))


def test_t_step_rejects_out_of_range():
    with pytest.raises(ValueError):
        t_step(tau(1, "1*"), 1, 0)
    with pytest.raises((ValueError, IndexError)):
        t_step(tau(1, "1*"), 5, 1)


def test_sizes():
    assert len(build_T(1, 1).states) == 2
    assert set(interleavings(1, 1)) == {tau(1, "1*"), tau("1*", 1)}
    assert len(build_T(3, 3).states) == 6


def test_interleaving_guard():
    with pytest.raises(ValueError):
        interleavings(9, 9)
    with pytest.raises(ValueError):
        interleavings(2, 1)


def test_tbar_contains_t_and_relaxation():
    states = interleavings(3, 3)
    for s in states:
        for y in range(4):
            for z in range(1, 4):
                assert t_step(s, y, z) in tbar_steps(s, y, z, states)
    assert (1, tau(1, "1*")) in tbar_steps(tau("1*", 1), 1, 1, interleavings(1, 1))


def test_lex_order():
    assert lex_less(tau(1, "1*"), tau("1*", 1))
    assert not lex_less(tau(1, "1*"), tau(1, "1*"))
    states = interleavings(3, 3)
    for s, s2 in itertools.product(states, repeat=2):
        if s != s2:
            assert lex_less(s, s2) != lex_less(s2, s)
    for s, s2, s3 in itertools.product(states, repeat=3):
        if lex_less(s, s2) and lex_less(s2, s3):
            assert lex_less(s, s3)


@pytest.mark.parametrize("d1,d2", [(1, 1), (1, 3), (3, 3)])
def test_T_recognises_union_exactly(d1, d2):
    rep = check_T(d1, d2)
    assert rep.t_in_union is None
    assert all(rep.union_in_t)
    assert rep.tbar_in_t


def test_T_on_random_words():
    rng = random.Random(0)
    T = build_T(3, 3)
    letters = T.alphabet
    for _ in range(2000):
        pre = tuple(rng.choice(letters) for _ in range(rng.randint(0, 4)))
        per = tuple(rng.choice(letters) for _ in range(rng.randint(1, 5)))
        w = UltimatelyPeriodicWord(pre, per)
        assert accepts(T, w) == liminf_union(3, 3, w)


def test_prefix_increasing(inf_a, sigma_omega):
    assert is_prefix_increasing(inf_a)
    assert is_prefix_increasing(sigma_omega)
    res = is_prefix_increasing(zoo.aa_then_anything())
    assert not res and res.letter == "b"
    assert not accepts(zoo.aa_then_anything(), UltimatelyPeriodicWord(("b",), ("a",)))


def _one_part_completion(aut):
    eps = {(q, EPS, y, q2) for q in aut.states for q2 in aut.states for y in range(1, aut.index, 2)}
    aeps = aut.replace(transitions=aut.transitions | {type(next(iter(aut.transitions)))(*e)
                                                      for e in eps})
    return aeps, MemoryPartition.trivial(aut)


def test_zero_free_inf_a(inf_a):
    res = compute_memory(inf_a)
    aeps = res.certificate.completion(inf_a)
    zf = zero_free_transform(sigma_part(aeps), aeps, res.certificate.partition(inf_a))
    assert zf.report.ok
    assert all(t.priority > 0 for t in zf.aut_eps.transitions)


def test_zero_free_shift_applies_to_zero_free_input():
    aut = det("ab", 2, "q", {("q", "a"): (1, "q"), ("q", "b"): (1, "q")})
    aeps, part = _one_part_completion(aut)
    zf = zero_free_transform(aut, aeps, part)
    assert {t.priority for t in zf.aut.transitions} == {3}
    assert zf.report.ok


def test_zero_free_rejects_non_prefix_increasing():
    b = zoo.aa_then_anything()
    aeps, part = _one_part_completion(b)
    with pytest.raises(UnionError):
        zero_free_transform(b, aeps, part)


def test_union_idempotent():
    w2 = zoo.remark_union_parts()[1]
    assert equivalent(union_automaton(w2, w2), w2)


def test_union_with_empty_language():
    _, w2 = zoo.remark_union_parts()
    empty = ParityAutomaton.build(w2.alphabet, 2, "e", [("e", a, 1, "e") for a in w2.alphabet])
    assert equivalent(union_automaton(empty, w2), w2)


def test_union_rejects_priority_zero_on_second_side():
    w1, _ = zoo.remark_union_parts()
    with pytest.raises(UnionError):
        union_automaton(w1, w1)


def _completion(b):
    res = compute_memory(b)
    aeps = res.certificate.completion(b)
    return sigma_part(aeps), aeps, res.certificate.partition(b)


def test_union_of_positional_objectives():
    inf_a = det("ab", 2, "q", {("q", "a"): (0, "q"), ("q", "b"): (1, "q")})
    inf_b = det("ab", 4, "q", {("q", "a"): (3, "q"), ("q", "b"): (2, "q")})
    b1, e1, p1 = _completion(inf_a)
    b2, e2, p2 = _completion(inf_b)
    zf = zero_free_transform(b2, e2, p2)
    base, aeps, part = union_completion(b1, e1, p1, zf.aut, zf.aut_eps, zf.part)
    assert part.k == 1
    assert check_union(inf_a, inf_b, base, aeps, part).ok


def test_union_remark_instance():
    w1, w2 = zoo.remark_union_parts()
    b1, e1, p1 = _completion(w1)
    b2, e2, p2 = _completion(w2)
    assert p1.k == p2.k == 2
    zf = zero_free_transform(b2, e2, p2)
    base, aeps, part = union_completion(b1, e1, p1, zf.aut, zf.aut_eps, zf.part)
    assert part.k == 4
    rep = check_union(w1, w2, base, aeps, part)
    assert rep.ok and not rep.breakpoints


def test_literal_construction_is_incomplete():
    w1, w2 = zoo.remark_union_parts()
    b1, e1, p1 = _completion(w1)
    b2, e2, p2 = _completion(w2)
    zf = zero_free_transform(b2, e2, p2)
    _, aeps, part = union_completion(b1, e1, p1, zf.aut, zf.aut_eps, zf.part, ties=False)
    assert not is_k_wise_eps_complete(aeps, part)


def test_union_with_sigma_omega():
    w1, _ = zoo.remark_union_parts()
    top = ParityAutomaton.build(w1.alphabet, 2, "t", [("t", a, 0, "t") for a in w1.alphabet])
    b1, e1, p1 = _completion(w1)
    b2, e2, p2 = _completion(top)
    zf = zero_free_transform(b2, e2, p2)
    base, aeps, part = union_completion(b1, e1, p1, zf.aut, zf.aut_eps, zf.part)
    assert equivalent(base, top)
    assert check_union(w1, top, base, aeps, part).ok

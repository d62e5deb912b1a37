import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from omegamem import zoo
from omegamem.automata import EPS, MemoryPartition, ParityAutomaton, Transition
from omegamem.completeness import (breakpoints, completeness_violations, is_k_wise_eps_complete,
                                   sigma_part, validate_completion)
from omegamem.solver import canonical_completion


def one_state(*eps):
    ts = [("q", "a", 0, "q")] + [("q", EPS, y, "q") for y in eps]
    return ParityAutomaton.build("a", 2, "q", ts)


def test_single_state_with_odd_loop():
    aut = one_state(1)
    assert is_k_wise_eps_complete(aut, MemoryPartition.trivial(aut))


def test_single_state_without_loop():
    aut = one_state()
    assert completeness_violations(aut, MemoryPartition.trivial(aut)) == [(0, 0, "q", "q")]


def _pair(eps, index=4):
    ts = [("p", "a", 0, "p"), ("q", "a", 0, "q")] + [(u, EPS, y, v) for (u, y, v) in eps]
    return ParityAutomaton.build("a", index, "p", ts)


def test_breakpoint_direct():
    aut = _pair([("p", 1, "q"), ("q", 1, "p"), ("p", 2, "q"), ("p", 3, "q")])
    part = MemoryPartition(1, {"p": 0, "q": 0})
    table = breakpoints(aut, part)
    assert table.breakpoint("p", "q") == 2
    assert table.direction("p", "q") == ("p", "q")
    assert not table.violations


def test_breakpoint_sentinel_for_identical_rows():
    aut = _pair([("p", 1, "q"), ("q", 1, "p"), ("p", 3, "q"), ("q", 3, "p")])
    table = breakpoints(aut, MemoryPartition(1, {"p": 0, "q": 0}))
    assert table.breakpoint("p", "q") == aut.index
    assert table.direction("p", "q") is None


def test_breakpoint_reports_violations():
    aut = _pair([("p", 0, "q"), ("q", 0, "p")])
    table = breakpoints(aut, MemoryPartition(1, {"p": 0, "q": 0}))
    assert ("even-two-cycle", "p", "q", 0) in table.violations
    aut = _pair([("p", 1, "q"), ("q", 1, "p")])
    table = breakpoints(aut, MemoryPartition(1, {"p": 0, "q": 0}))
    assert ("incomplete", "p", "q", 2) in table.violations


def _random_sig_completion(rng, n, d, kappa=3):
    qs = [f"q{i}" for i in range(n)]
    ts = [(q, "a", rng.randrange(d), rng.choice(qs)) for q in qs]
    aut = ParityAutomaton.build("a", d, qs[0], ts, states=tuple(qs))
    part = MemoryPartition.trivial(aut)
    sig = {q: tuple(rng.randrange(kappa) for _ in range(d // 2)) for q in qs}
    return aut, part, sig


def _first_difference(s, s2):
    return next((j for j in range(len(s)) if s[j] != s2[j]), None)


@pytest.mark.parametrize("seed", range(50))
def test_breakpoints_of_canonical_completions(seed):
    rng = random.Random(seed)
    aut, part, sig = _random_sig_completion(rng, 4, 4)
    aeps = canonical_completion(aut, part, sig)
    assert is_k_wise_eps_complete(aeps, part)
    table = breakpoints(aeps, part)
    assert not table.violations
    for q, q2 in itertools.combinations(aut.states, 2):
        j = _first_difference(sig[q], sig[q2])
        expected = aut.index if j is None else 2 * j
        assert table.breakpoint(q, q2) == expected


def test_no_zero_priority_means_breakpoints_at_least_two():
    w1, w2 = zoo.remark_union_parts()
    from omegamem import union
    zf = union.zero_free_transform(*_completion_of(w2))
    assert all(t.priority > 0 for t in zf.aut_eps.transitions)
    table = breakpoints(zf.aut_eps, zf.part)
    assert all(x >= 2 for x, _ in table.entries.values())


def _completion_of(b):
    from omegamem.solver import compute_memory
    res = compute_memory(b)
    cert = res.certificate
    aeps = cert.completion(b)
    return sigma_part(aeps), aeps, cert.partition(b)


def test_validate_trivial_completion():
    aut = one_state(1)
    rep = validate_completion(sigma_part(aut), aut, MemoryPartition.trivial(aut), sigma_part(aut))
    assert rep.ok


def test_validate_rejects_language_growth():
    b = zoo.aa_then_anything()
    aeps = b.replace(transitions=b.transitions | {Transition("rej", EPS, 0, "acc")})
    part = MemoryPartition(1, {q: 0 for q in b.states})
    rep = validate_completion(b, aeps, part, b)
    assert not rep.language
    assert rep.complete  # a single ε edge is far from complete


def test_validate_rejects_eps_cycle():
    aut = one_state(0)
    rep = validate_completion(sigma_part(aut), aut, MemoryPartition.trivial(aut), sigma_part(aut))
    assert rep.eps_cycle is not None and not rep.ok


def test_validate_union_construction():
    from omegamem import union
    w1, w2 = zoo.remark_union_parts()
    b1, e1, p1 = _completion_of(w1)
    b2, e2, p2 = _completion_of(w2)
    zf = union.zero_free_transform(b2, e2, p2)
    base, aeps, part = union.union_completion(b1, e1, p1, zf.aut, zf.aut_eps, zf.part)
    assert part.k == 4
    assert is_k_wise_eps_complete(aeps, part)
    rep = validate_completion(base, aeps, part, union.union_automaton(w1, w2))
    assert rep.ok


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.sampled_from([2, 4, 6]), st.integers(0, 10 ** 6))
def test_canonical_completion_always_complete_and_safe(n, d, seed):
    from omegamem.automata import check_no_eps_omega
    rng = random.Random(seed)
    aut, part, sig = _random_sig_completion(rng, n, d, kappa=n)
    aeps = canonical_completion(aut, part, sig)
    assert is_k_wise_eps_complete(aeps, part)
    # an accepting ε-cycle would need an even ε edge back up the signature order
    assert check_no_eps_omega(aeps) is None


def test_removing_an_eps_edge_keeps_soundness():
    b = zoo.aa_or_bb_then_anything()
    base, aeps, part = _completion_of(b)
    rng = random.Random(1)
    eps = sorted((t for t in aeps.transitions if t.letter == EPS), key=repr)
    for t in rng.sample(eps, 10):
        smaller = aeps.replace(transitions=aeps.transitions - {t})
        rep = validate_completion(base, smaller, part, b)
        assert rep.eps_cycle is None and rep.language

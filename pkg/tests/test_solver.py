import random

import pytest

from omegamem import games, zoo
from omegamem.automata import EPS, AutomatonError, MemoryPartition, ParityAutomaton, Transition
from omegamem.completeness import breakpoints, is_k_wise_eps_complete
from omegamem.games import ADAM, EVE, GameArena
from omegamem.solver import (MemoryCertificate, canonical_completion, check_certificate,
                             compute_memory, eps_priorities, solve_k)


def _eps(aut):
    return {(t.src, t.priority, t.dst) for t in aut.transitions if t.letter == EPS}


def _two_states(d):
    ts = [("p", "a", 0, "q"), ("q", "a", 0, "p")]
    aut = ParityAutomaton.build("a", d, "p", ts)
    return aut, MemoryPartition(1, {"p": 0, "q": 0})


def test_equal_signatures_give_mutual_odd_edges():
    aut, part = _two_states(4)
    rel = _eps(canonical_completion(aut, part, {"p": (0, 0), "q": (0, 0)}))
    assert rel == {(u, y, v) for u in "pq" for v in "pq" for y in (1, 3)}


def test_strictly_larger_signature():
    aut, part = _two_states(2)
    rel = _eps(canonical_completion(aut, part, {"p": (1,), "q": (0,)}))
    assert ("p", 1, "q") in rel and ("q", 1, "p") not in rel
    assert ("p", 0, "q") in rel
    assert is_k_wise_eps_complete(canonical_completion(aut, part, {"p": (1,), "q": (0,)}), part)


def test_eps_priorities_rule():
    assert eps_priorities((1, 0), (0, 5), 4) == [0, 1, 2, 3]
    assert eps_priorities((0, 5), (1, 0), 4) == []
    assert eps_priorities((1, 2), (1, 0), 4) == [1, 2, 3]
    assert eps_priorities((1, 0), (1, 2), 4) == [1]


@pytest.mark.parametrize("seed", range(20))
def test_random_signatures_complete(seed):
    rng = random.Random(seed)
    qs = ["q0", "q1", "q2", "q3"]
    aut = ParityAutomaton.build("a", 4, "q0", [(q, "a", rng.randrange(4), rng.choice(qs)) for q in qs],
                                states=tuple(qs))
    part = MemoryPartition.trivial(aut)
    sig = {q: (rng.randrange(4), rng.randrange(4)) for q in qs}
    aeps = canonical_completion(aut, part, sig)
    assert is_k_wise_eps_complete(aeps, part)
    assert not breakpoints(aeps, part).violations


def test_sigma_omega_certificate():
    b = ParityAutomaton.build("ab", 2, "q", [("q", "a", 0, "q"), ("q", "b", 0, "q")])
    cert = MemoryCertificate(1, {("q", "a", 0): 0, ("q", "b", 0): 0}, {("q", 0): (0,)})
    assert check_certificate(b, cert).ok
    res = compute_memory(b)
    assert res.ok and res.k == 1


def test_aa_is_positional():
    res = compute_memory(zoo.aa_then_anything())
    assert res.k == 1 and check_certificate(zoo.aa_then_anything(), res.certificate).ok


def test_aa_or_bb_needs_three():
    # the search is exhaustive below three memory states
    b = zoo.aa_or_bb_then_anything()
    assert solve_k(b, 1)[0] is None
    assert solve_k(b, 2)[0] is None
    cert, _ = solve_k(b, 3)
    assert cert is not None and check_certificate(b, cert).ok


def test_fig1_objective_has_memory_two():
    b = zoo.no_b_or_fin_aa_or_inf_cc()
    res = compute_memory(b)
    assert res.k == 2
    rep = check_certificate(b, res.certificate)
    assert rep.ok and rep.blowup_language


def test_chromatic_memory():
    assert compute_memory(zoo.no_b_or_fin_aa_or_inf_cc(), chromatic=True).k == 2
    res = compute_memory(zoo.wn_automaton(3), chromatic=True)
    assert res.k == 3 and res.certificate.chi is not None
    b = zoo.wn_automaton(3)
    assert check_certificate(b, res.certificate).ok


def test_wn_memory():
    assert compute_memory(zoo.wn_automaton(2)).k == 2
    assert compute_memory(zoo.wn_automaton(3)).k == 3


def test_exceeds_kmax_and_budget():
    b = zoo.aa_or_bb_then_anything()
    assert compute_memory(b, k_max=1).status == "exceeds_kmax"
    res = compute_memory(zoo.wn_automaton(3), budget=5)
    assert res.status == "budget"


def test_nondeterministic_input_rejected():
    aut = ParityAutomaton.build("a", 2, "q", [("q", "a", 0, "q"), ("q", "a", 1, "q")])
    with pytest.raises(AutomatonError):
        compute_memory(aut)


def test_kmin_skips_smaller_values():
    res = compute_memory(zoo.aa_then_anything(), k_min=2)
    assert res.k == 2 and list(res.stats["per_k"]) == [2]


def test_parallel_search_reports_same_k():
    b = zoo.no_b_or_fin_aa_or_inf_cc()
    assert compute_memory(b, jobs=2).k == 2


def test_invalid_certificate_detected():
    b = zoo.aa_or_bb_then_anything()
    cert = compute_memory(b).certificate
    bad = MemoryCertificate(cert.k, dict(cert.route),
                            {s: (0,) for s in cert.signatures})
    assert not check_certificate(b, bad).ok


def _pad(cert, b):
    """Same certificate with one more (unused) memory state."""
    k = cert.k
    route = dict(cert.route)
    sigs = dict(cert.signatures)
    for q in {key[0] for key in route}:
        for a in b.alphabet:
            route[(q, a, k)] = k
        sigs[(q, k)] = cert.signatures[(q, 0)]
    for s in list(sigs):
        if s not in cert.signatures and s[1] != k:
            sigs[s] = (0,) * (b.index // 2)
    return MemoryCertificate(k + 1, route, sigs)


@pytest.mark.parametrize("b", [zoo.aa_then_anything(), zoo.no_b_or_fin_aa_or_inf_cc(),
                               zoo.aa_or_bb_then_anything()])
def test_monotone_under_padding(b):
    cert = compute_memory(b).certificate
    padded = _pad(cert, b)
    assert check_certificate(b, padded).ok


def _random_game(rng, alphabet, n):
    vs = list(range(n))
    owners = {v: rng.choice([EVE, ADAM]) for v in vs}
    edges = set()
    for v in vs:
        for _ in range(rng.randint(1, 3)):
            edges.add((v, rng.choice(alphabet), rng.choice(vs)))
    return GameArena.build(alphabet, 0, owners, edges)


@pytest.mark.parametrize("name", ["aa", "fig1", "w2"])
def test_certificate_soundness_on_random_games(name):
    b = {"aa": zoo.aa_then_anything(), "fig1": zoo.no_b_or_fin_aa_or_inf_cc(),
         "w2": zoo.wn_automaton(2)}[name]
    k = compute_memory(b).k
    rng = random.Random(7)
    won = 0
    while won < 50:
        g = _random_game(rng, list(b.alphabet), rng.randint(2, 8))
        if not games.solve_game(g, b).eve_wins:
            continue
        won += 1
        assert games.wins_with_memory(g, b, k) is not None

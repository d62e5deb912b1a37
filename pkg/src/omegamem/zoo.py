"""Deterministic parity automata for the objectives used as running examples."""

from itertools import permutations

from .automata import ParityAutomaton


def _det(alphabet, index, initial, table):
    ts = [(q, a, y, q2) for (q, a), (y, q2) in table.items()]
    return ParityAutomaton.build(alphabet, index, initial, ts)


def aa_then_anything():
    """aa(a+b)^w: positional."""
    t = {
        ("q0", "a"): (1, "q1"), ("q0", "b"): (1, "rej"),
        ("q1", "a"): (1, "acc"), ("q1", "b"): (1, "rej"),
        ("acc", "a"): (0, "acc"), ("acc", "b"): (0, "acc"),
        ("rej", "a"): (1, "rej"), ("rej", "b"): (1, "rej"),
    }
    return _det("ab", 2, "q0", t)


def aa_or_bb_then_anything():
    """(aa+bb)(a+b)^w: needs two memory states."""
    t = {
        ("q0", "a"): (1, "qa"), ("q0", "b"): (1, "qb"),
        ("qa", "a"): (1, "acc"), ("qa", "b"): (1, "rej"),
        ("qb", "b"): (1, "acc"), ("qb", "a"): (1, "rej"),
        ("acc", "a"): (0, "acc"), ("acc", "b"): (0, "acc"),
        ("rej", "a"): (1, "rej"), ("rej", "b"): (1, "rej"),
    }
    return _det("ab", 2, "q0", t)


def no_b_or_fin_aa_or_inf_cc():
    """No(b) or Fin(aa) or Inf(cc) over {a, b, c}.

    Before any b every letter is harmless (priority 2).  After the first b the
    state remembers the last letter; reading aa gives 1, cc gives 0.
    """
    t = {}
    for a in "ac":
        t[("p", a)] = (2, "p")
    t[("p", "b")] = (2, "b1")
    for last in ("a1", "b1", "c1"):
        for x in "abc":
            y = 2
            if x == "a" and last == "a1":
                y = 1
            if x == "c" and last == "c1":
                y = 0
            t[(last, x)] = (y, x + "1")
    return _det("abc", 4, "p", t)


def last_letter_switch(alphabet, relevant, low=0):
    """Infinitely many switches between letters of ``relevant``.

    Equivalently: at least two letters of ``relevant`` occur infinitely often.
    Letters outside ``relevant`` do not change the state.
    """
    t = {}
    for last in relevant:
        for x in alphabet:
            if x in relevant and x != last:
                t[(last, x)] = (low, x)
            else:
                t[(last, x)] = (low + 1, last)
    return _det(tuple(alphabet), low + 2, relevant[0], t)


def wn_automaton(n):
    """W_n over colours 1..n: at least two colours infinitely often."""
    letters = tuple(str(i) for i in range(1, n + 1))
    return last_letter_switch(letters, letters)


def remark_union_parts():
    """The two halves of the union counterexample over {a1, a2, b1, b2}.

    W1: both a1 and a2 infinitely often.  W2: both b1 and b2 infinitely
    often, with priorities shifted to avoid 0.  Each has memory 2 and the
    union has memory 4.
    """
    alphabet = ("a1", "a2", "b1", "b2")
    w1 = last_letter_switch(alphabet, ("a1", "a2"), low=0)
    w2 = last_letter_switch(alphabet, ("b1", "b2"), low=2)
    return w1, w2


def parity_automaton(d):
    """The parity condition itself over letters 0..d-1 (as strings)."""
    letters = tuple(str(y) for y in range(d))
    t = {("q", a): (int(a), "q") for a in letters}
    return _det(letters, d, "q", t)


def buchi_inf(letter, alphabet):
    """Infinitely many ``letter``: positional."""
    t = {("q", a): (0 if a == letter else 1, "q") for a in alphabet}
    return _det(tuple(alphabet), 2, "q", t)


def muller_lar(colours, family):
    """Deterministic parity automaton for a Muller condition via latest
    appearance records.  ``family`` is a collection of sets of colours that
    are winning as sets of colours seen infinitely often."""
    colours = tuple(colours)
    fam = {frozenset(f) for f in family}
    n = len(colours)
    t = {}
    for perm in permutations(colours):
        for c in colours:
            h = perm.index(c)
            new = (c,) + perm[:h] + perm[h + 1:]
            seen = frozenset(perm[:h + 1])
            y = 2 * (n - 1 - h) + (0 if seen in fam else 1)
            t[("".join(map(str, perm)) if all(len(str(x)) == 1 for x in perm) else perm, c)] = \
                (y, "".join(map(str, new)) if all(len(str(x)) == 1 for x in new) else new)
    return _det(colours, 2 * n, "".join(map(str, colours)) if all(len(str(x)) == 1 for x in colours)
                else colours, t)


def random_deterministic(alphabet, n_states, index, rng):
    """Complete deterministic automaton with random targets and priorities."""
    states = [f"q{i}" for i in range(n_states)]
    t = {(q, a): (rng.randrange(index), rng.choice(states)) for q in states for a in alphabet}
    return _det(tuple(alphabet), index, states[0], t)

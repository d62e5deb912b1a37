"""Union of two objectives: the interleaving automaton T for a union of two
parity conditions, its relaxation Tbar, the 0-free transform, and the
product automaton with its epsilon-completion.

States of T are interleavings of the odd priorities ``1, 3, .., d1`` of the
first side with ``1*, 3*, .., d2*`` of the second.  An element is a pair
``(side, value)`` with ``side`` in ``{1, 2}``.  Positions are 1-based.
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .automata import (EPS, AutomatonError, MemoryPartition, ParityAutomaton,
                       check_no_eps_omega, complete, included, product_counterexample)
from .completeness import breakpoints, completeness_violations, validate_completion

T_SIZE_GUARD = 8


class UnionError(Exception):
    pass


def _odd_upto(d):
    return list(range(1, d + 1, 2))


def _check_sides(d1, d2):
    if d1 < 1 or d2 < 1 or d1 % 2 == 0 or d2 % 2 == 0:
        raise ValueError(f"d1 and d2 must be odd and positive, got {d1}, {d2}")
    if (d1 + d2) // 2 + 1 > T_SIZE_GUARD:
        raise ValueError("interleaving automaton too large")


def interleavings(d1, d2):
    """All states, in lexicographic order (first side smaller)."""
    _check_sides(d1, d2)
    a = [(1, y) for y in _odd_upto(d1)]
    b = [(2, z) for z in _odd_upto(d2)]
    n = len(a) + len(b)
    out = []
    for pos in itertools.combinations(range(n), len(a)):
        tau, ia, ib = [], 0, 0
        for j in range(n):
            if j in pos:
                tau.append(a[ia])
                ia += 1
            else:
                tau.append(b[ib])
                ib += 1
        out.append(tuple(tau))
    return sorted(out, key=_lex_key)


def _lex_key(tau):
    return tuple(side for side, _ in tau)


def show(tau):
    return "<" + ",".join(f"{v}" if s == 1 else f"{v}*" for s, v in tau) + ">"


def ind(tau, side, v):
    """Position of ``v`` (odd) or of ``v - 1`` (even, ``>= 2``); 0 for ``v = 0``."""
    if v == 0:
        return 0
    target = (side, v if v % 2 else v - 1)
    return tau.index(target) + 1


def lex_less(tau, tau2):
    """``tau < tau2``: at the first difference ``tau`` holds a first-side element."""
    if len(tau) != len(tau2):
        raise ValueError("states of different shape")
    for u, v in zip(tau, tau2):
        if u != v:
            return u[0] == 1
    return False


def prefix_less(tau, tau2, i):
    return lex_less(tau[:i], tau2[:i])


def prefix_leq(tau, tau2, i):
    return tau[:i] == tau2[:i] or lex_less(tau[:i], tau2[:i])


def _winner(tau, y, z):
    if y is None:
        return ind(tau, 2, z), 2, z
    if z is None:
        return ind(tau, 1, y), 1, y
    iy, iz = ind(tau, 1, y), ind(tau, 2, z)
    if iy == iz:
        raise UnionError(f"tie between {y} and {z}* in {show(tau)}")
    return (iy, 1, y) if iy < iz else (iz, 2, z)


def t_step(tau, y, z):
    """Deterministic transition of T on ``(y, z)``: returns ``(t, tau2)``.

    Either coordinate may be ``None`` for a side that does not move.
    """
    if z is not None and z < 1:
        raise ValueError("second coordinate must be at least 1")
    i, side, v = _winner(tau, y, z)
    if v % 2 == 0:
        return 2 * i, tau
    t = 2 * i - 1
    other = next((j for j in range(i + 1, len(tau) + 1) if tau[j - 1][0] != side), None)
    if other is None:
        return t, tau
    moved = tau[other - 1]
    rest = tau[i - 1:other - 1]
    return t, tau[:i - 1] + (moved,) + rest + tau[other:]


def tbar_steps(tau, y, z, states):
    """All transitions of Tbar from ``tau`` on ``(y, z)`` as ``(t, tau2)``.

    With ``i0`` the deciding position and ``t`` the output of T:
    ``t`` itself towards any ``tau2`` that is not larger on the first
    ``i0 - 1`` positions (odd ``t``) or ``i0`` positions (even ``t``), and
    ``2i - 1`` or ``2i`` for ``i <= i0`` towards any ``tau2`` strictly
    smaller on the first ``i`` positions.
    """
    i0, _, _ = _winner(tau, y, z)
    t, _ = t_step(tau, y, z)
    out = set()
    for tau2 in states:
        if t % 2 and prefix_leq(tau2, tau, i0 - 1):
            out.add((t, tau2))
        if t % 2 == 0 and prefix_leq(tau2, tau, i0):
            out.add((t, tau2))
        for i in range(1, i0 + 1):
            if prefix_less(tau2, tau, i):
                out.add((2 * i - 1, tau2))
                out.add((2 * i, tau2))
    return out


def t_alphabet(d1, d2):
    return tuple((y, z) for y in range(d1 + 1) for z in range(1, d2 + 1))


def default_initial(d1, d2):
    return tuple((2, z) for z in _odd_upto(d2)) + tuple((1, y) for y in _odd_upto(d1))


def build_T(d1, d2, initial=None):
    states = interleavings(d1, d2)
    ts = []
    for tau in states:
        for (y, z) in t_alphabet(d1, d2):
            t, tau2 = t_step(tau, y, z)
            ts.append((tau, (y, z), t, tau2))
    init = default_initial(d1, d2) if initial is None else initial
    return ParityAutomaton.build(t_alphabet(d1, d2), d1 + d2 + 2, init, ts)


def build_Tbar(d1, d2, initial=None):
    states = interleavings(d1, d2)
    ts = []
    for tau in states:
        for (y, z) in t_alphabet(d1, d2):
            for t, tau2 in tbar_steps(tau, y, z, states):
                ts.append((tau, (y, z), t, tau2))
    init = default_initial(d1, d2) if initial is None else initial
    return ParityAutomaton.build(t_alphabet(d1, d2), d1 + d2 + 2, init, ts)


def side_parity(d1, d2, side):
    """One-state automaton over pairs accepting when the given side satisfies parity."""
    ts = [("p", (y, z), y if side == 1 else z, "p") for (y, z) in t_alphabet(d1, d2)]
    d = d1 if side == 1 else d2
    return ParityAutomaton.build(t_alphabet(d1, d2), d + 1, "p", ts)


def liminf_union(d1, d2, word):
    """Direct evaluation on an ultimately periodic word over pairs."""
    ys = [a[0] for a in word.period]
    zs = [a[1] for a in word.period]
    return min(ys) % 2 == 0 or min(zs) % 2 == 0


@dataclass
class TCheck:
    t_in_union: object
    union_in_t: list
    tbar_in_t: object


def check_T(d1, d2):
    """Exact language checks: L(T) equals the union of the two parity
    conditions and L(Tbar) equals L(T)."""
    T = build_T(d1, d2)
    p1, p2 = side_parity(d1, d2, 1), side_parity(d1, d2, 2)
    bad = product_counterexample([T], [p1, p2])
    back = [included(p1, T), included(p2, T)]
    return TCheck(bad, back, included(build_Tbar(d1, d2), T))


# ---------------------------------------------------------------- prefix-increasing

@dataclass
class PrefixResult:
    letter: object = None
    counterexample: object = None

    def __bool__(self):
        return self.letter is None


def is_prefix_increasing(b):
    """``w`` in ``L(b)`` implies ``a w`` in ``L(b)`` for every letter ``a``."""
    b = complete(b)
    for a in b.alphabet:
        res = included(b, b.rerooted(b.delta[(b.initial, a)][1]))
        if not res:
            return PrefixResult(a, res.counterexample)
    return PrefixResult()


# ---------------------------------------------------------------- 0-free transform

@dataclass
class ZeroFree:
    aut: ParityAutomaton
    aut_eps: ParityAutomaton
    part: MemoryPartition
    report: object


def zero_free_transform(aut, aut_eps, part, check_prefix=True):
    """Shift priorities by two, drop epsilon transitions of priority 0 and
    add epsilon transitions of priority 1 between all ordered pairs.

    The result is validated against ``aut``; the report is returned rather
    than raised since the construction is only sound when accepting from any
    state implies acceptance from the initial one after any prefix.
    """
    if check_prefix:
        pref = is_prefix_increasing(aut)
        if not pref:
            raise UnionError(f"not prefix-increasing: {pref.letter} {pref.counterexample}")
    shifted = aut.replace(index=aut.index + 2,
                          transitions=frozenset(t._replace(priority=t.priority + 2)
                                                for t in aut.transitions))
    ts = {t._replace(priority=t.priority + 2) for t in aut_eps.transitions}
    ts = {t for t in ts if not (t.letter == EPS and t.priority == 0)}
    for q in aut_eps.states:
        for q2 in aut_eps.states:
            ts.add(type(next(iter(aut_eps.transitions)))(q, EPS, 1, q2))
    eps = aut_eps.replace(index=aut_eps.index + 2, transitions=frozenset(ts))
    report = validate_completion(shifted, eps, part, aut)
    return ZeroFree(shifted, eps, part, report)


# ---------------------------------------------------------------- product

def _rank(p):
    """Position in the preference order: odd ascending, then even descending."""
    return p if p % 2 else 10 ** 6 - p


def downgrades(t, index):
    """Priorities at most as favourable as ``t``."""
    return [u for u in range(index) if _rank(u) <= _rank(t)]


def _normalise(aut):
    """Odd bound on the priorities: the index minus one."""
    return aut.index - 1


def union_automaton(a1, a2, initial_tau=None):
    """Deterministic product of ``a1``, ``a2`` and T recognising the union."""
    a1, a2 = complete(a1), complete(a2)
    if a1.alphabet != a2.alphabet:
        raise AutomatonError("alphabets differ")
    if any(t.priority == 0 for t in a2.transitions):
        raise UnionError("the second automaton has a transition with priority 0")
    d1, d2 = _normalise(a1), _normalise(a2)
    init_tau = default_initial(d1, d2) if initial_tau is None else initial_tau
    d1d, d2d = a1.delta, a2.delta
    init = (a1.initial, a2.initial, init_tau)
    seen = {init}
    stack = [init]
    ts = []
    while stack:
        q1, q2, tau = stack.pop()
        for a in a1.alphabet:
            y, p1 = d1d[(q1, a)]
            z, p2 = d2d[(q2, a)]
            t, tau2 = t_step(tau, y, z)
            dst = (p1, p2, tau2)
            ts.append(((q1, q2, tau), a, t, dst))
            if dst not in seen:
                seen.add(dst)
                stack.append(dst)
    return ParityAutomaton.build(a1.alphabet, d1 + d2 + 2, init, ts)


def union_full_automaton(a1, a2, initial_tau=None):
    """Like ``union_automaton`` but over all triples, not only reachable ones."""
    a1, a2 = complete(a1), complete(a2)
    d1, d2 = _normalise(a1), _normalise(a2)
    init_tau = default_initial(d1, d2) if initial_tau is None else initial_tau
    ts = []
    for q1 in a1.states:
        for q2 in a2.states:
            for tau in interleavings(d1, d2):
                for a in a1.alphabet:
                    y, p1 = a1.delta[(q1, a)]
                    z, p2 = a2.delta[(q2, a)]
                    t, tau2 = t_step(tau, y, z)
                    ts.append(((q1, q2, tau), a, t, (p1, p2, tau2)))
    return ParityAutomaton.build(a1.alphabet, d1 + d2 + 2, (a1.initial, a2.initial, init_tau), ts)


def equivalent_states(aut_eps):
    """Pairs of states equal or linked by epsilon transitions of every odd
    priority in both directions."""
    odd = set(range(1, aut_eps.index, 2))
    have = {}
    for t in aut_eps.transitions:
        if t.letter == EPS:
            have.setdefault((t.src, t.dst), set()).add(t.priority)
    res = {(q, q) for q in aut_eps.states}
    for (q, q2), ys in have.items():
        if odd <= ys and odd <= have.get((q2, q), set()):
            res.add((q, q2))
    return res


def union_completion(a1, a1_eps, p1, a2, a2_eps, p2, initial_tau=None, ties=True):
    """Epsilon-completion of the union product with ``k1 * k2`` parts.

    Letter transitions are those of the deterministic product over all
    triples.  An epsilon transition combines epsilon transitions ``y`` and
    ``z`` of the components with a Tbar transition on ``(y, z)``; its output
    may be downgraded to any less favourable priority.

    With ``ties`` set, a component may also stay where it is while the
    other one takes an epsilon transition; Tbar then reads ``None`` on the
    idle side and the moving side alone decides the output.  Without these
    moves a pair of triples agreeing on one component has no transition at
    the breakpoint of that component and completeness fails.
    """
    base = union_full_automaton(a1, a2, initial_tau)
    d1, d2 = _normalise(a1_eps), _normalise(a2_eps)
    index = d1 + d2 + 2
    states = interleavings(d1, d2)

    @lru_cache(maxsize=None)
    def tbar(tau, y, z):
        return tuple(tbar_steps(tau, y, z, states))

    e1 = {(t.src, t.priority, t.dst) for t in a1_eps.transitions if t.letter == EPS}
    e2 = {(t.src, t.priority, t.dst) for t in a2_eps.transitions if t.letter == EPS}
    v1 = {(q, None, q) for q in a1_eps.states} if ties else set()
    v2 = {(q, None, q) for q in a2_eps.states} if ties else set()
    ts = set(base.transitions)
    Tr = type(next(iter(base.transitions)))
    down = {t: downgrades(t, index) for t in range(index)}
    # an idle side can leave an even value deciding at the last position
    down[index] = down[index - 1]
    pairs = itertools.chain(itertools.product(e1, e2), itertools.product(v1, e2),
                            itertools.product(e1, v2))
    for (q1, y, r1), (q2, z, r2) in pairs:
        for tau in states:
            for t2, tau2 in tbar(tau, y, z):
                for t in down[t2]:
                    ts.add(Tr((q1, q2, tau), EPS, t, (r1, r2, tau2)))
    aut_eps = base.replace(transitions=frozenset(ts))
    k2 = p2.k
    part = MemoryPartition(p1.k * k2, {
        (q1, q2, tau): p1.part[q1] * k2 + p2.part[q2]
        for q1 in a1_eps.states for q2 in a2_eps.states for tau in states})
    return base, aut_eps, part


@dataclass
class UnionReport:
    language: dict = field(default_factory=dict)
    complete: list = field(default_factory=list)
    eps_cycle: object = None
    breakpoints: list = field(default_factory=list)

    @property
    def ok(self):
        return (all(bool(v) for v in self.language.values()) and not self.complete
                and self.eps_cycle is None)

    def lines(self):
        for key, v in self.language.items():
            yield f"{key}: {'ok' if v else v}"
        yield f"complete: {'ok' if not self.complete else self.complete[:3]}"
        yield f"eps_cycle: {'none' if self.eps_cycle is None else self.eps_cycle}"
        yield f"breakpoints: {'ok' if not self.breakpoints else self.breakpoints[:3]}"


class _Witness:
    def __init__(self, word):
        self.counterexample = word

    def __bool__(self):
        return self.counterexample is None

    def __repr__(self):
        return "holds" if self.counterexample is None else f"counterexample={self.counterexample}"


def check_union(w1, w2, base, aut_eps, part):
    """Postconditions: the product recognises ``L(w1) | L(w2)`` (exactly),
    the completion recognises the same language, is complete with respect
    to ``part`` and has no accepting epsilon cycle."""
    rep = UnionReport()
    rep.language["union_in_parts"] = _Witness(product_counterexample([base], [w1, w2]))
    rep.language["first_in_union"] = included(w1, base)
    rep.language["second_in_union"] = included(w2, base)
    rep.eps_cycle = check_no_eps_omega(aut_eps)
    rep.complete = completeness_violations(aut_eps, part)
    if rep.eps_cycle is None:
        rep.language["completion_in_union"] = included(aut_eps, base)
    rep.breakpoints = breakpoints(aut_eps, part).violations
    return rep

"""Parity automata with epsilon transitions, and the language algorithms on them.

Acceptance is min-parity on transitions: a run is accepting when the least
priority seen infinitely often is even.  Priorities live in ``range(index)``
with ``index`` even.  Epsilon transitions carry priorities as well; a run is
only accepting if it reads infinitely many letters.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Hashable, NamedTuple

from . import _graph

EPS = "eps"


class Transition(NamedTuple):
    src: Hashable
    letter: Hashable
    priority: int
    dst: Hashable


class AutomatonError(ValueError):
    pass


def _check_index(index):
    if index < 2 or index % 2:
        raise AutomatonError(f"index must be even and at least 2, got {index}")


@dataclass(frozen=True)
class ParityAutomaton:
    states: tuple
    alphabet: tuple
    index: int
    initial: Hashable
    transitions: frozenset

    def __post_init__(self):
        _check_index(self.index)
        if EPS in self.alphabet:
            raise AutomatonError(f"{EPS!r} is reserved and cannot be a letter")
        states = set(self.states)
        if len(states) != len(self.states):
            raise AutomatonError("duplicate states")
        if self.initial not in states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        letters = set(self.alphabet) | {EPS}
        has_out = set()
        for t in self.transitions:
            if t.src not in states or t.dst not in states:
                raise AutomatonError(f"transition {t} uses an unknown state")
            if t.letter not in letters:
                raise AutomatonError(f"transition {t} uses an unknown letter")
            if not 0 <= t.priority < self.index:
                raise AutomatonError(f"priority of {t} is outside range({self.index})")
            has_out.add(t.src)
        dead = states - has_out
        if dead:
            raise AutomatonError(f"states without outgoing transitions: {sorted(map(repr, dead))}")

    @classmethod
    def build(cls, alphabet, index, initial, transitions, states=None):
        """Convenience constructor.  States default to those mentioned."""
        ts = frozenset(Transition(*t) for t in transitions)
        if states is None:
            seen = {initial: None}
            for t in sorted(ts, key=repr):
                seen.setdefault(t.src)
                seen.setdefault(t.dst)
            states = tuple(seen)
        return cls(tuple(states), tuple(alphabet), index, initial, ts)

    def replace(self, **kw):
        d = dict(states=self.states, alphabet=self.alphabet, index=self.index,
                 initial=self.initial, transitions=self.transitions)
        d.update(kw)
        return ParityAutomaton(**d)

    @cached_property
    def out(self):
        res = {q: [] for q in self.states}
        for t in sorted(self.transitions, key=repr):
            res[t.src].append(t)
        return res

    @cached_property
    def has_eps(self):
        return any(t.letter == EPS for t in self.transitions)

    @cached_property
    def is_deterministic(self):
        if self.has_eps:
            return False
        seen = set()
        for t in self.transitions:
            key = (t.src, t.letter)
            if key in seen:
                return False
            seen.add(key)
        return True

    @cached_property
    def is_complete(self):
        keys = {(t.src, t.letter) for t in self.transitions if t.letter != EPS}
        return all((q, a) in keys for q in self.states for a in self.alphabet)

    @cached_property
    def delta(self):
        """``(state, letter) -> (priority, dst)`` for deterministic automata."""
        if not self.is_deterministic:
            raise AutomatonError("automaton is not deterministic")
        return {(t.src, t.letter): (t.priority, t.dst) for t in self.transitions}

    def reachable_states(self):
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            q = queue.popleft()
            for t in self.out[q]:
                if t.dst not in seen:
                    seen.add(t.dst)
                    queue.append(t.dst)
        return seen

    def rerooted(self, q):
        return self.replace(initial=q)

    def __repr__(self):
        return (f"ParityAutomaton(|Q|={len(self.states)}, alphabet={self.alphabet}, "
                f"index={self.index}, |T|={len(self.transitions)})")


@dataclass(frozen=True)
class UltimatelyPeriodicWord:
    prefix: tuple
    period: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("period must be non-empty")

    def letter(self, i):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def prepend(self, letter):
        return UltimatelyPeriodicWord((letter,) + self.prefix, self.period)

    def __str__(self):
        def show(xs):
            return " ".join(map(str, xs))
        if self.prefix:
            return f"{show(self.prefix)} ({show(self.period)})^w"
        return f"({show(self.period)})^w"


@dataclass(frozen=True)
class LabelledGraph:
    """Explicit edge-labelled graph.  Labels are letters, EPS, or integers."""

    vertices: tuple
    edges: frozenset
    initial: Hashable = None

    @cached_property
    def out(self):
        res = {v: [] for v in self.vertices}
        for e in sorted(self.edges, key=repr):
            res[e[0]].append(e)
        return res

    def successors(self, v):
        return [(c, w) for (_, c, w) in self.out[v]]

    def has_edge(self, u, c, v):
        return (u, c, v) in self.edges


@dataclass(frozen=True)
class MemoryPartition:
    """Assignment of each state to one of ``k`` memory parts."""

    k: int
    part: dict = field(hash=False)
    chromatic: dict = field(default=None, hash=False)

    def __post_init__(self):
        if self.k < 1:
            raise AutomatonError("k must be positive")
        for q, m in self.part.items():
            if not 0 <= m < self.k:
                raise AutomatonError(f"part {m} of {q!r} outside range({self.k})")

    @classmethod
    def trivial(cls, automaton):
        return cls(1, {q: 0 for q in automaton.states})

    @classmethod
    def from_pairs(cls, automaton, k):
        """States are ``(q, m)`` pairs; the part is ``m``."""
        return cls(k, {s: s[1] for s in automaton.states})

    def members(self, m):
        return [q for q, p in self.part.items() if p == m]


# ---------------------------------------------------------------- products

class _Indexer:
    def __init__(self):
        self.ids = {}
        self.items = []

    def __call__(self, x):
        i = self.ids.get(x)
        if i is None:
            i = self.ids[x] = len(self.items)
            self.items.append(x)
        return i


def _explore(initials, step):
    """Build an integer graph from a successor function.

    ``step(x)`` yields ``(label, prios, y)``.  Returns (indexer, edges).
    """
    idx = _Indexer()
    queue = deque()
    for x in initials:
        if x not in idx.ids:
            idx(x)
            queue.append(x)
    edges = []
    while queue:
        x = queue.popleft()
        u = idx.ids[x]
        for label, prios, y in step(x):
            fresh = y not in idx.ids
            v = idx(y)
            if fresh:
                queue.append(y)
            edges.append((u, v, prios, label))
    return idx, edges


def _lasso_letters(idx, stem, cycle):
    prefix = tuple(e[3] for e in stem if e[3] != EPS)
    period = tuple(e[3] for e in cycle if e[3] != EPS)
    return UltimatelyPeriodicWord(prefix, period)


def conjunctive_empty(graph_edges, initials, r, method="thresholds"):
    """Emptiness of a conjunction of ``r`` parity conditions on a graph.

    ``graph_edges`` are ``(u, label, prios, v)`` over hashable vertices.
    Returns ``None`` when no reachable cycle has all minima even, otherwise
    ``(stem, cycle)`` as lists of such edges.
    """
    idx = _Indexer()
    for x in initials:
        idx(x)
    edges = []
    for (u, label, prios, v) in graph_edges:
        edges.append((idx(u), idx(v), tuple(prios), label))
    finder = {"thresholds": _graph.find_good_cycle_thresholds,
              "refine": _graph.find_good_cycle}[method]
    sources = [idx.ids[x] for x in initials]
    res = finder(len(idx.items), edges, sources, r)
    if res is None:
        return None
    _, stem, cycle = res
    back = idx.items

    def conv(es):
        return [(back[e[0]], e[3], e[2], back[e[1]]) for e in es]
    return conv(stem), conv(cycle)


# ---------------------------------------------------------------- algorithms

def accepts(aut, word):
    """Membership of an ultimately periodic word, exact via a product."""
    u, v = word.prefix, word.period
    n = len(u) + len(v)

    def nxt(i):
        return i + 1 if i + 1 < n else len(u)

    def step(x):
        q, i = x
        a = word.letter(i)
        for t in aut.out[q]:
            if t.letter == EPS:
                yield EPS, (t.priority, 1), (t.dst, i)
            elif t.letter == a:
                yield a, (t.priority, 0), (t.dst, nxt(i))

    idx, edges = _explore([(aut.initial, 0)], step)
    return _graph.find_good_cycle(len(idx.items), edges, [0], 2, witness=False) is not None


def eps_closure(aut):
    """For each state, the set of ``(dst, min priority)`` over epsilon paths.

    The empty path contributes ``(q, None)``.
    """
    eps_out = {q: [t for t in aut.out[q] if t.letter == EPS] for q in aut.states}
    res = {}
    for q in aut.states:
        seen = {(q, None)}
        queue = deque(seen)
        while queue:
            p, m = queue.popleft()
            for t in eps_out[p]:
                m2 = t.priority if m is None else min(m, t.priority)
                if (t.dst, m2) not in seen:
                    seen.add((t.dst, m2))
                    queue.append((t.dst, m2))
        res[q] = seen
    return res


def check_no_eps_omega(aut):
    """Return ``None`` or an epsilon cycle (list of transitions) with even minimum."""
    reach = aut.reachable_states()
    edges = [(t.src, t.letter, (t.priority,), t.dst)
             for t in aut.transitions if t.letter == EPS and t.src in reach]
    verts = {e[0] for e in edges}
    if not verts:
        return None
    res = conjunctive_empty(edges, sorted(verts, key=repr), 1, method="refine")
    if res is None:
        return None
    return [Transition(u, a, p[0], v) for (u, a, p, v) in res[1]]


def eps_eliminate(aut):
    """Equivalent automaton without epsilon transitions."""
    if not aut.has_eps:
        return aut
    bad = check_no_eps_omega(aut)
    if bad is not None:
        raise AutomatonError(f"automaton accepts an epsilon-omega run: {bad}")
    clos = eps_closure(aut)
    ts = set()
    for q in aut.states:
        for p, m1 in clos[q]:
            for t in aut.out[p]:
                if t.letter == EPS:
                    continue
                y = t.priority if m1 is None else min(m1, t.priority)
                for r, m2 in clos[t.dst]:
                    ts.add(Transition(q, t.letter, y if m2 is None else min(y, m2), r))
    # some states may lose every outgoing transition; they reject anyway
    ts |= _sink_fix(aut.states, ts, aut.alphabet)
    return ParityAutomaton(aut.states + _maybe_sink(aut.states, ts), aut.alphabet,
                           aut.index, aut.initial, frozenset(ts))


_SINK = ("#sink",)


def _sink_fix(states, ts, alphabet):
    has_out = {t.src for t in ts}
    extra = set()
    if any(q not in has_out for q in states):
        for q in states:
            if q not in has_out:
                extra.add(Transition(q, alphabet[0], 1, _SINK))
        for a in alphabet:
            extra.add(Transition(_SINK, a, 1, _SINK))
    return extra


def _maybe_sink(states, ts):
    if any(t.dst == _SINK for t in ts) and _SINK not in states:
        return (_SINK,)
    return ()


def complete(aut):
    """Add a rejecting sink for missing letters (deterministic automata)."""
    if aut.is_complete:
        return aut
    keys = {(t.src, t.letter) for t in aut.transitions}
    ts = set(aut.transitions)
    for q in aut.states:
        for a in aut.alphabet:
            if (q, a) not in keys:
                ts.add(Transition(q, a, 1, _SINK))
    for a in aut.alphabet:
        ts.add(Transition(_SINK, a, 1, _SINK))
    states = aut.states if _SINK in aut.states else aut.states + (_SINK,)
    return ParityAutomaton(states, aut.alphabet, aut.index, aut.initial, frozenset(ts))


def complement_det(aut):
    """Complement of a deterministic automaton (priorities shifted by one)."""
    if not aut.is_deterministic:
        raise AutomatonError("complement_det needs a deterministic automaton")
    c = complete(aut)
    ts = frozenset(t._replace(priority=t.priority + 1) for t in c.transitions)
    return ParityAutomaton(c.states, c.alphabet, c.index + 2, c.initial, ts)


def product_counterexample(automata, complements):
    """A word accepted by every automaton in ``automata`` and rejected by
    every (deterministic) automaton in ``complements``, or ``None``."""
    auts = [eps_eliminate(a) for a in automata]
    comps = [complete(b) for b in complements]
    alphabet = auts[0].alphabet if auts else comps[0].alphabet
    r = len(auts) + len(comps)

    def step(x):
        qs, ps = x[:len(auts)], x[len(auts):]
        for a in alphabet:
            succ = []
            for aut, q in zip(auts, qs):
                succ.append([(t.priority, t.dst) for t in aut.out[q] if t.letter == a])
            det = []
            for b, p in zip(comps, ps):
                y, p2 = b.delta[(p, a)]
                det.append((y + 1, p2))
            for choice in product(*succ):
                prios = tuple(c[0] for c in choice) + tuple(d[0] for d in det)
                dst = tuple(c[1] for c in choice) + tuple(d[1] for d in det)
                yield a, prios, dst

    init = tuple(a.initial for a in auts) + tuple(b.initial for b in comps)
    idx, edges = _explore([init], step)
    res = _graph.find_good_cycle(len(idx.items), edges, [0], r)
    if res is None:
        return None
    _, stem, cycle = res
    return _lasso_letters(idx, stem, cycle)


class InclusionResult:
    """Truthy when the inclusion holds; otherwise carries a counterexample."""

    def __init__(self, counterexample=None):
        self.counterexample = counterexample

    @property
    def holds(self):
        return self.counterexample is None

    def __bool__(self):
        return self.holds

    def __repr__(self):
        if self.holds:
            return "InclusionResult(holds)"
        return f"InclusionResult(counterexample={self.counterexample})"


def included(a, b):
    """Decide L(a) subset of L(b) for deterministic ``b``."""
    if not b.is_deterministic:
        raise AutomatonError("included needs a deterministic right-hand side")
    if set(a.alphabet) != set(b.alphabet):
        raise AutomatonError("alphabets differ")
    return InclusionResult(product_counterexample([a], [b]))


def equivalent(a, b):
    """Both inclusions; the counterexample (if any) is in the symmetric difference."""
    r = included(a, b)
    if not r:
        return r
    return included(b, a)


def cascade(aut, graph):
    """Cascade product of an automaton with a priority-labelled graph."""
    verts = tuple(product(aut.states, graph.vertices))
    by_label = {}
    for (s, y, s2) in graph.edges:
        by_label.setdefault(y, []).append((s, s2))
    edges = set()
    for t in aut.transitions:
        for s, s2 in by_label.get(t.priority, ()):
            edges.add(((t.src, s), t.letter, (t.dst, s2)))
    return LabelledGraph(verts, frozenset(edges))


def graph_has_eps_cycle(graph):
    edges = [e for e in graph.edges if e[1] == EPS]
    idx = _Indexer()
    succ = {}
    for u, _, v in edges:
        succ.setdefault(idx(u), []).append(idx(v))
    n = len(idx.items)
    adj = [succ.get(i, []) for i in range(n)]
    comp = _graph.scc(n, adj)
    return any(comp[idx.ids[u]] == comp[idx.ids[v]] for u, _, v in edges)


def is_blowup(big, part, small):
    """Check that ``big`` (states ``(q, m)``) is a k-blowup of ``small``.

    Returns a list of violations; empty means it is a blowup.
    """
    errs = []
    k = part.k
    states = set(big.states)
    if big.initial not in states or not isinstance(big.initial, tuple) or big.initial[0] != small.initial:
        errs.append(("initial", big.initial))
    for s in big.states:
        if not (isinstance(s, tuple) and len(s) == 2 and s[0] in set(small.states) and 0 <= s[1] < k):
            errs.append(("state", s))
        elif part.part.get(s) != s[1]:
            errs.append(("part", s))
    if errs:
        return errs
    big_keys = {}
    for t in big.transitions:
        big_keys.setdefault((t.src, t.letter, t.priority), []).append(t.dst)
        if t.letter == EPS and t.src[1] != t.dst[1]:
            errs.append(("eps-changes-memory", t))
    for t in big.transitions:
        if t.letter == EPS:
            continue
        if Transition(t.src[0], t.letter, t.priority, t.dst[0]) not in small.transitions:
            errs.append(("not-a-lift", t))
    for t in small.transitions:
        for m in range(k):
            src = (t.src, m)
            if src not in states:
                errs.append(("missing-state", src))
                continue
            dsts = big_keys.get((src, t.letter, t.priority), [])
            if not any(d[0] == t.dst for d in dsts):
                errs.append(("missing-lift", t, m))
    return errs


def determinise_by_pruning(aut, reference, limit=100000):
    """Remove transitions of an epsilon-free ``aut`` until it is deterministic
    and equivalent to the deterministic ``reference``.  ``None`` if impossible."""
    if aut.has_eps:
        raise AutomatonError("determinise_by_pruning needs an epsilon-free automaton")
    groups = {}
    for t in sorted(aut.transitions, key=repr):
        groups.setdefault((t.src, t.letter), []).append(t)
    keys = sorted(groups, key=repr)
    count = 0
    for choice in product(*(groups[k] for k in keys)):
        count += 1
        if count > limit:
            return None
        try:
            cand = aut.replace(transitions=frozenset(choice))
        except AutomatonError:
            continue
        if equivalent(cand, reference):
            return cand
    return None

"""Games with omega-regular objectives: solving, bounded-memory strategies,
lower-bound witnesses, and the Zielonka-tree memory bound for Muller
conditions.

A game is an arena whose edges carry letters or ``EPS``.  The objective is
given by a deterministic parity automaton ``B``.  Plays that eventually only
follow epsilon edges are losing for Eve unless ``eps_plays_win`` is set, in
which case they are winning (this variant is used for choice arenas).
"""

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable

from . import _graph
from .automata import EPS, UltimatelyPeriodicWord, accepts, complete
from .solver import BudgetExceeded

EVE, ADAM = "eve", "adam"


@dataclass(frozen=True)
class GameArena:
    vertices: tuple
    owner: dict = field(hash=False)
    edges: frozenset
    initial: Hashable
    alphabet: tuple

    def __post_init__(self):
        vs = set(self.vertices)
        if self.initial not in vs:
            raise ValueError(f"initial vertex {self.initial!r} is not a vertex")
        for v in self.vertices:
            if self.owner.get(v) not in (EVE, ADAM):
                raise ValueError(f"vertex {v!r} has no owner")
        letters = set(self.alphabet) | {EPS}
        has_out = set()
        for (u, c, v) in self.edges:
            if u not in vs or v not in vs or c not in letters:
                raise ValueError(f"bad edge {(u, c, v)!r}")
            has_out.add(u)
        if vs - has_out:
            raise ValueError(f"dead ends: {sorted(map(repr, vs - has_out))}")

    @classmethod
    def build(cls, alphabet, initial, owners, edges):
        return cls(tuple(owners), dict(owners), frozenset(edges), initial, tuple(alphabet))

    @cached_property
    def out(self):
        res = {v: [] for v in self.vertices}
        for e in sorted(self.edges, key=repr):
            res[e[0]].append(e)
        return res

    def with_initial(self, v):
        return GameArena(self.vertices, self.owner, self.edges, v, self.alphabet)

    def restrict(self, keep, initial=None):
        keep = set(keep)
        edges = frozenset(e for e in self.edges if e[0] in keep and e[2] in keep)
        verts = tuple(v for v in self.vertices if v in keep)
        return GameArena(verts, {v: self.owner[v] for v in verts}, edges,
                         self.initial if initial is None else initial, self.alphabet)


def _neutral(b, eps_plays_win):
    return b.index if eps_plays_win else b.index + 1


# ---------------------------------------------------------------- Zielonka

def _attractor(V, target, player, owner, succ, pred):
    """Vertices of ``V`` from which ``player`` forces a visit to ``target``."""
    attr = set(target)
    strat = {}
    count = {}
    for v in V:
        if v not in attr and owner[v] != player:
            count[v] = sum(1 for w in succ[v] if w in V)
    queue = deque(attr)
    while queue:
        w = queue.popleft()
        for v in pred[w]:
            if v not in V or v in attr:
                continue
            if owner[v] == player:
                attr.add(v)
                strat[v] = w
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def zielonka(V, owner, prio, succ, pred):
    """Solve a vertex-priority min-parity game.  Player 0 wants even.

    Returns ``(W0, W1, s0, s1)`` with positional strategies on the regions.
    """
    if not V:
        return set(), set(), {}, {}
    p = min(prio[v] for v in V)
    i = p % 2
    U = {v for v in V if prio[v] == p}
    A, sA = _attractor(V, U, i, owner, succ, pred)
    W = [None, None]
    S = [None, None]
    W[0], W[1], S[0], S[1] = zielonka(V - A, owner, prio, succ, pred)
    if not W[1 - i]:
        strat = dict(S[i])
        strat.update(sA)
        for v in U:
            if owner[v] == i:
                strat[v] = next(w for w in succ[v] if w in V)
        res = [set(), set()]
        res[i] = set(V)
        st = [{}, {}]
        st[i] = strat
        return res[0], res[1], st[0], st[1]
    B, sB = _attractor(V, W[1 - i], 1 - i, owner, succ, pred)
    W2 = [None, None]
    S2 = [None, None]
    W2[0], W2[1], S2[0], S2[1] = zielonka(V - B, owner, prio, succ, pred)
    res = [None, None]
    st = [None, None]
    res[1 - i] = W2[1 - i] | B
    st[1 - i] = dict(S2[1 - i])
    st[1 - i].update(S[1 - i])
    st[1 - i].update(sB)
    res[i] = W2[i]
    st[i] = S2[i]
    return res[0], res[1], st[0], st[1]


@dataclass
class GameSolution:
    eve_wins: bool
    region: set
    strategy: dict
    b: object

    def memory_strategy(self, game):
        """The positional product strategy, read as a strategy whose memory
        states are the states of ``B`` (a chromatic update)."""
        qs = list(self.b.states)
        qid = {q: i for i, q in enumerate(qs)}
        delta = self.b.delta
        move = {}
        for (v, q), e in self.strategy.items():
            m2 = qid[q] if e[1] == EPS else qid[delta[(q, e[1])][1]]
            move[(v, qid[q])] = (e, m2)
        update = {}
        for v in game.vertices:
            for q in qs:
                for e in game.out[v]:
                    update[(v, qid[q], e)] = qid[q] if e[1] == EPS else qid[delta[(q, e[1])][1]]
        return FiniteMemoryStrategy(len(qs), qid[self.b.initial], move, update)


def solve_game(game, b, eps_plays_win=False):
    """Solve ``game`` for the objective ``L(b)`` on the product arena."""
    b = complete(b)
    delta = b.delta
    neutral = _neutral(b, eps_plays_win)
    top = neutral + 1
    verts = [(v, q) for v in game.vertices for q in b.states]
    owner, prio, succ, pred = {}, {}, {}, {}
    edge_of = {}
    for x in verts:
        owner[x] = 0 if game.owner[x[0]] == EVE else 1
        prio[x] = top
        succ[x] = []
        pred.setdefault(x, [])
    for (v, q) in verts:
        for e in game.out[v]:
            c = e[1]
            if c == EPS:
                y, q2 = neutral, q
            else:
                y, q2 = delta[(q, c)]
            mid = ("#edge", (v, q), e)
            owner[mid] = 1
            prio[mid] = y
            succ[mid] = [(e[2], q2)]
            pred.setdefault((e[2], q2), []).append(mid)
            succ[(v, q)].append(mid)
            pred[mid] = [(v, q)]
            edge_of[mid] = e
    V = set(owner)
    W0, _, s0, _ = zielonka(V, owner, prio, succ, pred)
    region = {x for x in W0 if x[0] != "#edge"}
    strat = {x: edge_of[s0[x]] for x in region if owner[x] == 0}
    return GameSolution((game.initial, b.initial) in region, region, strat, b)


# ---------------------------------------------------------------- strategies

@dataclass
class FiniteMemoryStrategy:
    """Memory states ``0..k-1``.

    ``move[(v, m)] = (edge, m2)`` at Eve's vertices; ``update[(v, m, edge)] =
    m2`` at Adam's.  Epsilon edges never change the memory.
    """

    k: int
    init: int
    move: dict
    update: dict

    def graph_edges(self, game, start=None):
        """Edges ``((v, m), letter, (v2, m2))`` reachable from the start."""
        start = (game.initial, self.init) if start is None else start
        seen = {start}
        queue = deque([start])
        out = []
        while queue:
            v, m = queue.popleft()
            if game.owner[v] == EVE:
                succs = [self.move[(v, m)]]
            else:
                succs = [(e, self.update[(v, m, e)]) for e in game.out[v]]
            for e, m2 in succs:
                y = (e[2], m2)
                out.append(((v, m), e[1], y))
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return out


def strategy_wins(game, b, strat, eps_plays_win=False, start=None):
    """Exact check that every play consistent with ``strat`` is won by Eve.

    Returns ``None`` or a losing lasso as a pair ``(prefix, period)`` of
    letter tuples (the period is empty when an epsilon play is losing).
    """
    b = complete(b)
    delta = b.delta
    neutral = _neutral(b, eps_plays_win)
    edges = strat.graph_edges(game, start)
    ids = {}

    def vid(x):
        if x not in ids:
            ids[x] = len(ids)
        return ids[x]

    start = edges[0][0]
    out = {}
    for (x, c, y) in edges:
        out.setdefault(x, []).append((c, y))
    # product with B, exploring from (start, q0)
    s0 = (start, b.initial)
    vid(s0)
    queue = deque([s0])
    gedges = []
    while queue:
        x, q = queue.popleft()
        u = ids[(x, q)]
        for c, y in out.get(x, ()):
            if c == EPS:
                pr, q2 = neutral, q
            else:
                pr, q2 = delta[(q, c)]
            fresh = (y, q2) not in ids
            v = vid((y, q2))
            if fresh:
                queue.append((y, q2))
            gedges.append((u, v, (pr + 1,), c))
    res = _graph.find_good_cycle(len(ids), gedges, [0], 1)
    if res is None:
        return None
    _, stem, cycle = res
    pre = tuple(e[3] for e in stem if e[3] != EPS)
    per = tuple(e[3] for e in cycle if e[3] != EPS)
    return (pre, per)


class _StrategySearch:
    """Exhaustive search over ``k``-memory strategies with backjumping.

    Decisions are taken at reachable ``(vertex, memory)`` pairs: Eve picks an
    edge and the next memory, Adam's edges get a next memory each.  Product
    edges with ``B`` carry the decision levels they depend on, so a losing
    cycle yields a conflict set.
    """

    def __init__(self, game, b, k, chromatic, eps_plays_win, budget, order):
        self.game = game
        self.b = b
        self.k = k
        self.chromatic = chromatic
        self.budget = budget
        self.nodes = 0
        self.order = order
        qs = list(b.states)
        self.qs = qs
        self.qid = {q: i for i, q in enumerate(qs)}
        self.nq = len(qs)
        delta = b.delta
        self.neutral = _neutral(b, eps_plays_win)
        self.vs = list(game.vertices)
        self.vid = {v: i for i, v in enumerate(self.vs)}
        self.outs = [game.out[v] for v in self.vs]
        self.is_eve = [game.owner[v] == EVE for v in self.vs]
        # per letter: list over q of (priority + 1, q2); odd minima become even
        self.trans = {}
        for a in b.alphabet:
            self.trans[a] = [(delta[(q, a)][0] + 1, self.qid[delta[(q, a)][1]]) for q in qs]
        self.trans[EPS] = [(self.neutral + 1, p) for p in range(self.nq)]
        self.n = len(self.vs) * k * self.nq
        self.reached = []
        self.reach_level = {}
        self.move = {}
        self.update = {}
        self.chi = {}
        self.chi_level = {}
        self.fresh_levels = []
        self.edges = []
        v0 = self.vid[game.initial]
        self.src = self.node(v0, 0, self.qid[b.initial])

    @property
    def used(self):
        return 1 + len(self.fresh_levels)

    def node(self, v, m, p):
        return (v * self.k + m) * self.nq + p

    def add_edge(self, v, m, e, m2, lvl):
        v2 = self.vid[e[2]]
        deps = (self.reach_level[(v, m)], lvl)
        for p, (pr, p2) in enumerate(self.trans[e[1]]):
            self.edges.append((self.node(v, m, p), self.node(v2, m2, p2), (pr,), deps))

    def reach(self, x, lvl):
        if x not in self.reach_level:
            self.reach_level[x] = lvl
            self.reached.append(x)

    def conflict(self):
        res = _graph.find_good_cycle(self.n, self.edges, [self.src], 1)
        if res is None:
            return None
        _, stem, cycle = res
        out = set()
        for e in stem:
            out.update(e[3])
        for e in cycle:
            out.update(e[3])
        return out

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(self.nodes)

    def next_decision(self):
        for (v, m) in self.reached:
            if self.is_eve[v]:
                if (v, m) not in self.move:
                    return ("eve", v, m)
            else:
                for e in self.outs[v]:
                    if (v, m, e) not in self.update:
                        return ("adam", v, m, e)
        return None

    def memory_options(self, m, c):
        """Candidate memories after reading ``c`` in memory ``m``, with the
        levels that justify restricting to them."""
        if c == EPS:
            return [m], set()
        if self.chromatic and (m, c) in self.chi:
            return [self.chi[(m, c)]], {self.chi_level[(m, c)]}
        opts = [m] + [x for x in range(self.used) if x != m]
        why = set()
        if self.used < self.k:
            opts.append(self.used)
            why.update(self.fresh_levels)
        return opts, why

    def apply(self, v, m, e, m2, lvl):
        mark = (len(self.edges), len(self.reached), len(self.fresh_levels))
        if m2 == self.used and e[1] != EPS:
            self.fresh_levels.append(lvl)
        if self.chromatic and e[1] != EPS and (m, e[1]) not in self.chi:
            self.chi[(m, e[1])] = m2
            self.chi_level[(m, e[1])] = lvl
        self.add_edge(v, m, e, m2, lvl)
        self.reach((self.vid[e[2]], m2), lvl)
        return mark

    def undo(self, mark, lvl):
        ne, nr, nf = mark
        del self.edges[ne:]
        for x in self.reached[nr:]:
            del self.reach_level[x]
        del self.reached[nr:]
        del self.fresh_levels[nf:]
        for key in [key for key, l in self.chi_level.items() if l == lvl]:
            del self.chi[key]
            del self.chi_level[key]

    def _try(self, lvl, conflict):
        c = self.conflict()
        if c is None:
            c = self.dfs(lvl + 1)
        return c

    def dfs(self, lvl):
        """``True`` on success, otherwise a conflict set of levels."""
        self.tick()
        dec = self.next_decision()
        if dec is None:
            return True
        v, m = dec[1], dec[2]
        conflict = {self.reach_level[(v, m)]}
        if dec[0] == "eve":
            edges = self.outs[v]
            if self.order is not None:
                edges = self.order(self.vs[v], m, edges)
            for e in edges:
                opts, why = self.memory_options(m, e[1])
                conflict |= why
                for m2 in opts:
                    mark = self.apply(v, m, e, m2, lvl)
                    self.move[(v, m)] = (e, m2)
                    c = self._try(lvl, conflict)
                    if c is True:
                        return True
                    del self.move[(v, m)]
                    self.undo(mark, lvl)
                    if lvl not in c:
                        return c
                    conflict |= c
            conflict.discard(lvl)
            return conflict
        e = dec[3]
        opts, why = self.memory_options(m, e[1])
        conflict |= why
        for m2 in opts:
            mark = self.apply(v, m, e, m2, lvl)
            self.update[(v, m, e)] = m2
            c = self._try(lvl, conflict)
            if c is True:
                return True
            del self.update[(v, m, e)]
            self.undo(mark, lvl)
            if lvl not in c:
                return c
            conflict |= c
        conflict.discard(lvl)
        return conflict

    def strategy(self):
        vs = self.vs
        move = {}
        update = {}
        for (v, m), (e, m2) in self.move.items():
            move[(vs[v], m)] = (e, m2)
        for (v, m, e), m2 in self.update.items():
            update[(vs[v], m, e)] = m2
        # unreachable memory contexts: any legal completion
        for v in vs:
            for m in range(self.k):
                if self.game.owner[v] == EVE:
                    if (v, m) not in move:
                        e = self.game.out[v][0]
                        move[(v, m)] = (e, self._fill(m, e))
                else:
                    for e in self.game.out[v]:
                        if (v, m, e) not in update:
                            update[(v, m, e)] = self._fill(m, e)
        return FiniteMemoryStrategy(self.k, 0, move, update)

    def _fill(self, m, e):
        if e[1] == EPS:
            return m
        if self.chromatic:
            return self.chi.setdefault((m, e[1]), m)
        return m


def wins_with_memory(game, b, k, chromatic=False, eps_plays_win=False, budget=None, order=None,
                      chi=None):
    """A winning strategy with ``k`` memory states, or ``None``.

    Exhaustive up to the symmetries of memory names.  ``order`` may reorder
    Eve's candidate edges at ``(vertex, memory)``.  A fixed chromatic update
    ``chi[(m, letter)]`` leaves only Eve's edge choices to search; ``None``
    then only means that this memory structure does not suffice.
    """
    b = complete(b)
    if chi is not None:
        chromatic = True
    s = _StrategySearch(game, b, k, chromatic, eps_plays_win, budget, order)
    if chi is not None:
        for (m, c), m2 in chi.items():
            s.chi[(m, c)] = m2
            s.chi_level[(m, c)] = 0
        s.fresh_levels = [0] * (k - 1)
    s.reach((s.vid[game.initial], 0), 0)
    if s.dfs(1) is not True:
        return None
    return s.strategy()


def game_memory(game, b, k_max, chromatic=False, eps_plays_win=False, budget=None):
    """Least ``k <= k_max`` with a winning ``k``-memory strategy (``None`` if Eve loses)."""
    if not solve_game(game, b, eps_plays_win).eve_wins:
        return None
    for k in range(1, k_max + 1):
        if wins_with_memory(game, b, k, chromatic, eps_plays_win, budget) is not None:
            return k
    return k_max + 1


def avoidance_game(children):
    """Eve names one of ``children`` (tuples of letters) by an epsilon move;
    Adam then reads all letters of another child of his choice.

    If Adam repeats a single child forever, Eve must name it infinitely often
    to force a change, so she needs one memory state per child.  For
    ``W_n`` the children are the single colours; for the union of two
    objectives "two distinct letters of each side" they are the pairs
    ``(a_i, b_j)``.
    """
    children = [tuple(c) for c in children]
    letters = sorted({a for c in children for a in c})
    owners = {"E": EVE}
    edges = []
    for x, X in enumerate(children):
        owners[("pick", x)] = ADAM
        edges.append(("E", EPS, ("pick", x)))
        for y, Y in enumerate(children):
            if y == x:
                continue
            prev = ("pick", x)
            for i, a in enumerate(Y[:-1]):
                nxt = ("play", y, i)
                owners[nxt] = ADAM
                edges.append((prev, a, nxt))
                prev = nxt
            edges.append((prev, Y[-1], "E"))
    return GameArena.build(letters, "E", owners, edges)


def counter_chi(k, letters, step_letters=None):
    """Chromatic update that counts modulo ``k`` the letters in ``step_letters``."""
    step = set(letters if step_letters is None else step_letters)
    return {(m, a): (m + 1) % k if a in step else m for m in range(k) for a in letters}


# ---------------------------------------------------------------- witnesses

def bipartite_games(alphabet, include_eps=False):
    """Adam at ``u`` and Eve at ``v`` alternate; each offers a set of letters."""
    letters = list(alphabet) + ([EPS] if include_eps else [])
    subsets = [s for r in range(1, len(letters) + 1) for s in itertools.combinations(letters, r)]
    for sa in subsets:
        for se in subsets:
            if EPS in sa and EPS in se:
                continue
            edges = [("u", c, "v") for c in sa] + [("v", c, "u") for c in se]
            yield GameArena.build(alphabet, "u", {"u": ADAM, "v": EVE}, edges)


def prefix_games(alphabet):
    """Adam picks a letter, Eve picks a letter, then a sink loops on a set."""
    letters = list(alphabet)
    subsets = [s for r in range(1, len(letters) + 1) for s in itertools.combinations(letters, r)]
    for sa in subsets:
        for se in subsets:
            for sw in subsets:
                edges = [("u", c, "v") for c in sa] + [("v", c, "w") for c in se]
                edges += [("w", c, "w") for c in sw]
                yield GameArena.build(alphabet, "u", {"u": ADAM, "v": EVE, "w": EVE}, edges)


def choice_arena(graph_edges, initial, alphabet, subsets=None, jumps_after_letters=True):
    """Adam follows the graph and may, right after a letter, jump to a set
    ``X`` containing the current vertex; Eve then picks an element of ``X``.

    With ``jumps_after_letters`` each vertex ``v`` is split into an entry
    copy (where the jump is offered) and an exit copy (which must read a
    letter), so there are no plays made of epsilon edges only.
    """
    verts = sorted({x for (u, _, v) in graph_edges for x in (u, v)} | {initial}, key=repr)
    if subsets is None:
        subsets = [frozenset(s) for r in range(2, len(verts) + 1)
                   for s in itertools.combinations(verts, r)]
    owners = {}
    edges = []
    for v in verts:
        owners[("in", v)] = ADAM
        owners[("out", v)] = ADAM
        edges.append((("in", v), EPS, ("out", v)))
    for (u, c, v) in graph_edges:
        edges.append((("out", u), c, ("in", v)))
    for X in subsets:
        xv = ("set",) + tuple(sorted(X, key=repr))
        owners[xv] = EVE
        for v in X:
            edges.append((("in", v), EPS, xv))
            edges.append((xv, EPS, ("out", v)))
    return GameArena.build(alphabet, ("in", initial), owners, edges)


def random_lasso_graph(alphabet, size, rng):
    """Random finite tree whose leaves loop back to an ancestor or themselves."""
    parent = {0: None}
    edges = []
    for i in range(1, size):
        p = rng.randrange(i)
        parent[i] = p
        edges.append((p, rng.choice(alphabet), i))
    children = {p for p in parent.values() if p is not None}
    for v in range(size):
        if v not in children:
            anc = [v]
            x = v
            while parent[x] is not None:
                x = parent[x]
                anc.append(x)
            edges.append((v, rng.choice(alphabet), rng.choice(anc)))
    return edges


def word_game(alphabet, words):
    """Adam at ``0`` and Eve at ``1``; ``words`` gives the paths 0->0, 0->1,
    1->1 and 1->0 in that order.  An empty word becomes a single epsilon edge.
    """
    owners = {0: ADAM, 1: EVE}
    edges = []
    for (src, dst), w in zip([(0, 0), (0, 1), (1, 1), (1, 0)], words):
        w = tuple(w) or (EPS,)
        cur = src
        for i, c in enumerate(w):
            nxt = dst if i == len(w) - 1 else len(owners)
            owners.setdefault(nxt, EVE)
            edges.append((cur, c, nxt))
            cur = nxt
    return GameArena.build(alphabet, 0, owners, edges)


def random_word_games(alphabet, rng, trials, max_len=3):
    words = [w for n in range(max_len + 1) for w in itertools.product(alphabet, repeat=n)]
    for _ in range(trials):
        yield word_game(alphabet, [rng.choice(words) for _ in range(4)])


def graph_satisfies(graph_edges, initial, b):
    """Every infinite path from ``initial`` is accepted by deterministic ``b``."""
    b = complete(b)
    delta = b.delta
    out = {}
    for (u, c, v) in graph_edges:
        out.setdefault(u, []).append((c, v))
    ids = {(initial, b.initial): 0}
    queue = deque([(initial, b.initial)])
    edges = []
    while queue:
        x, q = queue.popleft()
        for c, y in out.get(x, ()):
            if c == EPS:
                pr, q2 = b.index + 1, q
            else:
                pr, q2 = delta[(q, c)]
            key = (y, q2)
            if key not in ids:
                ids[key] = len(ids)
                queue.append(key)
            edges.append((ids[(x, q)], ids[key], (pr + 1,), c))
    return _graph.find_good_cycle(len(ids), edges, [0], 1, witness=False) is None


def memory_lower_bound(b, k, budget=None, seed=0, random_trials=300, max_graph=5,
                       chromatic=False, word_trials=3000):
    """Search for a game won by Eve in which no ``k``-memory strategy wins.

    Structured families come first (two-vertex alternations, three-step
    prefix games), then random choice arenas over small graphs satisfying
    ``L(b)``, then random two-vertex word games.  Returns the witness arena
    or ``None``.
    """
    b = complete(b)
    rng = random.Random(seed)
    alphabet = list(b.alphabet)

    def candidates():
        yield from bipartite_games(alphabet)
        if len(alphabet) <= 3:
            yield from prefix_games(alphabet)
        for _ in range(random_trials):
            size = rng.randint(2, max_graph)
            g = random_lasso_graph(alphabet, size, rng)
            if not graph_satisfies(g, 0, b):
                continue
            verts = sorted({x for e in g for x in (e[0], e[2])})
            pairs = [frozenset(p) for p in itertools.combinations(verts, 2)]
            yield choice_arena(g, 0, alphabet, subsets=pairs)
        yield from random_word_games(alphabet, rng, word_trials)

    for game in candidates():
        if not solve_game(game, b).eve_wins:
            continue
        try:
            if wins_with_memory(game, b, k, chromatic=chromatic, budget=budget) is None:
                return game
        except BudgetExceeded:
            continue
    return None


# ---------------------------------------------------------------- Muller

@dataclass
class ZielonkaNode:
    label: frozenset
    accepting: bool
    children: list


def zielonka_tree(colours, family):
    """Zielonka tree of the Muller condition ``family`` over ``colours``.

    Empty sets are never the set of colours seen infinitely often, so they
    are ignored both in ``family`` and as candidate children.
    """
    fam = {frozenset(f) for f in family if f}

    def build(label):
        acc = label in fam
        cands = [frozenset(s) for r in range(len(label) - 1, 0, -1)
                 for s in itertools.combinations(sorted(label, key=repr), r)
                 if (frozenset(s) in fam) != acc]
        maximal = [s for s in cands if not any(s < t for t in cands)]
        return ZielonkaNode(label, acc, [build(s) for s in maximal])

    return build(frozenset(colours))


def djw_memory(colours, family):
    """Memory needed by Eve for a Muller condition, via the Zielonka tree.

    Leaves need one state; a node where Eve wins needs the sum over its
    children (she has to cycle through escapes from each), a node where Adam
    wins needs the maximum.
    """
    def mem(node):
        if not node.children:
            return 1
        vals = [mem(c) for c in node.children]
        return sum(vals) if node.accepting else max(vals)

    return mem(zielonka_tree(colours, family))


def wn_family(n):
    colours = [str(i) for i in range(1, n + 1)]
    fam = [frozenset(s) for r in range(2, n + 1) for s in itertools.combinations(colours, r)]
    return colours, fam


# ---------------------------------------------------------------- W_n

def _reach_paths(game, v0):
    """BFS tree from ``v0``: parent edge per reached vertex."""
    parent = {v0: None}
    queue = deque([v0])
    while queue:
        u = queue.popleft()
        for e in game.out[u]:
            if e[2] not in parent:
                parent[e[2]] = e
                queue.append(e[2])
    return parent


def _shortest_to_colour(game, v, colour):
    """Shortest path from ``v`` whose last edge is coloured ``colour``."""
    parent = _reach_paths(game, v)
    best = None
    for u in parent:
        for e in game.out[u]:
            if e[1] == colour:
                path = [e]
                x = u
                while parent[x] is not None:
                    path.append(parent[x])
                    x = parent[x][0]
                path.reverse()
                if best is None or len(path) < len(best):
                    best = path
    return best


def wn_two_memory_strategy(game, n):
    """Two-memory strategy for W_n in an Eve-only arena.

    For every vertex let ``c1 < c2`` be the two least colours reachable from
    it.  In memory 0 Eve follows a shortest path producing ``c1`` and switches
    to memory 1 once ``c1`` is produced; in memory 1 she does the same with
    ``c2`` and switches back.
    """
    from .zoo import wn_automaton
    colours = [str(i) for i in range(1, n + 1)]
    b = wn_automaton(n)
    for v in sorted(game.vertices, key=repr):
        if not solve_game(game.with_initial(v), b).eve_wins:
            raise ValueError(f"vertex {v!r} is losing for W_{n}")
    move = {}
    for v in game.vertices:
        parent = _reach_paths(game, v)
        seen = sorted({e[1] for u in parent for e in game.out[u] if e[1] != EPS}, key=int)
        if len(seen) < 2:
            raise ValueError(f"vertex {v!r} reaches fewer than two colours")
        c1, c2 = seen[0], seen[1]
        for m, c in ((0, c1), (1, c2)):
            path = _shortest_to_colour(game, v, c)
            e = path[0]
            move[(v, m)] = (e, 1 - m if e[1] == c else m)
    assert set(colours) >= {e[1] for e in game.edges if e[1] != EPS}
    return FiniteMemoryStrategy(2, 0, move, {})

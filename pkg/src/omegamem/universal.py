"""Signature graphs, progress measures, and universal graphs built as
cascades of epsilon-complete automata with signature graphs."""

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property

from .automata import EPS, LabelledGraph, complete

SIZE_GUARD = 10 ** 5


def _arity(d):
    if d < 2 or d % 2:
        raise ValueError(f"index must be even and at least 2, got {d}")
    return d // 2


def _prefix(s, y):
    """Coordinates of ``s`` indexed by odd priorities ``<= y``."""
    return tuple(s[:(y + 1) // 2])


def s_edge(s, y, s2):
    """Edge ``s -y-> s2`` of the signature graph.

    Coordinate ``i`` of a tuple belongs to the odd priority ``2i+1``.  For
    even ``y`` the coordinates below ``y`` must not increase
    lexicographically; for odd ``y`` those up to ``y`` must strictly
    decrease.
    """
    if len(s) != len(s2):
        raise ValueError("signatures of different arity")
    if y % 2 == 0:
        return _prefix(s, y - 1) >= _prefix(s2, y - 1)
    return _prefix(s, y) > _prefix(s2, y)


def signatures(kappa, d):
    n = _arity(d)
    if kappa ** n > SIZE_GUARD:
        raise ValueError(f"{kappa}^{n} signatures exceed the size guard")
    return list(itertools.product(range(kappa), repeat=n))


def build_S(kappa, d):
    """The signature graph with all tuples below ``kappa`` as vertices."""
    verts = signatures(kappa, d)
    edges = frozenset((s, y, s2) for s in verts for s2 in verts for y in range(d)
                      if s_edge(s, y, s2))
    return LabelledGraph(tuple(verts), edges, verts[0])


def _least_above(t, y, kappa, n):
    """Least signature ``u`` with ``u -y-> t``, or ``None`` when it would
    need a value ``>= kappa``."""
    if y % 2 == 0:
        p = _prefix(t, y - 1)
        return p + (0,) * (n - len(p))
    p = list(_prefix(t, y))
    i = len(p) - 1
    while i >= 0:
        if p[i] + 1 < kappa:
            p[i] += 1
            return tuple(p[:i + 1]) + (0,) * (n - i - 1)
        i -= 1
    return None


def find_signatures(graph, d, kappa):
    """Least progress measure into the signature graph.

    ``graph`` has integer priority labels.  Returns a map from vertices to
    signatures such that every edge is mapped onto an edge of the signature
    graph, or ``None`` if some vertex needs a value ``>= kappa`` (in
    particular when a path violates the parity condition).
    """
    n = _arity(d)
    zero = (0,) * n
    phi = {v: zero for v in graph.vertices}
    preds = {v: [] for v in graph.vertices}
    for e in graph.edges:
        preds[e[2]].append(e)
    work = list(graph.vertices)
    queued = set(work)
    out = graph.out
    while work:
        u = work.pop()
        queued.discard(u)
        best = phi[u]
        for (_, y, v) in out[u]:
            need = _least_above(phi[v], y, kappa, n)
            if need is None:
                return None
            if need > best:
                best = need
        if best != phi[u]:
            phi[u] = best
            for (w, _, _) in preds[u]:
                if w not in queued:
                    queued.add(w)
                    work.append(w)
    return phi


def is_morphism(graph, phi, target_has_edge):
    """Every edge ``u -c-> v`` of ``graph`` maps to an edge of the target."""
    bad = []
    for (u, c, v) in graph.edges:
        if not target_has_edge(phi[u], c, phi[v]):
            bad.append((u, c, v))
    return bad


@dataclass
class UniversalGraph:
    """Cascade of an epsilon-completed automaton with the signature graph.

    Vertices are pairs ``(state, signature)``.  Edges are computed on demand
    since the full graph is large; ``materialise`` builds it explicitly.

    With ``ties`` set, two vertices with the same signature whose states are
    linked only by odd epsilon transitions in both directions get an extra
    epsilon edge, oriented by a fixed order on states.  Without it such
    vertices are unrelated and the graph is not epsilon-total.  The extra
    edge projects onto the epsilon transition of priority ``index - 1``, and
    any cycle of the signature graph has an even minimum below that, so the
    graph still satisfies the objective and stays well-founded.
    """

    aut: object
    part: object
    kappa: int
    ties: bool = True

    @cached_property
    def by_pair(self):
        res = {}
        for t in self.aut.transitions:
            res.setdefault((t.src, t.letter, t.dst), []).append(t.priority)
        return res

    @cached_property
    def tie_pairs(self):
        d = self.aut.index
        odd = set(range(1, d, 2))
        rank = {q: i for i, q in enumerate(sorted(self.aut.states, key=repr))}
        res = set()
        for (q, c, q2), ys in self.by_pair.items():
            if c != EPS or q == q2 or rank[q] > rank[q2]:
                continue
            back = self.by_pair.get((q2, EPS, q), ())
            if odd <= set(ys) and odd <= set(back) and \
                    not any(y % 2 == 0 for y in list(ys) + list(back)):
                res.add((q, q2))
        return res

    @cached_property
    def sigs(self):
        return signatures(self.kappa, self.aut.index)

    @property
    def size(self):
        return len(self.aut.states) * len(self.sigs)

    def has_edge(self, u, c, v):
        ys = self.by_pair.get((u[0], c, v[0]), ())
        if any(s_edge(u[1], y, v[1]) for y in ys):
            return True
        return self.ties and c == EPS and u[1] == v[1] and (u[0], v[0]) in self.tie_pairs

    def part_of(self, v):
        return self.part.part[v[0]]

    def materialise(self):
        edges = set()
        for t in self.aut.transitions:
            for s in self.sigs:
                for s2 in self.sigs:
                    if s_edge(s, t.priority, s2):
                        edges.add(((t.src, s), t.letter, (t.dst, s2)))
        if self.ties:
            for (q, q2) in self.tie_pairs:
                for s in self.sigs:
                    edges.add(((q, s), EPS, (q2, s)))
        verts = tuple((q, s) for q in self.aut.states for s in self.sigs)
        return LabelledGraph(verts, frozenset(edges), (self.aut.initial, self.sigs[0]))


def universal_graph(aut_eps, part, kappa, ties=True):
    return UniversalGraph(aut_eps, part, kappa, ties)


@dataclass
class TotalityReport:
    """Outcome of the two-case argument for epsilon-totality.

    ``reoriented`` counts ordered pairs where the predicted edge is absent
    but the pair is related the other way.  ``ties`` are unordered pairs
    related only by a tie-breaking edge.  ``failures`` are unordered pairs
    with no epsilon edge in either direction.
    """

    checked: int = 0
    case_even: int = 0
    case_odd: int = 0
    reoriented: int = 0
    ties: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def _x0(rel, b, b2, d):
    for x in range(0, d, 2):
        if (b, x, b2) in rel:
            return x
    return d + 2


def _y0(s, s2, d):
    for y in range(1, d, 2):
        if _prefix(s2, y) > _prefix(s, y):
            return y
    return d + 1


def eps_totality_diagnostic(U, samples=None, seed=0):
    """Re-derive epsilon-totality of ``U`` inside each part.

    For an ordered pair ``(b, s)``, ``(b2, s2)`` of a part, ``x0`` is the
    least even priority of an epsilon transition ``b -> b2`` and ``y0`` the
    least odd priority where ``s2`` exceeds ``s``.  If ``x0 < y0`` an edge
    ``(b, s) -> (b2, s2)`` is predicted, otherwise one in the other
    direction.
    """
    aut = U.aut
    d = aut.index
    rel = {(t.src, t.priority, t.dst) for t in aut.transitions if t.letter == EPS}
    members = {}
    for q in aut.states:
        members.setdefault(U.part.part[q], []).append(q)
    verts = [(q, s) for m in sorted(members) for q in members[m] for s in U.sigs]
    pairs = [(u, v) for i, u in enumerate(verts) for v in verts[i + 1:]
             if U.part_of(u) == U.part_of(v)]
    if samples is not None and samples < len(pairs):
        pairs = random.Random(seed).sample(pairs, samples)
    plain = UniversalGraph(U.aut, U.part, U.kappa, ties=False)
    rep = TotalityReport()
    for pair in pairs:
        for (u, v) in (pair, pair[::-1]):
            (b, s), (b2, s2) = u, v
            x0, y0 = _x0(rel, b, b2, d), _y0(s, s2, d)
            rep.checked += 1
            if x0 < y0:
                rep.case_even += 1
                hit = plain.has_edge(u, EPS, v)
            else:
                rep.case_odd += 1
                hit = plain.has_edge(v, EPS, u)
            if not hit:
                rep.reoriented += 1
        u, v = pair
        if plain.has_edge(u, EPS, v) or plain.has_edge(v, EPS, u):
            continue
        if U.has_edge(u, EPS, v) or U.has_edge(v, EPS, u):
            rep.ties.append(pair)
        else:
            rep.failures.append(pair)
    return rep


# ---------------------------------------------------------------- trees

def random_tree(alphabet, size, rng, back_prob=0.5):
    """Finite encoding of an infinite tree: a rooted tree on ``size`` nodes
    whose leaves carry a back-edge to an ancestor (their infinite suffix).
    Internal nodes may also branch.  The unfolding from node 0 is a tree."""
    parent = {0: None}
    children = {0: []}
    for v in range(1, size):
        p = rng.randrange(v)
        parent[v] = p
        children[v] = []
        children[p].append(v)
    edges = set()
    for v in range(size):
        for w in children[v]:
            edges.add((v, rng.choice(alphabet), w))
        if not children[v] or rng.random() < back_prob * 0.2:
            anc = [v]
            while parent[anc[-1]] is not None:
                anc.append(parent[anc[-1]])
            edges.add((v, rng.choice(alphabet), rng.choice(anc)))
    return LabelledGraph(tuple(range(size)), frozenset(edges), 0)


def label_with_run(tree, b):
    """Product of the tree encoding with deterministic ``b``; edges carry the
    priorities of ``b``.  The unfolding equals the unfolding of ``tree``
    relabelled by the run of ``b``."""
    b = complete(b)
    delta = b.delta
    start = (tree.initial, b.initial)
    seen = {start}
    stack = [start]
    edges = set()
    out = tree.out
    while stack:
        t, q = stack.pop()
        for (_, c, t2) in out[t]:
            y, q2 = delta[(q, c)]
            edges.add(((t, q), y, (t2, q2)))
            if (t2, q2) not in seen:
                seen.add((t2, q2))
                stack.append((t2, q2))
    return LabelledGraph(tuple(sorted(seen, key=repr)), frozenset(edges), start)


@dataclass
class UniversalityReport:
    trials: int = 0
    embedded: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)


def embed_tree(tree, b, U):
    """Morphism from the unfolding of ``tree`` into ``U``, defined on the
    product of ``tree`` with ``b``: a node goes to ``(run state, signature)``.
    Returns ``(phi, bad_edges)`` or ``None`` when no signature fits."""
    prod = label_with_run(tree, b)
    mu = find_signatures(prod, U.aut.index, U.kappa)
    if mu is None:
        return None
    phi = {x: (x[1], mu[x]) for x in prod.vertices}
    letter_of = {}
    for (t, c, t2) in tree.edges:
        letter_of.setdefault((t, t2), set()).add(c)
    b = complete(b)
    delta = b.delta
    bad = []
    for x in prod.vertices:
        t, q = x
        for (_, c, t2) in tree.out[t]:
            x2 = (t2, delta[(q, c)][1])
            if not U.has_edge(phi[x], c, phi[x2]):
                bad.append((x, c, x2))
    return phi, bad


def check_universality_sample(U, b, trials, seed=0, max_size=None, alphabet=None):
    """Embed ``trials`` random trees satisfying ``L(b)`` into ``U``.

    Trees have fewer than ``U.kappa`` nodes.  Trees that do not satisfy the
    objective are redrawn; the number of redraws is reported as skipped.
    """
    from .games import graph_satisfies

    rng = random.Random(seed)
    alphabet = list(alphabet or b.alphabet)
    max_size = max_size or U.kappa - 1
    rep = UniversalityReport()
    while rep.trials < trials:
        tree = random_tree(alphabet, rng.randint(1, max_size), rng)
        if not graph_satisfies(tree.edges, tree.initial, b):
            rep.skipped += 1
            continue
        rep.trials += 1
        res = embed_tree(tree, b, U)
        if res is None:
            rep.failures.append((tree, "no signatures"))
        elif res[1]:
            rep.failures.append((tree, res[1]))
        else:
            rep.embedded += 1
    return rep

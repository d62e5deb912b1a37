"""From a well-founded graph satisfying an objective of memory ``k`` to a
``k``-blowup of it that is well-founded and ``k``-wise epsilon-complete.

Adam walks in the graph and may at any point offer Eve a set of vertices
containing the current one; Eve continues from a vertex of her choice.  A
``k``-memory winning strategy in this choice arena is read back as a blowup
whose epsilon edges record Eve's choices.
"""

import itertools
from dataclasses import dataclass, field

from . import _graph
from .automata import EPS, LabelledGraph, MemoryPartition
from .completeness import is_graph_eps_complete
from .games import ADAM, EVE, GameArena, graph_satisfies, solve_game, wins_with_memory


class StructurationError(Exception):
    pass


def structuration_arena(graph, alphabet, subsets="pairs"):
    """Choice arena over ``graph``.  ``subsets`` is ``"pairs"`` or ``"all"``."""
    verts = sorted(graph.vertices, key=repr)
    sizes = [2] if subsets == "pairs" else range(2, len(verts) + 1)
    owners = {("v", v): ADAM for v in verts}
    edges = [(("v", u), c, ("v", v)) for (u, c, v) in graph.edges]
    for r in sizes:
        for X in itertools.combinations(verts, r):
            xv = ("set",) + X
            owners[xv] = EVE
            for v in X:
                edges.append((("v", v), EPS, xv))
                edges.append((xv, EPS, ("v", v)))
    return GameArena.build(alphabet, ("v", graph.initial), owners, edges)


@dataclass
class StructurationResult:
    graph: LabelledGraph
    partition: MemoryPartition
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(not v for v in self.checks.values())


def graph_blowup_violations(big, part, small):
    """Letter edges of ``big`` project onto ``small``, epsilon edges stay in
    their part, and every edge of ``small`` lifts from every copy.  Extra
    epsilon edges inside a part are allowed."""
    errs = []
    have = set()
    for (u, c, v) in big.edges:
        if c == EPS:
            if part.part[u] != part.part[v]:
                errs.append(("eps-leaves-part", u, v))
        elif (u[0], c, v[0]) not in small.edges:
            errs.append(("not-a-lift", u, c, v))
        have.add((u, c, v[0]))
    for (u, c, v) in small.edges:
        for m in range(part.k):
            if ((u, m), c, v) not in have:
                errs.append(("missing-lift", (u, m), c, v))
    return errs


def eps_cycles(graph):
    n_of = {v: i for i, v in enumerate(graph.vertices)}
    succ = [[] for _ in n_of]
    for (u, c, v) in graph.edges:
        if c == EPS:
            succ[n_of[u]].append(n_of[v])
    out = []
    for comp in _graph.components(len(n_of), succ):
        if len(comp) > 1 or comp[0] in succ[comp[0]]:
            out.append(sorted((graph.vertices[i] for i in comp), key=repr))
    return out


def _rewire(vertices, edges, base_eps):
    """Replace each epsilon SCC by a strict total order that extends the
    epsilon edges of the base graph."""
    idx = {v: i for i, v in enumerate(vertices)}
    succ = [[] for _ in vertices]
    for (u, c, v) in edges:
        if c == EPS:
            succ[idx[u]].append(idx[v])
    comp_of = {}
    comps = _graph.components(len(vertices), succ)
    for ci, comp in enumerate(comps):
        for i in comp:
            comp_of[vertices[i]] = ci
    keep = {e for e in edges
            if e[1] != EPS or comp_of[e[0]] != comp_of[e[2]]}
    for comp in comps:
        if len(comp) < 2:
            continue
        members = sorted((vertices[i] for i in comp), key=repr)
        order = _linear_extension(members, base_eps)
        for i, u in enumerate(order):
            for v in order[i + 1:]:
                keep.add((u, EPS, v))
    return keep


def _linear_extension(members, base_eps):
    inside = set(members)
    indeg = {v: 0 for v in members}
    succ = {v: [] for v in members}
    for (u, v) in base_eps:
        if u in inside and v in inside and u != v:
            succ[u].append(v)
            indeg[v] += 1
    order = []
    ready = sorted((v for v in members if indeg[v] == 0), key=repr)
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort(key=repr)
    if len(order) != len(members):
        raise StructurationError("the base graph is not well-founded")
    return order


def structuration(graph, b, k, chromatic=False, subsets="pairs", budget=None):
    """Build a well-founded ``k``-wise epsilon-complete ``k``-blowup of
    ``graph`` that still satisfies ``L(b)``."""
    if not graph_satisfies(graph.edges, graph.initial, b):
        raise StructurationError("the graph does not satisfy the objective")
    arena = structuration_arena(graph, b.alphabet, subsets)
    if not solve_game(arena, b, eps_plays_win=True).eve_wins:
        raise StructurationError("Eve loses the choice arena")
    strat = wins_with_memory(arena, b, k, chromatic=chromatic, eps_plays_win=True, budget=budget)
    if strat is None:
        raise StructurationError(f"no winning strategy with memory {k} on the choice arena")
    vertices = [(v, m) for v in sorted(graph.vertices, key=repr) for m in range(k)]
    edges = set()
    for (u, c, v) in graph.edges:
        e = (("v", u), c, ("v", v))
        for m in range(k):
            m2 = m if c == EPS else strat.update[(("v", u), m, e)]
            edges.add(((u, m), c, (v, m2)))
    for xv in arena.vertices:
        if arena.owner[xv] != EVE:
            continue
        for m in range(k):
            e, _ = strat.move[(xv, m)]
            chosen = e[2][1]
            for v in xv[1:]:
                if v != chosen:
                    edges.add(((v, m), EPS, (chosen, m)))
    base_eps = {(u, v) for (u, c, v) in graph.edges if c == EPS}
    lifted_eps = {((u, m), (v, m)) for (u, v) in base_eps for m in range(k)}
    edges = _rewire(vertices, edges, lifted_eps)
    out = LabelledGraph(tuple(vertices), frozenset(edges), (graph.initial, strat.init))
    part = MemoryPartition(k, {x: x[1] for x in vertices})
    checks = {
        "blowup": graph_blowup_violations(out, part, graph),
        "complete": is_graph_eps_complete(out, part),
        "well_founded": eps_cycles(out),
        "satisfies": [] if graph_satisfies(out.edges, out.initial, b) else ["lasso rejected"],
    }
    return StructurationResult(out, part, checks)

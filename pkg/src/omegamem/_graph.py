"""Small integer-graph kernels shared by the automata and game code.

Graphs are given as edge lists over vertices ``0..n-1``.  Every edge is a
tuple ``(src, dst, prios, label)`` where ``prios`` is a tuple of integers,
one per coordinate.  The central query is whether some reachable cycle has an
even minimum on every coordinate at once.
"""

from collections import deque


def reachable(n, succ, sources):
    seen = [False] * n
    queue = deque()
    for s in sources:
        if not seen[s]:
            seen[s] = True
            queue.append(s)
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return seen


def scc(n, succ, allowed=None):
    """Iterative Tarjan.  Returns a component id per vertex (-1 if excluded)."""
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1 or (allowed is not None and not allowed[root]):
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, i = work[-1]
            nbrs = succ[u]
            if i < len(nbrs):
                work[-1] = (u, i + 1)
                v = nbrs[i]
                if allowed is not None and not allowed[v]:
                    continue
                if index[v] == -1:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, 0))
                elif on_stack[v]:
                    low[u] = min(low[u], index[v])
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    low[p] = min(low[p], low[u])
                if low[u] == index[u]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = ncomp
                        if w == u:
                            break
                    ncomp += 1
    return comp


def components(n, succ):
    """Strongly connected components as lists of vertices."""
    groups = {}
    for v, c in enumerate(scc(n, succ)):
        groups.setdefault(c, []).append(v)
    return list(groups.values())


def _sccs_of_edges(n, edges):
    succ = [[] for _ in range(n)]
    for e in edges:
        succ[e[0]].append(e[1])
    comp = scc(n, succ)
    groups = {}
    for e in edges:
        c = comp[e[0]]
        if c == comp[e[1]]:
            groups.setdefault(c, []).append(e)
    return list(groups.values())


def _bfs_path(n, edges, start, goal_test):
    """Shortest edge path from ``start`` to a vertex satisfying ``goal_test``."""
    if goal_test(start):
        return []
    out = [[] for _ in range(n)]
    for e in edges:
        out[e[0]].append(e)
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for e in out[u]:
            v = e[1]
            if v in parent:
                continue
            parent[v] = e
            if goal_test(v):
                path = []
                while parent[v] is not None:
                    path.append(parent[v])
                    v = parent[v][0]
                return path[::-1]
            queue.append(v)
    return None


def _cycle_through(n, comp_edges, required):
    """A closed walk inside one SCC that uses every edge in ``required``."""
    walk = []
    first = required[0]
    cur = first[0]
    for e in required:
        walk.extend(_bfs_path(n, comp_edges, cur, lambda v, t=e[0]: v == t))
        walk.append(e)
        cur = e[1]
    walk.extend(_bfs_path(n, comp_edges, cur, lambda v: v == first[0]))
    return walk


def _witness(n, edges, comp_edges, sources, r):
    mins = [min(e[2][i] for e in comp_edges) for i in range(r)]
    required = []
    for i in range(r):
        e = next(e for e in comp_edges if e[2][i] == mins[i])
        if e not in required:
            required.append(e)
    cycle = _cycle_through(n, comp_edges, required)
    start = cycle[0][0]
    best = None
    for s in sources:
        p = _bfs_path(n, edges, s, lambda v: v == start)
        if p is not None and (best is None or len(p) < len(best[1])):
            best = (s, p)
    return best[0], best[1], cycle


def _restrict_reachable(n, edges, sources):
    succ = [[] for _ in range(n)]
    for e in edges:
        succ[e[0]].append(e[1])
    seen = reachable(n, succ, sources)
    return [e for e in edges if seen[e[0]]]


def find_good_cycle(n, edges, sources, r, witness=True):
    """Search for a reachable cycle whose minimum is even on every coordinate.

    Uses SCC refinement: inside a component whose minimum on some coordinate
    is odd, every edge carrying that minimum is useless and is discarded.
    Returns ``None`` or ``(source, stem_edges, cycle_edges)`` (``True`` when
    ``witness`` is false).
    """
    live = _restrict_reachable(n, edges, sources)
    todo = _sccs_of_edges(n, live)
    while todo:
        comp = todo.pop()
        bad = None
        for i in range(r):
            m = min(e[2][i] for e in comp)
            if m % 2:
                bad = (i, m)
                break
        if bad is None:
            if not witness:
                return True
            return _witness(n, live, comp, sources, r)
        i, m = bad
        rest = [e for e in comp if e[2][i] != m]
        if rest:
            todo.extend(_sccs_of_edges(n, rest))
    return None


def find_good_cycle_thresholds(n, edges, sources, r, witness=True):
    """Same query, decided by enumerating vectors of even thresholds."""
    from itertools import product

    live = _restrict_reachable(n, edges, sources)
    values = []
    for i in range(r):
        values.append(sorted({e[2][i] for e in live if e[2][i] % 2 == 0}))
    for xs in product(*values):
        sub = [e for e in live if all(e[2][i] >= xs[i] for i in range(r))]
        for comp in _sccs_of_edges(n, sub):
            if all(any(e[2][i] == xs[i] for e in comp) for i in range(r)):
                if not witness:
                    return True
                return _witness(n, live, comp, sources, r)
    return None


def find_good_cycle_brute(n, edges, sources, r):
    """Exhaustive simple-cycle enumeration.  Only for tiny test graphs.

    Any good cycle decomposes into simple cycles, but a good closed walk need
    not be simple, so unions of simple cycles sharing an SCC are also tried.
    """
    from itertools import combinations

    live = _restrict_reachable(n, edges, sources)
    out = [[] for _ in range(n)]
    for e in live:
        out[e[0]].append(e)
    cycles = []

    def dfs(start, u, path, visited):
        for e in out[u]:
            v = e[1]
            if v == start:
                cycles.append(path + [e])
            elif v > start and v not in visited:
                visited.add(v)
                dfs(start, v, path + [e], visited)
                visited.discard(v)

    for s in range(n):
        dfs(s, s, [], {s})
    verts = [frozenset(x for e in c for x in (e[0], e[1])) for c in cycles]
    for size in range(1, min(len(cycles), 4) + 1):
        for combo in combinations(range(len(cycles)), size):
            # the chosen cycles must be chainable into one closed walk
            joined = set(verts[combo[0]])
            rest = list(combo[1:])
            while rest:
                nxt = next((c for c in rest if verts[c] & joined), None)
                if nxt is None:
                    break
                joined |= verts[nxt]
                rest.remove(nxt)
            if rest:
                continue
            es = [e for c in combo for e in cycles[c]]
            if all(min(e[2][i] for e in es) % 2 == 0 for i in range(r)):
                return True
    return False

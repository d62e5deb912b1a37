"""Exact memory computation for objectives given by deterministic parity automata.

The memory of ``L(B)`` is the least ``k`` for which some deterministic
k-blowup of ``B`` admits a k-wise epsilon-complete completion that still
recognises a subset of ``L(B)``.  Completions are described by signatures:
each state of the blowup gets a tuple indexed by the odd priorities, and the
epsilon transitions between two states of the same memory part follow from
lexicographic comparisons of signature prefixes (see ``canonical_completion``).
The search decides signatures and memory updates state by state and prunes
as soon as the decided part of the completion accepts a word outside
``L(B)``.
"""

import logging
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import _graph
from .automata import (EPS, AutomatonError, MemoryPartition, ParityAutomaton, Transition,
                       check_no_eps_omega, complete, equivalent, included, is_blowup)
from .completeness import completeness_violations

log = logging.getLogger(__name__)

DEFAULT_BUDGET = int(os.environ.get("OMEGAMEM_BUDGET", "2000000"))


class BudgetExceeded(RuntimeError):
    pass


def eps_priorities(s, s2, index):
    """Priorities ``y`` of the canonical epsilon transitions from ``s`` to ``s2``.

    For odd ``y`` the prefix of length ``(y+1)/2`` of ``s`` must be at least
    that of ``s2``; for even ``y`` the prefix of length ``y/2+1`` must be
    strictly larger.
    """
    h = index // 2
    j = 0
    while j < h and s[j] == s2[j]:
        j += 1
    if j == h:
        return list(range(1, index, 2))
    if s[j] > s2[j]:
        return [y for y in range(index) if y % 2 or y >= 2 * j]
    return [y for y in range(1, 2 * j, 2)]


def canonical_completion(aut, part, sig):
    """Add the epsilon transitions dictated by the signatures ``sig``."""
    ts = set(aut.transitions)
    for m in range(part.k):
        members = part.members(m)
        for q in members:
            for q2 in members:
                for y in eps_priorities(sig[q], sig[q2], aut.index):
                    ts.add(Transition(q, EPS, y, q2))
    return aut.replace(transitions=frozenset(ts))


@dataclass
class MemoryCertificate:
    """A k-blowup of ``B`` together with signatures describing its completion.

    ``route[(q, a, m)]`` is the memory after reading ``a`` in ``(q, m)``.  In
    chromatic mode ``chi[(m, a)]`` gives the same information and ``route``
    is derived from it.
    """

    k: int
    route: dict
    signatures: dict
    chi: dict = None

    def blowup(self, b):
        b = complete(b)
        ts = []
        for t in b.transitions:
            for m in range(self.k):
                ts.append(Transition((t.src, m), t.letter, t.priority,
                                     (t.dst, self.route[(t.src, t.letter, m)])))
        states = tuple((q, m) for q in b.states for m in range(self.k))
        return ParityAutomaton(states, b.alphabet, b.index, (b.initial, 0), frozenset(ts))

    def partition(self, b):
        b = complete(b)
        return MemoryPartition(self.k, {(q, m): m for q in b.states for m in range(self.k)},
                               self.chi)

    def completion(self, b):
        a = self.blowup(b)
        return canonical_completion(a, self.partition(b), self.signatures)


@dataclass
class CertificateReport:
    blowup: list
    complete: list
    eps_cycle: list
    language: object
    blowup_language: object

    @property
    def ok(self):
        return (not self.blowup and not self.complete and self.eps_cycle is None
                and bool(self.language) and bool(self.blowup_language))


def check_certificate(b, cert):
    """Independent re-validation of a certificate against ``B``."""
    b = complete(b)
    a = cert.blowup(b)
    part = cert.partition(b)
    aeps = canonical_completion(a, part, cert.signatures)
    errs = is_blowup(a, part, b)
    if cert.chi is not None:
        for (q, c, m), m2 in cert.route.items():
            if cert.chi[(m, c)] != m2:
                errs.append(("not-chromatic", q, c, m))
    cyc = check_no_eps_omega(aeps)
    lang = included(aeps, b) if cyc is None else None
    return CertificateReport(errs, completeness_violations(aeps, part), cyc, lang,
                             equivalent(a, b))


@dataclass
class MemoryResult:
    status: str
    k: int = None
    certificate: MemoryCertificate = None
    stats: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status == "ok"


class _Search:
    """Depth-first search with conflict-directed backjumping.

    Every product edge remembers the decision levels it depends on.  When the
    decided part already has a bad cycle, the levels behind the witness form
    the conflict; decisions outside it are skipped on the way back.
    """

    def __init__(self, b, k, chromatic, budget, deadline):
        self.b = b
        self.k = k
        self.chromatic = chromatic
        self.budget = budget
        self.deadline = deadline
        self.nodes = 0
        self.checks = 0
        self.qs = list(b.states)
        self.qid = {q: i for i, q in enumerate(self.qs)}
        self.letters = list(b.alphabet)
        self.nq = len(self.qs)
        self.index = b.index
        self.h = b.index // 2
        self.big = b.index + 2
        delta = b.delta
        # dB[p][a] = (priority, dst id)
        self.dB = [[(delta[(q, a)][0], self.qid[delta[(q, a)][1]]) for a in self.letters]
                   for q in self.qs]
        self.n = self.nq * k * self.nq
        self.sig = {}             # A id -> tuple of Fractions
        self.level = {}           # A id -> decision level of its placement
        self.placed = []
        self.members = [[] for _ in range(k)]
        self.route = {}           # (aid, a), or (m, a) in chromatic mode -> m2
        self.route_level = {}
        self.waiting = {}         # target A id -> list of (aid, a) routed to it
        self.fresh_levels = []    # levels that introduced memory 1, 2, ...
        self._own = []
        self.edges = []
        self.src = (self.qid[b.initial] * k) * self.nq + self.qid[b.initial]
        self.incl = residual_inclusions(b, self.qs)

    # ------------------------------------------------------------ helpers
    @property
    def used(self):
        return 1 + len(self.fresh_levels)

    def aid(self, q, m):
        return q * self.k + m

    def route_key(self, s, a):
        if self.chromatic:
            return (s % self.k, a)
        return (s, a)

    def target(self, s, a, m2):
        return self.aid(self.dB[s // self.k][a][1], m2)

    def add_sigma_edges(self, s, a, t):
        yq = self.dB[s // self.k][a][0]
        nq = self.nq
        deps = (self.level[s], self.route_level[self.route_key(s, a)], self.level[t])
        for p in range(nq):
            yp, p2 = self.dB[p][a]
            self.edges.append((s * nq + p, t * nq + p2, (yq, yp + 1), deps))

    def add_eps_edges(self, s, s2):
        ys = eps_priorities(self.sig[s], self.sig[s2], self.index)
        if not ys:
            return
        odd = [y for y in ys if y % 2]
        # a larger odd priority dominates smaller ones for cycle minima
        keep = [y for y in ys if y % 2 == 0] + ([max(odd)] if odd else [])
        nq = self.nq
        big = self.big
        deps = (self.level[s], self.level[s2])
        for y in keep:
            for p in range(nq):
                self.edges.append((s * nq + p, s2 * nq + p, (y, big), deps))

    def conflict(self):
        """``None`` when no bad cycle exists, else the set of levels behind one."""
        self.checks += 1
        res = _graph.find_good_cycle(self.n, self.edges, [self.src], 2)
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
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(self.nodes)

    # ------------------------------------------------------------ decisions
    def next_decision(self):
        for s in self.placed:
            for a in range(len(self.letters)):
                key = self.route_key(s, a)
                if key not in self.route:
                    return ("route", s, a), {self.level[s]}
                t = self.target(s, a, self.route[key])
                if t not in self.sig:
                    # t has to be placed because s is placed and routed to it
                    return ("place", t), {self.level[s], self.route_level[key]}
        return None, None

    def placement_options(self, t):
        """Signatures for a new member ``t`` of its part, up to order-equivalence.

        Any epsilon transition from ``s`` to ``s2`` lets a run continue with
        the residual language of ``s2``, so that residual must be included in
        the residual of ``s``.  Since first coordinates decide which jumps
        exist, candidates contradicting residual inclusion are dropped.
        """
        h = self.h
        m = t % self.k
        q = t // self.k
        members = self.members[m]
        others = [self.sig[s] for s in members]
        if not others:
            return [tuple([Fraction(0)] * h)]
        incl = self.incl
        qs = [s // self.k for s in members]

        def allowed(c):
            for q2, s in zip(qs, others):
                if c[0] >= s[0] and not incl[q2][q]:
                    return False
                if c[0] <= s[0] and not incl[q][q2]:
                    return False
            return True

        out = []

        def rec(prefix, group, level):
            vals = sorted({g[level] for g in group})
            for v in vals:
                sub = [g for g in group if g[level] == v]
                if level + 1 == h:
                    out.append(prefix + (v,))
                else:
                    rec(prefix + (v,), sub, level + 1)
            news = [vals[0] - 1]
            news += [(x + y) / 2 for x, y in zip(vals, vals[1:])]
            news.append(vals[-1] + 1)
            pad = tuple([Fraction(0)] * (h - level - 1))
            for v in news:
                out.append(prefix + (v,) + pad)

        rec((), others, 0)
        return [c for c in out if allowed(c)]

    def place(self, t, sigval, lvl):
        mark = len(self.edges)
        self.sig[t] = sigval
        self.level[t] = lvl
        m = t % self.k
        for s2 in self.members[m]:
            self.add_eps_edges(t, s2)
            self.add_eps_edges(s2, t)
        self.members[m].append(t)
        self.placed.append(t)
        for (s, a) in self.waiting.get(t, ()):
            self.add_sigma_edges(s, a, t)
        own = []
        if self.chromatic:
            for a in range(len(self.letters)):
                key = self.route_key(t, a)
                if key in self.route:
                    t2 = self.target(t, a, self.route[key])
                    self.waiting.setdefault(t2, []).append((t, a))
                    own.append(t2)
                    if t2 in self.sig:
                        self.add_sigma_edges(t, a, t2)
        self._own.append(own)
        return mark

    def unplace(self, t, mark):
        for t2 in self._own.pop():
            self.waiting[t2].pop()
        del self.edges[mark:]
        del self.sig[t]
        del self.level[t]
        self.members[t % self.k].pop()
        self.placed.pop()

    def set_route(self, s, a, m2, lvl):
        key = self.route_key(s, a)
        self.route[key] = m2
        self.route_level[key] = lvl
        mark = len(self.edges)
        # in chromatic mode one entry routes every placed state of the part
        sources = [s] if not self.chromatic else [x for x in self.placed if x % self.k == key[0]]
        added = []
        for x in sources:
            t = self.target(x, a, m2)
            self.waiting.setdefault(t, []).append((x, a))
            added.append(t)
            if t in self.sig:
                self.add_sigma_edges(x, a, t)
        return mark, added

    def unset_route(self, s, a, mark, added):
        key = self.route_key(s, a)
        del self.route[key]
        del self.route_level[key]
        del self.edges[mark:]
        for t in added:
            self.waiting[t].pop()

    def run(self):
        q0 = self.qid[self.b.initial]
        self.place(self.aid(q0, 0), tuple([Fraction(0)] * self.h), 0)
        return self.dfs(1) is True

    def dfs(self, lvl):
        """``True`` on success, otherwise a conflict set of levels."""
        self.tick()
        dec, why = self.next_decision()
        if dec is None:
            return True
        conflict = set(why)
        if dec[0] == "route":
            _, s, a = dec
            m = s % self.k
            opts = [m] + [x for x in range(self.used) if x != m]
            if self.used < self.k:
                # a fresh memory state constrains nothing yet
                opts.insert(0, self.used)
                # the other unused names are symmetric to the fresh one
                conflict.update(self.fresh_levels)
            for m2 in opts:
                fresh = m2 == self.used
                if fresh:
                    self.fresh_levels.append(lvl)
                mark, added = self.set_route(s, a, m2, lvl)
                c = self.conflict() if len(self.edges) > mark else None
                if c is None:
                    c = self.dfs(lvl + 1)
                    if c is True:
                        return True
                self.unset_route(s, a, mark, added)
                if fresh:
                    self.fresh_levels.pop()
                if lvl not in c:
                    return c
                conflict |= c
            conflict.discard(lvl)
            return conflict
        _, t = dec
        # the candidate list depends on the signatures already in the part
        conflict.update(self.level[s] for s in self.members[t % self.k])
        for sigval in self.placement_options(t):
            mark = self.place(t, sigval, lvl)
            c = self.conflict()
            if c is None:
                c = self.dfs(lvl + 1)
                if c is True:
                    return True
            self.unplace(t, mark)
            if lvl not in c:
                return c
            conflict |= c
        conflict.discard(lvl)
        return conflict

    def certificate(self):
        k = self.k
        h = self.h
        # order-preserving integer renaming per coordinate
        sig = {}
        for level in range(h):
            vals = sorted({v[level] for v in self.sig.values()})
            rank = {v: i for i, v in enumerate(vals)}
            for s, v in self.sig.items():
                sig.setdefault(s, []).append(rank[v[level]])
        top = len(self.sig) + 1
        route = {}
        chi = {} if self.chromatic else None
        for q in range(self.nq):
            for m in range(k):
                s = self.aid(q, m)
                for a in range(len(self.letters)):
                    m2 = self.route.get(self.route_key(s, a), m)
                    route[(self.qs[q], self.letters[a], m)] = m2
                    if chi is not None:
                        chi[(m, self.letters[a])] = m2
        sigs = {}
        for q in range(self.nq):
            for m in range(k):
                s = self.aid(q, m)
                # unreachable states sit on top: nothing reachable jumps to them
                sigs[(self.qs[q], m)] = tuple(sig[s]) if s in sig else (top,) + (0,) * (h - 1)
        return MemoryCertificate(k, route, sigs, chi)


def residual_inclusions(b, qs):
    """``incl[i][j]`` iff the language from ``qs[i]`` is included in that from ``qs[j]``."""
    return [[bool(included(b.rerooted(p), b.rerooted(p2))) for p2 in qs] for p in qs]


def solve_k(b, k, chromatic=False, budget=None, deadline=None):
    """Search for a certificate with exactly ``k`` memory states.

    Returns ``(certificate or None, stats)``.  Raises ``BudgetExceeded``.
    """
    b = complete(b)
    if not b.is_deterministic:
        raise AutomatonError("compute_memory needs a deterministic automaton")
    s = _Search(b, k, chromatic, budget, deadline)
    try:
        found = s.run()
    finally:
        stats = {"nodes": s.nodes, "checks": s.checks}
    return (s.certificate() if found else None), stats


def compute_memory(b, chromatic=False, k_max=None, budget=None, k_min=1, timeout=None, jobs=1):
    """Least ``k`` whose certificate exists, searched in increasing order.

    ``k_min`` lets callers skip values already excluded by a game witness.
    The budget counts search nodes summed over all ``k``.  With ``jobs > 1``
    batches of consecutive ``k`` are searched in parallel processes, each
    with the full remaining budget.
    """
    b = complete(b)
    if not b.is_deterministic:
        raise AutomatonError("compute_memory needs a deterministic automaton")
    if k_max is None:
        k_max = len(b.states)
    budget = DEFAULT_BUDGET if budget is None else budget
    deadline = None if timeout is None else time.monotonic() + timeout
    stats = {"per_k": {}}
    spent = 0
    ks = list(range(k_min, k_max + 1))
    step = max(1, jobs)
    pool = None
    if jobs > 1:
        import multiprocessing
        pool = multiprocessing.Pool(jobs)
    try:
        for lo in range(0, len(ks), step):
            batch = ks[lo:lo + step]
            left = budget - spent
            if pool is None:
                results = [_solve_or_budget(b, k, chromatic, left, deadline) for k in batch]
            else:
                futs = [pool.apply_async(_solve_or_budget, (b, k, chromatic, left, deadline))
                        for k in batch]
                results = (f.get() for f in futs)
            for k, (cert, st) in zip(batch, results):
                if st == "budget":
                    stats["per_k"][k] = "budget"
                    return MemoryResult("budget", k, None, stats)
                spent += st["nodes"]
                stats["per_k"][k] = st
                log.info("k=%d: %s", k, st)
                if cert is not None:
                    report = check_certificate(b, cert)
                    if not report.ok:
                        raise AssertionError(f"search produced an invalid certificate: {report}")
                    return MemoryResult("ok", k, cert, stats)
    finally:
        if pool is not None:
            # larger k may still be running
            pool.terminate()
    return MemoryResult("exceeds_kmax", k_max, None, stats)


def _solve_or_budget(b, k, chromatic, budget, deadline):
    try:
        return solve_k(b, k, chromatic, budget, deadline)
    except BudgetExceeded:
        return None, "budget"

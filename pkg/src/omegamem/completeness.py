"""k-wise epsilon-completeness, breakpoints, and validation of completions."""

from dataclasses import dataclass, field
from itertools import combinations

from .automata import EPS, InclusionResult, check_no_eps_omega, included, is_blowup


def eps_relation(aut):
    """Set of ``(src, priority, dst)`` over epsilon transitions."""
    return {(t.src, t.priority, t.dst) for t in aut.transitions if t.letter == EPS}


def completeness_violations(aut, part):
    """All ``(x, m, q, q2)`` where neither ``q -eps:x-> q2`` nor ``q2 -eps:x+1-> q``."""
    rel = eps_relation(aut)
    out = []
    for m in range(part.k):
        members = sorted(part.members(m), key=repr)
        for x in range(0, aut.index, 2):
            for q in members:
                for q2 in members:
                    if (q, x, q2) not in rel and (q2, x + 1, q) not in rel:
                        out.append((x, m, q, q2))
    return out


def is_k_wise_eps_complete(aut, part):
    return not completeness_violations(aut, part)


def is_graph_eps_complete(graph, part):
    """Graph version: every pair in a part is related by an epsilon edge."""
    out = []
    eps = {(u, v) for (u, c, v) in graph.edges if c == EPS}
    for m in range(part.k):
        members = sorted(part.members(m), key=repr)
        for q, q2 in combinations(members, 2):
            if (q, q2) not in eps and (q2, q) not in eps:
                out.append((m, q, q2))
    return out


@dataclass
class BreakpointTable:
    index: int
    entries: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def breakpoint(self, q, q2):
        return self.entries[frozenset((q, q2))][0]

    def direction(self, q, q2):
        return self.entries[frozenset((q, q2))][1]


def breakpoints(aut, part):
    """Breakpoint of every unordered pair of distinct states sharing a part.

    The breakpoint is the least even ``x`` for which the two states are not
    linked by epsilon transitions of priority ``x+1`` in both directions.  It
    is ``index`` when no such ``x`` exists.  The direction is the ordered pair
    ``(q, q2)`` with ``q -eps:x0-> q2``.  Consequences that must hold in any
    complete automaton without accepting epsilon cycles are checked and
    reported as violations.
    """
    d = aut.index
    rel = eps_relation(aut)
    table = BreakpointTable(d)
    for m in range(part.k):
        members = sorted(part.members(m), key=repr)
        for q, q2 in combinations(members, 2):
            x0 = d
            for x in range(0, d, 2):
                if (q, x + 1, q2) not in rel or (q2, x + 1, q) not in rel:
                    x0 = x
                    break
            direction = None
            if x0 < d:
                fwd, bwd = (q, x0, q2) in rel, (q2, x0, q) in rel
                if fwd and bwd:
                    table.violations.append(("even-two-cycle", q, q2, x0))
                elif fwd:
                    direction = (q, q2)
                elif bwd:
                    direction = (q2, q)
                else:
                    table.violations.append(("incomplete", q, q2, x0))
            table.entries[frozenset((q, q2))] = (x0, direction)
            if direction is None:
                continue
            a, b = direction
            for x in range(x0, d, 2):
                if (a, x, b) not in rel:
                    table.violations.append(("missing-even", a, b, x))
            for x in range(0, d, 2):
                if (b, x, a) in rel:
                    table.violations.append(("reverse-even", b, a, x))
    return table


@dataclass
class CompletionReport:
    blowup: list
    complete: list
    eps_cycle: list
    language: object

    @property
    def ok(self):
        return not self.blowup and not self.complete and self.eps_cycle is None and bool(self.language)

    def lines(self):
        yield f"blowup: {'ok' if not self.blowup else self.blowup[:3]}"
        yield f"complete: {'ok' if not self.complete else self.complete[:3]}"
        yield f"eps_cycle: {'none' if self.eps_cycle is None else self.eps_cycle}"
        lang = self.language
        yield f"language: {'ok' if lang else lang.counterexample}"


def sigma_part(aut_eps):
    return aut_eps.replace(transitions=frozenset(t for t in aut_eps.transitions if t.letter != EPS))


def validate_completion(base, aut_eps, part, reference):
    """Check that ``aut_eps`` is a valid completion of the k-automaton ``base``.

    * the letter transitions of ``aut_eps`` are exactly those of ``base``,
      and ``base`` is a blowup of ``reference`` when its states are pairs,
    * ``aut_eps`` is k-wise epsilon-complete,
    * no accepting epsilon cycle,
    * ``L(aut_eps)`` is included in ``L(reference)``.
    """
    errs = []
    if sigma_part(aut_eps).transitions != base.transitions:
        errs.append(("sigma-transitions-differ",))
    if base.states and all(isinstance(s, tuple) and len(s) == 2 and isinstance(s[1], int)
                           for s in base.states) and reference.states and \
            all(s[0] in set(reference.states) for s in base.states):
        errs.extend(is_blowup(base, part, reference))
    complete_errs = completeness_violations(aut_eps, part)
    cyc = check_no_eps_omega(aut_eps)
    # with an accepting epsilon cycle the language check is moot
    lang = included(aut_eps, reference) if cyc is None else InclusionResult()
    return CompletionReport(errs, complete_errs, cyc, lang)

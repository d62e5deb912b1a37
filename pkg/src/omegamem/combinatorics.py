"""Finitary combinatorics behind the bound on game sizes: n-words and their
regular synchronised subwords, lasso simplification in a product, extraction
of level-constant subtrees, and the explicit bound kappa.

An n-word is a sequence in which every letter of its alphabet occurs exactly
n times.  Occurrences are numbered from 0.
"""

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import mpmath


class NWordError(ValueError):
    pass


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class NWord:
    word: tuple
    n: int

    @classmethod
    def of(cls, word):
        """Wrap a string or sequence, checking that all letters occur equally often."""
        if isinstance(word, NWord):
            return word
        word = tuple(word)
        counts = Counter(word)
        ns = set(counts.values())
        if len(ns) > 1:
            raise NWordError(f"letters occur {sorted(ns)} times, not uniformly")
        return cls(word, ns.pop() if ns else 0)

    @property
    def letters(self):
        return sorted(set(self.word), key=repr)

    def occurrences(self):
        occ = {}
        for pos, a in enumerate(self.word):
            occ.setdefault(a, []).append(pos)
        return occ

    def __str__(self):
        return "".join(map(str, self.word))


def _occ(w, a):
    occ = w.occurrences()
    if a not in occ:
        raise NWordError(f"letter {a!r} does not occur")
    return occ[a]


def strongly_before(w, a, b):
    oa, ob = _occ(w, a), _occ(w, b)
    return oa[-1] < ob[0]


def weakly_before(w, a, b):
    """For all ``i < j`` the ``j``-th ``b`` is after the ``i``-th ``a``."""
    oa, ob = _occ(w, a), _occ(w, b)
    # enough to compare consecutive indices
    return all(ob[i + 1] > oa[i] for i in range(w.n - 1))


def word_relation(w, a, b):
    """Strongest of ``strongly-before``, ``interleaved``, ``weakly-before``
    or ``none`` that holds of ``a`` relative to ``b``."""
    w = NWord.of(w)
    if a == b:
        raise NWordError("letters must differ")
    if strongly_before(w, a, b):
        return "strongly-before"
    fwd, back = weakly_before(w, a, b), weakly_before(w, b, a)
    if fwd and back:
        return "interleaved"
    return "weakly-before" if fwd else "none"


def good_pair(w, a, b):
    return (strongly_before(w, a, b) or strongly_before(w, b, a)
            or (weakly_before(w, a, b) and weakly_before(w, b, a)))


@dataclass
class RegularResult:
    blocks: list = None
    pair: tuple = None

    def __bool__(self):
        return self.pair is None


def is_regular_word(w):
    """Blocks of interleaved letters in strongly-before order, or a bad pair."""
    w = NWord.of(w)
    letters = w.letters
    for a, b in itertools.combinations(letters, 2):
        if not good_pair(w, a, b):
            return RegularResult(pair=(a, b))
    occ = w.occurrences()
    blocks = []
    for a in sorted(letters, key=lambda c: occ[c][0]):
        if blocks and not strongly_before(w, blocks[-1][-1], a):
            blocks[-1].append(a)
        else:
            blocks.append([a])
    return RegularResult(blocks=[frozenset(bl) for bl in blocks])


def p_subword(w, P):
    """Keep the ``i``-th occurrence of each letter for ``i`` in ``P``."""
    w = NWord.of(w)
    P = set(P)
    if P and (min(P) < 0 or max(P) >= w.n):
        raise NWordError(f"occurrence indices {sorted(P)} out of range for a {w.n}-word")
    seen = Counter()
    out = []
    for a in w.word:
        if seen[a] in P:
            out.append(a)
        seen[a] += 1
    return NWord(tuple(out), len(P))


def _restrict(w, letters):
    return NWord(tuple(a for a in w.word if a in letters), w.n)


def _two_letters(w, a, b, n):
    """Size-``n`` index set making ``a, b`` good in a word with ``w.n >= n*n``."""
    oa, ob = _occ(w, a), _occ(w, b)
    for i in range(w.n - n + 1):
        for x, y in ((oa, ob), (ob, oa)):
            if x[i + n - 1] < y[i]:
                return list(range(i, i + n))
    return [j * n for j in range(n)]


def required_length(n, k, alphabet_size):
    """Multiplicity from which :func:`extract_regular` is guaranteed to succeed.

    Each bad pair of letters in each word costs one square root, so the
    construction needs ``n ** (2 ** (k * pairs))``.
    """
    pairs = alphabet_size * (alphabet_size - 1) // 2
    return n ** (2 ** (k * pairs))


def extract_regular(words, n):
    """Index set ``P`` of size ``n`` whose ``P``-subwords are all regular.

    Follows the staged construction: fix the pairs of letters one at a time
    with the two-letter case, word after word.  Pairs that are already good
    are skipped, since being good survives synchronised subwords.
    """
    words = [NWord.of(w) for w in words]
    if not words:
        return list(range(n))
    total = {w.n for w in words}
    if len(total) != 1:
        raise ExtractionError("words must have the same multiplicity")
    current = list(range(total.pop()))
    for w in words:
        for a, b in itertools.combinations(w.letters, 2):
            sub = _restrict(p_subword(w, current), {a, b})
            if good_pair(sub, a, b):
                continue
            target = math.isqrt(len(current))
            if target < n:
                raise ExtractionError(
                    f"multiplicity too small: {len(current)} occurrences left, need {n * n}")
            chosen = _two_letters(sub, a, b, target)
            current = [current[i] for i in chosen]
    P = current[:n]
    if len(P) < n:
        raise ExtractionError("multiplicity smaller than n")
    for w in words:
        if not is_regular_word(p_subword(w, P)):
            raise AssertionError("extraction produced a non-regular subword")
    return P


def brute_force_regular(words, n):
    """All index sets of size ``n`` with regular subwords (test oracle)."""
    words = [NWord.of(w) for w in words]
    out = []
    for P in itertools.combinations(range(words[0].n), n):
        if all(is_regular_word(p_subword(w, P)) for w in words):
            out.append(list(P))
    return out


def random_nword(letters, n, rng):
    word = [a for a in letters for _ in range(n)]
    rng.shuffle(word)
    return NWord(tuple(word), n)


def random_regular_word(letters, n, rng):
    """Random blocks, each a sequence of shuffled rounds of its letters."""
    letters = list(letters)
    rng.shuffle(letters)
    cuts = sorted(rng.sample(range(1, len(letters)), rng.randint(0, len(letters) - 1)))
    blocks = [letters[i:j] for i, j in zip([0] + cuts, cuts + [len(letters)])]
    word = []
    for block in blocks:
        # the i-th round holds the i-th occurrence of every letter of the block
        for _ in range(n):
            r = list(block)
            rng.shuffle(r)
            word.extend(r)
    w = NWord(tuple(word), n)
    assert is_regular_word(w), w
    return w


# ---------------------------------------------------------------- lassos

class ProductEdge(NamedTuple):
    src: object
    letter: object
    prios: tuple
    dst: object


@dataclass
class ProductLasso:
    stem: list
    cycle: list = field(default_factory=list)

    def validate(self):
        path = self.stem + self.cycle
        for e, f in zip(path, path[1:]):
            if e.dst != f.src:
                raise ValueError(f"edges {e} and {f} do not chain")
        if not self.cycle:
            raise ValueError("empty cycle")
        if self.cycle[-1].dst != self.cycle[0].src:
            raise ValueError("cycle does not close")
        if self.stem and self.stem[-1].dst != self.cycle[0].src:
            raise ValueError("stem does not reach the cycle")

    def cycle_min(self, side):
        return min(e.prios[side] for e in self.cycle)


def _loop_erase(edges):
    """Remove internal cycles; the result has no repeated state."""
    out = []
    pos = {}
    if not edges:
        return out
    pos[edges[0].src] = 0
    for e in edges:
        if e.dst in pos:
            cut = pos[e.dst]
            for f in out[cut:]:
                pos.pop(f.dst, None)
            del out[cut:]
            pos[e.dst] = cut
            continue
        out.append(e)
        pos[e.dst] = len(out)
    return out


def _shorten(seg, side, y):
    """Shortest-by-erasure subrun of ``seg`` keeping one edge of priority ``y``."""
    for i, e in enumerate(seg):
        if e.prios[side] == y:
            return _loop_erase(seg[:i]) + [e] + _loop_erase(seg[i + 1:])
    return _loop_erase(seg)


def simplify_lasso(lasso, n, accepting=1):
    """Subrun of a product lasso that is ``2n**2``-simple for the side
    ``accepting`` while keeping the minimal cycle priorities of both sides.

    Between consecutive edges carrying the accepting side's cycle minimum,
    internal cycles are removed, keeping one edge with the other side's
    cycle minimum when the segment had one.
    """
    lasso.validate()
    other = 1 - accepting
    z = lasso.cycle_min(accepting)
    y = lasso.cycle_min(other)
    cyc = lasso.cycle
    last = max(i for i, e in enumerate(cyc) if e.prios[accepting] == z)
    stem = lasso.stem + cyc[:last + 1]
    rot = cyc[last + 1:] + cyc[:last + 1]
    out, seg = [], []
    kept_y = False
    for e in rot:
        if e.prios[accepting] == z:
            part = _shorten(seg, other, y) if not kept_y else _loop_erase(seg)
            kept_y = kept_y or any(f.prios[other] == y for f in part) or e.prios[other] == y
            out.extend(part)
            out.append(e)
            seg = []
        else:
            seg.append(e)
    res = ProductLasso(_loop_erase(stem), out)
    res.validate()
    return res


def is_simple(lasso, ell, accepting=1):
    """Every infix of length ``ell`` of the unrolled cycle holds its minimum."""
    z = lasso.cycle_min(accepting)
    marks = [e.prios[accepting] == z for e in lasso.cycle]
    if len(marks) >= ell:
        twice = marks + marks
        return all(any(twice[i:i + ell]) for i in range(len(marks)))
    return True


def is_subrun(small, big):
    """``small`` arises from ``big`` by deleting edges (on the unrolled runs)."""
    seq = big.stem + big.cycle * (len(small.cycle) + len(small.stem) + 1)
    it = iter(seq)
    return all(any(e == f for f in it) for e in small.stem + small.cycle)


def product_lasso(a, b, word):
    """Run of the product of two deterministic automata on an ultimately
    periodic word, as a lasso whose cycle is a whole number of periods."""
    from .automata import complete
    a, b = complete(a), complete(b)
    state = (a.initial, b.initial)
    stem = []
    for c in word.prefix:
        stem.append(_pedge(a, b, state, c))
        state = stem[-1].dst
    seen = {}
    periods = []
    while state not in seen:
        seen[state] = len(periods)
        block = []
        for c in word.period:
            block.append(_pedge(a, b, state, c))
            state = block[-1].dst
        periods.append(block)
    start = seen[state]
    for block in periods[:start]:
        stem.extend(block)
    cycle = [e for block in periods[start:] for e in block]
    return ProductLasso(stem, cycle)


def _pedge(a, b, state, c):
    ya, qa = a.delta[(state[0], c)]
    yb, qb = b.delta[(state[1], c)]
    return ProductEdge(state, c, (ya, yb), (qa, qb))


# ---------------------------------------------------------------- trees

@dataclass
class LevelTree:
    """Finite tree given by a child map on nodes (tuples of child indices)."""
    children: dict
    root: tuple = ()

    @classmethod
    def full(cls, branching, depth):
        children = {}
        for h in range(depth):
            for node in itertools.product(range(branching), repeat=h):
                children[node] = [node + (i,) for i in range(branching)]
        return cls(children)

    def level(self, h):
        nodes = [self.root]
        for _ in range(h):
            nodes = [c for v in nodes for c in self.children.get(v, [])]
        return nodes

    def depth(self):
        h, nodes = 0, [self.root]
        while any(self.children.get(v) for v in nodes):
            nodes = [c for v in nodes for c in self.children.get(v, [])]
            h += 1
        return h

    def branchings(self):
        return {len(cs) for cs in self.children.values()}


@dataclass
class ExtractedTree:
    tree: LevelTree
    labels: list


def tree_extract_constant_labels(tree, labels, b):
    """Subtree of branching exactly ``b`` whose inner labelling is constant
    on each level.

    Bottom-up: each child is first made level-constant, then children are
    grouped by the tuple of their own level labels and a group of size at
    least ``b`` is kept (pigeonhole).
    """
    depth = tree.depth()
    L = {labels[v] for v in tree.children if tree.children[v]}
    need = b * max(1, len(L)) ** max(0, depth - 1)
    have = min(tree.branchings()) if tree.children else 0
    if depth and have < need:
        raise ExtractionError(f"branching {have} below the required {need}")

    def go(v):
        kids = tree.children.get(v, [])
        if not kids:
            return {}, ()
        results = [(c,) + go(c) for c in kids]
        groups = {}
        for c, sub, key in results:
            groups.setdefault(key, []).append((c, sub))
        key, members = max(groups.items(), key=lambda kv: len(kv[1]))
        if len(members) < b:
            raise ExtractionError(f"no {b} children agree below {v}")
        chosen = members[:b]
        children = {v: [c for c, _ in chosen]}
        for _, sub in chosen:
            children.update(sub)
        return children, (labels[v],) + key

    children, labs = go(tree.root)
    out = ExtractedTree(LevelTree(children, tree.root), list(labs))
    for h, lab in enumerate(out.labels):
        assert all(labels[v] == lab for v in out.tree.level(h)), (h, lab)
    return out


# ---------------------------------------------------------------- kappa

DIGIT_GUARD = 10 ** 6


def kappa_log10(k, sigma_size, q_size, d):
    """Decimal logarithm of kappa, to 30 significant digits."""
    _check_kappa_args(k, sigma_size, q_size, d)
    mpmath.mp.dps = 30
    k, s, q = mpmath.mpf(k), mpmath.mpf(sigma_size), mpmath.mpf(q_size)
    inner = (k ** 2 * q ** 2 * (s + 1)) ** (d // 2 + 1) * mpmath.log10(3) + mpmath.log10(2 * q ** 2)
    return q ** 2 * (s + 1) * mpmath.log10(k) + k * 2 ** (q ** 2) * inner


def kappa_digits(k, sigma_size, q_size, d):
    est = kappa_log10(k, sigma_size, q_size, d)
    e = int(mpmath.floor(est))
    if est < DIGIT_GUARD:
        # the estimate can be off by one near a power of ten
        x = kappa_bound(k, sigma_size, q_size, d)
        if x >= 10 ** (e + 1):
            e += 1
        elif x < 10 ** e:
            e -= 1
    return e + 1


def kappa_bound(k, sigma_size, q_size, d):
    """``k^(|Q|^2(|S|+1)) * (3^((k^2|Q|^2(|S|+1))^(d/2+1)) * 2|Q|^2)^(k 2^(|Q|^2))``.

    Raises ``OverflowError`` when the value has more than a million digits;
    use :func:`kappa_digits` for those.
    """
    _check_kappa_args(k, sigma_size, q_size, d)
    if kappa_log10(k, sigma_size, q_size, d) > DIGIT_GUARD:
        raise OverflowError("kappa has more than a million digits")
    q2, s1 = q_size ** 2, sigma_size + 1
    base = 3 ** ((k * k * q2 * s1) ** (d // 2 + 1)) * 2 * q2
    return k ** (q2 * s1) * base ** (k * 2 ** q2)


def _check_kappa_args(k, sigma_size, q_size, d):
    if min(k, sigma_size, q_size, d) < 1:
        raise ValueError("all arguments must be at least 1")

"""Plain-text formats for automata and games.

Both formats are line oriented.  ``#`` starts a comment, header lines are
``key: value`` and the remaining lines are whitespace-separated records.

Automaton::

    kind: parity-automaton
    alphabet: a b
    index: 2
    initial: q0
    k: 2                 # optional, with part lines
    part: (q0,0) 0
    chi: 0 a 1           # optional chromatic table
    q0 a 1 q1            # transitions: src letter priority dst

Game::

    kind: game
    alphabet: a b
    initial: v
    v eve                # vertices: name owner
    v a w                # edges: src letter dst

State and vertex names are atoms or parenthesised comma-separated tuples,
so the pairs and triples built by the library survive a round trip.
Decimal atoms are integers; a string of digits is written with a leading
quote, as in ``'1``.
"""

import re

from .automata import MemoryPartition, ParityAutomaton, Transition
from .games import ADAM, EVE, GameArena


class FormatError(ValueError):
    pass


_ATOM = re.compile(r"[^\s(),#:]+")


def encode(x):
    if isinstance(x, tuple):
        return "(" + ",".join(encode(y) for y in x) + ")"
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise FormatError(f"name {x!r} cannot be written")
    s = str(x)
    if not _ATOM.fullmatch(s) or s.startswith("'"):
        raise FormatError(f"name {s!r} cannot be written")
    if isinstance(x, str) and s.isdigit():
        return "'" + s
    return s


def _letter(a):
    """Letters are kept as strings and written verbatim."""
    s = str(a)
    if not _ATOM.fullmatch(s):
        raise FormatError(f"letter {s!r} cannot be written")
    return s


def decode(s):
    val, rest = _decode(s, 0)
    if rest != len(s):
        raise FormatError(f"trailing characters in {s!r}")
    return val


def _decode(s, i):
    if i < len(s) and s[i] == "(":
        items, i = [], i + 1
        if i < len(s) and s[i] == ")":
            return (), i + 1
        while True:
            v, i = _decode(s, i)
            items.append(v)
            if i >= len(s):
                raise FormatError(f"unbalanced parentheses in {s!r}")
            if s[i] == ")":
                return tuple(items), i + 1
            if s[i] != ",":
                raise FormatError(f"unexpected {s[i]!r} in {s!r}")
            i += 1
    m = _ATOM.match(s, i)
    if not m:
        raise FormatError(f"bad name {s!r}")
    tok = m.group()
    if tok.isdigit():
        return int(tok), m.end()
    if tok.startswith("'") and tok[1:].isdigit():
        return tok[1:], m.end()
    return tok, m.end()


def _lines(text):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _split(text):
    header, body = [], []
    for n, line in _lines(text):
        m = re.match(r"([a-z_]+):\s*(.*)$", line)
        if m:
            header.append((n, m.group(1), m.group(2)))
        else:
            body.append((n, line.split()))
    return header, body


def _one(header, key, required=True):
    vals = [v for _, k, v in header if k == key]
    if len(vals) > 1:
        raise FormatError(f"duplicate header {key!r}")
    if not vals:
        if required:
            raise FormatError(f"missing header {key!r}")
        return None
    return vals[0]


def _int(s, what):
    try:
        return int(s)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {s!r}") from None


def parse_automaton(text):
    """Returns ``(automaton, partition or None)``."""
    header, body = _split(text)
    kind = _one(header, "kind")
    if kind != "parity-automaton":
        raise FormatError(f"expected kind parity-automaton, got {kind!r}")
    alphabet = tuple(_one(header, "alphabet").split())
    index = _int(_one(header, "index"), "index")
    initial = decode(_one(header, "initial"))
    ts = []
    for n, toks in body:
        if len(toks) != 4:
            raise FormatError(f"line {n}: expected 'src letter priority dst'")
        ts.append(Transition(decode(toks[0]), toks[1], _int(toks[2], "priority"), decode(toks[3])))
    try:
        aut = ParityAutomaton.build(alphabet, index, initial, ts)
    except ValueError as e:
        raise FormatError(str(e)) from None
    k = _one(header, "k", required=False)
    part = None
    if k is not None:
        pmap = {}
        for n, key, v in header:
            if key == "part":
                toks = v.split()
                if len(toks) != 2:
                    raise FormatError(f"line {n}: expected 'part: state m'")
                pmap[decode(toks[0])] = _int(toks[1], "part")
        chi = {}
        for n, key, v in header:
            if key == "chi":
                toks = v.split()
                if len(toks) != 3:
                    raise FormatError(f"line {n}: expected 'chi: m letter m2'")
                chi[(_int(toks[0], "memory"), toks[1])] = _int(toks[2], "memory")
        missing = set(aut.states) - set(pmap)
        if missing:
            raise FormatError(f"states without a part: {sorted(map(repr, missing))}")
        try:
            part = MemoryPartition(_int(k, "k"), pmap, chi or None)
        except ValueError as e:
            raise FormatError(str(e)) from None
    return aut, part


def format_automaton(aut, part=None, comment=None):
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out += ["kind: parity-automaton",
            "alphabet: " + " ".join(_letter(a) for a in aut.alphabet),
            f"index: {aut.index}",
            f"initial: {encode(aut.initial)}"]
    if part is not None:
        out.append(f"k: {part.k}")
        for q in sorted(aut.states, key=repr):
            out.append(f"part: {encode(q)} {part.part[q]}")
        for (m, a), m2 in sorted((part.chromatic or {}).items(), key=repr):
            out.append(f"chi: {m} {a} {m2}")
    for t in sorted(aut.transitions, key=repr):
        out.append(f"{encode(t.src)} {t.letter} {t.priority} {encode(t.dst)}")
    return "\n".join(out) + "\n"


def parse_game(text):
    header, body = _split(text)
    kind = _one(header, "kind")
    if kind != "game":
        raise FormatError(f"expected kind game, got {kind!r}")
    alphabet = tuple(_one(header, "alphabet").split())
    initial = decode(_one(header, "initial"))
    owners, edges = {}, []
    for n, toks in body:
        if len(toks) == 2:
            if toks[1] not in (EVE, ADAM):
                raise FormatError(f"line {n}: owner must be eve or adam")
            owners[decode(toks[0])] = toks[1]
        elif len(toks) == 3:
            edges.append((decode(toks[0]), toks[1], decode(toks[2])))
        else:
            raise FormatError(f"line {n}: expected 'name owner' or 'src letter dst'")
    try:
        return GameArena.build(alphabet, initial, owners, edges)
    except ValueError as e:
        raise FormatError(str(e)) from None


def format_game(game, comment=None):
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out += ["kind: game",
            "alphabet: " + " ".join(_letter(a) for a in game.alphabet),
            f"initial: {encode(game.initial)}"]
    for v in sorted(game.vertices, key=repr):
        out.append(f"{encode(v)} {game.owner[v]}")
    for (u, c, v) in sorted(game.edges, key=repr):
        out.append(f"{encode(u)} {c} {encode(v)}")
    return "\n".join(out) + "\n"


def read_automaton(path):
    with open(path, encoding="utf-8") as f:
        return parse_automaton(f.read())


def write_automaton(path, aut, part=None, comment=None):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_automaton(aut, part, comment))


def read_game(path):
    with open(path, encoding="utf-8") as f:
        return parse_game(f.read())


def write_game(path, game, comment=None):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_game(game, comment))


def format_word(word):
    """``u (v)^w`` with letters separated by spaces."""
    stem = " ".join(_letter(a) for a in word.prefix)
    per = " ".join(_letter(a) for a in word.period)
    return (stem + " " if stem else "") + f"({per})^w"


def parse_word(text):
    from .automata import UltimatelyPeriodicWord
    m = re.fullmatch(r"\s*(.*?)\s*\((.*)\)\^w\s*", text)
    if not m:
        raise FormatError(f"expected 'u (v)^w', got {text!r}")
    stem = tuple(m.group(1).split())
    per = tuple(m.group(2).split())
    if not per:
        raise FormatError("empty period")
    return UltimatelyPeriodicWord(stem, per)


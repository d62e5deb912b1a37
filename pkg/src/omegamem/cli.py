"""Command line interface.

Every command prints ``key: value`` lines.  Exit codes: 0 when the property
holds or the value was computed, 1 when it fails (a witness is printed),
2 on bad input, 3 when the search budget is exhausted.
"""

import logging
import sys
from pathlib import Path

import click

from . import games, solver, union
from .automata import AutomatonError, complete
from .completeness import completeness_violations, sigma_part, validate_completion
from .fileio import (FormatError, encode, format_word, read_automaton, read_game,
                     write_automaton, write_game)

OK, FAILS, BAD_INPUT, BUDGET = 0, 1, 2, 3


class Stop(Exception):
    def __init__(self, code):
        self.code = code


def emit(key, value):
    click.echo(f"{key}: {value}")


def _budget(budget):
    return solver.DEFAULT_BUDGET if budget is None else budget


def _load(path, need_part=False):
    try:
        aut, part = read_automaton(path)
    except (OSError, FormatError) as e:
        emit("error", e)
        raise Stop(BAD_INPUT)
    if need_part and part is None:
        emit("error", f"{path}: no memory partition (k and part lines)")
        raise Stop(BAD_INPUT)
    return aut, part


def _deterministic(aut, path):
    if not aut.is_deterministic:
        emit("error", f"{path}: automaton is not deterministic")
        raise Stop(BAD_INPUT)
    return complete(aut)


@click.group()
@click.option("--seed", default=0, show_default=True, help="Seed for randomised searches.")
@click.option("--jobs", default=1, show_default=True, help="Worker processes for searches.")
@click.option("-v", "--verbose", count=True, help="Log progress to stderr.")
@click.pass_context
def main(ctx, seed, jobs, verbose):
    """Memory of omega-regular objectives and epsilon-complete automata."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"seed": seed, "jobs": max(1, jobs)}


def _run(fn, *args):
    try:
        code = fn(*args)
    except Stop as s:
        code = s.code
    sys.exit(code)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--chromatic", is_flag=True, help="Chromatic memory.")
@click.option("--kmax", type=int, default=None, help="Largest k tried.")
@click.option("--kmin", type=int, default=1, show_default=True,
              help="Smallest k tried (when smaller values are already excluded).")
@click.option("--budget", type=int, default=None, help="Search nodes (default $OMEGAMEM_BUDGET).")
@click.option("--cert", "cert_path", type=click.Path(), default=None,
              help="Where to write the certificate (default FILE.cert.pa).")
@click.option("--lower-bound", is_flag=True,
              help="Also search a game showing that k-1 memory states do not suffice.")
@click.pass_context
def memory(ctx, file, chromatic, kmax, kmin, budget, cert_path, lower_bound):
    """Memory of the objective of a deterministic automaton."""
    def go():
        b = _deterministic(_load(file)[0], file)
        res = solver.compute_memory(b, chromatic=chromatic, k_max=kmax, k_min=kmin,
                                    budget=_budget(budget), jobs=ctx.obj["jobs"])
        if res.status == "budget":
            emit("status", "budget")
            emit("k_reached", res.k)
            return BUDGET
        if res.status == "exceeds_kmax":
            emit("status", "exceeds_kmax")
            emit("kmax", res.k)
            return FAILS
        cert = res.certificate
        out = Path(cert_path) if cert_path else Path(str(file) + ".cert.pa")
        write_automaton(out, cert.completion(b), cert.partition(b),
                        comment=f"completion with {res.k} memory parts for {file}")
        emit("memory", res.k)
        emit("certificate", out)
        if lower_bound and res.k > 1:
            game = games.memory_lower_bound(b, res.k - 1, seed=ctx.obj["seed"],
                                            chromatic=chromatic)
            if game is None:
                emit("lower_bound", "not found")
            else:
                gpath = out.with_suffix(".game")
                write_game(gpath, game, comment=f"Eve wins but not with {res.k - 1} memory states")
                emit("lower_bound", res.k)
                emit("witness_game", gpath)
        return OK
    _run(go)


@main.command("check-complete")
@click.argument("file", type=click.Path())
def check_complete(file):
    """Is the automaton k-wise epsilon-complete for its partition?"""
    def go():
        aut, part = _load(file, need_part=True)
        bad = completeness_violations(aut, part)
        if not bad:
            emit("complete", "holds")
            return OK
        emit("complete", "fails")
        for x, m, q, q2 in bad[:20]:
            emit("violation", f"x={x} part={m} {encode(q)} {encode(q2)}")
        emit("violations", len(bad))
        return FAILS
    _run(go)


@main.command("check-cert")
@click.argument("file", type=click.Path())
@click.argument("cert", type=click.Path())
def check_cert(file, cert):
    """Validate a completion (as written by ``memory``) against an automaton."""
    def go():
        b = _deterministic(_load(file)[0], file)
        aut_eps, part = _load(cert, need_part=True)
        rep = validate_completion(sigma_part(aut_eps), aut_eps, part, b)
        for line in rep.lines():
            click.echo(line)
        emit("k", part.k)
        emit("valid", "yes" if rep.ok else "no")
        return OK if rep.ok else FAILS
    _run(go)


@main.command("union")
@click.argument("a1", type=click.Path())
@click.argument("a1eps", type=click.Path())
@click.argument("a2", type=click.Path())
@click.argument("a2eps", type=click.Path())
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True,
              help="Directory for union.pa and union.eps.pa.")
def union_cmd(a1, a1eps, a2, a2eps, out_dir):
    """Product automaton and completion for the union of two objectives.

    A1 and A2 are deterministic automata for the objectives, A1EPS and
    A2EPS validated completions of blowups of them (with partitions).
    """
    def go():
        w1 = _deterministic(_load(a1)[0], a1)
        w2 = _deterministic(_load(a2)[0], a2)
        if set(w1.alphabet) != set(w2.alphabet):
            emit("error", "the two objectives have different alphabets")
            return BAD_INPUT
        e1, p1 = _load(a1eps, need_part=True)
        e2, p2 = _load(a2eps, need_part=True)
        for name, w, e, p in ((a1eps, w1, e1, p1), (a2eps, w2, e2, p2)):
            rep = validate_completion(sigma_part(e), e, p, w)
            if not rep.ok:
                emit("error", f"{name} is not a valid completion: {list(rep.lines())}")
                return BAD_INPUT
        pref = union.is_prefix_increasing(w2)
        if not pref:
            emit("prefix_increasing", "no")
            emit("letter", pref.letter)
            emit("witness", format_word(pref.counterexample))
            return FAILS
        emit("prefix_increasing", "yes")
        zf = union.zero_free_transform(sigma_part(e2), e2, p2, check_prefix=False)
        if not zf.report.ok:
            emit("zero_free", "invalid")
            for line in zf.report.lines():
                click.echo(line)
            return FAILS
        base, aut_eps, part = union.union_completion(sigma_part(e1), e1, p1,
                                                     zf.aut, zf.aut_eps, zf.part)
        rep = union.check_union(w1, w2, base, aut_eps, part)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_automaton(out / "union.pa", base, part, comment="union product")
        write_automaton(out / "union.eps.pa", aut_eps, part, comment="union completion")
        emit("states", len(base.states))
        emit("index", base.index)
        emit("parts", part.k)
        for line in rep.lines():
            click.echo(line)
        emit("valid", "yes" if rep.ok else "no")
        emit("memory_bound", part.k)
        return OK if rep.ok else FAILS
    _run(go)


@main.command()
@click.argument("game_file", type=click.Path())
@click.argument("aut_file", type=click.Path())
@click.option("--k", "k", type=int, default=None, help="Look for a strategy with k memory states.")
@click.option("--chromatic", is_flag=True)
@click.option("--budget", type=int, default=None)
@click.pass_context
def oracle(ctx, game_file, aut_file, k, chromatic, budget):
    """Winner of a game, and optionally a k-memory winning strategy."""
    def go():
        try:
            game = read_game(game_file)
        except (OSError, FormatError) as e:
            emit("error", e)
            return BAD_INPUT
        b = _deterministic(_load(aut_file)[0], aut_file)
        if set(game.alphabet) - set(b.alphabet):
            emit("error", "game letters missing from the automaton")
            return BAD_INPUT
        sol = games.solve_game(game, b)
        emit("winner", "eve" if sol.eve_wins else "adam")
        if k is None or not sol.eve_wins:
            return OK
        try:
            strat = games.wins_with_memory(game, b, k, chromatic=chromatic,
                                           budget=_budget(budget))
        except solver.BudgetExceeded:
            emit("strategy", "budget")
            return BUDGET
        if strat is None:
            emit("strategy", "none")
            return OK
        emit("strategy", "found")
        emit("memory", k)
        for (v, m), (e, m2) in sorted(strat.move.items(), key=repr):
            emit("move", f"{encode(v)} {m} -> {e[1]} {encode(e[2])} {m2}")
        return OK
    _run(go)


def run():
    try:
        main()
    except AutomatonError as e:
        click.echo(f"error: {e}")
        sys.exit(BAD_INPUT)


if __name__ == "__main__":
    run()

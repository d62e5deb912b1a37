import random
from pathlib import Path

import pytest

from omegamem.automata import ParityAutomaton, UltimatelyPeriodicWord

FIXTURES = Path(__file__).parent / "fixtures"


def det(alphabet, index, initial, table):
    """Deterministic automaton from ``{(q, a): (priority, q2)}``."""
    ts = [(q, a, y, q2) for (q, a), (y, q2) in table.items()]
    return ParityAutomaton.build(tuple(alphabet), index, initial, ts)


def random_word(alphabet, rng, max_prefix=4, max_period=4):
    pre = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_prefix)))
    per = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_period)))
    return UltimatelyPeriodicWord(pre, per)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def inf_a():
    """One state, a:0 and b:1: infinitely many a."""
    return det("ab", 2, "q", {("q", "a"): (0, "q"), ("q", "b"): (1, "q")})


@pytest.fixture
def sigma_omega():
    return det("ab", 2, "q", {("q", "a"): (0, "q"), ("q", "b"): (0, "q")})


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

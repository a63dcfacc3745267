import json
import math
from pathlib import Path

from betauto.numfield import context_from_config

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "betauto" / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def load_config(name: str) -> dict:
    return json.loads(fixture_path(name).read_text())


def load_context(name: str):
    return context_from_config(load_config(name))


BINARY_PISOT = [
    "pisot_x2-x-1",
    "pisot_x3-x2-x-1",
    "pisot_x3-x-1",
    "pisot_x4-x3-x2-x-1",
    "pisot_x4-x3-x2+x-1",
]

KENYON_PAIRS = [
    (p, q) for q in range(2, 12) for p in range(1, q) if math.gcd(p, q) == 1
]

TRANSC_NAMES = [
    "1_over_X", "1_over_X+1", "1_over_X2-X", "1_over_X2-X+1", "1_over_X2",
    "1_over_X2+1", "1_over_X2+X", "1_over_X2+X+1", "X-1_over_X2",
    "X-1_over_X2+X-1", "1_over_X3-X2-X", "1_over_X3-X2", "1_over_X3-X2+1",
    "1_over_X3-X2+X",
]


def buildable_fixture_names():
    """Every bundled config whose relation automaton closes under the default
    caps (the Salem config is excluded: it is blocked and caps out)."""
    names = ["intro"]
    names += [f"kenyon_{p}_{q}" for p, q in KENYON_PAIRS]
    names += BINARY_PISOT
    names += [f"transc_{n}" for n in TRANSC_NAMES]
    names.append("free_x4-3x3-3x2-3x+1")  # blocked but closes immediately
    return names


# growth table: (p, q) -> (printed lambda, minimal polynomial, constant first)
KENYON_TABLE = {
    (1, 3): (2.6180, [1, -3, 1]),
    (1, 4): (2.6180, [1, -3, 1]),
    (2, 5): (2.8019, [1, 3, -4, 1]),
    (1, 6): (2.7321, [-2, -2, 1]),
    (1, 7): (2.7383, [-1, 3, 1, 0, -3, 1]),
    (3, 7): (2.8794, [1, 0, -3, 1]),
    (3, 8): (2.8136, [2, -3, -2, 1]),
    (1, 9): (2.6180, [1, -3, 1]),
    (2, 9): (2.7233, [-1, 0, 3, 1, 0, -3, 1]),
    (4, 9): (2.8794, [1, 0, -3, 1]),
    (1, 10): (2.6180, [1, -3, 1]),
    (3, 10): (2.7699, [3, 6, 9, 1, -4, -2, 1]),
    (2, 11): (2.7421, [-1, 1, 1, 3, -4, 1]),
    (3, 11): (2.8073, [-1, 3, -1, -9, 0, 0, 7, 1, -4, 1]),
    (5, 11): (2.9242, [-1, 3, -13, 20, -49, 15, -32, 32, -7, 6, -5, 1]),
}

# fixture suffix -> (printed lambda, minimal polynomial, constant first)
TRANSC_TABLE = {
    "1_over_X": (2.6180, [1, -3, 1]),
    "1_over_X+1": (2.6180, [1, -3, 1]),
    "1_over_X2-X": (2.8794, [1, 0, -3, 1]),
    "1_over_X2-X+1": (2.7971, [1, -1, -2, -2, 1]),
    "1_over_X2": (2.6180, [1, -3, 1]),
    "1_over_X2+1": (2.6180, [1, -3, 1]),
    "1_over_X2+X": (2.8794, [1, 0, -3, 1]),
    "1_over_X2+X+1": (2.7693, [-1, 1, -3, 1]),
    "X-1_over_X2": (2.7971, [1, -1, -2, -2, 1]),
    "X-1_over_X2+X-1": (2.8794, [1, 0, -3, 1]),
    "1_over_X3-X2-X": (2.9615, [1, 0, 0, -3, 1]),
    "1_over_X3-X2": (2.8584, [-1, 0, 1, 3, 0, 0, -3, 1]),
    "1_over_X3-X2+1": (2.8396, [1, 0, -3, -3, 4, 1, 3, 0, 0, -3, 1]),
    "1_over_X3-X2+X": (2.8444, [-2, 1, 8, -6, 0, 6, -16, 0, 7, -2, 7, -2, -3, 1]),
}

# the 28-step identity: sum of sign * base^(-k) equals 2b^3 - 5b^2 + b + 2
SALEM_TERMS = [
    (-1, 2), (-1, 3), (-1, 5), (-1, 6), (1, 7), (-1, 8), (-1, 12), (-1, 13),
    (-1, 14), (-1, 15), (1, 16), (1, 17), (1, 18), (-1, 19), (-1, 20),
    (1, 21), (-1, 23), (-1, 25), (-1, 26), (-1, 27), (1, 28),
]
SALEM_RHS = [2, 1, -5, 2]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the one-line acceptance verdicts where capture cannot hide them."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

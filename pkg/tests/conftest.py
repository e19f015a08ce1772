from collections import Counter
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import strategies as st

from hopfcoherence import Alphabet, HopfStructure

ACCEPTANCE_LINES: list[str] = []


def words(letters="ab", max_size=3):
    return st.text(alphabet=letters, max_size=max_size)


def brute_shuffle(u, v):
    """Interleavings by choosing which output positions come from ``u``."""
    n = len(u) + len(v)
    out = Counter()
    for pos in combinations(range(n), len(u)):
        chosen = set(pos)
        iu, iv = iter(u), iter(v)
        out["".join(next(iu) if i in chosen else next(iv) for i in range(n))] += 1
    return dict(out)


def gsr_row(deck, a):
    """Distribution of one GSR a-shuffle by enumerating all a^n packet labelings.

    A labeling assigns each output slot the packet it is drawn from; packet k
    is the k-th consecutive block of the deck with size = count of label k.
    """
    n = len(deck)
    out = Counter()
    for labels in product(range(a), repeat=n):
        sizes = [labels.count(k) for k in range(a)]
        starts = [sum(sizes[:k]) for k in range(a)]
        taken = [0] * a
        res = []
        for k in labels:
            res.append(deck[starts[k] + taken[k]])
            taken[k] += 1
        out["".join(res)] += 1
    return {w: Fraction(c, a ** n) for w, c in out.items()}


@pytest.fixture
def sh():
    return HopfStructure.shuffle_deconcat("ab", 8)


@pytest.fixture
def cd():
    return HopfStructure.concat_deshuffle("ab", 8)


@pytest.fixture
def ab():
    return Alphabet("ab")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

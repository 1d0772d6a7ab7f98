from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from credal.belief import CredalState

ATOM_POOL = ("E", "H", "L", "M")


def rationals01(open_left: bool = True, max_den: int = 40):
    """Rationals in (0, 1] (or [0, 1])."""
    low = 1 if open_left else 0
    return st.integers(1, max_den).flatmap(
        lambda d: st.integers(low, d).map(lambda n: Fraction(n, d)))


def states(signature, allow_zero: bool = False, max_weight: int = 20):
    size = 1 << len(signature)
    low = 0 if allow_zero else 1
    return (st.lists(st.integers(low, max_weight), min_size=size, max_size=size)
            .filter(lambda w: sum(w) > 0)
            .map(lambda w: CredalState.from_weights(signature, w)))


def signatures(min_size: int = 1, max_size: int = 3):
    return st.integers(min_size, max_size).map(lambda n: ATOM_POOL[:n])


def any_state(min_size: int = 1, max_size: int = 3, allow_zero: bool = False):
    return signatures(min_size, max_size).flatmap(lambda sig: states(sig, allow_zero))


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

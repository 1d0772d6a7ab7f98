"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the summary
section) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction

from credal.checks import (
    check_adams, check_combinators, check_commute, check_lts, check_protocol, check_simadams, check_toc,
)
from credal.meadow import render
from credal.prosecutor import QUOTED_BOUND, QUOTED_DENOMINATOR, prosecutor_conditioning
from credal.protocol import REFERENCE_GUESSES, global_soundness_instance
from credal.simulation import builtin_scenario, run_scenario

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

F = Fraction


def report(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def test_criterion_01_taxi():
    def go():
        sc = builtin_scenario("taxi")
        prior = sc.receiver().prior
        trace = run_scenario(sc)
        return prior.prob("E"), trace.final_probability(), trace.clean
    (pe, ph, clean), secs = timed(go)
    ok = pe == F(29, 100) and ph == F(12, 29) and clean and secs < 1
    report(1, ok, f"taxi P(E) = {render(pe)}, posterior P(H) = {render(ph)} in {secs:.3f}s")


def _randomized(number, fn, cases, limit=None):
    rep, secs = timed(fn, cases=cases, seed=0)
    ok = rep.ok and rep.attempted >= cases and (limit is None or secs < limit)
    report(number, ok, f"{rep.line()} in {secs:.2f}s")


def test_criterion_02_adams_bayes():
    _randomized(2, check_adams, 1000, limit=10)


def test_criterion_03_sim_adams_bayes():
    _randomized(3, check_simadams, 1000, limit=10)


def test_criterion_04_commutation():
    _randomized(4, check_commute, 1000, limit=10)


def test_criterion_05_global_soundness_failure():
    rep = global_soundness_instance(*REFERENCE_GUESSES)
    displayed = (rep.displayed_a, rep.displayed_b)
    ok = (displayed == (F(19, 35), F(16, 35)) and rep.displayed_a != rep.displayed_b
          and rep.h_a == rep.h_b and rep.l_a != rep.l_b)
    report(5, ok, f"L values {render(rep.displayed_a)} != {render(rep.displayed_b)}; "
                  f"H values {render(rep.h_a)} = {render(rep.h_b)}")


def test_criterion_06_transposition():
    _randomized(6, check_toc, 1000)


def test_criterion_07_prosecutor():
    (rep, secs) = timed(prosecutor_conditioning, 100000, 100, F(1, 10))
    oracle = 1 / (F(1, 10) + F(9, 10) * F(99, 99999))
    ok = rep.factor == oracle == F(11111, 1121) and rep.factor >= QUOTED_BOUND
    report(7, ok, f"factor {render(rep.factor)} >= {render(QUOTED_BOUND)}; flagged bound step "
                  f"{render(rep.bounding_denominator)} vs quoted {render(QUOTED_DENOMINATOR)} ({secs:.2f}s)")


def test_criterion_08_combinators():
    _randomized(8, check_combinators, 200)


def test_criterion_09_lts():
    _randomized(9, check_lts, 50)


def test_criterion_10_protocol():
    _randomized(10, check_protocol, 100)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)

"""Randomized exact-equality checks of the calculus' identities.

Each check draws seeded random priors (integer weights, normalized) and
parameters, evaluates both sides of an identity with exact rationals, and
returns a :class:`CheckReport`.  Draws that miss a precondition are redrawn.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import combinators as cb
from . import conditioning as cd
from .belief import CondVariant, CredalState, cond_prob, random_state
from .lts import (
    generate_fragment,
    identity_relation,
    incompatibility_witness,
    is_bisimulation,
    max_compatibility,
    parse_schemas,
    search_intermediate_bisimulations,
)
from .errors import BudgetExceeded
from .meadow import render
from .propspace import Atom, Not
from .prosecutor import QUOTED_BOUND, WORKED_EXAMPLE, boolean_cross_check, prosecutor_conditioning
from .protocol import REFERENCE_GUESSES, commutation_check, global_soundness_instance, posterior_formula
from .simulation import Mode, builtin_scenario, evidence_first, expected_posterior, run_moe_mode


@dataclass(frozen=True)
class CheckReport:
    theorem: str
    attempted: int
    passed: int
    counterexample: Optional[str] = None

    def __post_init__(self):
        if self.passed > self.attempted:
            raise ValueError("passed exceeds attempted")
        if (self.counterexample is not None) != (self.passed < self.attempted):
            raise ValueError("a counterexample is present exactly when some case failed")

    @property
    def ok(self) -> bool:
        return self.passed == self.attempted

    def line(self) -> str:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.theorem}: {self.passed}/{self.attempted}"
        if self.counterexample:
            head += f"; first counterexample: {self.counterexample}"
        return head


class _Tally:
    def __init__(self, theorem: str):
        self.theorem = theorem
        self.attempted = 0
        self.passed = 0
        self.first: Optional[str] = None

    def record(self, ok: bool, describe: Callable[[], str]) -> None:
        self.attempted += 1
        if ok:
            self.passed += 1
        elif self.first is None:
            self.first = describe()

    def report(self) -> CheckReport:
        return CheckReport(self.theorem, self.attempted, self.passed, self.first)


def random_likelihood(rng: random.Random, max_den: int = 64) -> Fraction:
    """A rational in ``(0, 1]`` with denominator at most ``max_den``."""
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(1, den), den)


def _positive_cells(P: CredalState, E: str, H: str) -> bool:
    return all(P.prob(s) > 0 for s in (f"{H} & {E}", f"{H} & !{E}", f"!{H} & {E}", f"!{H} & !{E}"))


def _draw(rng: random.Random, sig: Sequence[str], allow_zero: bool, E: str = "E", H: str = "H") -> CredalState:
    while True:
        P = random_state(rng, sig, allow_zero=allow_zero)
        if _positive_cells(P, E, H):
            return P


def _fmt_case(P: CredalState, **params) -> str:
    extra = ", ".join(f"{k}={render(v) if isinstance(v, Fraction) else v}" for k, v in params.items())
    return f"prior {P}" + (f", {extra}" if extra else "")


def _adams_oracle(P: CredalState, l: Fraction, l2: Fraction, E: str, H: str) -> List[Fraction]:
    """Four-term Adams combination evaluated minterm by minterm."""
    p_h, p_nh = P.prob(H), P.prob(f"!{H}")
    ratios = {
        (True, True): l / (P.prob(f"{E} & {H}") / p_h),
        (False, True): (1 - l) / (P.prob(f"!{E} & {H}") / p_h),
        (True, False): l2 / (P.prob(f"{E} & !{H}") / p_nh),
        (False, False): (1 - l2) / (P.prob(f"!{E} & !{H}") / p_nh),
    }
    e_mask, h_mask = P.mask(E), P.mask(H)
    return [m * ratios[(e, h)] for m, e, h in zip(P.mass, e_mask, h_mask)]


# ---------------------------------------------------------------------------


def check_adams(cases: int = 1000, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """Two single likelihood steps then Bayes: installed likelihoods, ratio, posterior, closed form."""
    rng = random.Random(seed)
    t = _Tally("adams")
    E, H = "E", "H"
    for _ in range(cases):
        P = _draw(rng, ("E", "H", "L"), allow_zero)
        l, l2 = random_likelihood(rng), random_likelihood(rng)
        Q = cd.slac(P, l, E, H)
        R = cd.slac(Q, l2, E, Not(Atom(H)))
        post = cd.bayes(R, E)
        r = l / l2
        items = [
            cond_prob(CondVariant.ZERO, Q, E, H) == l,
            cond_prob(CondVariant.ZERO, R, E, H) == l,
            cond_prob(CondVariant.ZERO, R, E, f"!{H}") == l2,
            cond_prob(CondVariant.ZERO, R, E, H) / cond_prob(CondVariant.ZERO, R, E, f"!{H}") == r,
            post.prob(H) == posterior_formula(r, P.prob(H)),
            list(R.mass) == _adams_oracle(P, l, l2, E, H),
            R == cd.slac(cd.slac(P, l2, E, Not(Atom(H))), l, E, H) == cd.dlac(P, l, l2, E, H),
        ]
        t.record(all(items), lambda: _fmt_case(P, l=l, l2=l2) + f", failing items {[i + 1 for i, ok in enumerate(items) if not ok]}")
    return t.report()


def check_simadams(cases: int = 1000, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """Double likelihood step then Bayes, including independence from the factorization of ``r``."""
    rng = random.Random(seed)
    t = _Tally("simadams")
    E, H = "E", "H"
    for _ in range(cases):
        P = _draw(rng, ("E", "H", "L"), allow_zero)
        l, l2 = random_likelihood(rng), random_likelihood(rng)
        c = random_likelihood(rng)
        Q = cd.dlac(P, l, l2, E, H)
        post = cd.bayes(Q, E)
        alt = cd.bayes(cd.dlac(P, l * c, l2 * c, E, H), E)
        r, ph, pnh = l / l2, P.prob(H), P.prob(f"!{H}")
        closed = []
        for m in range(len(P.mass)):
            x_he = P.mass[m] / P.prob(f"{H} & {E}") if P.mask(f"{H} & {E}")[m] else Fraction(0)
            x_nhe = P.mass[m] / P.prob(f"!{H} & {E}") if P.mask(f"!{H} & {E}")[m] else Fraction(0)
            closed.append((r * x_he * ph + x_nhe * pnh) / (r * ph + pnh))
        items = [
            cond_prob(CondVariant.ZERO, Q, E, H) == l,
            cond_prob(CondVariant.ZERO, Q, E, f"!{H}") == l2,
            cond_prob(CondVariant.ZERO, Q, E, H) / cond_prob(CondVariant.ZERO, Q, E, f"!{H}") == r,
            list(post.mass) == closed,
            post.prob(H) == posterior_formula(r, ph),
            post == alt,
        ]
        t.record(all(items), lambda: _fmt_case(P, l=l, l2=l2, c=c) + f", failing items {[i + 1 for i, ok in enumerate(items) if not ok]}")
    return t.report()


def check_commute(cases: int = 1000, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """Adams-then-Bayes equals Bayes-then-Jeffrey on two- and three-atom spaces."""
    rng = random.Random(seed)
    t = _Tally("commute")
    for i in range(cases):
        sig = ("E", "H") if i % 2 == 0 else ("E", "H", "L")
        P = _draw(rng, sig, allow_zero)
        l, l2 = random_likelihood(rng), random_likelihood(rng)
        res = commutation_check(P, "E", "H", l, l2)
        t.record(res.ok, lambda: _fmt_case(P, l=l, l2=l2)
                 + f", differs at {res.sentence}: {render(res.left)} vs {render(res.right)}")
    return t.report()


def check_gsfail(cases: int = 1, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """Guessed likelihoods over ``H, L``: equal value on ``H`` but different values on ``L``."""
    t = _Tally("gsfail")
    rep = global_soundness_instance(*REFERENCE_GUESSES)
    ok = (rep.ratio_a == rep.ratio_b == Fraction(3, 2)
          and rep.h_a == rep.h_b == posterior_formula(Fraction(3, 2), Fraction(1, 2))
          and (rep.displayed_a, rep.displayed_b) == (Fraction(19, 35), Fraction(16, 35))
          and {rep.l_a, rep.l_b} == {Fraction(19, 35), Fraction(16, 35)}
          and rep.l_a != rep.l_b)
    t.record(ok, lambda: f"values on L: {render(rep.l_a)}, {render(rep.l_b)}")
    return t.report()


def gsfail_summary() -> str:
    rep = global_soundness_instance(*REFERENCE_GUESSES)
    return (f"P(H | E) = {render(rep.h_a)} for both guesses; "
            f"P(L | E) = {render(rep.l_a)} vs {render(rep.l_b)} by minterm arithmetic; "
            f"closed form as displayed gives {render(rep.displayed_a)} vs {render(rep.displayed_b)}; "
            f"{render(rep.l_a)} != {render(rep.l_b)}")


def check_toc(cases: int = 1000, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """``P(H | E)`` is unchanged by single likelihood Adams conditioning on ``P(E | H)``."""
    rng = random.Random(seed)
    t = _Tally("toc")
    for i in range(cases):
        sig = ("E", "H") if i % 2 == 0 else ("E", "H", "L")
        P = _draw(rng, sig, allow_zero)
        l = random_likelihood(rng)
        before = cond_prob(CondVariant.ZERO, P, "H", "E")
        after = cond_prob(CondVariant.ZERO, cd.slac(P, l, "E", "H"), "H", "E")
        t.record(before == after, lambda: _fmt_case(P, l=l) + f", P(H|E) {render(before)} -> {render(after)}")
    return t.report()


def check_prosecutor(cases: int = 20, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """Worked instance factor and bound, plus Boolean-atom cross-checks on small partitions."""
    rng = random.Random(seed)
    t = _Tally("prosecutor")
    p, k, n = WORKED_EXAMPLE
    rep = prosecutor_conditioning(n, k, p)
    t.record(rep.factor == rep.formula_factor == Fraction(11111, 1121) and rep.factor >= QUOTED_BOUND,
             lambda: f"factor {render(rep.factor)}, closed form {render(rep.formula_factor)}")
    for _ in range(max(0, cases - 1)):
        n = rng.randint(2, 4)
        k = rng.randint(1, n - 1)
        den = rng.randint(n, 4 * n)
        p = Fraction(rng.randint(den // n + 1, den), den)
        rep = prosecutor_conditioning(n, k, p)
        ok = boolean_cross_check(n, k, p) and rep.factor == rep.formula_factor
        t.record(ok, lambda: f"n={n}, k={k}, p={render(p)}")
    return t.report()


def _pse_cycle(P: CredalState) -> bool:
    return all(cb.compose(cb.PSR("M"), cb.PSE("M", mode))(P) == P for mode in cd.ExpansionMode)


def check_combinators(cases: int = 200, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """Expansion/reduction identity and the three composed-pipeline identities."""
    rng = random.Random(seed)
    t = _Tally("combinators")
    for i in range(cases):
        sig = ("H",) if i % 2 == 0 else ("H", "L")
        P = random_state(rng, sig, allow_zero=allow_zero)
        while not 0 < P.prob("H") < 1:
            P = random_state(rng, sig, allow_zero=allow_zero)
        l, l2 = random_likelihood(rng), random_likelihood(rng)
        r = l / l2
        lift = cb.compose(cb.PSE("E", "1"), cb.PSE("H", "1"))
        base = cb.PSE("H", "1")(P).prob("H")
        target = posterior_formula(r, base)
        dl = cb.compose(cb.BC("E"), cb.DLAC(l, l2, "E", "H"), lift)
        sl = cb.compose(cb.BC("E"), cb.SLAC(l2, "E", Not(Atom("H"))), cb.SLAC(l, "E", "H"), lift)
        left = cb.PSR("E")(dl(P))
        p_hat = dl(P).prob("H")
        right = cb.compose(cb.PSR("E"), cb.JC(p_hat, "H"), cb.BC("E"), lift)(P)
        items = [_pse_cycle(P), dl(P).prob("H") == target, sl(P).prob("H") == target, left == right]
        t.record(all(items), lambda: _fmt_case(P, l=l, l2=l2) + f", failing items {[j + 1 for j, ok in enumerate(items) if not ok]}")
    return t.report()


LTS_SCHEMAS = ("BC(E);BC(!H);JC(1/2,H)", "BC(E);JC(1/3,H)", "BC(!E);BC(H | E)", "BC(E,PK);PSE(E,1/2)")


def random_fragment(rng: random.Random, allow_zero: bool = True, max_states: int = 8):
    """A fragment of at most ``max_states`` states from one or two random seeds, depth at most 2."""
    while True:
        seeds = [random_state(rng, ("E", "H"), max_weight=3, allow_zero=allow_zero)
                 for _ in range(rng.randint(1, 2))]
        schemas = parse_schemas(rng.choice(LTS_SCHEMAS))
        for depth in (rng.randint(1, 2), 1, 0):
            try:
                return generate_fragment(seeds, schemas, depth, max_states=max_states)
            except BudgetExceeded:
                continue


def check_lts(cases: int = 50, seed: int = 0, allow_zero: bool = True) -> CheckReport:
    """Identity and compatibility relations are bisimulations; search output re-verifies."""
    rng = random.Random(seed)
    t = _Tally("lts")
    _, _, witness = incompatibility_witness()
    t.record(not witness.ok and witness.clause == "transfer", lambda: f"incompatible pair accepted: {witness}")
    for _ in range(cases):
        F = random_fragment(rng, allow_zero=True)
        rid, rmax = is_bisimulation(identity_relation(F), F), is_bisimulation(max_compatibility(F), F)
        small = random_fragment(rng, allow_zero=True, max_states=6)
        found = search_intermediate_bisimulations(small, cap=6)
        ok = rid.ok and rmax.ok and all(is_bisimulation(R, small).ok for R in found)
        t.record(ok, lambda: f"fragment {F.dump()!r}: id {rid}, max {rmax}")
    return t.report()


def check_protocol(cases: int = 100, seed: int = 0, allow_zero: bool = False) -> CheckReport:
    """Notified parallel reporting is order-safe for every seed; naive reporting is not."""
    t = _Tally("protocol")
    notified = builtin_scenario("moe-parallel")
    naive = builtin_scenario("moe-naive")
    want = expected_posterior(notified)
    for s in range(seed, seed + cases):
        trace = run_moe_mode(Mode.PARALLEL_NOTIFIED, notified, seed=s)
        ok = trace.clean and not evidence_first(trace) and trace.final_state == want
        t.record(ok, lambda: f"seed {s}: {trace.lines()[-1]}")
    bad = [s for s in range(seed, seed + cases) if evidence_first(run_moe_mode(Mode.PARALLEL_NAIVE, naive, seed=s))]
    t.record(bool(bad), lambda: f"no evidence-first seed among {seed}..{seed + cases - 1}")
    return t.report()


CHECKS: Dict[str, Callable[..., CheckReport]] = {
    "adams": check_adams,
    "simadams": check_simadams,
    "commute": check_commute,
    "gsfail": check_gsfail,
    "toc": check_toc,
    "prosecutor": check_prosecutor,
    "combinators": check_combinators,
    "lts": check_lts,
    "protocol": check_protocol,
}


def run_checks(selector: str, cases: int, seed: int, allow_zero: bool = False) -> List[CheckReport]:
    """Run ``all`` or a comma-separated list of check names."""
    names = list(CHECKS) if selector == "all" else [s.strip() for s in selector.split(",")]
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(CHECKS)} or all")
    if cases < 1:
        raise ValueError("cases must be at least 1")
    return [CHECKS[n](cases=cases, seed=seed, allow_zero=allow_zero) for n in names]


__all__ = ["CHECKS", "CheckReport", "random_fragment", "random_likelihood", "run_checks"] + [
    f"check_{n}" for n in CHECKS
]

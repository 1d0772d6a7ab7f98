"""Adams conditioning on ``P(E | H) = 1`` over a partition of individuals.

The space has a hypothesis ``H``, an evidence ``E`` and a partition
``D_1 .. D_n`` (exactly one individual is in focus).  The prior puts
``P(D_i) = 1/n``, ``P(H & D_1) = p/n`` and spreads the remaining ``H`` mass
evenly over ``D_2 .. D_n``; ``E`` holds exactly on ``D_1 .. D_k``.

Because every minterm violating the partition has mass zero, the state is
stored as ``2n`` masses indexed by ``(i, H)`` instead of ``2**(n+2)``
Boolean minterms.  The Boolean form is kept for small ``n`` as a check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .belief import CondVariant, CredalState
from .conditioning import adams_masses, slac
from .errors import ParameterOutOfRange
from .meadow import RationalLike, mv, render

QUOTED_BOUND = Fraction(100, 19)
"""Lower bound on the update factor stated for the worked example ``(1/10, 100, 100000)``."""

QUOTED_DENOMINATOR = Fraction(1, 10) + Fraction(9, 100)
"""Denominator ``1/10 + 9/100`` written in that example's last step."""

WORKED_EXAMPLE = (Fraction(1, 10), 100, 100000)


def check_parameters(n: int, k: int, p: Fraction) -> None:
    if n < 2 or not 1 <= k < n:
        raise ParameterOutOfRange(f"need 1 <= k < n, got k = {k}, n = {n}")
    if not Fraction(1, n) < p <= 1:
        raise ParameterOutOfRange(f"need 1/n < p <= 1, got p = {render(p)}")


def selector_prior(n: int, k: int, p: RationalLike) -> Tuple[List[Fraction], Tuple[bool, ...], Tuple[bool, ...]]:
    """Masses over ``(i, H)`` pairs, ordered ``(1,H), (1,!H), (2,H), ...``, plus the E and H masks."""
    p = mv(p)
    check_parameters(n, k, p)
    rest = (1 - p) / ((n - 1) * n)
    mass, e_mask, h_mask = [], [], []
    for i in range(1, n + 1):
        h = p / n if i == 1 else rest
        mass += [h, Fraction(1, n) - h]
        e_mask += [i <= k, i <= k]
        h_mask += [True, False]
    return mass, tuple(e_mask), tuple(h_mask)


def update_factor_formula(n: int, k: int, p: RationalLike) -> Fraction:
    """``1 / (p + (1 - p) * (k - 1) / (n - 1))``."""
    p = mv(p)
    return 1 / (p + (1 - p) * Fraction(k - 1, n - 1))


@dataclass(frozen=True)
class ProsecutorReport:
    n: int
    k: int
    p: Fraction
    prior_h_d1: Fraction
    posterior_h_d1: Fraction
    posterior_h: Fraction
    posterior_h_given_e: Fraction
    factor: Fraction
    formula_factor: Fraction

    @property
    def denominator(self) -> Fraction:
        return 1 / self.factor

    @property
    def bounding_denominator(self) -> Fraction:
        """``p + (1 - p) * k / n``, which is at least the exact denominator."""
        return self.p + (1 - self.p) * Fraction(self.k, self.n)

    @property
    def meets_quoted_bound(self) -> bool:
        return self.factor >= QUOTED_BOUND

    @property
    def quoted_denominator_matches(self) -> bool:
        return self.bounding_denominator == QUOTED_DENOMINATOR

    def lines(self) -> List[str]:
        out = [
            f"n = {self.n}, k = {self.k}, p = {render(self.p)}",
            f"P(H & D_1) = {render(self.prior_h_d1)} -> {render(self.posterior_h_d1)}",
            f"update factor = {render(self.factor)}",
            f"closed-form factor = {render(self.formula_factor)}",
            f"factor >= {render(QUOTED_BOUND)}: {'yes' if self.meets_quoted_bound else 'no'}",
            f"posterior P(H) = {render(self.posterior_h)}, P(H | E) = {render(self.posterior_h_given_e)}",
        ]
        if (self.p, self.k, self.n) == WORKED_EXAMPLE and not self.quoted_denominator_matches:
            out.append(
                f"FLAG bound step: p + (1-p)*k/n = {render(self.bounding_denominator)}, "
                f"not {render(QUOTED_DENOMINATOR)} as quoted; the quoted bound {render(QUOTED_BOUND)} still holds"
            )
        return out


def prosecutor_conditioning(n: int, k: int, p: RationalLike) -> ProsecutorReport:
    """Install ``P(E | H) = 1`` by single likelihood Adams conditioning and report the effect on ``H & D_1``."""
    p = mv(p)
    mass, e_mask, h_mask = selector_prior(n, k, p)
    post = adams_masses(mass, e_mask, [(h_mask, Fraction(1))], CondVariant.ZERO)
    prior_h_d1, posterior_h_d1 = mass[0], post[0]
    post_h = sum((m for m, h in zip(post, h_mask) if h), Fraction(0))
    post_e = sum((m for m, e in zip(post, e_mask) if e), Fraction(0))
    post_he = sum((m for m, h, e in zip(post, h_mask, e_mask) if h and e), Fraction(0))
    return ProsecutorReport(
        n=n, k=k, p=p,
        prior_h_d1=prior_h_d1,
        posterior_h_d1=posterior_h_d1,
        posterior_h=post_h,
        posterior_h_given_e=post_he / post_e,
        factor=posterior_h_d1 / prior_h_d1,
        formula_factor=update_factor_formula(n, k, p),
    )


def boolean_prior(n: int, k: int, p: RationalLike) -> CredalState:
    """The same prior over Boolean atoms ``H, E, D_1 .. D_n`` (small ``n`` only)."""
    p = mv(p)
    mass, _, _ = selector_prior(n, k, p)
    sig = ("H", "E") + tuple(f"D_{i}" for i in range(1, n + 1))
    table = {}
    for i in range(1, n + 1):
        ds = " & ".join(f"D_{j}" if j == i else f"!D_{j}" for j in range(1, n + 1))
        e = "E" if i <= k else "!E"
        table[f"H & {e} & {ds}"] = mass[2 * (i - 1)]
        table[f"!H & {e} & {ds}"] = mass[2 * (i - 1) + 1]
    return CredalState.from_minterms(sig, table)


def boolean_cross_check(n: int, k: int, p: RationalLike) -> bool:
    """Whether the Boolean-atom computation reproduces the selector one on every ``(i, H)`` cell."""
    if n > 4:
        raise ParameterOutOfRange("the Boolean cross-check is limited to n <= 4")
    p = mv(p)
    post = slac(boolean_prior(n, k, p), 1, "E", "H")
    mass, e_mask, h_mask = selector_prior(n, k, p)
    compact = adams_masses(mass, e_mask, [(h_mask, Fraction(1))], CondVariant.ZERO)
    for i in range(1, n + 1):
        for j, h in enumerate(("H", "!H")):
            if post.prob(f"{h} & D_{i}") != compact[2 * (i - 1) + j]:
                return False
    return True


__all__ = [
    "ProsecutorReport", "QUOTED_BOUND", "QUOTED_DENOMINATOR", "WORKED_EXAMPLE", "boolean_cross_check",
    "boolean_prior", "prosecutor_conditioning", "selector_prior", "update_factor_formula",
]

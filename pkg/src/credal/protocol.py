"""Receiver-side processing of a transferred likelihood ratio.

Four pipelines turn a prior, a likelihood ratio ``r`` (or a likelihood pair)
and a confirmed evidence proposition into a posterior.  The first two keep
the evidence inside the receiver's proposition space; the last two work in a
temporary space over the hypothesis and then move the original state by
Jeffrey conditioning.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple

from . import combinators as cb
from . import conditioning as cd
from .belief import CondVariant, CredalState, cond_prob, likelihood_ratio
from .errors import AtomAlreadyPresent, CredalError, ParameterOutOfRange, UnknownAtom
from .lts import TransitionLabel, bc_label, step
from .meadow import RationalLike, mv, render
from .propspace import Atom, Not, minterm_sentence
from .trace import (
    Aborted,
    Applied,
    Delivered,
    EvidenceConfirmation,
    LikelihoodRatioReport,
    Message,
    Refused,
    ScenarioTrace,
    Sent,
)


class PipelineKind(enum.Enum):
    SLAC_TWICE_THEN_BC = 1
    DLAC_THEN_BC = 2
    KINETICS_BC_THEN_JEFFREY = 3
    TWO_SPACE_BAYES_THEN_JEFFREY = 4


def decompose_ratio(r: RationalLike, c: RationalLike = Fraction(1, 2)) -> Tuple[Fraction, Fraction]:
    """Split ``r > 0`` as ``l / l2`` with ``l2 = c * min(1, 1/r)``, both in ``(0, 1]``."""
    r, c = mv(r), mv(c)
    if r <= 0:
        raise ParameterOutOfRange(f"likelihood ratio {render(r)} must be positive")
    if not 0 < c <= 1:
        raise ParameterOutOfRange(f"scale {render(c)} is outside (0, 1]")
    l2 = c * min(Fraction(1), 1 / r)
    return r * l2, l2


def posterior_formula(r: RationalLike, prior_h: RationalLike) -> Fraction:
    """``r * p / (1 + (r - 1) * p)``."""
    r, p = mv(r), mv(prior_h)
    return r * p / (1 + (r - 1) * p)


def _likelihoods(r, l, l2) -> Tuple[Fraction, Fraction]:
    if l is not None and l2 is not None:
        return mv(l), mv(l2)
    if r is None:
        raise ValueError("give either r or both l and l2")
    return decompose_ratio(r)


def workspace_posterior(prior: CredalState, E: str, H: str, l: Fraction, l2: Fraction) -> Fraction:
    """``P(H)`` after conditioning a temporary ``{H, E}`` space carrying the likelihoods."""
    aux = cd.marginal(prior, [H])
    ext = cd.expand_parametrized(aux, E, {Atom(H): l, Not(Atom(H)): l2})
    return cd.bayes(ext, E, kinetics=True).prob(H)


def run_pipeline(kind: PipelineKind, prior: CredalState, E: str, H: str,
                 r: Optional[RationalLike] = None, l: Optional[RationalLike] = None,
                 l2: Optional[RationalLike] = None) -> CredalState:
    """Posterior after receiving the ratio (or pair) and then the evidence."""
    kind = PipelineKind(kind)
    l, l2 = _likelihoods(r, l, l2)
    if H not in prior.signature:
        raise UnknownAtom(f"hypothesis {H} is not in {prior.signature}")
    if kind is PipelineKind.SLAC_TWICE_THEN_BC:
        Q = cd.slac(prior, l, E, H)
        R = cd.slac(Q, l2, E, Not(Atom(H)))
        return cd.bayes(R, E)
    if kind is PipelineKind.DLAC_THEN_BC:
        return cd.bayes(cd.dlac(prior, l, l2, E, H), E)
    if E in prior.signature:
        raise AtomAlreadyPresent(f"evidence {E} must be outside {prior.signature} for this pipeline")
    if kind is PipelineKind.KINETICS_BC_THEN_JEFFREY:
        return cd.jeffrey(prior, workspace_posterior(prior, E, H, l, l2), H)
    # combinator route: value on H from the workspace, then Jeffrey on the original space
    aux = cd.marginal(prior, [H])
    lift = cb.compose(cb.BC(E), cb.DLAC(l, l2, E, H), cb.PSE(E, "1"), cb.PSE(H, "1"))
    p_hat = lift(aux).prob(H)
    move = cb.compose(cb.PSR(E), cb.JC(p_hat, H), cb.BC(E), cb.PSE(E, "1"))
    return move(prior)


# ---------------------------------------------------------------------------
# Commutation of Adams-then-Bayes with Bayes-then-Jeffrey


@dataclass(frozen=True)
class CommutationResult:
    ok: bool
    adams_path: CredalState
    jeffrey_path: CredalState
    sentence: Optional[str] = None
    left: Optional[Fraction] = None
    right: Optional[Fraction] = None

    def __bool__(self):
        return self.ok


def first_difference(P: CredalState, Q: CredalState):
    """First minterm (as text) where two same-signature states differ, with both masses."""
    for m, a, b in zip(P.minterms(), P.mass, Q.mass):
        if a != b:
            return str(minterm_sentence(P.signature, m)), a, b
    return None


def commutation_check(prior: CredalState, E: str, H: str,
                      l: RationalLike, l2: RationalLike) -> CommutationResult:
    """Compare ``bayes(dlac(prior))`` with Jeffrey on ``bayes(prior, E)`` at the workspace value."""
    l, l2 = mv(l), mv(l2)
    left = cd.bayes(cd.dlac(prior, l, l2, E, H), E)
    p_hat = workspace_posterior(prior, E, H, l, l2)
    right = cd.jeffrey(cd.bayes(prior, E), p_hat, H)
    diff = first_difference(left, right)
    if diff is None:
        return CommutationResult(True, left, right)
    return CommutationResult(False, left, right, *diff)


# ---------------------------------------------------------------------------
# Guessed likelihoods over two hypotheses


@dataclass(frozen=True)
class GuessedExpansion:
    """Evidence added to a space over ``H, L`` with one likelihood per hypothesis minterm."""

    u: Fraction
    v: Fraction
    u2: Fraction
    v2: Fraction

    def apply(self, prior: CredalState, E: str = "E", H: str = "H", L: str = "L") -> CredalState:
        h, g = Atom(H), Atom(L)
        q = {h & g: self.u, h & ~g: self.v, ~h & g: self.u2, ~h & ~g: self.v2}
        return cd.expand_parametrized(prior, E, q)

    def displayed_l_value(self) -> Fraction:
        """``(u2 + v) / (u + v + u2 + v2)``: the closed form as it appears in the worked example."""
        return (self.u2 + self.v) / (self.u + self.v + self.u2 + self.v2)

    def uniform_l_value(self) -> Fraction:
        """``Q(L | E)`` for a uniform prior over ``H, L``: ``(u + u2) / (u + v + u2 + v2)``."""
        return (self.u + self.u2) / (self.u + self.v + self.u2 + self.v2)


@dataclass(frozen=True)
class GlobalSoundnessReport:
    ratio_a: Fraction
    ratio_b: Fraction
    h_a: Fraction
    h_b: Fraction
    l_a: Fraction
    l_b: Fraction
    displayed_a: Fraction
    displayed_b: Fraction

    @property
    def locally_sound(self) -> bool:
        return self.h_a == self.h_b

    @property
    def globally_sound(self) -> bool:
        return self.l_a == self.l_b


def global_soundness_instance(a: GuessedExpansion, b: GuessedExpansion,
                              prior: Optional[CredalState] = None) -> GlobalSoundnessReport:
    """Expand by ``E`` with two guesses, condition on ``E``, compare ``H`` and ``L``."""
    prior = prior or CredalState.uniform(("H", "L"))
    out = []
    for guess in (a, b):
        Q = guess.apply(prior)
        post = cd.bayes(Q, "E")
        out.append((likelihood_ratio(Q, "E", "H"), post.prob("H"), post.prob("L")))
    (ra, ha, la), (rb, hb, lb) = out
    return GlobalSoundnessReport(ra, rb, ha, hb, la, lb, a.displayed_l_value(), b.displayed_l_value())


REFERENCE_GUESSES = (
    GuessedExpansion(Fraction(3, 7), Fraction(4, 7), Fraction(1, 3), Fraction(1, 3)),
    GuessedExpansion(Fraction(4, 7), Fraction(3, 7), Fraction(1, 3), Fraction(1, 3)),
)


# ---------------------------------------------------------------------------
# Background knowledge


@dataclass(frozen=True)
class KnowledgeBase:
    """Set of ``(evidence name, content descriptor)`` entries."""

    entries: FrozenSet[Tuple[str, str]] = frozenset()

    def names(self) -> FrozenSet[str]:
        return frozenset(name for name, _ in self.entries)

    def __len__(self):
        return len(self.entries)


def knowledge_update(K: KnowledgeBase, E: str, descriptor: str) -> KnowledgeBase:
    return KnowledgeBase(K.entries | {(E, descriptor)})


def novelty_check(K: KnowledgeBase, descriptor: str) -> bool:
    """False when some entry already carries this descriptor."""
    return all(d != descriptor for _, d in K.entries)


# ---------------------------------------------------------------------------
# The reporting protocol between a sender B and a receiver A


def lrtmr_outline(tof_prior: CredalState, moe_prior: CredalState, E: str, H: str,
                  knowledge: Optional[KnowledgeBase] = None,
                  descriptor: Optional[str] = None,
                  tof: str = "TOF", moe: str = "MOE") -> ScenarioTrace:
    """Run the ratio-transfer protocol once; problems become ABORTED/REFUSED events.

    The sender checks ``0 < P(H) < 1`` and ``0 < P(E) < 1``, computes its
    likelihood ratio, aborts on a null ``P(E | !H)``, and reports the ratio and
    then the evidence.  The receiver uses double likelihood Adams conditioning
    followed by Bayes when ``E`` is in its space, and the workspace/Jeffrey
    route otherwise, consulting its background knowledge first when a
    ``descriptor`` is given.
    """
    trace = ScenarioTrace(hypothesis=H, receiver=tof, knowledge=knowledge)
    trace.final_state = tof_prior
    for atom, who, P in ((E, moe, moe_prior), (H, moe, moe_prior), (H, tof, tof_prior)):
        if atom not in P.signature:
            trace.add(Aborted(f"{atom} is not in the proposition space of {who}"))
            return trace
    ph, pe = moe_prior.prob(H), moe_prior.prob(E)
    if not (0 < ph < 1 and 0 < pe < 1):
        trace.add(Aborted(f"step 1: {moe} has P({H}) = {render(ph)}, P({E}) = {render(pe)}"))
        return trace
    l_neg = cond_prob(CondVariant.ZERO, moe_prior, E, Not(Atom(H)))
    if l_neg == 0:
        trace.add(Aborted(f"step 3: {moe} has L({E},!{H}) = 0"))
        return trace
    r = likelihood_ratio(moe_prior, E, H)
    seq = 0
    for payload in (LikelihoodRatioReport(E, H, r), EvidenceConfirmation(E)):
        seq += 1
        msg = Message(seq, moe, tof, payload)
        trace.add(Sent(msg))
        trace.add(Delivered(msg))
    if r == 0:
        trace.add(Aborted(f"{tof} cannot install a zero likelihood ratio"))
        return trace
    state = tof_prior
    try:
        if E in state.signature:
            l, l2 = decompose_ratio(r)
            label = TransitionLabel("DLAC", (l, l2, Atom(E), Atom(H)))
            state = step(state, label)
            trace.add(Applied(tof, label, state))
            label = bc_label(E, state.prob(E))
            state = step(state, label)
            trace.add(Applied(tof, label, state))
        else:
            K = knowledge if knowledge is not None else KnowledgeBase()
            if descriptor is not None:
                if not novelty_check(K, descriptor):
                    trace.add(Refused(tof, f"evidence {descriptor!r} was already used"))
                    return trace
                K = knowledge_update(K, E, descriptor)
                trace.knowledge = K
            l, l2 = decompose_ratio(r)
            p_hat = workspace_posterior(state, E, H, l, l2)
            label = TransitionLabel("JC", (p_hat, Atom(H)))
            state = step(state, label)
            trace.add(Applied(tof, label, state))
    except CredalError as exc:
        trace.add(Aborted(f"{tof} cannot process the report: {exc}"))
        return trace
    trace.final_state = state
    return trace


__all__ = [
    "CommutationResult", "GlobalSoundnessReport", "GuessedExpansion", "KnowledgeBase",
    "PipelineKind", "REFERENCE_GUESSES", "commutation_check", "decompose_ratio",
    "first_difference", "global_soundness_instance", "knowledge_update", "lrtmr_outline",
    "novelty_check", "posterior_formula", "run_pipeline", "workspace_posterior",
]

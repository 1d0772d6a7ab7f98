"""Belief and proposition transformations on credal states.

Every function here is pure: it returns a new :class:`CredalState` and leaves
its argument untouched.  Belief kinetics (Bayes, Jeffrey, single and double
likelihood Adams conditioning) keep the signature; proposition kinetics
(expansion, reduction, base-rate inclusion) change it.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Tuple, Union

from .belief import CondVariant, CredalState, Mask, _check_within, mask_cond, mask_prob
from .errors import AtomAlreadyPresent, KineticsOnCompound, ParameterOutOfRange, ZeroCondition
from .meadow import RationalLike, div, mv, render
from .propspace import Atom, SentenceLike, as_sentence, check_atom_name, minterm_index, truth_mask


class ExpansionMode(enum.Enum):
    """Value given to a freshly added generator: certain, impossible or symmetric."""

    ONE = "1"
    ZERO = "0"
    HALF = "1/2"

    @classmethod
    def parse(cls, text: str) -> "ExpansionMode":
        for mode in cls:
            if mode.value == text.strip():
                return mode
        raise ValueError(f"unknown expansion mode {text!r}; expected 1, 0 or 1/2")


def _atom_name(M: Union[str, Atom]) -> str:
    if isinstance(M, Atom):
        return M.name
    return check_atom_name(M)


def _unit_interval(name: str, p: Fraction, *, open_left: bool = False) -> Fraction:
    if p > 1 or p < 0 or (open_left and p == 0):
        bounds = "(0, 1]" if open_left else "[0, 1]"
        raise ParameterOutOfRange(f"{name} = {render(p)} is outside {bounds}")
    return p


# ---------------------------------------------------------------------------
# Belief kinetics

def bayes(P: CredalState, phi: SentenceLike, kinetics: bool = False) -> CredalState:
    """Bayes conditioning ``P0(. | phi)``.

    With ``kinetics=True`` the (atomic) condition is then removed from the
    signature.
    """
    phi = as_sentence(phi)
    _check_within(P, phi)
    if kinetics and not isinstance(phi, Atom):
        raise KineticsOnCompound(f"proposition kinetics needs an atomic condition, got {phi}")
    mask = P.mask(phi)
    total = mask_prob(P.mass, mask)
    if total == 0:
        raise ZeroCondition(f"P({phi}) = 0")
    post = CredalState(P.signature, tuple(m / total if v else Fraction(0) for m, v in zip(P.mass, mask)))
    if kinetics:
        post = reduce(post, phi.name)
    return post


def safe_bayes(P: CredalState, phi: SentenceLike) -> CredalState:
    """``PS(. | phi)``: Bayes conditioning that returns ``P`` itself when ``P(phi) == 0``."""
    phi = as_sentence(phi)
    _check_within(P, phi)
    if P.prob(phi) == 0:
        return P
    return bayes(P, phi)


def jeffrey(P: CredalState, p: RationalLike, M: SentenceLike) -> CredalState:
    """``p * P0(. | M) + (1 - p) * P0(. | !M)``."""
    p = _unit_interval("p", mv(p))
    M = as_sentence(M)
    _check_within(P, M)
    mask = P.mask(M)
    pm = mask_prob(P.mass, mask)
    if p > 0 and pm == 0:
        raise ZeroCondition(f"Jeffrey conditioning to p = {render(p)} on {M} with P({M}) = 0")
    if p < 1 and pm == 1:
        raise ZeroCondition(f"Jeffrey conditioning to p = {render(p)} on {M} with P(!{M}) = 0")
    on, off = div(p, pm), div(1 - p, 1 - pm)
    return CredalState(P.signature, tuple(m * (on if v else off) for m, v in zip(P.mass, mask)))


def adams_masses(mass: Sequence[Fraction], evidence: Mask,
                 updates: Sequence[Tuple[Mask, Fraction]],
                 variant: CondVariant = CondVariant.ZERO, strict: bool = True) -> list:
    """Adams conditioning on raw masks.

    ``updates`` lists ``(hypothesis mask, new likelihood)`` pairs whose
    hypothesis regions must be disjoint.  Inside a hypothesis region the mass
    on evidence-true minterms is scaled by ``l / P(E | h)`` and the mass on
    evidence-false minterms by ``(1 - l) / P(!E | h)``; minterms outside every
    region keep their mass.  Ratios use total division, so a term whose
    coefficient is 0 contributes 0 even if its region is null.  With
    ``strict`` a null region under a nonzero coefficient raises
    :class:`ZeroCondition`.
    """
    not_e = tuple(not v for v in evidence)
    new = list(mass)
    for h, l in updates:
        for e_side, coeff in ((evidence, l), (not_e, 1 - l)):
            region = [a and b for a, b in zip(h, e_side)]
            if strict and coeff != 0 and mask_prob(mass, region) == 0:
                raise ZeroCondition("Adams conditioning on a null conjunction of evidence and hypothesis")
            factor = div(coeff, mask_cond(variant, mass, e_side, h))
            for i, inside in enumerate(region):
                if inside:
                    new[i] = mass[i] * factor
    return new


def slac(P: CredalState, l: RationalLike, E: SentenceLike, H: SentenceLike,
         variant: CondVariant = CondVariant.ZERO) -> CredalState:
    """Single likelihood Adams conditioning: install ``P(E | H) = l``, keep ``P(H)``."""
    l = _unit_interval("l", mv(l), open_left=True)
    E, H = as_sentence(E), as_sentence(H)
    _check_within(P, E, H)
    return CredalState(P.signature, tuple(adams_masses(P.mass, P.mask(E), [(P.mask(H), l)], variant)))


def dlac(P: CredalState, l: RationalLike, l2: RationalLike, E: SentenceLike, H: SentenceLike,
         variant: CondVariant = CondVariant.ZERO) -> CredalState:
    """Double likelihood Adams conditioning: ``P(E | H) = l`` and ``P(E | !H) = l2``."""
    l = _unit_interval("l", mv(l), open_left=True)
    l2 = _unit_interval("l2", mv(l2), open_left=True)
    E, H = as_sentence(E), as_sentence(H)
    _check_within(P, E, H)
    h = P.mask(H)
    not_h = tuple(not v for v in h)
    return CredalState(P.signature, tuple(adams_masses(P.mass, P.mask(E), [(h, l), (not_h, l2)], variant)))


# ---------------------------------------------------------------------------
# Proposition kinetics

_SPLIT = {
    ExpansionMode.ONE: Fraction(1),
    ExpansionMode.ZERO: Fraction(0),
    ExpansionMode.HALF: Fraction(1, 2),
}


def _extend(P: CredalState, name: str, q: Callable[[int], Fraction]) -> CredalState:
    # new generator goes last, so old minterm i splits into 2i (true) and 2i+1 (false)
    mass = []
    for i, m in enumerate(P.mass):
        share = q(i)
        mass.append(share * m)
        mass.append((1 - share) * m)
    return CredalState(P.signature + (name,), tuple(mass))


def expand(P: CredalState, M: Union[str, Atom], mode: Union[ExpansionMode, str]) -> CredalState:
    """Add generator ``M`` with probability 1, 0 or independent 1/2; no-op if present."""
    name = _atom_name(M)
    if isinstance(mode, str):
        mode = ExpansionMode.parse(mode)
    if name in P.signature:
        return P
    share = _SPLIT[mode]
    return _extend(P, name, lambda i: share)


def _resolve_parameters(P: CredalState, q) -> list:
    size = len(P.mass)
    if callable(q):
        return [mv(q(m)) for m in P.minterms()]
    if isinstance(q, Mapping):
        out: list = [None] * size
        for key, value in q.items():
            if isinstance(key, int):
                idx = [key]
            elif isinstance(key, tuple):
                idx = [minterm_index(P.signature, dict(zip(P.signature, key)))]
            else:
                mask = truth_mask(key, P.signature)
                idx = [i for i, v in enumerate(mask) if v]
            for i in idx:
                out[i] = mv(value)
        if any(v is None for v in out):
            raise ParameterOutOfRange("expansion parameters do not cover every minterm")
        return out
    values = [mv(v) for v in q]
    if len(values) != size:
        raise ParameterOutOfRange(f"expected {size} expansion parameters, got {len(values)}")
    return values


def expand_parametrized(P: CredalState, M: Union[str, Atom], q) -> CredalState:
    """Add generator ``M`` with ``P(M | m) = q(m)`` for each old minterm ``m``.

    ``q`` may be a sequence in canonical minterm order, a callable on minterm
    tuples, or a mapping keyed by minterm tuple, index, or sentence (a
    sentence key sets the parameter on every minterm satisfying it).
    """
    name = _atom_name(M)
    if name in P.signature:
        raise AtomAlreadyPresent(f"{name} is already a generator")
    params = _resolve_parameters(P, q)
    for value in params:
        _unit_interval("expansion parameter", value)
    return _extend(P, name, params.__getitem__)


def reduce(P: CredalState, M: Union[str, Atom]) -> CredalState:
    """Marginalize ``M`` out of the signature; no-op when absent."""
    name = _atom_name(M)
    if name not in P.signature:
        return P
    pos = P.signature.index(name)
    sig = P.signature[:pos] + P.signature[pos + 1:]
    mass = [Fraction(0)] * (1 << len(sig))
    for m, w in zip(P.minterms(), P.mass):
        rest = m[:pos] + m[pos + 1:]
        mass[minterm_index(sig, dict(zip(sig, rest)))] += w
    return CredalState(sig, tuple(mass))


def marginal(P: CredalState, keep: Sequence[str]) -> CredalState:
    """Reduce away every generator not in ``keep``."""
    out = P
    for name in P.signature:
        if name not in keep:
            out = reduce(out, name)
    return out


def base_rate(P: CredalState, name: Union[str, Atom], p: RationalLike) -> CredalState:
    """Include a base-rate proposition with ``Q(BR & phi) = p * P(phi)``."""
    p = _unit_interval("p", mv(p))
    return expand_parametrized(P, name, lambda m: p)


def restore_order(P: CredalState, order: Sequence[str]) -> CredalState:
    """Same belief function with the generators permuted into ``order``."""
    order = tuple(order)
    if sorted(order) != sorted(P.signature):
        raise ValueError(f"{order} is not a permutation of {P.signature}")
    if order == P.signature:
        return P
    mass = [Fraction(0)] * len(P.mass)
    for m, w in zip(P.minterms(), P.mass):
        val = dict(zip(P.signature, m))
        mass[minterm_index(order, val)] = w
    return CredalState(order, tuple(mass))


__all__ = [
    "ExpansionMode", "adams_masses", "base_rate", "bayes", "dlac", "expand",
    "expand_parametrized", "jeffrey", "marginal", "reduce", "restore_order",
    "safe_bayes", "slac",
]

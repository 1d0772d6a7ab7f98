"""Precise credal states: an exact probability mass on each minterm.

A :class:`CredalState` over ``n`` generators stores ``2**n`` rationals in the
canonical minterm order of :mod:`credal.propspace`.  Zero-mass minterms are
kept explicitly.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple, Union

from . import meadow
from .errors import SignatureMismatch, UnknownAtom
from .meadow import RationalLike, div, mv
from .propspace import (
    Minterm,
    Not,
    Sentence,
    SentenceLike,
    Signature,
    as_sentence,
    check_signature,
    minterm_index,
    minterm_sentence,
    minterms,
    signature_of,
    truth_mask,
)

Mask = Tuple[bool, ...]


class CondVariant(enum.Enum):
    """How ``P(x | y)`` behaves when ``P(y) == 0``."""

    ZERO = "0"
    ONE = "1"
    SAFE = "S"
    KOLMOGOROV = "K"


class _Undefined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()
"""Value of a Kolmogorov conditional probability with a null condition."""


@dataclass(frozen=True)
class CredalState:
    """A proposition space (given by its generators) with a precise belief function."""

    signature: Signature
    mass: Tuple[Fraction, ...]

    def __post_init__(self):
        sig = check_signature(self.signature)
        object.__setattr__(self, "signature", sig)
        mass = tuple(mv(m) for m in self.mass)
        object.__setattr__(self, "mass", mass)
        if len(mass) != 1 << len(sig):
            raise ValueError(f"expected {1 << len(sig)} masses for signature {sig}, got {len(mass)}")
        if any(m < 0 for m in mass):
            raise ValueError("negative probability mass")
        if sum(mass) != 1:
            raise ValueError(f"masses sum to {meadow.render(sum(mass))}, not 1")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_weights(cls, signature: Sequence[str], weights: Iterable[RationalLike]) -> "CredalState":
        """Normalize nonnegative weights given in canonical minterm order."""
        weights = [mv(w) for w in weights]
        total = sum(weights)
        if total <= 0:
            raise ValueError("weights must have positive total")
        return cls(tuple(signature), tuple(w / total for w in weights))

    @classmethod
    def uniform(cls, signature: Sequence[str]) -> "CredalState":
        return cls.from_weights(signature, [1] * (1 << len(signature)))

    @classmethod
    def point(cls, signature: Sequence[str], valuation: Mapping[str, bool]) -> "CredalState":
        sig = tuple(signature)
        mass = [Fraction(0)] * (1 << len(sig))
        mass[minterm_index(sig, valuation)] = Fraction(1)
        return cls(sig, tuple(mass))

    @classmethod
    def from_minterms(cls, signature: Sequence[str],
                      table: Mapping[SentenceLike, RationalLike]) -> "CredalState":
        """Build a state from ``{minterm sentence: mass}``; unlisted minterms get 0.

        Each key must be satisfied by exactly one minterm, e.g. ``"H & !E"``
        over ``("E", "H")``.
        """
        sig = tuple(signature)
        mass = [Fraction(0)] * (1 << len(sig))
        for key, value in table.items():
            mask = truth_mask(key, sig)
            hits = [i for i, v in enumerate(mask) if v]
            if len(hits) != 1:
                raise ValueError(f"{key!s} does not denote a single minterm of {sig}")
            mass[hits[0]] += mv(value)
        return cls(sig, tuple(mass))

    # -- queries -----------------------------------------------------------

    def mask(self, phi: SentenceLike) -> Mask:
        return truth_mask(phi, self.signature)

    def prob(self, phi: SentenceLike) -> Fraction:
        return mask_prob(self.mass, self.mask(phi))

    def minterms(self) -> Iterable[Minterm]:
        return minterms(self.signature)

    def support(self) -> Tuple[bool, ...]:
        return tuple(m != 0 for m in self.mass)

    def items(self):
        """Pairs ``(minterm sentence, mass)`` in canonical order."""
        return [(minterm_sentence(self.signature, m), w) for m, w in zip(self.minterms(), self.mass)]

    def to_json(self) -> dict:
        return {"generators": list(self.signature), "mass": [meadow.render(m) for m in self.mass]}

    @classmethod
    def from_json(cls, data: Mapping) -> "CredalState":
        return cls(tuple(data["generators"]), tuple(meadow.parse(str(m)) for m in data["mass"]))

    def __str__(self):
        body = ", ".join(meadow.render(m) for m in self.mass)
        return f"({','.join(self.signature)})[{body}]"


# -- mask-level primitives, shared with representations that are not Boolean

def mask_prob(mass: Sequence[Fraction], mask: Mask) -> Fraction:
    return sum((m for m, v in zip(mass, mask) if v), Fraction(0))


def mask_cond(variant: CondVariant, mass: Sequence[Fraction], x: Mask, y: Mask):
    """Conditional probability of ``x`` given ``y`` computed on raw masks."""
    p_y = mask_prob(mass, y)
    p_xy = mask_prob(mass, [a and b for a, b in zip(x, y)])
    ratio = div(p_xy, p_y)
    if variant is CondVariant.ZERO:
        return ratio
    if variant is CondVariant.ONE:
        return meadow.cond(ratio, p_y, 1)
    if variant is CondVariant.SAFE:
        return meadow.cond(ratio, p_y, mask_prob(mass, x))
    if variant is CondVariant.KOLMOGOROV:
        return ratio if p_y != 0 else UNDEFINED
    raise ValueError(f"unknown conditional variant {variant!r}")


def _check_within(P: CredalState, *sentences: Sentence) -> None:
    for s in sentences:
        missing = set(signature_of(s)) - set(P.signature)
        if missing:
            raise UnknownAtom(f"{s} mentions {sorted(missing)} outside signature {P.signature}")


def prob(P: CredalState, phi: SentenceLike) -> Fraction:
    return P.prob(phi)


def cond_prob(variant: Union[CondVariant, str], P: CredalState,
              x: SentenceLike, y: SentenceLike):
    """``P(x | y)`` under the chosen zero-condition convention.

    All variants agree when ``P(y) != 0``; with ``P(y) == 0`` they return 0
    (ZERO), 1 (ONE), ``P(x)`` (SAFE) or :data:`UNDEFINED` (KOLMOGOROV).
    """
    if isinstance(variant, str):
        variant = CondVariant[variant.upper()]
    x, y = as_sentence(x), as_sentence(y)
    _check_within(P, x, y)
    return mask_cond(variant, P.mass, P.mask(x), P.mask(y))


def likelihood_ratio(P: CredalState, E: SentenceLike, H: SentenceLike) -> Fraction:
    """``P0(E | H) / P0(E | !H)`` with total division."""
    E, H = as_sentence(E), as_sentence(H)
    return div(cond_prob(CondVariant.ZERO, P, E, H), cond_prob(CondVariant.ZERO, P, E, Not(H)))


def odds(P: CredalState, H: SentenceLike) -> Fraction:
    p = P.prob(H)
    return div(p, 1 - p)


def compatible(P: CredalState, Q: CredalState) -> bool:
    """Same propositions have probability 1 under both, i.e. equal supports."""
    if P.signature != Q.signature:
        raise SignatureMismatch(f"{P.signature} vs {Q.signature}")
    return P.support() == Q.support()


def conditional_state(variant: CondVariant, P: CredalState, y: SentenceLike) -> list:
    """Masses of ``P^variant(. | y)`` on each minterm (may not be a distribution)."""
    y = as_sentence(y)
    _check_within(P, y)
    ym = P.mask(y)
    out = []
    for i in range(len(P.mass)):
        single = tuple(j == i for j in range(len(P.mass)))
        out.append(mask_cond(variant, P.mass, single, ym))
    return out


def random_state(rng: random.Random, signature: Sequence[str], max_weight: int = 64,
                 allow_zero: bool = False) -> CredalState:
    """Integer weights drawn from 1..max_weight (0..max_weight with allow_zero), normalized."""
    sig = tuple(signature)
    low = 0 if allow_zero else 1
    while True:
        weights = [rng.randint(low, max_weight) for _ in range(1 << len(sig))]
        if sum(weights) > 0:
            return CredalState.from_weights(sig, weights)


def minterm_label(signature: Sequence[str], index: int) -> Sentence:
    return minterm_sentence(signature, list(minterms(signature))[index])


__all__ = [
    "CondVariant", "CredalState", "UNDEFINED", "compatible", "cond_prob",
    "conditional_state", "likelihood_ratio", "mask_cond", "mask_prob", "odds", "prob",
    "random_state",
]

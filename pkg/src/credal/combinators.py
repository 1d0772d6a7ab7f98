"""Named transformations that compose, with a small text syntax.

Combinators are total where the plain functions are partial: Bayes, Jeffrey
and Adams steps use the safe conditional ``PS``, which falls back to the
unconditional probability when the condition is null.  ``f @ g`` (and the
text form ``f.g``) applies ``g`` first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from . import conditioning as cd
from .belief import CondVariant, CredalState, _check_within, mask_cond
from .errors import ParameterOutOfRange, ZeroCondition
from .meadow import div, mv, parse as parse_rational, render
from .propspace import Atom, Not, Sentence, as_sentence, render as render_sentence, signature_of


class Combinator:
    """Base class; subclasses are frozen dataclasses."""

    def apply(self, P: CredalState) -> CredalState:
        raise NotImplementedError

    def __call__(self, P: CredalState) -> CredalState:
        return self.apply(P)

    def __matmul__(self, other: "Combinator") -> "Combinator":
        return Compose(self, other)


def _atom(M: Union[str, Atom]) -> Atom:
    return M if isinstance(M, Atom) else Atom(M)


def _check_likelihood(name: str, l: Fraction) -> Fraction:
    if not 0 < l <= 1:
        raise ParameterOutOfRange(f"{name} = {render(l)} is outside (0, 1]")
    return l


@dataclass(frozen=True)
class Id(Combinator):
    def apply(self, P):
        return P

    def __str__(self):
        return "Id"


@dataclass(frozen=True)
class BC(Combinator):
    """Bayes conditioning with the safe conditional; atoms of the condition missing
    from the state are added as certain, conditioned on, then removed again."""

    phi: Sentence

    def __post_init__(self):
        object.__setattr__(self, "phi", as_sentence(self.phi))

    def apply(self, P):
        missing = [a for a in signature_of(self.phi) if a not in P.signature]
        for name in missing:
            P = cd.expand(P, name, cd.ExpansionMode.ONE)
        P = cd.safe_bayes(P, self.phi)
        for name in reversed(missing):
            P = cd.reduce(P, name)
        return P

    def __str__(self):
        return f"BC({render_sentence(self.phi)})"


@dataclass(frozen=True)
class PSE(Combinator):
    atom: Atom
    mode: cd.ExpansionMode

    def __post_init__(self):
        object.__setattr__(self, "atom", _atom(self.atom))
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", cd.ExpansionMode.parse(self.mode))

    def apply(self, P):
        return cd.expand(P, self.atom, self.mode)

    def __str__(self):
        return f"PSE({self.atom.name},{self.mode.value})"


@dataclass(frozen=True)
class PSR(Combinator):
    atom: Atom

    def __post_init__(self):
        object.__setattr__(self, "atom", _atom(self.atom))

    def apply(self, P):
        return cd.reduce(P, self.atom)

    def __str__(self):
        return f"PSR({self.atom.name})"


@dataclass(frozen=True)
class JC(Combinator):
    """``p * PS(. | M) + (1 - p) * PS(. | !M)``, after adding ``M`` symmetrically if absent."""

    p: Fraction
    atom: Atom

    def __post_init__(self):
        object.__setattr__(self, "p", mv(self.p))
        object.__setattr__(self, "atom", _atom(self.atom))
        if not 0 <= self.p <= 1:
            raise ParameterOutOfRange(f"p = {render(self.p)} is outside [0, 1]")

    def apply(self, P):
        P = cd.expand(P, self.atom, cd.ExpansionMode.HALF)
        m = P.mask(self.atom)
        not_m = tuple(not v for v in m)
        size = len(P.mass)
        mass = []
        for i in range(size):
            single = tuple(j == i for j in range(size))
            mass.append(self.p * mask_cond(CondVariant.SAFE, P.mass, single, m)
                        + (1 - self.p) * mask_cond(CondVariant.SAFE, P.mass, single, not_m))
        return CredalState(P.signature, tuple(mass))

    def __str__(self):
        return f"JC({render(self.p)},{self.atom.name})"


def _adams_total(P: CredalState, E: Sentence, updates: List[Tuple[Sentence, Fraction]]) -> CredalState:
    _check_within(P, E, *(h for h, _ in updates))
    masks = [(P.mask(h), l) for h, l in updates]
    mass = cd.adams_masses(P.mass, P.mask(E), masks, CondVariant.SAFE, strict=False)
    total = sum(mass, Fraction(0))
    if total == 0:
        raise ZeroCondition("Adams step leaves no probability mass")
    return CredalState(P.signature, tuple(div(m, total) for m in mass))


@dataclass(frozen=True)
class SLAC(Combinator):
    """Single likelihood Adams conditioning, safe ratios, renormalized."""

    l: Fraction
    E: Sentence
    H: Sentence

    def __post_init__(self):
        object.__setattr__(self, "l", _check_likelihood("l", mv(self.l)))
        object.__setattr__(self, "E", as_sentence(self.E))
        object.__setattr__(self, "H", as_sentence(self.H))

    def apply(self, P):
        return _adams_total(P, self.E, [(self.H, self.l)])

    def __str__(self):
        return f"SLAC({render(self.l)},{render_sentence(self.E)},{render_sentence(self.H)})"


@dataclass(frozen=True)
class DLAC(Combinator):
    """Double likelihood Adams conditioning, safe ratios, renormalized."""

    l: Fraction
    l2: Fraction
    E: Sentence
    H: Sentence

    def __post_init__(self):
        object.__setattr__(self, "l", _check_likelihood("l", mv(self.l)))
        object.__setattr__(self, "l2", _check_likelihood("l2", mv(self.l2)))
        object.__setattr__(self, "E", as_sentence(self.E))
        object.__setattr__(self, "H", as_sentence(self.H))

    def apply(self, P):
        return _adams_total(P, self.E, [(self.H, self.l), (Not(self.H), self.l2)])

    def __str__(self):
        return (f"DLAC({render(self.l)},{render(self.l2)},"
                f"{render_sentence(self.E)},{render_sentence(self.H)})")


@dataclass(frozen=True)
class BaseRate(Combinator):
    name: Atom
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "name", _atom(self.name))
        object.__setattr__(self, "p", mv(self.p))

    def apply(self, P):
        return cd.base_rate(P, self.name, self.p)

    def __str__(self):
        return f"BR({self.name.name},{render(self.p)})"


@dataclass(frozen=True)
class Compose(Combinator):
    """``outer`` after ``inner``."""

    outer: Combinator
    inner: Combinator

    def apply(self, P):
        return self.outer.apply(self.inner.apply(P))

    def __str__(self):
        return f"{self.outer}.{self.inner}"


def compose(*parts: Combinator) -> Combinator:
    """``compose(f, g, h)`` applies ``h``, then ``g``, then ``f``."""
    if not parts:
        return Id()
    out = parts[-1]
    for c in reversed(parts[:-1]):
        out = Compose(c, out)
    return out


def apply(c: Combinator, P: CredalState) -> CredalState:
    return c.apply(P)


# ---------------------------------------------------------------------------
# Text syntax

class CombinatorSyntaxError(ValueError):
    pass


def _split_top(text: str, sep: str) -> List[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise CombinatorSyntaxError(f"unbalanced ')' in {text!r}")
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise CombinatorSyntaxError(f"unbalanced '(' in {text!r}")
    parts.append(text[start:])
    return [p.strip() for p in parts]


_CALL_RE = re.compile(r"([A-Z]+)\s*\((.*)\)\Z", re.S)


def _parse_one(text: str) -> Combinator:
    if text == "Id":
        return Id()
    m = _CALL_RE.match(text)
    if m is None:
        raise CombinatorSyntaxError(f"not a combinator: {text!r}")
    name, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
    try:
        if name == "BC" and len(args) == 1:
            return BC(as_sentence(args[0]))
        if name == "PSE" and len(args) == 2:
            return PSE(Atom(args[0]), cd.ExpansionMode.parse(args[1]))
        if name == "PSR" and len(args) == 1:
            return PSR(Atom(args[0]))
        if name == "JC" and len(args) == 2:
            return JC(parse_rational(args[0]), Atom(args[1]))
        if name == "SLAC" and len(args) == 3:
            return SLAC(parse_rational(args[0]), as_sentence(args[1]), as_sentence(args[2]))
        if name == "DLAC" and len(args) == 4:
            return DLAC(parse_rational(args[0]), parse_rational(args[1]),
                        as_sentence(args[2]), as_sentence(args[3]))
        if name == "BR" and len(args) == 2:
            return BaseRate(Atom(args[0]), parse_rational(args[1]))
    except ValueError as exc:
        raise CombinatorSyntaxError(f"bad combinator {text!r}: {exc}") from None
    raise CombinatorSyntaxError(f"not a combinator: {text!r}")


def parse_combinator(text: str) -> Combinator:
    """Parse e.g. ``"PSR(E).BC(E).PSE(E,1)"``; the leftmost part applies last."""
    parts = _split_top(text.strip(), ".")
    if any(not p for p in parts):
        raise CombinatorSyntaxError(f"empty component in {text!r}")
    return compose(*(_parse_one(p) for p in parts))


__all__ = [
    "BC", "BaseRate", "Combinator", "CombinatorSyntaxError", "Compose", "DLAC", "Id", "JC",
    "PSE", "PSR", "SLAC", "apply", "compose", "parse_combinator",
]

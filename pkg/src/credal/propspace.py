"""Propositional sentences over named atoms and their minterm semantics.

A signature is an ordered tuple of atom names.  Its minterms are enumerated
in a fixed canonical order: the first atom is the most significant position
and ``True`` comes before ``False``, so for ``("E", "H")`` the order is
``E&H, E&!H, !E&H, !E&!H``.  Every mass vector in the package follows it.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence, Tuple, Union

from .errors import UnknownAtom

Signature = Tuple[str, ...]
Minterm = Tuple[bool, ...]

ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)*\Z")
_RESERVED = {"T", "F"}


class Sentence:
    """Base class of the sentence syntax tree.

    Subclasses are frozen dataclasses, so sentences hash and compare
    structurally.  ``&``, ``|`` and ``~`` build conjunction, disjunction and
    negation; ``a >> b`` builds the material implication ``a -> b``.
    """

    __slots__ = ()

    def __and__(self, other: "Sentence") -> "Sentence":
        return And(self, as_sentence(other))

    def __rand__(self, other):
        return And(as_sentence(other), self)

    def __or__(self, other: "Sentence") -> "Sentence":
        return Or(self, as_sentence(other))

    def __ror__(self, other):
        return Or(as_sentence(other), self)

    def __invert__(self) -> "Sentence":
        return Not(self)

    def __rshift__(self, other: "Sentence") -> "Sentence":
        return Implies(self, as_sentence(other))

    def __str__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Top(Sentence):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bottom(Sentence):
    def __repr__(self):
        return "Bottom()"


@dataclass(frozen=True, repr=False)
class Atom(Sentence):
    name: str

    def __post_init__(self):
        check_atom_name(self.name)

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Sentence):
    arg: Sentence

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Sentence):
    left: Sentence
    right: Sentence

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Sentence):
    left: Sentence
    right: Sentence

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Sentence):
    left: Sentence
    right: Sentence

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


TOP = Top()
BOTTOM = Bottom()

SentenceLike = Union[Sentence, str]


def check_atom_name(name: str) -> str:
    if not isinstance(name, str) or not ATOM_RE.match(name) or name in _RESERVED:
        raise ValueError(f"invalid atom name: {name!r}")
    return name


def check_signature(atoms: Sequence[str]) -> Signature:
    sig = tuple(atoms)
    for name in sig:
        check_atom_name(name)
    if len(set(sig)) != len(sig):
        raise ValueError(f"duplicate atom in signature {sig}")
    return sig


def as_sentence(s: SentenceLike) -> Sentence:
    if isinstance(s, Sentence):
        return s
    if isinstance(s, str):
        return parse(s)
    raise TypeError(f"expected a sentence, got {type(s).__name__}")


# ---------------------------------------------------------------------------
# Semantics

def signature_of(s: SentenceLike) -> Signature:
    """Atoms occurring syntactically in ``s``, sorted by name."""
    return tuple(sorted(_atoms(as_sentence(s))))


@lru_cache(maxsize=4096)
def _atoms(s: Sentence) -> frozenset:
    if isinstance(s, Atom):
        return frozenset((s.name,))
    if isinstance(s, (Top, Bottom)):
        return frozenset()
    if isinstance(s, Not):
        return _atoms(s.arg)
    return _atoms(s.left) | _atoms(s.right)


def is_atomic(s: SentenceLike) -> bool:
    return isinstance(as_sentence(s), Atom)


def minterms(signature: Sequence[str]) -> Iterator[Minterm]:
    """All valuations of ``signature`` in canonical order."""
    return itertools.product((True, False), repeat=len(signature))


def minterm_index(signature: Sequence[str], valuation: Mapping[str, bool]) -> int:
    index = 0
    for name in signature:
        index = 2 * index + (0 if valuation[name] else 1)
    return index


def minterm_sentence(signature: Sequence[str], minterm: Minterm) -> Sentence:
    """The conjunction of literals that picks out ``minterm``."""
    if not signature:
        return TOP
    lits = [Atom(a) if v else Not(Atom(a)) for a, v in zip(signature, minterm)]
    out = lits[0]
    for lit in lits[1:]:
        out = And(out, lit)
    return out


def evaluate(s: SentenceLike, m: Mapping[str, bool]) -> bool:
    """Two-valued truth of ``s`` under the valuation ``m``."""
    s = as_sentence(s)
    if isinstance(s, Atom):
        try:
            return bool(m[s.name])
        except KeyError:
            raise UnknownAtom(f"atom {s.name!r} is not in the signature") from None
    if isinstance(s, Top):
        return True
    if isinstance(s, Bottom):
        return False
    if isinstance(s, Not):
        return not evaluate(s.arg, m)
    if isinstance(s, And):
        return evaluate(s.left, m) and evaluate(s.right, m)
    if isinstance(s, Or):
        return evaluate(s.left, m) or evaluate(s.right, m)
    if isinstance(s, Implies):
        return (not evaluate(s.left, m)) or evaluate(s.right, m)
    raise TypeError(f"not a sentence: {s!r}")


def truth_mask(s: SentenceLike, signature: Sequence[str]) -> Tuple[bool, ...]:
    """Truth value of ``s`` on every minterm of ``signature``, canonical order."""
    return _mask(as_sentence(s), tuple(signature))


@lru_cache(maxsize=16384)
def _mask(s: Sentence, sig: Signature) -> Tuple[bool, ...]:
    n = len(sig)
    size = 1 << n
    if isinstance(s, Atom):
        try:
            pos = sig.index(s.name)
        except ValueError:
            raise UnknownAtom(f"atom {s.name!r} is not in signature {sig}") from None
        shift = n - 1 - pos
        return tuple(not ((i >> shift) & 1) for i in range(size))
    if isinstance(s, Top):
        return (True,) * size
    if isinstance(s, Bottom):
        return (False,) * size
    if isinstance(s, Not):
        return tuple(not v for v in _mask(s.arg, sig))
    a, b = _mask(s.left, sig), _mask(s.right, sig)
    if isinstance(s, And):
        return tuple(x and y for x, y in zip(a, b))
    if isinstance(s, Or):
        return tuple(x or y for x, y in zip(a, b))
    if isinstance(s, Implies):
        return tuple((not x) or y for x, y in zip(a, b))
    raise TypeError(f"not a sentence: {s!r}")


def equivalent(s: SentenceLike, t: SentenceLike) -> bool:
    """Truth-table equality over the union of both signatures."""
    sig = tuple(sorted(set(signature_of(s)) | set(signature_of(t))))
    return truth_mask(s, sig) == truth_mask(t, sig)


# ---------------------------------------------------------------------------
# Text syntax
#
#   ! or ~  negation      &  conjunction     |  disjunction
#   ->      implication (right associative)  T / F  top / bottom
# Precedence, tightest first: negation, conjunction, disjunction, implication.

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->|→)|(?P<op>[!~¬&∧|∨()])|(?P<const>[⊤⊥])|(?P<name>[A-Za-z][A-Za-z0-9_]*))"
)


class SentenceSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1} in {text!r}")
        self.text = text
        self.pos = pos


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise SentenceSyntaxError("unexpected character", text, col)
        start = m.start(m.lastgroup)
        tok = m.group(m.lastgroup)
        if m.lastgroup == "arrow":
            tok = "->"
        tokens.append((m.lastgroup, tok, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg):
        raise SentenceSyntaxError(msg, self.text, self.peek()[2])

    def parse(self) -> Sentence:
        s = self.implication()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return s

    def implication(self):
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek()[1] in ("|", "∨"):
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.negation()
        while self.peek()[1] in ("&", "∧"):
            self.take()
            left = And(left, self.negation())
        return left

    def negation(self):
        if self.peek()[1] in ("!", "~", "¬"):
            self.take()
            return Not(self.negation())
        return self.primary()

    def primary(self):
        kind, tok, pos = self.peek()
        if tok == "(":
            self.take()
            s = self.implication()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return s
        if kind == "const":
            self.take()
            return TOP if tok == "⊤" else BOTTOM
        if kind == "name":
            self.take()
            if tok == "T":
                return TOP
            if tok == "F":
                return BOTTOM
            try:
                return Atom(tok)
            except ValueError:
                raise SentenceSyntaxError(f"invalid atom name {tok!r}", self.text, pos) from None
        self.fail("expected a sentence")


@lru_cache(maxsize=1024)
def parse(text: str) -> Sentence:
    """Parse the textual sentence syntax, e.g. ``"E -> (H | L)"``."""
    return _Parser(text).parse()


_PREC = {Implies: 1, Or: 2, And: 3}


def render(s: Sentence) -> str:
    """Text form using the parser's syntax, with minimal parentheses."""
    return _render(s, 0)


def _render(s: Sentence, ctx: int) -> str:
    if isinstance(s, Atom):
        return s.name
    if isinstance(s, Top):
        return "T"
    if isinstance(s, Bottom):
        return "F"
    if isinstance(s, Not):
        return "!" + _render(s.arg, 4)
    prec = _PREC[type(s)]
    op = {Implies: " -> ", Or: " | ", And: " & "}[type(s)]
    if isinstance(s, Implies):
        text = _render(s.left, prec + 1) + op + _render(s.right, prec)
    else:
        text = _render(s.left, prec) + op + _render(s.right, prec + 1)
    return f"({text})" if prec < ctx else text

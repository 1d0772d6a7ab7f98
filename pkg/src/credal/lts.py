"""Credal states as a labeled transition system, explored on finite fragments.

Labels carry the name of a transformation and its parameters.  For Bayes
conditioning the label also records the probability ``p`` of the condition in
the source state, and a transition with that label exists only when the
source agrees.  The whole system is infinite, so everything here works on
fragments generated breadth-first from seed states under a state budget.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import conditioning as cd
from .belief import CredalState, compatible
from .errors import (
    AtomAlreadyPresent,
    BudgetExceeded,
    GuardFailed,
    KineticsOnCompound,
    ParameterOutOfRange,
    UnknownAtom,
    ZeroCondition,
)
from .meadow import mv, parse as parse_rational, render
from .propspace import Atom, Sentence, as_sentence, render as render_sentence

KINDS = ("BC", "JC", "SLAC", "DLAC", "PSE", "PSR", "BR")
_FLAGS = ("PK", "NP")


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return render(value)
    if isinstance(value, Sentence):
        return render_sentence(value)
    if isinstance(value, cd.ExpansionMode):
        return value.value
    return str(value)


@dataclass(frozen=True)
class TransitionLabel:
    """A transition label such as ``[BC,E,29/100]`` or ``[JC,1/2,H]``.

    ``params`` holds parsed values: sentences, rationals, expansion modes and
    the flag strings ``PK`` / ``NP`` for Bayes conditioning.
    """

    kind: str
    params: Tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown transition kind {self.kind!r}")

    @property
    def guard(self) -> Optional[Fraction]:
        """The recorded source probability of a BC label, else ``None``."""
        return self.params[1] if self.kind == "BC" else None

    @property
    def action(self) -> Tuple:
        """The label with its guard value erased."""
        if self.kind == "BC":
            return (self.kind, self.params[0]) + tuple(self.params[2:])
        return (self.kind,) + tuple(self.params)

    @property
    def flags(self) -> Tuple[str, ...]:
        return tuple(p for p in self.params if isinstance(p, str) and p in _FLAGS)

    def __str__(self):
        return "[" + ",".join([self.kind] + [_fmt(p) for p in self.params]) + "]"


def bc_label(phi, p, kinetics: bool = False) -> TransitionLabel:
    phi = as_sentence(phi)
    flags = ("PK",) if kinetics else ()
    if not isinstance(phi, Atom):
        flags += ("NP",)
    return TransitionLabel("BC", (phi, mv(p)) + flags)


def _split_args(body: str) -> List[str]:
    return [part.strip() for part in body.split(",")] if body.strip() else []


def _typed_params(kind: str, args: Sequence[str], *, with_guard: bool) -> Tuple:
    """Convert textual arguments of ``kind`` to parsed parameter values."""
    try:
        if kind == "BC":
            n_fixed = 2 if with_guard else 1
            head, flags = args[:n_fixed], tuple(args[n_fixed:])
            if len(head) != n_fixed or any(f not in _FLAGS for f in flags):
                raise ValueError
            out = (as_sentence(head[0]),)
            if with_guard:
                out += (parse_rational(head[1]),)
            return out + flags
        if kind == "JC" and len(args) == 2:
            return (parse_rational(args[0]), as_sentence(args[1]))
        if kind == "SLAC" and len(args) == 3:
            return (parse_rational(args[0]), as_sentence(args[1]), as_sentence(args[2]))
        if kind == "DLAC" and len(args) == 4:
            return (parse_rational(args[0]), parse_rational(args[1]),
                    as_sentence(args[2]), as_sentence(args[3]))
        if kind == "PSE" and len(args) == 2:
            return (Atom(args[0]), cd.ExpansionMode.parse(args[1]))
        if kind == "PSR" and len(args) == 1:
            return (Atom(args[0]),)
        if kind == "BR" and len(args) == 2:
            return (Atom(args[0]), parse_rational(args[1]))
    except ValueError as exc:
        raise ValueError(f"bad arguments for {kind}: {', '.join(args)} ({exc})") from None
    raise ValueError(f"bad arguments for {kind}: {', '.join(args)}")


_LABEL_RE = re.compile(r"\s*\[\s*([A-Z]+)\s*(?:,(.*))?\]\s*\Z")


def parse_label(text: str) -> TransitionLabel:
    """Parse ``[BC,E,29/100]``, ``[BC,E,1/2,PK]``, ``[JC,1/2,H]`` and so on."""
    m = _LABEL_RE.match(text)
    if m is None or m.group(1) not in KINDS:
        raise ValueError(f"not a transition label: {text!r}")
    kind = m.group(1)
    return TransitionLabel(kind, _typed_params(kind, _split_args(m.group(2) or ""), with_guard=True))


_STEP_ERRORS = (ZeroCondition, UnknownAtom, ParameterOutOfRange, KineticsOnCompound, AtomAlreadyPresent)


def step(P: CredalState, label: TransitionLabel) -> CredalState:
    """Apply the transformation named by ``label``; raise :class:`GuardFailed` if it does not apply."""
    k, a = label.kind, label.params
    try:
        if k == "BC":
            phi, p = a[0], a[1]
            flags = a[2:]
            if p <= 0:
                raise GuardFailed(f"{label}: recorded probability must be positive")
            if ("NP" in flags) == isinstance(phi, Atom):
                raise GuardFailed(f"{label}: NP flag must be present exactly for compound conditions")
            actual = P.prob(phi)
            if actual != p:
                raise GuardFailed(f"{label}: source has P({phi}) = {render(actual)}")
            return cd.bayes(P, phi, kinetics="PK" in flags)
        if k == "JC":
            return cd.jeffrey(P, a[0], a[1])
        if k == "SLAC":
            return cd.slac(P, a[0], a[1], a[2])
        if k == "DLAC":
            return cd.dlac(P, a[0], a[1], a[2], a[3])
        if k == "PSE":
            return cd.expand(P, a[0], a[1])
        if k == "PSR":
            return cd.reduce(P, a[0])
        if k == "BR":
            if a[0].name in P.signature:
                raise AtomAlreadyPresent(f"{a[0].name} is already a generator")
            return cd.base_rate(P, a[0], a[1])
    except _STEP_ERRORS as exc:
        raise GuardFailed(f"{label} does not apply: {exc}") from exc
    raise ValueError(f"unknown transition kind {k!r}")


# ---------------------------------------------------------------------------
# Label schemas: labels whose guard is read off the source state


@dataclass(frozen=True)
class LabelSchema:
    """A label template; for BC the probability is filled in from each state.

    Text forms: ``BC(E)``, ``BC(E,PK)``, ``BC(!H)``, ``JC(1/2,H)``,
    ``SLAC(4/5,E,H)``, ``DLAC(4/5,1/5,E,H)``, ``PSE(E,1)``, ``PSR(E)``,
    ``BR(BR_g,1/2)``.
    """

    kind: str
    params: Tuple = ()

    def instantiate(self, P: CredalState) -> Optional[TransitionLabel]:
        """The concrete label for source ``P``, or ``None`` if it does not apply."""
        if self.kind == "BC":
            phi = self.params[0]
            try:
                p = P.prob(phi)
            except UnknownAtom:
                return None
            label = bc_label(phi, p, kinetics="PK" in self.params[1:])
        else:
            label = TransitionLabel(self.kind, self.params)
        try:
            step(P, label)
        except GuardFailed:
            return None
        return label

    def __str__(self):
        return f"{self.kind}(" + ",".join(_fmt(p) for p in self.params) + ")"


_SCHEMA_RE = re.compile(r"\s*([A-Z]+)\s*\((.*)\)\s*\Z")


def parse_schema(text: str) -> LabelSchema:
    m = _SCHEMA_RE.match(text)
    if m is None or m.group(1) not in KINDS:
        raise ValueError(f"not a label schema: {text!r}")
    kind = m.group(1)
    params = _typed_params(kind, _split_args(m.group(2)), with_guard=False)
    if kind == "BC":
        params = (params[0],) + tuple(f for f in params[1:] if f != "NP")
    return LabelSchema(kind, params)


def parse_schemas(selector: str) -> List[LabelSchema]:
    """A ``;``-separated list of schemas, e.g. ``"BC(E);JC(1/2,H)"``."""
    return [parse_schema(part) for part in selector.split(";") if part.strip()]


# ---------------------------------------------------------------------------
# Fragments


@dataclass
class TransitionSystemFragment:
    """States (by index), transitions ``(src, label, dst)`` and the set of expanded states.

    A state is expanded when all its outgoing transitions under the schemas
    were generated; states first reached at the depth limit are not.
    """

    states: List[CredalState] = field(default_factory=list)
    transitions: List[Tuple[int, TransitionLabel, int]] = field(default_factory=list)
    expanded: FrozenSet[int] = frozenset()

    def index(self, state: CredalState) -> int:
        return self.states.index(state)

    def outgoing(self, i: int) -> List[Tuple[TransitionLabel, int]]:
        return [(lab, dst) for src, lab, dst in self.transitions if src == i]

    def dump(self) -> str:
        lines = [f"state {i}: {s}" for i, s in enumerate(self.states)]
        lines += [f"{src} {lab} {dst}" for src, lab, dst in self.transitions]
        return "\n".join(lines)


def generate_fragment(seeds: Iterable[CredalState], schemas: Sequence[LabelSchema],
                      depth: int, max_states: int = 64) -> TransitionSystemFragment:
    """Breadth-first closure of ``seeds`` under ``schemas`` up to ``depth`` steps."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    states: List[CredalState] = []
    where: Dict[CredalState, int] = {}

    def add(s: CredalState) -> int:
        if s not in where:
            if len(states) >= max_states:
                raise BudgetExceeded(f"fragment exceeds {max_states} states")
            where[s] = len(states)
            states.append(s)
        return where[s]

    frontier = []
    for s in seeds:
        if s not in where:
            frontier.append(add(s))
    transitions = []
    expanded = set()
    for _ in range(depth):
        nxt = []
        for i in frontier:
            if i in expanded:
                continue
            expanded.add(i)
            for schema in schemas:
                label = schema.instantiate(states[i])
                if label is None:
                    continue
                target = step(states[i], label)
                fresh = target not in where
                j = add(target)
                transitions.append((i, label, j))
                if fresh:
                    nxt.append(j)
        frontier = nxt
    return TransitionSystemFragment(states, transitions, frozenset(expanded))


# ---------------------------------------------------------------------------
# Relations and bisimulation checking


@dataclass(frozen=True)
class CandidateBisimulation:
    """A relation on states given by its set of pairs."""

    pairs: FrozenSet[Tuple[CredalState, CredalState]]

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)

    def classes(self, F: TransitionSystemFragment) -> List[List[int]]:
        """Equivalence classes as lists of state indices (meaningful when R is an equivalence)."""
        seen, out = set(), []
        for i, s in enumerate(F.states):
            if i in seen:
                continue
            block = [j for j, t in enumerate(F.states) if (s, t) in self.pairs]
            seen.update(block)
            out.append(block or [i])
        return out


def identity_relation(F: TransitionSystemFragment) -> CandidateBisimulation:
    return CandidateBisimulation(frozenset((s, s) for s in F.states))


def _same_class(X: CredalState, Y: CredalState) -> bool:
    return X.signature == Y.signature and compatible(X, Y)


def max_compatibility(F: TransitionSystemFragment) -> CandidateBisimulation:
    """All same-signature compatible pairs among the fragment's states."""
    return CandidateBisimulation(frozenset(
        (X, Y) for X in F.states for Y in F.states if _same_class(X, Y)
    ))


def from_partition(F: TransitionSystemFragment, blocks: Iterable[Iterable[int]]) -> CandidateBisimulation:
    pairs = set()
    for block in blocks:
        block = list(block)
        pairs.update((F.states[i], F.states[j]) for i in block for j in block)
    return CandidateBisimulation(frozenset(pairs))


@dataclass(frozen=True)
class BisimulationResult:
    ok: bool
    clause: Optional[str] = None
    pair: Optional[Tuple[int, int]] = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "bisimulation"
        return f"fails {self.clause} at {self.pair}: {self.detail}"


def is_bisimulation(R: CandidateBisimulation, F: TransitionSystemFragment,
                    strict_labels: bool = False) -> BisimulationResult:
    """Check reflexivity, symmetry, transitivity and transfer on ``F``.

    Transfer: for a related pair ``(X, X')`` and a transition ``X -l-> Y``
    there must be ``X' -l'-> Y'`` with ``(Y, Y')`` related and ``l'`` carrying
    the same action as ``l``.  With ``strict_labels`` the guard value must
    match too.  Transfer is checked only where both states are expanded.
    """
    idx = {s: i for i, s in enumerate(F.states)}
    pairs = R.pairs
    for X, Y in pairs:
        if X not in idx or Y not in idx:
            return BisimulationResult(False, "domain", None, "pair outside the fragment")
        if X.signature != Y.signature:
            return BisimulationResult(False, "signature", (idx[X], idx[Y]), "relates different signatures")
    for X in F.states:
        if (X, X) not in pairs:
            return BisimulationResult(False, "reflexive", (idx[X], idx[X]), "missing identity pair")
    for X, Y in sorted(pairs, key=lambda p: (idx[p[0]], idx[p[1]])):
        if (Y, X) not in pairs:
            return BisimulationResult(False, "symmetric", (idx[X], idx[Y]), "converse pair missing")
    succ: Dict[CredalState, List[CredalState]] = {}
    for X, Y in pairs:
        succ.setdefault(X, []).append(Y)
    for X, Y in sorted(pairs, key=lambda p: (idx[p[0]], idx[p[1]])):
        for Z in succ.get(Y, ()):
            if (X, Z) not in pairs:
                return BisimulationResult(False, "transitive", (idx[X], idx[Z]),
                                          f"via state {idx[Y]}")
    key = (lambda lab: str(lab)) if strict_labels else (lambda lab: lab.action)
    for X, X2 in sorted(pairs, key=lambda p: (idx[p[0]], idx[p[1]])):
        i, i2 = idx[X], idx[X2]
        if i not in F.expanded or i2 not in F.expanded:
            continue
        answers = F.outgoing(i2)
        for label, j in F.outgoing(i):
            Y = F.states[j]
            if not any(key(lab2) == key(label) and (Y, F.states[j2]) in pairs for lab2, j2 in answers):
                return BisimulationResult(False, "transfer", (i, i2),
                                          f"{i} {label} {j} has no related answer from {i2}")
    return BisimulationResult(True)


def incompatibility_witness() -> Tuple[TransitionSystemFragment, CandidateBisimulation, BisimulationResult]:
    """Two states over ``{H}`` with ``P(H) = 1`` and ``P(H) = 1/2``, related, under BC on ``!H``."""
    X = CredalState(("H",), (Fraction(1), Fraction(0)))
    Y = CredalState.uniform(("H",))
    F = generate_fragment([X, Y], [parse_schema("BC(!H)")], depth=1)
    R = CandidateBisimulation(identity_relation(F).pairs | {(X, Y), (Y, X)})
    return F, R, is_bisimulation(R, F)


def _set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def compatibility_blocks(F: TransitionSystemFragment) -> List[List[int]]:
    blocks: Dict[Tuple, List[int]] = {}
    for i, s in enumerate(F.states):
        blocks.setdefault((s.signature, s.support()), []).append(i)
    return list(blocks.values())


def search_intermediate_bisimulations(F: TransitionSystemFragment, cap: int = 8,
                                      include_max: bool = True) -> List[CandidateBisimulation]:
    """Equivalences coarser than identity and inside compatibility that pass the check.

    Candidates are all partitions refining the compatibility blocks, except
    the all-singletons partition; ``R^max`` itself is included unless
    ``include_max`` is false.
    """
    if len(F.states) > cap:
        raise BudgetExceeded(f"fragment has {len(F.states)} states, search cap is {cap}")
    blocks = compatibility_blocks(F)
    found = []
    for choice in product(*(list(_set_partitions(b)) for b in blocks)):
        parts = [blk for per_block in choice for blk in per_block]
        if all(len(blk) == 1 for blk in parts):
            continue
        if not include_max and len(parts) == len(blocks):
            continue
        R = from_partition(F, parts)
        if is_bisimulation(R, F):
            found.append(R)
    return found


__all__ = [
    "BisimulationResult", "CandidateBisimulation", "LabelSchema", "TransitionLabel",
    "TransitionSystemFragment", "bc_label", "compatibility_blocks", "from_partition",
    "generate_fragment", "identity_relation", "incompatibility_witness", "is_bisimulation",
    "max_compatibility", "parse_label", "parse_schema", "parse_schemas",
    "search_intermediate_bisimulations", "step",
]

"""Exact credal states: precise rational belief functions over finite proposition spaces,
their transformations, and the agent protocols that exchange likelihood ratios."""

from .belief import (
    UNDEFINED,
    CondVariant,
    CredalState,
    compatible,
    cond_prob,
    likelihood_ratio,
    odds,
    prob,
)
from .conditioning import (
    ExpansionMode,
    base_rate,
    bayes,
    dlac,
    expand,
    expand_parametrized,
    jeffrey,
    reduce,
    slac,
)
from .errors import CredalError
from .propspace import Atom, parse as parse_sentence

__version__ = "0.1.0"

__all__ = [
    "UNDEFINED", "Atom", "CondVariant", "CredalError", "CredalState", "ExpansionMode",
    "base_rate", "bayes", "compatible", "cond_prob", "dlac", "expand", "expand_parametrized",
    "jeffrey", "likelihood_ratio", "odds", "parse_sentence", "prob", "reduce", "slac",
]

"""Exception types raised by the credal-state calculus."""


class CredalError(Exception):
    """Base class for every error raised by this package."""


class UnknownAtom(CredalError, KeyError):
    """A sentence mentions an atom outside the signature it is evaluated in."""

    def __str__(self):
        return Exception.__str__(self)


class SignatureMismatch(CredalError, ValueError):
    pass


class ZeroCondition(CredalError, ValueError):
    """A transformation needs to divide by the probability of a null proposition."""


class KineticsOnCompound(CredalError, ValueError):
    pass


class ParameterOutOfRange(CredalError, ValueError):
    pass


class AtomAlreadyPresent(CredalError, ValueError):
    pass


class GuardFailed(CredalError, ValueError):
    """A transition label does not apply to the given source state."""


class BudgetExceeded(CredalError, RuntimeError):
    pass

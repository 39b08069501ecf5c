"""Exception hierarchy for the o3sym engine."""


class O3SymError(Exception):
    """Base class for all engine errors."""


class CapacityError(O3SymError):
    """A construction would exceed the configured order cap."""


class ParameterError(O3SymError, ValueError):
    """Invalid parameters for a constructor or family."""


class ContractError(O3SymError):
    """A precondition or structural invariant was violated."""


class EngineError(O3SymError):
    """Internal failure that indicates a bug in the engine."""

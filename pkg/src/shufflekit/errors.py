"""Exception taxonomy shared by all machine classes and decision procedures."""


class ShuffleKitError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ShuffleKitError):
    """Malformed or out-of-contract input data (bad symbol, alphabet mismatch, ...)."""


class ContractError(ShuffleKitError):
    """A documented precondition of an operation was violated."""


class ResourceLimitError(ShuffleKitError):
    """An explicit size or exploration budget was exceeded."""

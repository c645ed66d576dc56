"""Exception types shared across the package."""


class ModcycleError(Exception):
    """Base class for package errors."""


class UsageError(ModcycleError, ValueError):
    """Caller violated an operation's precondition or passed bad input."""


class FormatError(UsageError):
    """Malformed serialized graph data; carries a byte offset when known."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = "%s (byte offset %d)" % (message, offset)
        super().__init__(message)
        self.offset = offset


class IndeterminateError(ModcycleError):
    """A search exhausted its node-expansion budget before deciding.

    Raised instead of returning an empty result so exhaustive campaigns can
    never mistake "gave up" for "does not exist".
    """

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class CatalogError(ModcycleError):
    """Catalog derivation produced something other than the expected family."""

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump

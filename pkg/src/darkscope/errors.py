"""Shared exception types."""


class NavigationError(Exception):
    """A page load failed (unreachable, timeout, bad response)."""


class InteractionError(Exception):
    """An element interaction (click, option select) failed."""


class PreconditionError(Exception):
    """An operation was invoked before its stated precondition held."""


class StoreIntegrityError(Exception):
    """A stored blob failed hash verification or is unreadable."""

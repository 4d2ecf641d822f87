"""Exception hierarchy."""


class BmcTreeError(Exception):
    """Base class for errors raised by this package."""


class TreeError(BmcTreeError, ValueError):
    pass


class ConfigurationError(BmcTreeError, ValueError):
    """A configuration does not fit the tree or the alphabet."""


class NullEventError(BmcTreeError, ZeroDivisionError):
    """Conditioning on an event of probability zero."""


class SpecError(BmcTreeError, ValueError):
    """A kernel set, chain or measure violates its invariants."""


class MarkovPropertyError(BmcTreeError):
    """A property a caller asserted as a precondition does not hold."""


class InclusionViolation(BmcTreeError, AssertionError):
    """A proven class inclusion failed; always a bug in the checkers."""


class SchemaError(BmcTreeError, ValueError):
    """An input file does not follow its schema."""

    def __init__(self, message, path="$", source=None):
        self.path = path
        self.source = source
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{path}: {message}")

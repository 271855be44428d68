"""Exception hierarchy.

Everything raised on purpose by the package derives from
:class:`KahlerSpacetimeError`.  Errors caused by bad user input (metric
files, unknown names, malformed expressions) additionally derive from
:class:`InputError` so the CLI can map them to exit code 2.
"""


class KahlerSpacetimeError(Exception):
    pass


class InputError(KahlerSpacetimeError):
    pass


class ParseError(InputError):
    """Malformed expression or metric file.  ``position`` is a character offset."""

    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}: "
        if position is not None:
            where += f"at offset {position}: "
        super().__init__(where + message)


class SchemaError(InputError):
    pass


class SignatureMismatchError(InputError):
    pass


class UnknownMetricError(InputError):
    pass


class DomainError(KahlerSpacetimeError):
    """Expression evaluated outside its domain (division by zero, ln of a negative, ...)."""


class VarianceError(KahlerSpacetimeError):
    pass


class DegenerateMetricError(KahlerSpacetimeError):
    pass


class DegeneratePlaneError(KahlerSpacetimeError):
    pass


class FrameError(KahlerSpacetimeError):
    pass


class NormalizationError(KahlerSpacetimeError):
    pass

"""Exception hierarchy shared by every stage of the toolchain.

The CLI maps the three top-level families onto exit codes: :class:`InputError`
(2), :class:`ResourceLimitExceeded` (3) and :class:`InvariantViolation` (4).
"""

from __future__ import annotations


class OMPlanError(Exception):
    """Base class for all errors raised by :mod:`omplan`."""


class InputError(OMPlanError):
    """Malformed or semantically invalid input."""


class SourceError(InputError):
    """An input error that can be located in a source text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class PDDLSyntaxError(SourceError):
    pass


class UnsupportedFeature(SourceError):
    """A construct outside the supported PDDL subset or DL fragment."""

    def __init__(self, feature: str, line: int | None = None, column: int | None = None):
        self.feature = feature
        super().__init__(f"unsupported feature: {feature}", line, column)


class UnknownPredicate(SourceError):
    pass


class UnknownObject(SourceError):
    pass


class ArityMismatch(SourceError):
    pass


class EffectOnDerivedPredicate(SourceError):
    pass


class NegativeDerivedOccurrence(SourceError):
    pass


class DuplicateDeclaration(SourceError):
    pass


class PartialBinding(InputError):
    pass


class OntologySyntaxError(SourceError):
    pass


class UnsupportedConstruct(UnsupportedFeature):
    """An OWL construct outside the implemented description-logic fragment."""


class InterfaceSyntaxError(SourceError):
    pass


class InverseFunctionalityViolation(SourceError):
    pass


class UndeclaredQueryVariable(SourceError):
    pass


class MissingTypeSpecification(SourceError):
    pass


class InterfaceMismatch(InputError):
    """The interface does not fit the planning specification it is attached to."""


class StaticOntologyInconsistent(InputError):
    pass


class NotApplicable(OMPlanError):
    pass


class ResourceLimitExceeded(OMPlanError):
    """A configured budget (tableau nodes, hitting-set nodes, search nodes, time) ran out."""


class InvariantViolation(OMPlanError):
    """An internal consistency check failed; indicates a bug, never bad input."""

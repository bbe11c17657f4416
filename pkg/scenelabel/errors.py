# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Exceptions and warnings raised by scenelabel."""

__all__ = [
    'AlignmentError',
    'ConfigError',
    'DataError',
    'DegenerateBoxError',
    'DimensionError',
    'DisconnectedNodeWarning',
    'EmptyInputError',
    'EmptyPredicateWarning',
    'FewExamplesWarning',
    'InfeasibleTargetError',
    'MissingScoreError',
    'NoEvidenceWarning',
    'NumericalError',
    'ScenelabelError',
    'SchemaError',
    'ValidationError',
    'exit_status',
    ]


class ScenelabelError(Exception):
    """Base class for every error scenelabel raises on purpose.

    :cvar exit_status: The process exit status the command line uses when
        this error stops a run.
    """

    exit_status = 1


class ConfigError(ScenelabelError):
    """The configuration or the command line is unusable."""

    exit_status = 1


class DataError(ScenelabelError):
    """Input data violates the data model."""

    exit_status = 2


class SchemaError(DataError):
    """A dataset file does not conform to the JSON schema.

    :ivar record: A short path to the offending record, e.g.
        ``images[3].objects[1]``.
    """

    def __init__(self, record, reason):
        super().__init__('{}: {}'.format(record, reason))
        self.record = record
        self.reason = reason


class ValidationError(DataError):
    """A value is structurally valid but out of range."""


class DegenerateBoxError(ValidationError):
    """A bounding box has a non-positive height or width."""


class DimensionError(DataError):
    """A feature vector does not have the dimension a model expects."""


class EmptyInputError(DataError):
    """An operation that needs examples was given none."""


class AlignmentError(DataError):
    """Two collections that must share pair ids do not."""


class MissingScoreError(DataError):
    """A gold relationship has no score row to rank."""

    def __init__(self, pair_id):
        super().__init__('no score row for gold pair {}'.format(pair_id))
        self.pair_id = pair_id


class NumericalError(ScenelabelError):
    """An optimisation produced a non-finite value."""

    exit_status = 3


class InfeasibleTargetError(NumericalError):
    """The synthetic generator could not realise a feature target."""


class EmptyPredicateWarning(UserWarning):
    """A predicate has no labeled examples to learn from."""


class FewExamplesWarning(UserWarning):
    """A predicate has fewer labeled examples than requested."""


class DisconnectedNodeWarning(UserWarning):
    """A node of the propagation graph has no labeled neighbourhood."""


class NoEvidenceWarning(UserWarning):
    """A label matrix holds no votes at all."""


def exit_status(error):
    """Return the process exit status for ``error``.

    Errors that are not scenelabel errors are usage errors from the point
    of view of the command line.
    """
    return getattr(error, 'exit_status', 1)

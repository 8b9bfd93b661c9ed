"""Semantic exception hierarchy shared by all mobimetrics modules.

Every error raised on a contract violation derives from
:class:`MobilityError`, so callers (and the CLI) can distinguish data
problems from programming bugs with a single ``except`` clause.
"""

from __future__ import annotations


class MobilityError(Exception):
    """Base class for all mobimetrics domain errors."""


class DegenerateMarginsError(MobilityError):
    """A table margin (row or column total) is zero.

    The measures assume non-degenerate education distributions: at least
    one low and one high educated young adult, and at least one parent in
    each group.
    """


class UndefinedMeasureError(MobilityError):
    """The applicable normalisation denominator is zero.

    Unreachable for non-degenerate integer tables; kept as a guard for
    continuous-mode inputs that sit on the edge of degeneracy.
    """


class BranchNotApplicableError(MobilityError):
    """The simplified measure was requested below the random benchmark.

    The simplified (Coleman-style) index is only defined when the observed
    high-high count is at least its expectation under random allocation.
    """


class DegenerateRegressorError(MobilityError):
    """The regressor has zero variance, so no slope can be fit."""


class EnumerationTooLargeError(MobilityError):
    """The requested exhaustive enumeration exceeds the size guard."""


class EmptyTableError(MobilityError):
    """No usable records remained after filtering and missing-data drops."""


class SchemaError(MobilityError):
    """An input file does not match the documented schema."""


class ParseError(MobilityError):
    """Malformed microdata beyond the configured error budget."""

"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ClusterError(Exception):
    """Base class for all domain errors."""


# -- constellation construction -------------------------------------------------


class DuplicateSiblingLabel(ClusterError):
    """Two children of the same point carry the same edge label."""


class ParentAfterChild(ClusterError):
    """A point refers to a parent that is not created before it."""


class MultipleRoots(ClusterError):
    """More than one point (or none) lacks a parent."""


class Disconnected(ClusterError):
    """A point refers to a parent outside the constellation."""


# -- analysis preconditions ----------------------------------------------------


class NonPositiveMultiplicity(ClusterError):
    """An analysis routine received a multiplicity that is not >= 1."""


class EqualLabels(ClusterError):
    """A routine that needs two distinct labels received equal ones."""


class IdealisticViolation(ClusterError):
    """The cluster violates the linear proximity inequalities."""


class NotProximate(ClusterError):
    """A stratum formula was requested for points that are not proximate."""


class RootHasNoSwitchStatus(ClusterError):
    """Switch points are only defined away from the root."""


class BoundOverflow(ClusterError):
    """The lattice bounding box exceeds the configured ceiling."""


class NegativeExponent(ClusterError):
    """A cyclotomic exponent is negative where a polynomial was expected."""


# -- cluster file parsing ------------------------------------------------------


class ParseError(ClusterError):
    """A cluster file could not be read; ``line`` is 1-based (0 if unknown)."""

    def __init__(self, message: str, line: int = 0) -> None:
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class ClusterSyntaxError(ParseError):
    """A record does not follow ``<id> <parent|-> <label|-> <mult>``."""


class OrderViolation(ParseError):
    """Ids are not 1..r in increasing order, or a parent id is not smaller."""


class LabelClash(ParseError, DuplicateSiblingLabel):
    """Two records share a parent and an edge label."""

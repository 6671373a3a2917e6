"""Exceptions raised by hyperqif.

Everything derives from HyperQIFError so the CLI can map module failures to a single
exit code. Validation failures additionally subclass ValueError.
"""


class HyperQIFError(Exception):
    """Base class for all hyperqif errors."""

    pass


class LengthMismatch(HyperQIFError, ValueError):
    """Raised when a probability vector does not match its label set."""

    pass


class NegativeProbability(HyperQIFError, ValueError):
    """Raised when a probability entry is negative."""

    pass


class NotNormalized(HyperQIFError, ValueError):
    """Raised when probabilities do not sum to 1 within tolerance."""

    pass


class InvalidLabels(HyperQIFError, ValueError):
    """Raised when a label set is empty or has duplicates."""

    pass


class UnknownLabel(HyperQIFError, KeyError):
    """Raised when a label is not part of a space."""

    pass


class SpaceMismatch(HyperQIFError, ValueError):
    """Raised when two objects are indexed by different secret spaces."""

    pass


class InvalidGainFunction(HyperQIFError, ValueError):
    """Raised when a gain matrix is empty, non-finite or has an all-negative column."""

    pass


class DimensionMismatch(HyperQIFError, ValueError):
    """Raised when matrix dimensions do not line up."""

    pass


class NotStochastic(HyperQIFError, ValueError):
    """Raised when a channel row is not a probability distribution."""

    pass


class DepthTooSmall(HyperQIFError, ValueError):
    """Raised when collapsing a higher-order hyper of depth below 2."""

    pass


class RaggedHyper(HyperQIFError, ValueError):
    """Raised when siblings of a higher-order hyper have different depths or spaces."""

    pass


class ZeroEnvironmentalVulnerability(HyperQIFError, ZeroDivisionError):
    """Raised when a ratio would divide by an environmental vulnerability of 0."""

    pass


class NotAnAbstraction(HyperQIFError):
    """Raised when a model is not an abstraction of the given environment."""

    pass


class InconsistentResult(HyperQIFError):
    """Raised when two routes to the same quantity disagree beyond tolerance."""

    pass


class SchemaMismatch(HyperQIFError, ValueError):
    """Raised when a corpus header lacks a declared column."""

    pass


class TooManyMalformed(HyperQIFError):
    """Raised when a corpus has more malformed rows than allowed."""

    pass


class EmptyCorpus(HyperQIFError, ValueError):
    """Raised when an environment is requested from no records."""

    pass


class UnknownAttribute(HyperQIFError, KeyError):
    """Raised when abstracting by an attribute outside the corpus schema."""

    pass


class DocumentError(HyperQIFError, ValueError):
    """Raised when a JSON document has the wrong schema tag or kind."""

    pass

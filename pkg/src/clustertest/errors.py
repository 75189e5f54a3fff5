"""Exception types shared across the toolkit."""


class ClustertestError(Exception):
    """Base class for all errors raised by this package."""


class IdOutOfRange(ClustertestError):
    """A vertex id or port index falls outside the graph's bounds."""


class SelfLoop(ClustertestError):
    """An edge joins a vertex to itself."""


class DuplicateEdge(ClustertestError):
    """The same unordered vertex pair appears more than once."""


class PortConflict(ClustertestError):
    """Two edges claim the same port of the same vertex, or mirror entries disagree."""


class FormatError(ClustertestError):
    """A serialized graph does not conform to the file format."""


class InvalidK(ClustertestError):
    """Independence parameter k is even or exceeds the number of indices."""


class WorkBudgetExceeded(ClustertestError):
    """An exhaustive search would exceed its configured work budget."""


class TooLarge(ClustertestError):
    """Instance too large for the dense statevector simulator."""


class UnevenLabelCounts(ClustertestError):
    """Label classes in a cycle-union sampler have unequal sizes."""


class TooFewVertices(ClustertestError):
    """A label class is too small to support simple cycles."""


class BadN(ClustertestError):
    """Family generators require N to be a multiple of 10 and at least 30."""


class NotInSupport(ClustertestError):
    """A label lies outside a permutation's support."""


class InfeasibleHistory(ClustertestError):
    """A query-answer history admits no consistent family member (assertion-level)."""


class ConfigError(ClustertestError):
    """Experiment configuration violates its preconditions."""

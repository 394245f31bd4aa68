"""Exception hierarchy shared by the library and the command-line front end."""


class RecursiveCDError(Exception):
    """Base class for every error raised on purpose by this package."""


class ArgumentError(RecursiveCDError, ValueError):
    """An argument is out of range or malformed."""


class PreconditionError(RecursiveCDError, ValueError):
    """The input violates a structural requirement, for example a non-ancestral graph."""


class DegenerateDataError(RecursiveCDError):
    """The data cannot support the requested test (constant column, singular conditioning block)."""


class DataFormatError(RecursiveCDError):
    """An input file could not be parsed."""


class ConsistencyError(RecursiveCDError):
    """Internal results contradict each other, such as conflicting edge orientations."""


class NoRemovableVertexError(ConsistencyError):
    """A recursive learner found no removable vertex among the remaining ones.

    :param iteration: index of the failed sweep
    :param remaining: vertices still in play
    :param mb: Markov boundaries at the time of failure
    """

    def __init__(self, message: str, iteration: int, remaining, mb):
        super().__init__(message)
        self.iteration = iteration
        self.remaining = tuple(remaining)
        self.mb = {k: tuple(sorted(v)) for k, v in mb.items()}


class GenerationError(RecursiveCDError):
    """A random generator exhausted its retry budget."""

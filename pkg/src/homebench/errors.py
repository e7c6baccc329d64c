"""Exception types shared across the package."""


class HomebenchError(Exception):
    """Base class for all package-specific errors."""


class UnknownRoom(HomebenchError):
    pass


class UnknownTaskId(HomebenchError):
    pass


class UnknownClass(HomebenchError):
    pass


class InfeasibleConfig(HomebenchError):
    """The generator config cannot be satisfied by the catalog."""


class InfeasibleTask(HomebenchError):
    pass


class MalformedGoal(HomebenchError):
    pass


class NotAFailure(HomebenchError):
    """classify_failure was handed a successful episode."""


class ExhaustedBindings(HomebenchError):
    """A task template could not be bound to the scene's objects."""


class DistributionUnachievable(HomebenchError):
    """Suite quotas cannot be met from the given scenes.

    Carries the closest achievable mix in ``achieved``.
    """

    def __init__(self, message: str, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class InvalidScene(HomebenchError):
    pass


class PolicyError(HomebenchError):
    """A policy produced unusable output (for LLM policies: after retries)."""


class EndpointError(HomebenchError):
    """The remote chat-completion endpoint failed or answered garbage."""


class TraceError(HomebenchError):
    """A trace file is malformed or truncated."""

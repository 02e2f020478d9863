"""Exception types raised across the package."""


class AirswarmError(Exception):
    """Base class for all package errors."""


class InvalidStateError(AirswarmError):
    """A state value violates its invariant (e.g. a non-unit quaternion)."""


class ConfigurationError(AirswarmError):
    """A parameter or configuration value is out of its valid range."""


class BearingUndefinedError(AirswarmError):
    """Planar distance to the goal is too small for the bearing to be defined."""


class UndefinedRuleError(AirswarmError):
    """A swarm rule was evaluated on a swarm too small for it (N = 1)."""


class ScenarioError(AirswarmError):
    """A scenario file could not be loaded or failed validation.

    ``field`` names the offending entry using a dotted path.
    """

    def __init__(self, message, field=None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class SimulationAborted(AirswarmError):
    """The simulation produced a non-finite value."""

    def __init__(self, message, step):
        self.step = step
        super().__init__(f"step {step}: {message}")

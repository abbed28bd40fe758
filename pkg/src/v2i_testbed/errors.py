"""Exception hierarchy shared by all testbed modules."""


class TestbedError(Exception):
    """Base class for every error raised by this package."""


class OutOfRange(TestbedError):
    """A value is outside its documented domain."""


class InvariantViolation(TestbedError):
    """A message or data structure is well-formed but breaks a domain invariant."""


class ParseError(TestbedError):
    """Bytes could not be parsed into a message."""


class NoMatch(TestbedError):
    """No lane node lies within the lateral matching gate."""


class UnknownLane(TestbedError):
    """The requested lane id does not exist in the map."""


class UnknownGroup(TestbedError):
    """The requested signal group does not exist in the plan."""


class InvalidInput(TestbedError):
    """An algorithm input is NaN, negative, or otherwise unusable."""


class OutOfExtent(TestbedError):
    """An arc position lies outside the lane polyline."""


class ConfigError(TestbedError):
    """A scenario configuration is inconsistent or incomplete."""


class TransportError(TestbedError):
    """A transport send or receive failed."""


class IoError(TestbedError):
    """A log export or import failed."""

"""Exception hierarchy shared across the package."""


class AirTdmaError(Exception):
    """Base class for all errors raised by airtdma."""


class InvalidArgumentError(AirTdmaError, ValueError):
    pass


class LayoutInfeasibleError(AirTdmaError, ValueError):
    """Guards (and ACK interval) leave no room for data inside the slot."""


class CodecError(AirTdmaError, ValueError):
    pass


class EncodeRangeError(CodecError):
    def __init__(self, field, value, lo, hi):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r} outside encodable range [{lo}, {hi}]")


class LengthError(CodecError):
    pass


class DecodeValidationError(CodecError):
    def __init__(self, field, value, message=None):
        self.field = field
        self.value = value
        super().__init__(message or f"decoded {field}={value!r} violates field invariant")


class CapacityError(CodecError):
    """Payload does not fit into the slot of the chosen MAC variant."""


class DivergenceError(AirTdmaError, ValueError):
    pass


class ConfigError(AirTdmaError, ValueError):
    """Scenario or sweep configuration is malformed or violates an invariant."""


class CapacityExhaustedError(ConfigError):
    """More aircraft want a reservation than there are reserved-access slots."""


class ProtocolViolationError(AirTdmaError, RuntimeError):
    """A node was required to transmit and listen in the same slot."""

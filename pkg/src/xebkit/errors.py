"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration or arguments."""


class CapacityError(RuntimeError):
    """Requested computation exceeds a configured resource cap."""


class VerificationError(RuntimeError):
    """A cross-check between two computation routes failed."""


class CircuitFormatError(ConfigError):
    """Malformed circuit text, with location context where available."""

    def __init__(self, message, *, line=None, cycle=None, gate=None, field=None):
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if cycle is not None:
            parts.append(f"cycle {cycle}")
        if gate is not None:
            parts.append(f"gate {gate}")
        if field is not None:
            parts.append(f"field {field!r}")
        if parts:
            message = f"{message} ({', '.join(parts)})"
        super().__init__(message)
        self.line = line
        self.cycle = cycle
        self.gate = gate
        self.field = field

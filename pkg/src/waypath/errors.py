"""Exception hierarchy shared by every waypath module."""


class WaypathError(Exception):
    """Base class for all domain errors raised by waypath."""


class DegenerateTriangleError(WaypathError, ValueError):
    pass


class UndefinedHeadingError(WaypathError, ValueError):
    pass


class ZeroBearingError(WaypathError, ValueError):
    """Robot and target coincide, so no bearing exists."""


class ImageTooSmallError(WaypathError, ValueError):
    pass


class PGMError(WaypathError, ValueError):
    pass


class LaneLostError(WaypathError):
    """A lane side is missing and no previous observation can stand in."""


class DetectionAmbiguityError(WaypathError):
    """Zero or several marker blobs were found for a label."""


class UnreachableError(WaypathError):
    pass


class SensorError(WaypathError, ValueError):
    pass


class TrappedError(WaypathError):
    """The avoidance sweep failed for the configured number of cycles."""


class ScenarioError(WaypathError, ValueError):
    pass


class ProtocolError(WaypathError, ValueError):
    pass


class EncodingError(WaypathError, ValueError):
    pass


class TransportError(WaypathError, ConnectionError):
    pass

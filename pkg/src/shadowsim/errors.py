"""Exception types shared across the package."""


class ShadowSimError(Exception):
    """Base class for all shadowsim errors."""


class DomainError(ShadowSimError, ValueError):
    """An input value is outside its allowed range; the message names the field."""


class DegenerateGeometryError(ShadowSimError, ValueError):
    """A geometric construction has no solution (coincident points, zero distance)."""


class HeightFieldError(ShadowSimError, ValueError):
    """A height-field file failed to parse or violates its invariants."""


class EmptyFootprintError(ShadowSimError, RuntimeError):
    """No silhouette ray hit the environment; the shadow cannot be rendered."""


class ControllerInputError(ShadowSimError, ValueError):
    """The controller was fed non-finite or malformed input."""


class ScenarioError(ShadowSimError, ValueError):
    """A scenario document failed validation; the message names the field."""


class ProtocolError(ShadowSimError, ValueError):
    """A session message is malformed or arrived out of protocol order."""

"""Exception types raised by :mod:`epsortho`."""


class EpsOrthoError(Exception):
    """Base class for every error raised by the package."""


class DemError(EpsOrthoError):
    """Problem reading a DEM image."""


class DemReadError(DemError):
    """The file is missing, unreadable or truncated."""


class DemFormatError(DemError):
    """The file is not an 8-bit grayscale PGM."""


class DemSizeError(DemError):
    """The image is smaller than 2x2."""


class OutOfDomainError(EpsOrthoError, ValueError):
    """A query point lies outside the surface domain."""


class NonSmoothPointError(EpsOrthoError, ValueError):
    """A derivative was requested at a declared kink of a curve."""


class UnknownSurfaceError(EpsOrthoError, KeyError):
    """The requested catalog entry does not exist."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class DegenerateRegionError(EpsOrthoError):
    """A region or a directional bound collapsed to the center point."""

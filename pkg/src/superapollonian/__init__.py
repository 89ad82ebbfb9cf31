"""Super-Apollonian continued fractions: planar and quadruple reduction dynamics."""

__version__ = "0.1.0"

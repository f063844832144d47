"""Semantic exception hierarchy.

Callers that need to distinguish degenerate inputs from plain contract
violations catch the specific class; everything derives from SegoptError.
"""


class SegoptError(Exception):
    """Base class for all segopt errors."""


class ShapeMismatchError(SegoptError, ValueError):
    """Two grid objects with incompatible shapes were combined."""


class FieldValueError(SegoptError, ValueError):
    """Construction rejected out-of-range or malformed cell values."""


class DegenerateDiceError(SegoptError):
    """Dice is 0/0: both the segmentation and the marginal have zero mass."""


class DegenerateMarginalError(SegoptError):
    """The marginal map has zero total mass, so Dice has no optimum."""


class GridTooLargeError(SegoptError):
    """Exhaustive enumeration was requested on a grid above the hard cap."""


class UnachievableVolumeError(SegoptError, ValueError):
    """Requested volume is not a multiple of the cell volume."""


class MisalignedBreakpointError(SegoptError, ValueError):
    """A closed-form construction breakpoint does not land on a cell boundary."""


class FileFormatError(SegoptError, ValueError):
    """A field/mask file is malformed or has an unknown format tag."""

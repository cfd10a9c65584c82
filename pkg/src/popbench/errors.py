"""Exception types shared across the toolkit."""


class PopbenchError(Exception):
    """Base class for all toolkit errors."""


# --- stimulus generation ---

class UnknownSubtype(PopbenchError):
    """Subtype index outside the block's subtype count."""


class UnknownPsi(PopbenchError):
    """Feature-contrast level outside the configured grid."""


class RenderOverflow(PopbenchError):
    """Element layout cannot fit the requested canvas."""


class InfeasiblePlacement(PopbenchError):
    """Placement margins exhaust the canvas."""


# --- fixation data ---

class ParseError(PopbenchError):
    """Malformed fixation file; message carries the line number."""


class NonMonotoneIndex(PopbenchError):
    """Duplicate or non-increasing fixation index within a trial."""


class DimensionMismatch(PopbenchError):
    """Grids that must share a shape do not."""


class EmptyFixationMap(PopbenchError):
    """Sum normalization requested on a map with no fixations."""


# --- metrics ---

class NoFixations(PopbenchError):
    """A fixation-based metric received zero positives."""


class EmptyShuffleSet(PopbenchError):
    """Shuffled metric invoked with no negative locations."""


# --- models ---

class ImageTooSmall(PopbenchError):
    """Input image below the minimum working resolution."""


class BadScalePair(PopbenchError):
    """Center-surround scale pair with surround <= center."""


class UnreadableMap(PopbenchError):
    """External saliency map file could not be decoded."""


# --- benchmarking / CLI ---

class MissingInput(PopbenchError):
    """A requested metric lacks its required input."""


class LengthMismatch(PopbenchError):
    """Paired sequences of unequal length."""


class DegenerateConstantInput(PopbenchError):
    """Rank correlation on an all-equal sequence."""

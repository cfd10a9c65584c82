"""The 15 stimulus blocks: task assignment, labels and subtype counts."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import UnknownSubtype


class Task(str, Enum):
    FREE_VIEWING = "FV"
    VISUAL_SEARCH = "VS"


# block id -> (label, subtype count). Blocks 1-5 are free-viewing
# (preattentive structure), 6-15 are odd-one-out visual search.
_BLOCK_TABLE: dict[int, tuple[str, int]] = {
    1: ("Corner Salience", 1),
    2: ("Visual Segmentation by Bar Angle", 2),
    3: ("Visual Segmentation by Bar Length", 1),
    4: ("Contour Integration by Bar Continuity", 1),
    5: ("Perceptual Grouping by Distance", 2),
    6: ("Feature and Conjunctive Search", 4),
    7: ("Search Asymmetries", 2),
    8: ("Search in a Rough Surface", 2),
    9: ("Color Search", 4),
    10: ("Brightness Search", 2),
    11: ("Orientation Search", 1),
    12: ("Dissimilar Size Search", 1),
    13: ("Orientation Search with Heterogeneous distractors", 3),
    14: ("Orientation Search with Non-linear patterns", 4),
    15: ("Orientation search with distinct Categorization", 3),
}

TOTAL_SUBTYPES = sum(n for _, n in _BLOCK_TABLE.values())  # == 33


@dataclass(frozen=True)
class BlockId:
    """One of the 15 stimulus categories."""

    id: int

    def __post_init__(self) -> None:
        if self.id not in _BLOCK_TABLE:
            raise UnknownSubtype(f"block id must be 1..15, got {self.id}")

    @property
    def task(self) -> Task:
        return Task.FREE_VIEWING if self.id <= 5 else Task.VISUAL_SEARCH

    @property
    def name(self) -> str:
        return _BLOCK_TABLE[self.id][0]

    @property
    def subtype_count(self) -> int:
        return _BLOCK_TABLE[self.id][1]

    def validate_subtype(self, subtype: int) -> None:
        if not 1 <= subtype <= self.subtype_count:
            raise UnknownSubtype(
                f"block {self.id} ({self.name}) has subtypes 1..{self.subtype_count}, "
                f"got {subtype}"
            )


def all_blocks() -> list[BlockId]:
    return [BlockId(i) for i in sorted(_BLOCK_TABLE)]


def all_subtypes(blocks: list[int] | None = None) -> list[tuple[int, int]]:
    """(block, subtype) pairs, optionally restricted to a block selection."""
    ids = sorted(_BLOCK_TABLE) if blocks is None else sorted(blocks)
    pairs = []
    for bid in ids:
        block = BlockId(bid)
        pairs.extend((bid, s) for s in range(1, block.subtype_count + 1))
    return pairs

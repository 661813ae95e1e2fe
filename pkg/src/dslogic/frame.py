"""Frames of discernment and subsets encoded as bit masks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import FrameError, FrameMismatchError

__all__ = [
    "MAX_FRAME_SIZE",
    "Frame",
    "SubsetMask",
    "Partition",
    "make_frame",
    "subset",
    "is_partition",
]

MAX_FRAME_SIZE = 64


class Frame:
    """A finite, ordered frame of discernment.

    Element order is the input order and never changes. Two frames compare
    equal when their label sequences are equal.
    """

    __slots__ = ("labels", "_index", "_hash")

    def __init__(self, labels: Sequence[str]):
        labels = tuple(labels)
        if not labels:
            raise FrameError("a frame needs at least one element")
        if len(labels) > MAX_FRAME_SIZE:
            raise FrameError(
                f"frame has {len(labels)} elements; at most {MAX_FRAME_SIZE} are supported"
            )
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise FrameError(f"labels must be non-empty strings, got {lab!r}")
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise FrameError(f"duplicate label {lab!r}")
            index[lab] = i
        self.labels = labels
        self._index = index
        self._hash = hash(labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Frame):
            return NotImplemented
        return self._hash == other._hash and self.labels == other.labels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Frame({list(self.labels)!r})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise FrameError(f"unknown element {label!r}") from None

    @property
    def full_bits(self) -> int:
        return (1 << len(self.labels)) - 1

    def full(self) -> SubsetMask:
        return SubsetMask(self, self.full_bits)

    def empty(self) -> SubsetMask:
        return SubsetMask(self, 0)

    def singleton(self, i: int) -> SubsetMask:
        if not 0 <= i < len(self.labels):
            raise FrameError(f"index {i} out of range for frame of size {self.size}")
        return SubsetMask(self, 1 << i)

    def subset(self, members: Iterable[str]) -> SubsetMask:
        bits = 0
        for name in members:
            bits |= 1 << self.index(name)
        return SubsetMask(self, bits)


@dataclass(frozen=True, eq=False)
class SubsetMask:
    """A subset of a frame; bit ``i`` set means element ``i`` is a member."""

    frame: Frame
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.frame.size:
            raise FrameError(f"mask {self.bits:#b} has bits outside a frame of size {self.frame.size}")

    def _check(self, other: SubsetMask) -> None:
        if not isinstance(other, SubsetMask):
            raise TypeError(f"expected SubsetMask, got {type(other).__name__}")
        if other.frame != self.frame:
            raise FrameMismatchError("subsets belong to different frames")

    def __eq__(self, other):
        if not isinstance(other, SubsetMask):
            return NotImplemented
        return self.bits == other.bits and self.frame == other.frame

    def __hash__(self):
        return hash((self.frame._hash, self.bits))

    def __and__(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.frame, self.bits & other.bits)

    def __or__(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.frame, self.bits | other.bits)

    def __sub__(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.frame, self.bits & ~other.bits)

    def __invert__(self) -> SubsetMask:
        return SubsetMask(self.frame, self.frame.full_bits & ~self.bits)

    complement = __invert__

    def __le__(self, other: SubsetMask) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: SubsetMask) -> bool:
        return self <= other and self.bits != other.bits

    def issubset(self, other: SubsetMask) -> bool:
        return self <= other

    def isdisjoint(self, other: SubsetMask) -> bool:
        self._check(other)
        return self.bits & other.bits == 0

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def __iter__(self) -> Iterator[int]:
        bits, i = self.bits, 0
        while bits:
            if bits & 1:
                yield i
            bits >>= 1
            i += 1

    def __contains__(self, item) -> bool:
        i = self.frame.index(item) if isinstance(item, str) else item
        return bool(self.bits >> i & 1)

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == self.frame.full_bits

    def lowest(self) -> int:
        """Index of the lowest member; the deterministic tie-break everywhere."""
        if not self.bits:
            raise FrameError("empty subset has no lowest element")
        return (self.bits & -self.bits).bit_length() - 1

    def labels(self) -> tuple[str, ...]:
        return tuple(self.frame.labels[i] for i in self)

    def sort_key(self):
        return (len(self), tuple(self))

    def __repr__(self):
        return "{" + ",".join(self.labels()) + "}"


@dataclass(frozen=True)
class Partition:
    """Non-empty, pairwise disjoint blocks covering the whole frame."""

    blocks: tuple[SubsetMask, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise FrameError("a partition needs at least one block")
        if not is_partition(blocks[0].frame, blocks):
            raise FrameError(f"blocks {list(blocks)} do not partition the frame")
        object.__setattr__(self, "blocks", tuple(sorted(blocks, key=SubsetMask.lowest)))

    @property
    def frame(self) -> Frame:
        return self.blocks[0].frame

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def block_of(self, i: int) -> int:
        """Position of the block that contains element ``i``."""
        for j, b in enumerate(self.blocks):
            if b.bits >> i & 1:
                return j
        raise FrameError(f"element {i} is in no block")


def make_frame(labels: Sequence[str]) -> Frame:
    return Frame(labels)


def subset(frame: Frame, members: Iterable[str]) -> SubsetMask:
    return frame.subset(members)


def is_partition(frame: Frame, blocks: Sequence[SubsetMask]) -> bool:
    """True iff ``blocks`` are non-empty, pairwise disjoint and cover ``frame``.

    Raises :class:`FrameMismatchError` if some block lives on another frame.
    """
    for b in blocks:
        if b.frame != frame:
            raise FrameMismatchError("partition blocks belong to different frames")
    seen = 0
    for b in blocks:
        if b.bits == 0 or seen & b.bits:
            return False
        seen |= b.bits
    return seen == frame.full_bits

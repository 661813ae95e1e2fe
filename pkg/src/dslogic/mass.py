"""Mass functions, Dempster's rule of combination, belief and plausibility."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

from .errors import FrameMismatchError, MassError, TotalConflictError
from .frame import Frame, SubsetMask
from .numbers import is_inexact, to_fraction

__all__ = [
    "MassFunction",
    "CombinationResult",
    "make_mass",
    "vacuous",
    "combine",
    "combine_all",
    "belief",
    "plausibility",
]

# Tolerance on the total for float input before exact renormalisation.
FLOAT_SUM_TOLERANCE = Fraction(1, 10**9)


class MassFunction(Mapping):
    """An immutable mass function: focal subsets mapped to exact positive masses.

    Iteration yields focal sets in a deterministic order (by size, then by
    element indices). Use :func:`make_mass` to build one from user input.
    """

    __slots__ = ("frame", "_focal")

    def __init__(self, frame: Frame, focal: Mapping[SubsetMask, Fraction]):
        for a, v in focal.items():
            if a.frame != frame:
                raise FrameMismatchError("focal set belongs to a different frame")
            if a.is_empty:
                raise MassError("the empty set cannot carry mass")
            if not isinstance(v, Fraction) or v <= 0:
                raise MassError(f"mass of {a!r} must be a positive Fraction, got {v!r}")
        if sum(focal.values(), Fraction(0)) != 1:
            raise MassError("masses must sum to exactly 1")
        self.frame = frame
        self._focal = {a: focal[a] for a in sorted(focal, key=SubsetMask.sort_key)}

    def __getitem__(self, key: SubsetMask) -> Fraction:
        return self._focal[key]

    def get(self, key, default=Fraction(0)):
        return self._focal.get(key, default)

    def __iter__(self):
        return iter(self._focal)

    def __len__(self) -> int:
        return len(self._focal)

    def __eq__(self, other):
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self.frame == other.frame and self._focal == other._focal

    def __hash__(self):
        return hash((self.frame, frozenset(self._focal.items())))

    def __repr__(self):
        body = ", ".join(f"{a!r}: {v}" for a, v in self._focal.items())
        return f"MassFunction({{{body}}})"

    @property
    def focal_sets(self) -> tuple[SubsetMask, ...]:
        return tuple(self._focal)

    def belief(self, a: SubsetMask) -> Fraction:
        return belief(self, a)

    def plausibility(self, a: SubsetMask) -> Fraction:
        return plausibility(self, a)

    def __xor__(self, other: MassFunction) -> MassFunction:
        return combine(self, other).combined


@dataclass(frozen=True)
class CombinationResult:
    combined: MassFunction
    conflict: Fraction


def make_mass(frame: Frame, assignments: Iterable[Tuple[SubsetMask, object]]) -> MassFunction:
    """Validate and build a mass function.

    ``assignments`` may also be a mapping. Duplicate focal sets are merged by
    addition. Exact inputs (ints, Fractions, ``"p/q"`` or decimal strings)
    must sum to exactly 1. When any mass is a float, a total within 1e-9 of 1
    is accepted and renormalised exactly.
    """
    if isinstance(assignments, Mapping):
        assignments = assignments.items()
    focal: dict[SubsetMask, Fraction] = {}
    inexact = False
    for a, raw in assignments:
        if not isinstance(a, SubsetMask):
            raise TypeError(f"focal sets must be SubsetMask, got {type(a).__name__}")
        if a.frame != frame:
            raise FrameMismatchError("focal set belongs to a different frame")
        v = to_fraction(raw)
        inexact |= is_inexact(raw)
        if v < 0:
            raise MassError(f"negative mass {v} on {a!r}")
        if a.is_empty and v != 0:
            raise MassError("the empty set cannot carry mass")
        if v == 0:
            continue
        focal[a] = focal.get(a, Fraction(0)) + v
    total = sum(focal.values(), Fraction(0))
    if not focal:
        raise MassError("no positive masses given")
    if total != 1:
        if not inexact or abs(total - 1) > FLOAT_SUM_TOLERANCE:
            raise MassError(f"masses sum to {total}, not 1")
        focal = {a: v / total for a, v in focal.items()}
    return MassFunction(frame, focal)


def vacuous(frame: Frame) -> MassFunction:
    """Total ignorance: all mass on the whole frame."""
    return MassFunction(frame, {frame.full(): Fraction(1)})


def combine(m1: MassFunction, m2: MassFunction) -> CombinationResult:
    """Orthogonal sum of two mass functions.

    Every pair of focal sets contributes the product of its masses to the
    intersection; products landing on the empty set form the conflict K and
    the rest is renormalised by 1 - K.
    """
    if m1.frame != m2.frame:
        raise FrameMismatchError("cannot combine mass functions on different frames")
    acc: dict[int, Fraction] = {}
    conflict = Fraction(0)
    for a, va in m1.items():
        for b, vb in m2.items():
            bits = a.bits & b.bits
            if bits:
                acc[bits] = acc.get(bits, Fraction(0)) + va * vb
            else:
                conflict += va * vb
    if conflict == 1:
        raise TotalConflictError("total conflict K = 1: the orthogonal sum is undefined")
    norm = 1 - conflict
    frame = m1.frame
    combined = MassFunction(frame, {SubsetMask(frame, bits): v / norm for bits, v in acc.items()})
    return CombinationResult(combined, conflict)


def combine_all(masses: Iterable[MassFunction]) -> CombinationResult:
    """Left fold of :func:`combine`; the reported conflict is that of the last step."""
    masses = list(masses)
    if len(masses) < 2:
        raise MassError("need at least two mass functions to combine")
    result = combine(masses[0], masses[1])
    for m in masses[2:]:
        result = combine(result.combined, m)
    return result


def _check_frame(m: MassFunction, a: SubsetMask) -> None:
    if a.frame != m.frame:
        raise FrameMismatchError("subset and mass function are on different frames")


def belief(m: MassFunction, a: SubsetMask) -> Fraction:
    _check_frame(m, a)
    return sum((v for b, v in m.items() if b.bits & ~a.bits == 0), Fraction(0))


def plausibility(m: MassFunction, a: SubsetMask) -> Fraction:
    """Total mass of focal sets meeting ``a``; equals 1 - Bel(complement of a)."""
    _check_frame(m, a)
    return sum((v for b, v in m.items() if b.bits & a.bits), Fraction(0))

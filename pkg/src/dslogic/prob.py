"""Joint probability assignments over frame x evidence cells.

Two evidence propositions E1, E2 split every frame element into four atoms,
one per evidence cell. Conditions (i)-(iv) tie such an assignment to a pair
of mass functions whose focal sets are the blocks S_1..S_k:

    (i)   P(S_i) = 1/k
    (ii)  P(E1 & E2 | S_i) = P(E1 | S_i) P(E2 | S_i)
    (iii) P(S_i | E1) = m1(S_i),  P(S_i | E2) = m2(S_i)
    (iv)  P(E1 & E2) > 0

Given (i), (iii) fixes the likelihoods P(E1 | S_i) up to one common scale:
P(E1 | S_i) = c1 * m1(S_i) with 0 < c1 <= 1 / max m1, and likewise for E2.
Condition (ii) then fixes the four cell probabilities of each block. What
remains free is how each (block, cell) mass spreads over the block's
elements; :func:`construct_member` and :func:`sample_gamma` walk exactly
this parametrisation.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    ConditionViolationError,
    FrameError,
    FrameMismatchError,
    InfeasibleError,
    MassError,
    ZeroProbabilityError,
)
from .frame import Frame, Partition, SubsetMask, is_partition
from .mass import MassFunction
from .numbers import to_fraction

__all__ = [
    "Cell",
    "ALL_CELLS",
    "Event",
    "E1",
    "E2",
    "E1E2",
    "ProbAssignment",
    "Theorem1Spec",
    "theorem1_spec",
    "Violation",
    "ConditionReport",
    "marginal",
    "prob",
    "cond_prob",
    "check_theorem1_conditions",
    "construct_member",
    "extremal_member",
    "sample_gamma",
    "random_simplex",
]


class Cell(enum.IntEnum):
    """The four joint truth-value cells of (E1, E2)."""

    E1E2 = 0
    E1_NOT_E2 = 1
    NOT_E1_E2 = 2
    NOT_E1_NOT_E2 = 3

    @property
    def token(self) -> str:
        return _TOKENS[self]

    @classmethod
    def parse(cls, token: str) -> Cell:
        try:
            return _FROM_TOKEN[token]
        except KeyError:
            raise ValueError(f"unknown evidence cell {token!r}; expected one of {list(_FROM_TOKEN)}") from None

    def factor(self, p_e1: Fraction, p_e2: Fraction) -> Fraction:
        """Probability of this cell when E1, E2 are independent with the given marginals."""
        f1 = p_e1 if self in (Cell.E1E2, Cell.E1_NOT_E2) else 1 - p_e1
        f2 = p_e2 if self in (Cell.E1E2, Cell.NOT_E1_E2) else 1 - p_e2
        return f1 * f2


_TOKENS = {
    Cell.E1E2: "E1E2",
    Cell.E1_NOT_E2: "E1~E2",
    Cell.NOT_E1_E2: "~E1E2",
    Cell.NOT_E1_NOT_E2: "~E1~E2",
}
_FROM_TOKEN = {v: k for k, v in _TOKENS.items()}

ALL_CELLS = frozenset(Cell)
NCELLS = len(Cell)


@dataclass(frozen=True)
class Event:
    """A set of atoms: the elements in ``theta`` crossed with ``cells``.

    ``theta=None`` stands for the whole frame, so the evidence events below
    can be written without naming a frame.
    """

    theta: Optional[SubsetMask] = None
    cells: frozenset = ALL_CELLS

    def __and__(self, other: Event) -> Event:
        other = as_event(other)
        if self.theta is None:
            theta = other.theta
        elif other.theta is None:
            theta = self.theta
        else:
            theta = self.theta & other.theta
        return Event(theta, self.cells & other.cells)

    def bits(self, frame: Frame) -> int:
        if self.theta is None:
            return frame.full_bits
        if self.theta.frame != frame:
            raise FrameMismatchError("event and assignment are on different frames")
        return self.theta.bits

    def atoms(self, frame: Frame) -> list[int]:
        """Atom indices (``element * 4 + cell``) covered by this event."""
        bits = self.bits(frame)
        cells = sorted(self.cells)
        return [i * NCELLS + c for i in range(frame.size) if bits >> i & 1 for c in cells]


E1 = Event(None, frozenset({Cell.E1E2, Cell.E1_NOT_E2}))
E2 = Event(None, frozenset({Cell.E1E2, Cell.NOT_E1_E2}))
E1E2 = Event(None, frozenset({Cell.E1E2}))

EventLike = Union[Event, SubsetMask]


def as_event(x: EventLike) -> Event:
    if isinstance(x, Event):
        return x
    if isinstance(x, SubsetMask):
        return Event(x, ALL_CELLS)
    raise TypeError(f"expected Event or SubsetMask, got {type(x).__name__}")


class ProbAssignment:
    """A full joint distribution over the atoms (element, cell).

    ``p[i * 4 + c]`` is the probability of element ``i`` together with cell
    ``c``. Entries are exact and sum to exactly 1.
    """

    __slots__ = ("frame", "p")

    def __init__(self, frame: Frame, p: Sequence):
        p = tuple(to_fraction(x) for x in p)
        if len(p) != frame.size * NCELLS:
            raise FrameError(f"expected {frame.size * NCELLS} atoms, got {len(p)}")
        if any(x < 0 for x in p):
            raise ValueError("probabilities must be non-negative")
        if sum(p, Fraction(0)) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        self.frame = frame
        self.p = p

    @classmethod
    def from_table(cls, frame: Frame, table: Mapping) -> ProbAssignment:
        """Build from ``{(label_or_index, Cell): probability}``; missing atoms are 0."""
        p = [Fraction(0)] * (frame.size * NCELLS)
        for (theta, cell), v in table.items():
            i = frame.index(theta) if isinstance(theta, str) else theta
            p[i * NCELLS + Cell(cell)] += to_fraction(v)
        return cls(frame, p)

    def __getitem__(self, key) -> Fraction:
        theta, cell = key
        i = self.frame.index(theta) if isinstance(theta, str) else theta
        return self.p[i * NCELLS + Cell(cell)]

    def __eq__(self, other):
        if not isinstance(other, ProbAssignment):
            return NotImplemented
        return self.frame == other.frame and self.p == other.p

    def __hash__(self):
        return hash((self.frame, self.p))

    def __repr__(self):
        nz = {
            f"{self.frame.labels[i // NCELLS]}|{Cell(i % NCELLS).token}": str(v)
            for i, v in enumerate(self.p)
            if v
        }
        return f"ProbAssignment({nz})"

    def items(self):
        for idx, v in enumerate(self.p):
            yield (idx // NCELLS, Cell(idx % NCELLS)), v


def marginal(P: ProbAssignment, A: SubsetMask, e: Optional[Iterable[Cell]] = None) -> Fraction:
    """P(A x e); ``e=None`` means all four cells (A identified with A x cells)."""
    if A.frame != P.frame:
        raise FrameMismatchError("subset and assignment are on different frames")
    cells = ALL_CELLS if e is None else frozenset(Cell(c) for c in e)
    return prob(P, Event(A, cells))


def prob(P: ProbAssignment, event: EventLike) -> Fraction:
    event = as_event(event)
    bits = event.bits(P.frame)
    cells = sorted(event.cells)
    p = P.p
    total = Fraction(0)
    i = 0
    while bits:
        if bits & 1:
            base = i * NCELLS
            for c in cells:
                total += p[base + c]
        bits >>= 1
        i += 1
    return total


def cond_prob(P: ProbAssignment, A: EventLike, B: EventLike) -> Fraction:
    A, B = as_event(A), as_event(B)
    pb = prob(P, B)
    if pb == 0:
        raise ZeroProbabilityError("conditioning event has probability zero")
    return prob(P, A & B) / pb


@dataclass(frozen=True)
class Theorem1Spec:
    """Two mass functions sharing one family of focal sets, the blocks S_i.

    Build with :func:`theorem1_spec`. ``blocks`` is ordered by lowest element.
    """

    frame: Frame
    blocks: tuple[SubsetMask, ...]
    m1: MassFunction
    m2: MassFunction

    def __post_init__(self):
        fam = set(self.blocks)
        if len(fam) != len(self.blocks):
            raise MassError("duplicate blocks")
        for m in (self.m1, self.m2):
            if m.frame != self.frame:
                raise FrameMismatchError("mass function is on a different frame")
            if set(m.focal_sets) != fam:
                raise MassError("both mass functions must have exactly the blocks as focal sets")

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def is_partition(self) -> bool:
        return is_partition(self.frame, self.blocks)

    @property
    def partition(self) -> Partition:
        return Partition(self.blocks)


def theorem1_spec(m1: MassFunction, m2: MassFunction, *, require_partition: bool = True) -> Theorem1Spec:
    """Pair two mass functions with a common focal family.

    With ``require_partition=False`` the focal sets may overlap; the
    condition checker still works but the constructions need a partition.
    """
    blocks = tuple(sorted(m1.focal_sets, key=lambda b: (b.lowest(), b.bits)))
    spec = Theorem1Spec(m1.frame, blocks, m1, m2)
    if require_partition and not spec.is_partition:
        raise MassError(f"focal sets {list(blocks)} do not partition the frame")
    return spec


@dataclass(frozen=True)
class Violation:
    block: Optional[int]
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    note: str = ""


@dataclass(frozen=True)
class ConditionReport:
    violations: dict = field(default_factory=dict)

    def failures(self, cond: str) -> list[Violation]:
        return self.violations.get(cond, [])

    @property
    def cond_i(self) -> bool:
        return not self.failures("i")

    @property
    def cond_ii(self) -> bool:
        return not self.failures("ii")

    @property
    def cond_iii(self) -> bool:
        return not self.failures("iii")

    @property
    def cond_iv(self) -> bool:
        return not self.failures("iv")

    @property
    def all_pass(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii and self.cond_iv

    def summary(self) -> dict[str, bool]:
        return {"i": self.cond_i, "ii": self.cond_ii, "iii": self.cond_iii, "iv": self.cond_iv}


def check_theorem1_conditions(P: ProbAssignment, spec: Theorem1Spec) -> ConditionReport:
    """Check conditions (i)-(iv) exactly; violations are reported, never raised.

    A conditional whose conditioning event has probability zero counts as a
    violation tagged ``"undefined"``.
    """
    if P.frame != spec.frame:
        raise FrameMismatchError("assignment and spec are on different frames")
    k = spec.k
    out: dict[str, list[Violation]] = {"i": [], "ii": [], "iii": [], "iv": []}
    p_e1, p_e2, p_e12 = prob(P, E1), prob(P, E2), prob(P, E1E2)

    for j, s in enumerate(spec.blocks):
        ps = prob(P, s)
        if ps != Fraction(1, k):
            out["i"].append(Violation(j, ps, Fraction(1, k), "P(S_i) != 1/k"))
        if ps == 0:
            out["ii"].append(Violation(j, None, None, "undefined: P(S_i) = 0"))
        else:
            lhs = prob(P, Event(s, E1E2.cells)) / ps
            rhs = (prob(P, Event(s, E1.cells)) / ps) * (prob(P, Event(s, E2.cells)) / ps)
            if lhs != rhs:
                out["ii"].append(Violation(j, lhs, rhs, "P(E1&E2|S_i) != P(E1|S_i)P(E2|S_i)"))
        for ev, pe, m, name in ((E1, p_e1, spec.m1, "E1"), (E2, p_e2, spec.m2, "E2")):
            if pe == 0:
                out["iii"].append(Violation(j, None, m[s], f"undefined: P({name}) = 0"))
                continue
            lhs = prob(P, Event(s, ev.cells)) / pe
            if lhs != m[s]:
                out["iii"].append(Violation(j, lhs, m[s], f"P(S_i|{name}) != m(S_i)"))
    if p_e12 <= 0:
        out["iv"].append(Violation(None, p_e12, Fraction(0), "P(E1&E2) = 0"))
    return ConditionReport({c: v for c, v in out.items() if v})


def _require_partition(spec: Theorem1Spec) -> None:
    if not spec.is_partition:
        raise MassError("this construction needs blocks that partition the frame")


def _within(spec: Theorem1Spec, j: int, dist) -> dict[int, Fraction]:
    """Normalise one block's within-block distribution to ``{element: prob}``."""
    block = spec.blocks[j]
    members = list(block)
    if dist is None:
        return {i: Fraction(1, len(members)) for i in members}
    if isinstance(dist, Mapping):
        d = {}
        for key, v in dist.items():
            i = spec.frame.index(key) if isinstance(key, str) else key
            if i not in members:
                raise ValueError(f"element {key!r} is not in block {block!r}")
            d[i] = d.get(i, Fraction(0)) + to_fraction(v)
    else:
        dist = list(dist)
        if len(dist) != len(members):
            raise ValueError(f"block {block!r} has {len(members)} elements, got {len(dist)} weights")
        d = {i: to_fraction(v) for i, v in zip(members, dist)}
    if any(v < 0 for v in d.values()) or sum(d.values(), Fraction(0)) != 1:
        raise ValueError(f"within-block distribution for {block!r} must be non-negative and sum to 1")
    return d


def _assemble(spec: Theorem1Spec, a, b, within) -> ProbAssignment:
    """Joint from block likelihoods ``a``, ``b`` and per-(block, cell) spreads."""
    k = spec.k
    p = [Fraction(0)] * (spec.frame.size * NCELLS)
    for j in range(k):
        for c in Cell:
            mass = c.factor(a[j], b[j]) / k
            if not mass:
                continue
            for i, q in within[j][c].items():
                p[i * NCELLS + c] += mass * q
    return ProbAssignment(spec.frame, p)


def _max_scale(m: MassFunction) -> Fraction:
    return 1 / max(m.values())


def _likelihoods(spec: Theorem1Spec, m: MassFunction, scale) -> list[Fraction]:
    scale = to_fraction(scale)
    if not 0 < scale <= _max_scale(m):
        raise InfeasibleError(f"likelihood scale must lie in (0, {_max_scale(m)}], got {scale}")
    return [scale * m[s] for s in spec.blocks]


def construct_member(
    spec: Theorem1Spec,
    within_block: Optional[Sequence] = None,
    evidence_params: Optional[Sequence] = None,
    *,
    mode: str = "solve",
    scales=(1, 1),
) -> ProbAssignment:
    """Build an assignment satisfying conditions (i)-(iv).

    ``within_block[j]`` spreads block ``j`` over its elements, either as a
    sequence aligned with the block's elements in index order or as a
    mapping; ``None`` means uniform.

    In mode ``"solve"`` the likelihoods are P(E1|S_j) = c1 * m1(S_j) and
    P(E2|S_j) = c2 * m2(S_j) with ``scales = (c1, c2)``; each scale must lie
    in (0, 1 / max m]. The default makes each likelihood equal the mass.

    In mode ``"given"``, ``evidence_params[j] = (P(E1|S_j), P(E2|S_j))`` is
    validated against (iii) and :class:`InfeasibleError` raised if no member
    of the constraint set has those values.
    """
    _require_partition(spec)
    k = spec.k
    if mode == "solve":
        if evidence_params is not None:
            raise ValueError("evidence_params are only used in mode 'given'")
        a = _likelihoods(spec, spec.m1, scales[0])
        b = _likelihoods(spec, spec.m2, scales[1])
    elif mode == "given":
        if evidence_params is None or len(evidence_params) != k:
            raise ValueError(f"mode 'given' needs {k} (P(E1|S), P(E2|S)) pairs")
        a = [to_fraction(x) for x, _ in evidence_params]
        b = [to_fraction(y) for _, y in evidence_params]
        for name, lik, m in (("E1", a, spec.m1), ("E2", b, spec.m2)):
            if any(not 0 <= x <= 1 for x in lik):
                raise InfeasibleError(f"P({name}|S_j) must lie in [0, 1]")
            total = sum(lik, Fraction(0))
            if total == 0:
                raise InfeasibleError(f"P({name}) = 0 leaves P(S_j|{name}) undefined")
            for j, s in enumerate(spec.blocks):
                if lik[j] / total != m[s]:
                    raise InfeasibleError(
                        f"block {j}: P(E{name[-1]}|S_j) = {lik[j]} induces "
                        f"P(S_j|{name}) = {lik[j] / total}, but the mass is {m[s]}"
                    )
    else:
        raise ValueError(f"unknown mode {mode!r}")

    within = within_block if within_block is not None else [None] * k
    if len(within) != k:
        raise ValueError(f"need {k} within-block distributions, got {len(within)}")
    spread = []
    for j in range(k):
        d = _within(spec, j, within[j])
        spread.append({c: d for c in Cell})
    return _assemble(spec, a, b, spread)


def extremal_member(spec: Theorem1Spec, A: SubsetMask, reference: ProbAssignment) -> ProbAssignment:
    """The assignment that minimises P(A | E1 & E2) over the constraint set.

    Blocks inside ``A`` keep the reference's atoms. Every other block puts
    each of its cell masses on a single element outside ``A``, the lowest
    indexed one.
    """
    _require_partition(spec)
    if A.frame != spec.frame:
        raise FrameMismatchError("subset and spec are on different frames")
    report = check_theorem1_conditions(reference, spec)
    if not report.all_pass:
        raise ConditionViolationError(f"reference violates conditions {report.summary()}")
    p = list(reference.p)
    for s in spec.blocks:
        if s <= A:
            continue
        theta0 = (s - A).lowest()
        for c in Cell:
            block_cell = sum((reference.p[i * NCELLS + c] for i in s), Fraction(0))
            for i in s:
                p[i * NCELLS + c] = Fraction(0)
            p[theta0 * NCELLS + c] = block_cell
    return ProbAssignment(spec.frame, p)


def random_simplex(rng: random.Random, n: int, resolution: int = 1000) -> list[Fraction]:
    """A uniformly drawn point of the grid {x >= 0, sum x = 1} with step 1/resolution."""
    cuts = sorted(rng.randint(0, resolution) for _ in range(n - 1))
    edges = [0, *cuts, resolution]
    return [Fraction(edges[i + 1] - edges[i], resolution) for i in range(n)]


def sample_gamma(spec: Theorem1Spec, count: int, seed: int, *, resolution: int = 1000) -> list[ProbAssignment]:
    """Deterministic pseudo-random members of the constraint set.

    Each sample draws both likelihood scales uniformly from their feasible
    range (0, 1 / max m] and an independent within-block spread for every
    (block, cell) pair.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    _require_partition(spec)
    rng = random.Random(seed)
    hi1, hi2 = _max_scale(spec.m1), _max_scale(spec.m2)
    out = []
    for _ in range(count):
        s1 = Fraction(rng.randint(1, resolution), resolution)
        s2 = Fraction(rng.randint(1, resolution), resolution)
        a = [s1 * hi1 * spec.m1[s] for s in spec.blocks]
        b = [s2 * hi2 * spec.m2[s] for s in spec.blocks]
        spread = []
        for s in spec.blocks:
            members = list(s)
            spread.append({c: dict(zip(members, random_simplex(rng, len(members), resolution))) for c in Cell})
        out.append(_assemble(spec, a, b, spread))
    return out

"""Where Dempster's rule and probabilistic logic agree, and where they diverge.

Agreement: with equiprobable partition blocks, conditionally independent
evidence and posteriors fixed by the masses, the orthogonal sum equals the
posterior given both pieces of evidence, and Bel is the lower envelope of
that posterior over all admissible assignments.

Divergence families:

* prior swamping: the same two posteriors under a non-uniform prior;
* overlapping focal sets, where Dempster's rule puts mass on an
  intersection that may have posterior probability zero;
* the lottery, where the two mass functions use different partitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import DSLogicError, MassError
from .frame import MAX_FRAME_SIZE, SubsetMask, make_frame
from .lp import Interval, cond_prob_bounds, theorem1_fragment
from .mass import CombinationResult, MassFunction, belief, combine, make_mass
from .numbers import to_fraction
from .prob import (
    E1,
    E1E2,
    E2,
    Cell,
    ConditionReport,
    Event,
    ProbAssignment,
    Theorem1Spec,
    check_theorem1_conditions,
    cond_prob,
    construct_member,
    extremal_member,
    prob,
    sample_gamma,
    theorem1_spec,
)

__all__ = [
    "posterior_partition",
    "OddsSwamp",
    "odds_swamp",
    "LotteryResult",
    "lottery",
    "LotteryCheck",
    "lottery_member",
    "check_lottery_conditions",
    "lottery_explicit",
    "NonpartitionWitness",
    "nonpartition_witness",
    "confirmation_ratio",
    "classify_evidence",
    "BlockRow",
    "AgreementReport",
    "agreement_report",
    "DependenceDemo",
    "dependence_demo",
]


def posterior_partition(m1: MassFunction, m2: MassFunction, prior=None) -> dict[SubsetMask, Fraction]:
    """Posterior of each block given E1 & E2 when both pieces of evidence are
    conditionally independent within blocks.

    posterior(S_j) is proportional to m1(S_j) * m2(S_j) / prior(S_j). With a
    uniform prior (``prior=None``) this is the orthogonal sum restricted to
    the blocks. ``prior`` is a sequence aligned with the blocks ordered by
    lowest element, or a mapping from block to probability.
    """
    if m1.frame != m2.frame or set(m1.focal_sets) != set(m2.focal_sets):
        raise MassError("both mass functions must share the same focal sets")
    blocks = sorted(m1.focal_sets, key=lambda b: (b.lowest(), b.bits))
    if prior is None:
        pri = {s: Fraction(1, len(blocks)) for s in blocks}
    elif isinstance(prior, Mapping):
        pri = {s: to_fraction(prior[s]) for s in blocks}
    else:
        prior = list(prior)
        if len(prior) != len(blocks):
            raise ValueError(f"prior has {len(prior)} entries for {len(blocks)} blocks")
        pri = {s: to_fraction(v) for s, v in zip(blocks, prior)}
    if any(v <= 0 for v in pri.values()) or sum(pri.values()) != 1:
        raise ValueError("prior must be positive and sum to 1")
    weights = {s: m1[s] * m2[s] / pri[s] for s in blocks}
    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise DSLogicError("every block has zero joint likelihood")
    return {s: w / total for s, w in weights.items()}


@dataclass(frozen=True)
class OddsSwamp:
    dempster: Fraction
    problogic: Fraction
    odds: Fraction
    divergence: Fraction


def _open_unit(name: str, x) -> Fraction:
    x = to_fraction(x)
    if not 0 < x < 1:
        raise DSLogicError(f"{name} must lie strictly between 0 and 1, got {x}")
    return x


def odds_swamp(m1H, m2H, priorH) -> OddsSwamp:
    """Bipartite frame {H, not H}: Dempster's combination against the exact
    posterior P(H | E1 & E2) under prior ``priorH``.

    P(H | E1 & E2) = a*b / (a*b + O(H) * (1-a)(1-b)) with O(H) = P(H) / P(not H),
    where a, b are the posteriors of H on each piece of evidence alone.
    """
    a = _open_unit("m1(H)", m1H)
    b = _open_unit("m2(H)", m2H)
    p = _open_unit("prior(H)", priorH)
    odds = p / (1 - p)
    agree = a * b
    against = (1 - a) * (1 - b)
    dempster = agree / (agree + against)
    problogic = agree / (agree + odds * against)
    return OddsSwamp(dempster, problogic, odds, abs(dempster - problogic))


@dataclass(frozen=True)
class LotteryResult:
    """Jones (x1) among n participants: one ticket clue, one fairness clue."""

    n: int
    m1x1: Fraction
    m3x1: Fraction
    bel: Fraction
    posterior: Fraction
    t1: Fraction
    t2: Fraction


def lottery(n: int, m1x1) -> LotteryResult:
    """Closed-form lottery comparison, valid for any n >= 2.

    m1 = {x1}: m, {x2..xn}: 1 - m and m2 uniform over singletons give
    m3({x1}) = m / (m + T1) with T1 = (n - 1)(1 - m). The posterior under
    the lottery conditions is m / (m + T2), T2 = sum of P(x_i | E1) over
    i >= 2 = 1 - m, which does not depend on n.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DSLogicError(f"the lottery needs an integer n >= 2, got {n!r}")
    m = _open_unit("m1({x1})", m1x1)
    t1 = (n - 1) * (1 - m)
    t2 = 1 - m
    m3 = m / (m + t1)
    assert m3 == m / (m + (1 - m) * (n - 1))
    return LotteryResult(n=n, m1x1=m, m3x1=m3, bel=m3, posterior=m / (m + t2), t1=t1, t2=t2)


def _lottery_masses(n: int, m: Fraction):
    frame = make_frame([f"x{i}" for i in range(1, n + 1)])
    x1 = frame.singleton(0)
    m1 = make_mass(frame, [(x1, m), (~x1, 1 - m)])
    m2 = make_mass(frame, [(frame.singleton(i), Fraction(1, n)) for i in range(n)])
    return frame, m1, m2


def lottery_member(n: int, m1x1, weights: Optional[Sequence] = None, e2=Fraction(1, 2)) -> ProbAssignment:
    """An explicit assignment satisfying the lottery conditions (1)-(4).

    Every participant has prior 1/n; E2 has probability ``e2`` independently
    of everything else; P(E1 | x_i) for i >= 2 is spread according to
    ``weights`` (uniform by default) and scaled so that P(x1 | E1) = m1x1.
    """
    if not 2 <= n <= MAX_FRAME_SIZE:
        raise DSLogicError(f"explicit lottery frames need 2 <= n <= {MAX_FRAME_SIZE}")
    m = _open_unit("m1({x1})", m1x1)
    e2 = _open_unit("P(E2)", e2)
    w = [Fraction(1)] * (n - 1) if weights is None else [to_fraction(v) for v in weights]
    if len(w) != n - 1 or any(v <= 0 for v in w):
        raise ValueError(f"need {n - 1} positive weights")
    wsum = sum(w)
    w = [v / wsum for v in w]
    # P(E1|x1) = alpha, P(E1|x_i) = beta_i with sum(beta) = alpha (1 - m) / m
    alpha = min(Fraction(1), m / ((1 - m) * max(w)))
    beta = [alpha * (1 - m) / m * v for v in w]
    frame, _, _ = _lottery_masses(n, m)
    p = []
    for lik in [alpha, *beta]:
        p.extend(Fraction(1, n) * c.factor(lik, e2) for c in Cell)
    return ProbAssignment(frame, p)


def check_lottery_conditions(P: ProbAssignment, m1x1) -> dict[str, bool]:
    """Exact check of the lottery conditions (1), (2a), (2b), (3a), (3b), (4)."""
    m = to_fraction(m1x1)
    frame = P.frame
    n = frame.size
    singles = [frame.singleton(i) for i in range(n)]
    rest = ~singles[0]

    def independent(s):
        ps = prob(P, s)
        if ps == 0:
            return False
        both = prob(P, Event(s, E1E2.cells)) / ps
        return both == (prob(P, Event(s, E1.cells)) / ps) * (prob(P, Event(s, E2.cells)) / ps)

    p_e1, p_e2 = prob(P, E1), prob(P, E2)
    return {
        "1": all(prob(P, s) == Fraction(1, n) for s in singles),
        "2a": all(independent(s) for s in singles),
        "2b": independent(rest),
        "3a": p_e1 > 0 and cond_prob(P, singles[0], E1) == m,
        "3b": p_e2 > 0 and all(cond_prob(P, s, E2) == Fraction(1, n) for s in singles),
        "4": prob(P, E1E2) > 0,
    }


@dataclass(frozen=True)
class LotteryCheck:
    m3x1: Fraction
    posterior: Fraction
    conditions: dict


def lottery_explicit(n: int, m1x1, weights=None, e2=Fraction(1, 2)) -> LotteryCheck:
    """The lottery computed on a materialised frame (n <= 64).

    Dempster's side runs :func:`combine` on the actual mass functions and the
    probabilistic side conditions an explicit member on E1 & E2; used to
    cross-check the closed forms of :func:`lottery`.
    """
    m = _open_unit("m1({x1})", m1x1)
    frame, m1, m2 = _lottery_masses(n, m)
    m3 = combine(m1, m2).combined.get(frame.singleton(0))
    P = lottery_member(n, m, weights, e2)
    return LotteryCheck(m3, cond_prob(P, frame.singleton(0), E1E2), check_lottery_conditions(P, m))


@dataclass(frozen=True)
class NonpartitionWitness:
    spec: Theorem1Spec
    combined: CombinationResult
    witness: ProbAssignment
    report: ConditionReport
    conditional: Fraction


def nonpartition_witness() -> NonpartitionWitness:
    """Overlapping focal sets {a,b}, {b,c} with mass 1/2 each in both sources.

    Dempster's rule gives {b} mass 1/2. The witness puts no probability on b,
    1/2 on each of a and c, and makes E1, E2 independent fair coins given
    either element; it satisfies (i)-(iv) with the focal sets as blocks, yet
    P(b | E1 & E2) = 0.
    """
    frame = make_frame(["a", "b", "c"])
    ab, bc = frame.subset(["a", "b"]), frame.subset(["b", "c"])
    half = Fraction(1, 2)
    m1 = make_mass(frame, [(ab, half), (bc, half)])
    m2 = make_mass(frame, [(ab, half), (bc, half)])
    spec = theorem1_spec(m1, m2, require_partition=False)
    table = {}
    for label in ("a", "c"):
        for c in Cell:
            table[(label, c)] = half * c.factor(half, half)
    witness = ProbAssignment.from_table(frame, table)
    report = check_theorem1_conditions(witness, spec)
    conditional = cond_prob(witness, frame.subset(["b"]), E1E2)
    return NonpartitionWitness(spec, combine(m1, m2), witness, report, conditional)


def confirmation_ratio(P: ProbAssignment, H, E) -> Fraction:
    """P(H | E) / P(H); below 1 the evidence disconfirms H however high P(H | E) is."""
    ph = prob(P, H)
    if ph == 0:
        raise DSLogicError("the hypothesis has prior probability zero")
    return cond_prob(P, H, E) / ph


def classify_evidence(ratio: Fraction) -> str:
    if ratio > 1:
        return "confirming"
    if ratio < 1:
        return "disconfirming"
    return "irrelevant"


@dataclass(frozen=True)
class BlockRow:
    block: SubsetMask
    m3: Fraction
    closed_form: Fraction
    member: Fraction
    equal: bool


@dataclass(frozen=True)
class AgreementReport:
    rows: tuple
    blocks_agree: bool
    query: SubsetMask
    bel: Fraction
    constructed_min: Fraction
    sampled_min: Optional[Fraction]
    samples: int
    belief_is_min: bool


def agreement_report(spec: Theorem1Spec, A: SubsetMask, samples: int = 100, seed: int = 0) -> AgreementReport:
    """Check both agreement identities for ``spec`` and query ``A``.

    Block side: each block's combined mass against the closed-form
    posterior and the posterior of a constructed member (and of every
    sampled member). Query side: Bel(A) against the extremal member's
    P(A | E1 & E2) and the smallest value seen among the samples.
    """
    m3 = combine(spec.m1, spec.m2).combined
    closed = posterior_partition(spec.m1, spec.m2)
    reference = construct_member(spec)
    gamma = sample_gamma(spec, samples, seed)

    rows = []
    for s in spec.blocks:
        member = cond_prob(reference, s, E1E2)
        rows.append(BlockRow(s, m3.get(s), closed[s], member, m3.get(s) == closed[s] == member))
    blocks_agree = all(r.equal for r in rows) and all(
        cond_prob(Q, s, E1E2) == m3.get(s) for Q in gamma for s in spec.blocks
    )

    bel = belief(m3, A)
    constructed = cond_prob(extremal_member(spec, A, reference), A, E1E2)
    sampled = min((cond_prob(Q, A, E1E2) for Q in gamma), default=None)
    belief_is_min = constructed == bel and (sampled is None or sampled >= constructed)
    return AgreementReport(tuple(rows), blocks_agree, A, bel, constructed, sampled, samples, belief_is_min)


@dataclass(frozen=True)
class DependenceDemo:
    dempster: Fraction
    interval: Interval
    witness: ProbAssignment
    report: ConditionReport
    conditional: Fraction


def dependence_demo(m1H=Fraction(9, 10), m2H=Fraction(9, 10)) -> DependenceDemo:
    """Drop the independence condition on {H, not H} and watch the block identity fail.

    Without (ii) the remaining conditions are linear, so the posterior of H
    given E1 & E2 ranges over an interval; the minimising member violates
    only (ii).
    """
    frame = make_frame(["H", "notH"])
    h = frame.subset(["H"])
    m1 = make_mass(frame, [(h, m1H), (~h, 1 - to_fraction(m1H))])
    m2 = make_mass(frame, [(h, m2H), (~h, 1 - to_fraction(m2H))])
    spec = theorem1_spec(m1, m2)
    system = theorem1_fragment(spec)
    interval = cond_prob_bounds(system, Event(h).atoms(frame), E1E2.atoms(frame))
    witness = ProbAssignment(frame, interval.lo_witness)
    return DependenceDemo(
        dempster=combine(m1, m2).combined.get(h),
        interval=interval,
        witness=witness,
        report=check_theorem1_conditions(witness, spec),
        conditional=cond_prob(witness, h, E1E2),
    )

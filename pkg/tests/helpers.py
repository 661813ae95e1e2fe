"""Shared generators and independent oracles for the test suite."""

from fractions import Fraction
from itertools import product

from dslogic.frame import SubsetMask, make_frame
from dslogic.mass import make_mass
from dslogic.prob import random_simplex, theorem1_spec


def random_masses(rng, k, max_den=100):
    """k positive rationals with a common denominator <= max_den summing to 1."""
    den = rng.randint(k, max_den)
    cuts = sorted(rng.sample(range(1, den), k - 1))
    edges = [0, *cuts, den]
    return [Fraction(edges[i + 1] - edges[i], den) for i in range(k)]


def random_spec(rng, k=None, max_block=3):
    """A random partition spec with 2 <= k <= 6 blocks and shuffled elements."""
    k = k or rng.randint(2, 6)
    sizes = [rng.randint(1, max_block) for _ in range(k)]
    n = sum(sizes)
    frame = make_frame([f"t{i}" for i in range(n)])
    order = list(range(n))
    rng.shuffle(order)
    blocks, pos = [], 0
    for s in sizes:
        bits = 0
        for i in order[pos:pos + s]:
            bits |= 1 << i
        blocks.append(SubsetMask(frame, bits))
        pos += s
    m1 = make_mass(frame, list(zip(blocks, random_masses(rng, k))))
    m2 = make_mass(frame, list(zip(blocks, random_masses(rng, k))))
    return theorem1_spec(m1, m2)


def random_member_args(rng, spec):
    """Random within-block spreads and feasible likelihood scales."""
    within = [random_simplex(rng, len(s), 100) for s in spec.blocks]
    scales = tuple(
        Fraction(rng.randint(1, 100), 100) / max(m.values()) for m in (spec.m1, spec.m2)
    )
    return within, scales


def random_query(rng, spec):
    """Either random elements, or a union of blocks plus random extra elements."""
    frame = spec.frame
    if rng.random() < 0.5:
        return SubsetMask(frame, rng.getrandbits(frame.size))
    bits = 0
    for s in spec.blocks:
        if rng.random() < 0.5:
            bits |= s.bits
    return SubsetMask(frame, bits | (rng.getrandbits(frame.size) & rng.getrandbits(frame.size)))


# ---------------------------------------------------------------- oracles


def all_subsets(frame):
    return [SubsetMask(frame, bits) for bits in range(1 << frame.size)]


def dempster_by_commonality(m1, m2):
    """Orthogonal sum via commonality functions: Q12 = Q1 * Q2, then Moebius
    inversion m(A) = sum over B >= A of (-1)^|B - A| Q(B). Independent of the
    focal-pair loop; exponential, so small frames only.
    """
    frame = m1.frame
    subsets = all_subsets(frame)

    def q(m, a):
        return sum((v for b, v in m.items() if a.bits & ~b.bits == 0), Fraction(0))

    q12 = {a: q(m1, a) * q(m2, a) for a in subsets}
    raw = {}
    for a in subsets:
        if a.is_empty:
            continue
        v = sum(
            ((-1) ** (len(b) - len(a)) * q12[b] for b in subsets if a.bits & ~b.bits == 0),
            Fraction(0),
        )
        if v:
            raw[a] = v
    total = sum(raw.values(), Fraction(0))
    return {a: v / total for a, v in raw.items()}, 1 - total


def grid_bounds(system, query, step=200):
    """Brute-force [min, max] of P(query) over grid points of the 3-atom simplex."""
    assert system.n_atoms == 3
    q = set(query)
    lo = hi = None
    for i, j in product(range(step + 1), repeat=2):
        if i + j > step:
            continue
        x = (Fraction(i, step), Fraction(j, step), Fraction(step - i - j, step))
        if not all(c.satisfied(x) for c in system.constraints):
            continue
        v = sum((x[a] for a in q), Fraction(0))
        lo = v if lo is None or v < lo else lo
        hi = v if hi is None or v > hi else hi
    return lo, hi

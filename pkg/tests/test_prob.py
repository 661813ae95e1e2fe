import random
from fractions import Fraction as F

import pytest

from dslogic.errors import ConditionViolationError, InfeasibleError, MassError, ZeroProbabilityError
from dslogic.frame import make_frame
from dslogic.mass import belief, combine, make_mass
from dslogic.prob import (
    E1,
    E1E2,
    E2,
    Cell,
    Event,
    ProbAssignment,
    check_theorem1_conditions,
    cond_prob,
    construct_member,
    extremal_member,
    marginal,
    prob,
    sample_gamma,
    theorem1_spec,
)

from helpers import random_member_args, random_query, random_spec

AB = make_frame(["a", "b"])
ABC = make_frame(["a", "b", "c"])


def uniform(frame):
    return ProbAssignment(frame, [F(1, frame.size * 4)] * (frame.size * 4))


def spec_2(frame, blocks, p1, p2):
    b1, b2 = (frame.subset([x] if x in frame.labels else x) for x in blocks)
    m1 = make_mass(frame, [(b1, p1), (b2, 1 - F(p1))])
    m2 = make_mass(frame, [(b1, p2), (b2, 1 - F(p2))])
    return theorem1_spec(m1, m2)


class TestMarginals:
    def test_marginal(self):
        P = uniform(AB)
        assert marginal(P, AB.full()) == 1
        assert marginal(P, AB.empty()) == 0
        assert marginal(P, AB.subset("a")) == F(1, 2)
        assert marginal(P, AB.subset("a"), [Cell.E1E2]) == F(1, 8)

    def test_evidence_events(self):
        P = uniform(AB)
        assert prob(P, E1) == prob(P, E2) == F(1, 2)
        assert prob(P, E1E2) == F(1, 4)
        assert prob(P, E1 & E2) == prob(P, E1E2)

    def test_cond_prob(self):
        P = uniform(ABC)
        a = ABC.subset("a")
        assert cond_prob(P, a, a) == 1
        assert cond_prob(P, Event(), E1E2) == 1
        Q = ProbAssignment.from_table(ABC, {("a", Cell.E1E2): 1})
        with pytest.raises(ZeroProbabilityError):
            cond_prob(Q, a, ABC.subset("b"))

    def test_assignment_validation(self):
        with pytest.raises(ValueError, match="sum"):
            ProbAssignment(AB, [F(1, 8)] * 7 + [F(0)])
        with pytest.raises(ValueError, match="non-negative"):
            ProbAssignment(AB, [F(1, 4)] * 6 + [F(-1, 4), F(3, 4)])


class TestConditions:
    def test_constructed_member_passes(self):
        spec = spec_2(ABC, ["a", "bc"], F(9, 10), F(2, 5))
        assert check_theorem1_conditions(construct_member(spec), spec).all_pass

    def test_no_joint_evidence_fails_iv(self):
        spec = spec_2(AB, ["a", "b"], F(1, 2), F(1, 2))
        P = ProbAssignment.from_table(AB, {("a", Cell.NOT_E1_NOT_E2): F(1, 2), ("b", Cell.NOT_E1_NOT_E2): F(1, 2)})
        rep = check_theorem1_conditions(P, spec)
        assert not rep.cond_iv and not rep.all_pass
        # E1 never occurs, so (iii) is undefined and reported, not raised
        assert not rep.cond_iii
        assert rep.failures("iii")[0].note.startswith("undefined")

    def test_skewed_prior_fails_i(self):
        frame = make_frame(["H", "notH"])
        spec = spec_2(frame, ["H", "notH"], F(9, 10), F(9, 10))
        table = {}
        for label, prior, lik in (("H", F(999, 1000), F(9, 10)), ("notH", F(1, 1000), F(1, 10))):
            for c in Cell:
                table[(label, c)] = prior * c.factor(lik, lik)
        rep = check_theorem1_conditions(ProbAssignment.from_table(frame, table), spec)
        assert not rep.cond_i
        assert rep.failures("i")[0].lhs == F(999, 1000)
        assert rep.cond_ii and rep.cond_iv

    def test_dependent_evidence_fails_ii(self):
        spec = spec_2(AB, ["a", "b"], F(1, 2), F(1, 2))
        # E1 and E2 perfectly correlated within each element
        P = ProbAssignment.from_table(AB, {
            ("a", Cell.E1E2): F(1, 4), ("a", Cell.NOT_E1_NOT_E2): F(1, 4),
            ("b", Cell.E1E2): F(1, 4), ("b", Cell.NOT_E1_NOT_E2): F(1, 4),
        })
        rep = check_theorem1_conditions(P, spec)
        assert not rep.cond_ii and rep.cond_i and rep.cond_iii and rep.cond_iv


class TestConstructMember:
    def test_uniform(self):
        spec = spec_2(AB, ["a", "b"], F(1, 2), F(1, 2))
        assert construct_member(spec) == uniform(AB)

    def test_solve_mode(self):
        spec = spec_2(AB, ["a", "b"], F(9, 10), F(9, 10))
        P = construct_member(spec, mode="solve")
        assert cond_prob(P, AB.subset("a"), E1) == F(9, 10)
        assert check_theorem1_conditions(P, spec).all_pass

    def test_scales_and_within(self):
        spec = spec_2(ABC, ["a", "bc"], F(3, 4), F(1, 3))
        P = construct_member(spec, [None, [F(1, 5), F(4, 5)]], scales=(F(4, 3), F(1, 2)))
        assert check_theorem1_conditions(P, spec).all_pass
        assert cond_prob(P, ABC.subset("c"), ABC.subset("bc")) == F(4, 5)
        assert cond_prob(P, E1, ABC.subset("a")) == 1
        with pytest.raises(InfeasibleError):
            construct_member(spec, scales=(F(2), 1))

    def test_given_mode(self):
        spec = spec_2(AB, ["a", "b"], F(9, 10), F(9, 10))
        P = construct_member(spec, evidence_params=[(F(9, 20), F(9, 10)), (F(1, 20), F(1, 10))], mode="given")
        assert check_theorem1_conditions(P, spec).all_pass
        with pytest.raises(InfeasibleError):
            construct_member(spec, evidence_params=[(0, F(9, 10)), (F(1, 2), F(1, 10))], mode="given")
        with pytest.raises(InfeasibleError):
            construct_member(spec, evidence_params=[(F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))], mode="given")

    def test_needs_partition(self):
        m = make_mass(ABC, [(ABC.subset("ab"), F(1, 2)), (ABC.subset("bc"), F(1, 2))])
        spec = theorem1_spec(m, m, require_partition=False)
        with pytest.raises(MassError):
            construct_member(spec)
        with pytest.raises(MassError):
            theorem1_spec(m, m)

    def test_focal_family_mismatch(self):
        m1 = make_mass(ABC, [(ABC.subset("a"), F(1, 2)), (ABC.subset("bc"), F(1, 2))])
        m2 = make_mass(ABC, [(ABC.subset("ab"), F(1, 2)), (ABC.subset("c"), F(1, 2))])
        with pytest.raises(MassError):
            theorem1_spec(m1, m2)


class TestExtremalMember:
    spec = spec_2(ABC, ["a", "bc"], F(3, 5), F(1, 4))

    def test_full_query_is_reference(self):
        R = construct_member(self.spec, [None, [F(1, 3), F(2, 3)]])
        assert extremal_member(self.spec, ABC.full(), R) == R

    def test_concentrates_on_lowest_outside(self):
        R = construct_member(self.spec)
        b = ABC.subset("b")
        P = extremal_member(self.spec, b, R)
        assert marginal(P, b) == 0 and marginal(P, ABC.subset("c")) == marginal(R, ABC.subset("bc"))
        assert check_theorem1_conditions(P, self.spec).all_pass
        m3 = combine(self.spec.m1, self.spec.m2).combined
        assert cond_prob(P, b, E1E2) == belief(m3, b) == 0

    def test_union_of_blocks(self):
        frame = make_frame(list("abcdef"))
        blocks = [frame.subset(x) for x in ("ab", "c", "de", "f")]
        m1 = make_mass(frame, list(zip(blocks, [F(1, 10), F(2, 10), F(3, 10), F(4, 10)])))
        m2 = make_mass(frame, list(zip(blocks, [F(1, 4), F(1, 4), F(1, 8), F(3, 8)])))
        spec = theorem1_spec(m1, m2)
        m3 = combine(m1, m2).combined
        A = blocks[0] | blocks[1]
        P = extremal_member(spec, A | frame.subset("d"), construct_member(spec))
        assert cond_prob(P, A | frame.subset("d"), E1E2) == m3[blocks[0]] + m3[blocks[1]]

    def test_bad_reference(self):
        with pytest.raises(ConditionViolationError):
            extremal_member(self.spec, ABC.subset("b"), uniform(ABC))


class TestSampleGamma:
    spec = spec_2(ABC, ["a", "bc"], F(7, 10), F(1, 5))

    def test_empty_and_deterministic(self):
        assert sample_gamma(self.spec, 0, 1) == []
        assert sample_gamma(self.spec, 5, 42) == sample_gamma(self.spec, 5, 42)
        assert sample_gamma(self.spec, 5, 42) != sample_gamma(self.spec, 5, 43)

    def test_members_pass_and_respect_min(self):
        R = construct_member(self.spec)
        for A in (ABC.subset("b"), ABC.subset("ab"), ABC.subset("c")):
            lo = cond_prob(extremal_member(self.spec, A, R), A, E1E2)
            for Q in sample_gamma(self.spec, 30, 7):
                assert check_theorem1_conditions(Q, self.spec).all_pass
                assert cond_prob(Q, A, E1E2) >= lo


@pytest.mark.parametrize("seed", range(40))
def test_block_identity_random(seed):
    rng = random.Random(seed)
    spec = random_spec(rng)
    within, scales = random_member_args(rng, spec)
    P = construct_member(spec, within, scales=scales)
    assert check_theorem1_conditions(P, spec).all_pass
    m3 = combine(spec.m1, spec.m2).combined
    for s in spec.blocks:
        assert cond_prob(P, s, E1E2) == m3[s]
    A = random_query(rng, spec)
    P_min = extremal_member(spec, A, P)
    assert check_theorem1_conditions(P_min, spec).all_pass
    assert cond_prob(P_min, A, E1E2) == belief(m3, A)

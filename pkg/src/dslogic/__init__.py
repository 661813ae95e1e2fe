"""Dempster-Shafer evidence combination next to constraint-based probabilistic logic.

Exact rational arithmetic throughout: mass functions and Dempster's rule
(:mod:`dslogic.mass`), joint assignments over frame x evidence cells and the
agreement conditions (:mod:`dslogic.prob`), LP interval bounds
(:mod:`dslogic.lp`), and the agreement/divergence computations
(:mod:`dslogic.agreement`).
"""

from .agreement import (
    agreement_report,
    confirmation_ratio,
    dependence_demo,
    lottery,
    nonpartition_witness,
    odds_swamp,
    posterior_partition,
)
from .errors import DSLogicError, TotalConflictError
from .frame import Frame, Partition, SubsetMask, is_partition, make_frame, subset
from .lp import ConstraintSystem, Interval, LinearConstraint, cond_prob_bounds, prob_bounds, solve_lp
from .mass import MassFunction, belief, combine, make_mass, plausibility, vacuous
from .prob import (
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
    sample_gamma,
    theorem1_spec,
)

__version__ = "0.1.0"

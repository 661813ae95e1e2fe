"""Exact rational linear programming over probability assignments.

A :class:`ConstraintSystem` describes a polytope of probability vectors over
``n_atoms`` atoms: the implicit constraints x >= 0 and sum(x) = 1 plus any
number of linear (in)equalities. Bounds on P(query) come from two LPs, and
bounds on P(A | B) from two LPs on the Charnes-Cooper homogenisation
y = x / P(B), t = 1 / P(B).

The solver is a dense two-phase tableau simplex over :class:`Fraction` with
Bland's rule, so optima and witnesses are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InfeasibleError, NonlinearConstraintError, ZeroProbabilityError
from .numbers import to_fraction
from .prob import E1, E2, Event

__all__ = [
    "RELATIONS",
    "LinearConstraint",
    "ConstraintSystem",
    "Interval",
    "LPResult",
    "linearize_conditional",
    "probability_constraint",
    "solve_lp",
    "prob_bounds",
    "cond_prob_bounds",
    "residuals",
    "theorem1_fragment",
]

RELATIONS = ("=", "<=", ">=")
_REL_ALIASES = {"=": "=", "==": "=", "<=": "<=", "≤": "<=", ">=": ">=", "≥": ">="}


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coefficients[j] * x[j]) relation rhs`` with exact coefficients."""

    coefficients: Mapping[int, Fraction]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        rel = _REL_ALIASES.get(self.relation)
        if rel is None:
            raise ValueError(f"relation must be one of {RELATIONS}, got {self.relation!r}")
        coeffs = {}
        for j, v in self.coefficients.items():
            if not isinstance(j, int) or j < 0:
                raise ValueError(f"atom index must be a non-negative int, got {j!r}")
            v = to_fraction(v)
            if v:
                coeffs[j] = v
        if not coeffs:
            raise ValueError("a linear constraint needs at least one nonzero coefficient")
        object.__setattr__(self, "relation", rel)
        object.__setattr__(self, "coefficients", dict(sorted(coeffs.items())))
        object.__setattr__(self, "rhs", to_fraction(self.rhs))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((v * x[j] for j, v in self.coefficients.items()), Fraction(0))

    def satisfied(self, x: Sequence[Fraction]) -> bool:
        lhs = self.lhs(x)
        if self.relation == "=":
            return lhs == self.rhs
        if self.relation == "<=":
            return lhs <= self.rhs
        return lhs >= self.rhs


@dataclass(frozen=True)
class ConstraintSystem:
    """Probability vectors over ``n_atoms`` atoms satisfying ``constraints``."""

    n_atoms: int
    constraints: tuple = ()

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("need at least one atom")
        cons = tuple(self.constraints)
        for c in cons:
            if not isinstance(c, LinearConstraint):
                raise NonlinearConstraintError(
                    f"only LinearConstraint is accepted, got {type(c).__name__}"
                )
            if max(c.coefficients) >= self.n_atoms:
                raise ValueError(f"constraint mentions atom {max(c.coefficients)} >= {self.n_atoms}")
        object.__setattr__(self, "constraints", cons)

    def with_constraints(self, *extra: LinearConstraint) -> ConstraintSystem:
        return ConstraintSystem(self.n_atoms, self.constraints + tuple(extra))

    def contains(self, x: Sequence[Fraction]) -> bool:
        return not any(residuals(self, x))


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] of probabilities.

    ``attained`` is False when some endpoint is a limit that no member with a
    positive conditioning probability reaches.
    """

    lo: Fraction
    hi: Fraction
    lo_witness: Optional[tuple] = None
    hi_witness: Optional[tuple] = None
    attained: bool = True

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi <= 1:
            raise ValueError(f"invalid probability interval [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    witness: tuple


def _atom_set(atoms: Iterable[int]) -> frozenset:
    return frozenset(int(j) for j in atoms)


def probability_constraint(A: Iterable[int], relation: str, value) -> LinearConstraint:
    """``P(A) relation value`` for a set of atom indices ``A``."""
    return LinearConstraint({j: Fraction(1) for j in _atom_set(A)}, relation, value)


def linearize_conditional(A: Iterable[int], B: Iterable[int], value, relation: str = "=") -> LinearConstraint:
    """Encode ``P(A | B) relation value`` as ``P(A & B) - value * P(B) relation 0``.

    Raises ValueError when the conditional is vacuous (every coefficient
    cancels, e.g. P(A | B) = 1 with B inside A).
    """
    value = to_fraction(value)
    if not 0 <= value <= 1:
        raise ValueError(f"conditional probability must lie in [0, 1], got {value}")
    A, B = _atom_set(A), _atom_set(B)
    coeffs = {j: (1 - value if j in A else -value) for j in B}
    if not any(coeffs.values()):
        raise ValueError("conditional constraint is vacuous: all coefficients vanish")
    return LinearConstraint(coeffs, relation, Fraction(0))


def residuals(system: ConstraintSystem, x: Sequence[Fraction]) -> list[Fraction]:
    """Violation amount of each constraint at ``x``; all zero iff ``x`` is feasible.

    Entry 0 covers the implicit constraints (sum to 1, non-negativity).
    """
    if len(x) != system.n_atoms:
        raise ValueError(f"expected {system.n_atoms} coordinates, got {len(x)}")
    implicit = abs(sum(x, Fraction(0)) - 1) + sum((-v for v in x if v < 0), Fraction(0))
    out = [implicit]
    for c in system.constraints:
        d = c.lhs(x) - c.rhs
        if c.relation == "=":
            out.append(abs(d))
        elif c.relation == "<=":
            out.append(max(d, Fraction(0)))
        else:
            out.append(max(-d, Fraction(0)))
    return out


class _Tableau:
    """Dense simplex tableau for: minimise cost.x subject to rows, x >= 0.

    Rows are equalities with non-negative right-hand sides. Pivoting uses
    Bland's rule under the variable ranking ``rank``.
    """

    def __init__(self, rows, rhs, n_vars, rank):
        self.A = [list(r) for r in rows]
        self.b = list(rhs)
        self.n = n_vars
        self.rank = rank
        self.basis: list[int] = []

    def pivot(self, r: int, j: int) -> None:
        A, b = self.A, self.b
        row = A[r]
        piv = row[j]
        if piv != 1:
            inv = 1 / piv
            A[r] = row = [v * inv for v in row]
            b[r] *= inv
        for i in range(len(A)):
            if i == r:
                continue
            f = A[i][j]
            if f:
                Ai = A[i]
                A[i] = [u - f * v if v else u for u, v in zip(Ai, row)]
                b[i] -= f * b[r]
        self.basis[r] = j

    def run(self, cost: Sequence[Fraction], allowed) -> str:
        A, b = self.A, self.b
        order = sorted(allowed, key=self.rank.__getitem__)
        while True:
            cb = [cost[j] for j in self.basis]
            enter = None
            for j in order:
                r = cost[j] - sum((cb[i] * A[i][j] for i in range(len(A)) if cb[i] and A[i][j]), Fraction(0))
                if r < 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            best = None
            for i in range(len(A)):
                a = A[i][enter]
                if a > 0:
                    key = (b[i] / a, self.rank[self.basis[i]])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter)


def _solve_standard(rows, rels, rhs, n: int, cost, rank=None):
    """Minimise cost.x over {x >= 0, rows[i].x rels[i] rhs[i]}.

    Returns ``(value, x)``; raises :class:`InfeasibleError`.
    """
    rank = list(range(n)) if rank is None else list(rank)
    m = len(rows)
    n_slack = sum(1 for r in rels if r != "=")
    total = n + n_slack + m
    # slack and artificial columns rank after every original variable
    full_rank = rank + list(range(n, total))
    A, b = [], []
    s = n
    for i in range(m):
        row = [Fraction(0)] * total
        for j, v in rows[i].items():
            row[j] = v
        if rels[i] == "<=":
            row[s] = Fraction(1)
            s += 1
        elif rels[i] == ">=":
            row[s] = Fraction(-1)
            s += 1
        rb = rhs[i]
        if rb < 0:
            row = [-v for v in row]
            rb = -rb
        row[n + n_slack + i] = Fraction(1)
        A.append(row)
        b.append(rb)

    tab = _Tableau(A, b, total, full_rank)
    tab.basis = [n + n_slack + i for i in range(m)]
    art = set(tab.basis)
    phase1 = [Fraction(1) if j in art else Fraction(0) for j in range(total)]
    if tab.run(phase1, range(total)) != "optimal":
        raise RuntimeError("phase 1 cannot be unbounded")
    if sum((tab.b[i] for i, j in enumerate(tab.basis) if j in art), Fraction(0)) != 0:
        raise InfeasibleError("the constraint system has no feasible probability assignment")

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.A):
        if tab.basis[i] in art:
            j = next((j for j in range(n + n_slack) if tab.A[i][j] != 0), None)
            if j is None:
                del tab.A[i], tab.b[i], tab.basis[i]
                continue
            tab.pivot(i, j)
        i += 1

    cost2 = list(cost) + [Fraction(0)] * (total - n)
    if tab.run(cost2, range(n + n_slack)) != "optimal":
        raise RuntimeError("objective is unbounded over the feasible set")
    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.b[i]
    value = sum((c * v for c, v in zip(cost, x)), Fraction(0))
    return value, tuple(x)


def _objective(objective, n: int) -> list[Fraction]:
    if isinstance(objective, Mapping):
        vec = [Fraction(0)] * n
        for j, v in objective.items():
            vec[j] = to_fraction(v)
        return vec
    vec = [to_fraction(v) for v in objective]
    if len(vec) != n:
        raise ValueError(f"objective has {len(vec)} entries, system has {n} atoms")
    return vec


def solve_lp(system: ConstraintSystem, objective, sense: str = "min", *, priority=None) -> LPResult:
    """Exact optimum of ``objective . x`` over the system's polytope.

    ``objective`` is a vector or a sparse ``{atom: coefficient}`` mapping.
    ``priority`` is an optional permutation of atom indices that changes
    Bland's pivoting order; the optimum value does not depend on it.
    """
    n = system.n_atoms
    c = _objective(objective, n)
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    rank = None
    if priority is not None:
        priority = list(priority)
        if sorted(priority) != list(range(n)):
            raise ValueError("priority must be a permutation of the atom indices")
        rank = [0] * n
        for pos, j in enumerate(priority):
            rank[j] = pos
    rows = [{j: Fraction(1) for j in range(n)}]
    rels = ["="]
    rhs = [Fraction(1)]
    for con in system.constraints:
        rows.append(con.coefficients)
        rels.append(con.relation)
        rhs.append(con.rhs)
    cost = c if sense == "min" else [-v for v in c]
    _, x = _solve_standard(rows, rels, rhs, n, cost, rank)
    assert system.contains(x), "simplex witness violates the constraints"
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(value, x)


def prob_bounds(system: ConstraintSystem, query: Iterable[int]) -> Interval:
    """Tightest [min, max] of P(query) over the system."""
    q = {j: 1 for j in _atom_set(query)}
    lo = solve_lp(system, q, "min")
    hi = solve_lp(system, q, "max")
    return Interval(lo.value, hi.value, lo.witness, hi.witness)


def cond_prob_bounds(system: ConstraintSystem, A: Iterable[int], B: Iterable[int]) -> Interval:
    """Tightest bounds of P(A | B) over members of the system with P(B) > 0.

    Substituting y = x / P(B) and t = 1 / P(B) turns the ratio into the
    linear objective P(A & B) in y, subject to the homogenised constraints,
    sum(y) = t and sum over B of y = 1.
    """
    A, B = _atom_set(A), _atom_set(B)
    if not B:
        raise ZeroProbabilityError("conditioning event is empty")
    if solve_lp(system, {j: 1 for j in B}, "max").value == 0:
        raise ZeroProbabilityError("P(B) = 0 for every member: the conditional is undefined")
    n = system.n_atoms
    t = n
    rows, rels, rhs = [], [], []
    for con in system.constraints:
        row = dict(con.coefficients)
        if con.rhs:
            row[t] = -con.rhs
        rows.append(row)
        rels.append(con.relation)
        rhs.append(Fraction(0))
    total = {j: Fraction(1) for j in range(n)}
    total[t] = Fraction(-1)
    rows.append(total)
    rels.append("=")
    rhs.append(Fraction(0))
    rows.append({j: Fraction(1) for j in B})
    rels.append("=")
    rhs.append(Fraction(1))

    obj = [Fraction(1) if j in A and j in B else Fraction(0) for j in range(n)] + [Fraction(0)]
    ends = []
    for sign in (1, -1):
        value, y = _solve_standard(rows, rels, rhs, n + 1, [sign * v for v in obj])
        scale = y[t]
        # sum over B of y = 1 forces t = sum(y) >= 1, so the witness is a
        # genuine member with P(B) = 1 / t > 0
        x = tuple(v / scale for v in y[:n])
        assert system.contains(x)
        ends.append((sign * value, x, scale > 0))
    (lo, lo_x, ok_lo), (hi, hi_x, ok_hi) = ends
    return Interval(lo, hi, lo_x, hi_x, attained=ok_lo and ok_hi)


def theorem1_fragment(spec, *, include_independence: bool = False) -> ConstraintSystem:
    """The linear part of conditions (i)-(iv) for a two-evidence spec.

    Conditions (i) and (iii) become linear equalities over the atoms
    ``element * 4 + cell``. The strict inequality (iv) is left to
    :func:`cond_prob_bounds`, which only considers P(E1 & E2) > 0.
    Condition (ii) is a product of conditionals and cannot be expressed;
    asking for it raises :class:`NonlinearConstraintError`.
    """
    if include_independence:
        raise NonlinearConstraintError(
            "P(E1&E2|S) = P(E1|S)P(E2|S) is not linear in the atom probabilities"
        )
    frame = spec.frame
    e1 = E1.atoms(frame)
    e2 = E2.atoms(frame)
    cons = []
    for s in spec.blocks:
        atoms = Event(s).atoms(frame)
        cons.append(probability_constraint(atoms, "=", Fraction(1, spec.k)))
        cons.append(linearize_conditional(atoms, e1, spec.m1[s]))
        cons.append(linearize_conditional(atoms, e2, spec.m2[s]))
    return ConstraintSystem(frame.size * 4, tuple(cons))

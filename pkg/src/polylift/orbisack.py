"""Lex-ordered two-column 0/1 matrices and their block inequalities.

A vertex is a p-by-2 binary matrix whose first column is
lexicographically at least the second. The module provides the vertex
enumeration, the critical row, the two combinatorial vertex liftings,
the piecewise-affine lifting used for separation, the alpha/a/beta
construction that turns a feasible tau vector into a block inequality,
and an exact separation oracle for the block-inequality class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .descriptions import InequalitySystem, LinearConstraint
from .errors import (
    DomainViolation,
    InternalInvariantError,
    LexViolation,
    SizeLimitExceeded,
)
from .exactnum import F0, F1, format_rat
from .families import VRep

DEFAULT_VERTEX_CAP = 10


def orb_vars(p: int) -> tuple:
    return tuple(f"x[{i},{j}]" for i in range(1, p + 1) for j in (1, 2))


def as_matrix(x: Iterable) -> tuple:
    """Normalize to a tuple of (col1, col2) rows with Fraction entries."""
    rows = []
    for row in x:
        a, b = row
        rows.append((Fraction(a), Fraction(b)))
    if not rows:
        raise ValueError("matrix needs at least one row")
    return tuple(rows)


def matrix_from_flat(point: Sequence, p: int | None = None) -> tuple:
    values = [Fraction(v) for v in point]
    if p is None:
        if len(values) % 2:
            raise ValueError("flat point must have even length")
        p = len(values) // 2
    if len(values) != 2 * p:
        raise ValueError(f"expected {2 * p} entries, got {len(values)}")
    return tuple((values[2 * i], values[2 * i + 1]) for i in range(p))


def flat_from_matrix(x: Iterable) -> tuple:
    return tuple(v for row in x for v in row)


def _require_binary(x) -> tuple:
    x = as_matrix(x)
    for a, b in x:
        if a not in (0, 1) or b not in (0, 1):
            raise ValueError("entries must be 0 or 1")
    return x


def critical_row(x) -> int:
    """First row equal to (1, 0); p + 1 when there is none."""
    x = _require_binary(x)
    for i, (a, b) in enumerate(x, start=1):
        if a == 1 and b == 0:
            return i
    return len(x) + 1


def is_vertex(x) -> bool:
    """Column-lex condition: both columns agree strictly above the critical row."""
    x = _require_binary(x)
    crit = critical_row(x)
    return all(a == b for a, b in x[: crit - 1])


def _require_vertex(x) -> tuple:
    x = _require_binary(x)
    if not is_vertex(x):
        raise LexViolation("first column is lexicographically smaller than second")
    return x


def enum_orbisack_vertices(p: int, *, cap: int = DEFAULT_VERTEX_CAP) -> VRep:
    """All lex-valid 0/1 matrices as flat row-major points."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if p > cap:
        raise SizeLimitExceeded(f"p={p} exceeds the enumeration cap of {cap}")
    points = []
    for bits in itertools.product((0, 1), repeat=2 * p):
        x = matrix_from_flat(bits, p)
        if is_vertex(x):
            points.append(bits)
    return VRep.build(orb_vars(p), points)


def vertex_count(p: int) -> int:
    """Closed form 2^(p-1) (2^p + 1), counting ordered column pairs."""
    return (1 << (p - 1)) * ((1 << p) + 1)


def lift_xy(x) -> tuple:
    """Append the critical-row indicator (zero when there is no critical row)."""
    x = _require_vertex(x)
    p = len(x)
    crit = critical_row(x)
    y = tuple(F1 if i == crit else F0 for i in range(1, p + 1))
    return x, y


def lift_xyz(x) -> tuple:
    """Split a vertex into below-critical entries, the critical indicator
    and the (equal) entries above the critical row."""
    x = _require_vertex(x)
    p = len(x)
    crit = critical_row(x)
    xt = tuple(
        (row if i > crit else (F0, F0)) for i, row in enumerate(x, start=1)
    )
    y = tuple(F1 if i == crit else F0 for i in range(1, p + 1))
    z = tuple(
        (x[i - 1][0] if i < crit else F0) for i in range(1, p + 1)
    )
    return xt, y, z


@dataclass(frozen=True)
class FeasibleTau:
    """A vector in {0,1,2,3}^p: starts with 3, stays nonzero up to a final 3."""

    tau: tuple
    i_max: int

    @classmethod
    def build(cls, tau: Iterable[int]) -> "FeasibleTau":
        tau = tuple(int(v) for v in tau)
        if not tau:
            raise ValueError("tau must be nonempty")
        if any(v not in (0, 1, 2, 3) for v in tau):
            raise ValueError("tau entries must be in {0,1,2,3}")
        if tau[0] != 3:
            raise ValueError("tau_1 must be 3")
        nonzero = [i for i, v in enumerate(tau, start=1) if v != 0]
        i_max = nonzero[-1]
        if tau[i_max - 1] != 3:
            raise ValueError("the last nonzero entry of tau must be 3")
        if any(tau[i] == 0 for i in range(i_max)):
            raise ValueError("tau must be nonzero up to its last nonzero entry")
        return cls(tau, i_max)

    def __str__(self):
        return "(" + ",".join(str(v) for v in self.tau) + ")"


def enum_feasible_tau(p: int) -> list:
    """All feasible vectors, ordered by i_max then lexicographically."""
    if p < 1:
        raise ValueError("p must be at least 1")
    out = [FeasibleTau.build((3,) + (0,) * (p - 1))]
    for i_max in range(2, p + 1):
        for middle in itertools.product((1, 2, 3), repeat=i_max - 2):
            tau = (3,) + middle + (3,) + (0,) * (p - i_max)
            out.append(FeasibleTau.build(tau))
    return out


def feasible_tau_count(p: int) -> int:
    """Closed form 1 + (3^(p-1) - 1) / 2."""
    return 1 + (3 ** (p - 1) - 1) // 2


@dataclass(frozen=True)
class BlockIneq:
    """The inequality <-a(tau), x> <= beta(tau) for one feasible tau."""

    tau: FeasibleTau
    alpha: tuple
    a: tuple  # per-row integer coefficient pairs
    beta: int

    def lhs(self, x) -> Fraction:
        x = as_matrix(x)
        if len(x) != len(self.a):
            raise ValueError("matrix row count does not match the inequality")
        total = F0
        for (a1, a2), (x1, x2) in zip(self.a, x):
            total += -a1 * x1 - a2 * x2
        return total

    def violated_by(self, x) -> bool:
        return self.lhs(x) > self.beta

    def constraint(self, variable_index: tuple | None = None) -> LinearConstraint:
        p = len(self.a)
        if variable_index is None:
            variable_index = orb_vars(p)
        coeffs = [Fraction(-c) for pair in self.a for c in pair]
        return LinearConstraint.build(
            coeffs, "<=", self.beta, f"block tau={self.tau}"
        )

    def to_json_dict(self) -> dict:
        return {
            "tau": list(self.tau.tau),
            "alpha": list(self.alpha),
            "a": [list(pair) for pair in self.a],
            "beta": format_rat(Fraction(self.beta)),
        }


def build_block(tau) -> BlockIneq:
    """Run the alpha recursion and the per-entry coefficient cases."""
    if not isinstance(tau, FeasibleTau):
        tau = FeasibleTau.build(tau)
    p = len(tau.tau)
    i_max = tau.i_max
    alpha = [0] * (p + 2)  # 1-based, alpha[p+1] stays 0
    alpha[i_max] = 1
    if i_max >= 2:
        alpha[i_max - 1] = 1
    for i in range(i_max - 2, 0, -1):
        alpha[i] = (2 if tau.tau[i] == 3 else 1) * alpha[i + 1]
    rows = []
    for i in range(1, p + 1):
        t = tau.tau[i - 1]
        ai = alpha[i]
        if t == 0:
            rows.append((0, 0))
        elif t == 1:
            rows.append((ai, 0))
        elif t == 2:
            rows.append((0, -ai))
        else:
            rows.append((ai, -ai))
    beta = sum(alpha[i] for i in range(1, p + 1) if tau.tau[i - 1] == 2)
    return BlockIneq(tau, tuple(alpha[1 : p + 1]), tuple(rows), beta)


def orbisack_system(p: int, drop_redundant: bool = False) -> InequalitySystem:
    """All block inequalities plus the 0/1 bounds.

    With ``drop_redundant`` the two implied bounds x[1,1] >= 0 and
    x[1,2] <= 1 are omitted; everything else is facet-defining.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    variable_index = orb_vars(p)
    size = 2 * p
    cons = [build_block(tau).constraint(variable_index) for tau in enum_feasible_tau(p)]
    for pos, var in enumerate(variable_index):
        i = pos // 2 + 1
        j = pos % 2 + 1
        if not (drop_redundant and (i, j) == (1, 1)):
            row = [F0] * size
            row[pos] = F1
            cons.append(LinearConstraint.build(row, ">=", 0, f"lb {var}"))
        if not (drop_redundant and (i, j) == (1, 2)):
            row = [F0] * size
            row[pos] = F1
            cons.append(LinearConstraint.build(row, "<=", 1, f"ub {var}"))
    return InequalitySystem.build(variable_index, cons)


def _require_box(x) -> tuple:
    x = as_matrix(x)
    for a, b in x:
        if not (0 <= a <= 1 and 0 <= b <= 1):
            raise DomainViolation("entries must lie in [0, 1]")
    return x


@dataclass(frozen=True)
class YLift:
    """The inductive minimum lift plus, per row, which arguments attained it."""

    y: tuple
    attained: tuple  # per row, a frozenset of argument labels 1..4


def lift_y(x) -> YLift:
    """y_i = min of the four expressions; records every attaining argument."""
    x = _require_box(x)
    y = []
    attained = []
    prefix = F0  # sum of y_k for k < i
    for x1, x2 in x:
        args = (x1, 1 - x2, x1 - x2 + prefix, 1 - prefix)
        yi = min(args)
        y.append(yi)
        attained.append(frozenset(k + 1 for k, v in enumerate(args) if v == yi))
        prefix += yi
    return YLift(tuple(y), tuple(attained))


@dataclass(frozen=True)
class ZLift:
    """Interval-based z reconstruction; z is None when some interval is empty."""

    z: tuple | None
    infeasible_at: int | None
    intervals: tuple  # per row (lower, upper) interval endpoints


def lift_z(x, y: Sequence) -> ZLift:
    """Pick the lower endpoint of each feasible z interval.

    The per-row interval is
    [max(x1 - prefix_incl, x2 - prefix_excl, 0), min(1 - prefix_incl, x1 - y_i, x2)];
    the first empty interval makes the result infeasible at that row.
    """
    x = as_matrix(x)
    y = tuple(Fraction(v) for v in y)
    if len(y) != len(x):
        raise ValueError("y length does not match the matrix")
    intervals = []
    z = []
    infeasible_at = None
    prefix = F0  # sum of y_k for k < i
    for i, ((x1, x2), yi) in enumerate(zip(x, y), start=1):
        prefix_incl = prefix + yi
        lo = max(x1 - prefix_incl, x2 - prefix, F0)
        hi = min(1 - prefix_incl, x1 - yi, x2)
        intervals.append((lo, hi))
        if lo > hi and infeasible_at is None:
            infeasible_at = i
        z.append(lo)
        prefix = prefix_incl
    if infeasible_at is not None:
        return ZLift(None, infeasible_at, tuple(intervals))
    return ZLift(tuple(z), None, tuple(intervals))


def tau_of(x, y: Sequence, i_star: int) -> FeasibleTau:
    """Label rows 1..i_star by the minimum argument attained at each.

    Precedence follows the argument order 1, 2, 3, except that label 3 is
    preferred whenever it is attained at row 1 or at row i_star; that
    keeps the labelling feasible, and any attaining label preserves the
    expansion identity.
    """
    x = as_matrix(x)
    y = tuple(Fraction(v) for v in y)
    p = len(x)
    if not (1 <= i_star <= p):
        raise ValueError("i_star out of range")
    tau = []
    prefix = F0
    for i, ((x1, x2), yi) in enumerate(zip(x, y), start=1):
        if i > i_star:
            tau.append(0)
            continue
        args = (x1, 1 - x2, x1 - x2 + prefix)
        attained = [k + 1 for k, v in enumerate(args) if v == yi]
        if not attained:
            label = 0
        elif (i == 1 or i == i_star) and 3 in attained:
            label = 3
        else:
            label = attained[0]
        tau.append(label)
        prefix += yi
    try:
        return FeasibleTau.build(tau)
    except ValueError as exc:
        raise InternalInvariantError(
            f"labelling produced an infeasible tau {tuple(tau)}"
        ) from exc


def separate_block(x) -> BlockIneq | None:
    """None iff every block inequality holds at x; else a violated one.

    Runs the minimum lift, finds the first row where the lifted point
    leaves the extension (nonnegativity or the difference bound fails),
    labels the rows and builds the corresponding block inequality.
    """
    x = _require_box(x)
    ylift = lift_y(x)
    y = ylift.y
    i_star = None
    prefix = F0
    for i, ((x1, x2), yi) in enumerate(zip(x, y), start=1):
        if yi < 0 or yi < x1 - x2 - prefix:
            i_star = i
            break
        prefix += yi
    if i_star is None:
        return None
    tau = tau_of(x, y, i_star)
    block = build_block(tau)
    expansion = x[i_star - 1][0] - x[i_star - 1][1] + prefix
    if -block.lhs(x) + block.beta != expansion:
        raise InternalInvariantError("expansion identity failed during separation")
    if not block.violated_by(x):
        raise InternalInvariantError("separation produced a satisfied inequality")
    return block

"""Exact verification: vertex enumeration, completeness, facet checks.

The vertex enumerator is a double description pass over the homogenized
cone, run entirely in integer arithmetic (rays are gcd-reduced integer
vectors; rationals only appear when dehomogenizing). Insertion order is
deterministic, hence runs are reproducible: equations first, then a
pivot phase that prefers sparse rows while the lineality space shrinks,
then the remaining inequalities greedily by how many current rays they
cut off (ties broken by the sorted base order). The greedy phase keeps
intermediate ray counts near the true face counts, which static orders
do not on dense degree-constrained instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from operator import mul
from typing import Iterable, Sequence

from .descriptions import InequalitySystem, LinearConstraint
from .errors import DimensionMismatch, SizeLimitExceeded, Unbounded
from .exactnum import affine_dimension, format_rat
from .families import VRep

DEFAULT_AMBIENT_CAP = 16


@dataclass(frozen=True)
class HPolytope:
    """An inequality system read as a polytope (boundedness is checked
    after enumeration: any nontrivial recession direction is an error)."""

    system: InequalitySystem

    @property
    def ambient(self) -> int:
        return len(self.system.variable_index)


def _dot(a, b) -> int:
    return sum(map(mul, a, b))


def _gcd_reduce(vec: tuple) -> tuple:
    g = reduce(gcd, vec, 0)
    if g > 1:
        return tuple(v // g for v in vec)
    return vec


def _homogeneous_rows(system: InequalitySystem):
    """Integer rows over (x0, x) with row . y >= 0 (or = 0 for equations).

    Insertion order is deterministic and reproducible: equations first,
    then inequalities, each group sorted by tag and coefficients.
    """
    eqs = []
    ineqs = []
    for c in system.constraints:
        if c.rel == "<=":
            frac_row = (c.rhs, *(-a for a in c.coeffs))
        else:  # ">=" and "=" share the orientation a.x >= b
            frac_row = (-c.rhs, *c.coeffs)
        scale = reduce(lambda acc, f: acc * f.denominator // gcd(acc, f.denominator), frac_row, 1)
        row = _gcd_reduce(tuple(int(f * scale) for f in frac_row))
        key = (c.tag, c.coeffs, c.rhs, c.rel)
        (eqs if c.rel == "=" else ineqs).append((key, row))
    eqs.sort(key=lambda item: item[0])
    ineqs.sort(key=lambda item: item[0])
    return [row for _, row in eqs], [row for _, row in ineqs]


class _DoubleDescription:
    """Incremental cone intersection tracking lineality and extreme rays."""

    def __init__(self, dim: int):
        self.dim = dim
        self.lin = [
            tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)
        ]
        self.rays = []
        self.zeros = []
        self.assigned = 0  # OR of all inequality bits used so far
        self.next_bit = 0

    def _pivot(self, row, dots, is_eq: bool, bit: int):
        pividx = next(i for i, dv in enumerate(dots) if dv)
        lstar = self.lin.pop(pividx)
        dstar = dots.pop(pividx)
        if dstar < 0:
            lstar = tuple(-v for v in lstar)
            dstar = -dstar
        new_lin = []
        for l, dl in zip(self.lin, dots):
            if dl:
                l = _gcd_reduce(tuple(dstar * a - dl * b for a, b in zip(l, lstar)))
            new_lin.append(l)
        self.lin = new_lin
        for k, r in enumerate(self.rays):
            dv = _dot(row, r)
            if dv:
                self.rays[k] = _gcd_reduce(
                    tuple(dstar * a - dv * b for a, b in zip(r, lstar))
                )
            if not is_eq:
                self.zeros[k] |= bit
        if not is_eq:
            # the freed direction survives on its feasible side; it is tight
            # at every constraint processed before this one
            self.rays.append(lstar)
            self.zeros.append(self.assigned)

    def insert(self, row, is_eq: bool):
        bit = 0
        if not is_eq:
            bit = 1 << self.next_bit
            self.next_bit += 1
        dots = [_dot(row, l) for l in self.lin]
        if any(dots):
            self._pivot(row, dots, is_eq, bit)
        else:
            self._split(row, is_eq, bit)
        if not is_eq:
            self.assigned |= bit

    def _split(self, row, is_eq: bool, bit: int):
        rays = self.rays
        zeros = self.zeros
        dots = [_dot(row, r) for r in rays]
        pos = [i for i, dv in enumerate(dots) if dv > 0]
        neg = [i for i, dv in enumerate(dots) if dv < 0]
        if not pos and not neg:
            if not is_eq:
                for k in range(len(zeros)):
                    zeros[k] |= bit
            return
        # tight-ray index per constraint bit, as a bitmask over ray positions;
        # a pair is adjacent iff no third ray is tight at the pair's common set
        tight_at = {}
        for k, zk in enumerate(zeros):
            kbit = 1 << k
            while zk:
                low = zk & -zk
                tight_at[low] = tight_at.get(low, 0) | kbit
                zk ^= low
        all_rays_mask = (1 << len(rays)) - 1
        new_rays = []
        new_zeros = []
        for i in pos:
            zi = zeros[i]
            pair_i = 1 << i
            for j in neg:
                meet = zi & zeros[j]
                dominators = all_rays_mask
                m = meet
                while m:
                    low = m & -m
                    dominators &= tight_at.get(low, 0)
                    if not dominators:
                        break
                    m ^= low
                if dominators & ~(pair_i | (1 << j)):
                    continue
                combo = _gcd_reduce(
                    tuple(
                        dots[i] * nv - dots[j] * pv
                        for pv, nv in zip(rays[i], rays[j])
                    )
                )
                new_rays.append(combo)
                new_zeros.append(meet | bit)
        kept_rays = []
        kept_zeros = []
        for i, dv in enumerate(dots):
            if dv == 0:
                kept_rays.append(rays[i])
                kept_zeros.append(zeros[i] | bit if not is_eq else zeros[i])
            elif dv > 0 and not is_eq:
                kept_rays.append(rays[i])
                kept_zeros.append(zeros[i])
        self.rays = kept_rays + new_rays
        self.zeros = kept_zeros + new_zeros


def dd_vertices(
    h: HPolytope | InequalitySystem, *, ambient_cap: int = DEFAULT_AMBIENT_CAP
) -> list:
    """Exact vertex list of the polytope; raises Unbounded on any ray.

    An inconsistent system yields the empty list.
    """
    system = h.system if isinstance(h, HPolytope) else h
    dim = len(system.variable_index)
    if dim > ambient_cap:
        raise SizeLimitExceeded(
            f"{dim} variables exceeds the enumeration cap of {ambient_cap}"
        )
    eq_rows, ineq_rows = _homogeneous_rows(system)
    dd = _DoubleDescription(dim + 1)
    dd.insert(tuple(1 if i == 0 else 0 for i in range(dim + 1)), False)
    for row in eq_rows:
        dd.insert(row, True)
    # pivot phase: sparse rows first while the lineality space shrinks
    remaining = sorted(ineq_rows, key=lambda r: (sum(1 for v in r[1:] if v), r))
    progress = True
    while progress and dd.lin:
        progress = False
        for idx, row in enumerate(remaining):
            if any(_dot(row, l) for l in dd.lin):
                dd.insert(remaining.pop(idx), False)
                progress = True
                break
    # greedy phase: cut off as many current rays as possible per step
    while remaining:
        best = None
        best_idx = None
        for idx, row in enumerate(remaining):
            neg = 0
            pos = 0
            for r in dd.rays:
                d = _dot(row, r)
                if d < 0:
                    neg += 1
                elif d > 0:
                    pos += 1
            score = (-neg, pos, idx)
            if best is None or score < best:
                best = score
                best_idx = idx
        dd.insert(remaining.pop(best_idx), False)
    if dd.lin:
        raise Unbounded("feasible region contains a line")
    vertices = set()
    for ray in dd.rays:
        x0 = ray[0]
        if x0 == 0:
            raise Unbounded(f"recession direction {ray[1:]}")
        vertices.add(tuple(Fraction(v, x0) for v in ray[1:]))
    return sorted(vertices)


def check_validity(system: InequalitySystem, v: VRep) -> list:
    """Every (point, constraint) violation; an empty list means valid."""
    if system.variable_index != v.variable_index:
        raise DimensionMismatch("system and point set use different variables")
    violations = []
    for point in v.sorted_points:
        for c in system.constraints:
            if not c.holds(point):
                violations.append((point, c))
    return violations


@dataclass(frozen=True)
class CompletenessReport:
    valid: bool
    violations: tuple  # (point, constraint) pairs
    vertex_match: bool
    extra_vertices: tuple  # enumerated but not in the point set
    missing_vertices: tuple  # in the point set but not enumerated

    @property
    def complete(self) -> bool:
        return self.valid and self.vertex_match

    def to_json_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [
                {"point": [format_rat(x) for x in point], "tag": c.tag}
                for point, c in self.violations
            ],
            "vertex_match": self.vertex_match,
            "extra_vertices": [
                [format_rat(x) for x in p] for p in self.extra_vertices
            ],
            "missing_vertices": [
                [format_rat(x) for x in p] for p in self.missing_vertices
            ],
        }


def check_completeness(
    system: InequalitySystem, v: VRep, *, ambient_cap: int = DEFAULT_AMBIENT_CAP
) -> CompletenessReport:
    """Valid on the point set AND vertex sets agree exactly."""
    violations = tuple(check_validity(system, v))
    enumerated = set(dd_vertices(system, ambient_cap=ambient_cap))
    extra = tuple(sorted(enumerated - v.points))
    missing = tuple(sorted(v.points - enumerated))
    return CompletenessReport(
        valid=not violations,
        violations=violations,
        vertex_match=not extra and not missing,
        extra_vertices=extra,
        missing_vertices=missing,
    )


def facet_dimension(
    system: InequalitySystem, c: LinearConstraint, v: VRep
) -> int:
    """Affine dimension of the face of conv(v) where ``c`` is tight.

    Meaningful once completeness of ``system`` against ``v`` holds; the
    constraint must be valid for every point.
    """
    if len(c.coeffs) != len(v.variable_index):
        raise DimensionMismatch("constraint and point set use different variables")
    tight = []
    for point in v.sorted_points:
        if not c.holds(point):
            raise ValueError(f"constraint {c.tag!r} is violated by a point")
        if c.is_tight(point):
            tight.append(point)
    return affine_dimension(tight)


FACET = "facet"
IMPLICIT_EQUATION = "implicit-equation"
REDUNDANT = "redundant"


def check_irredundancy(
    system: InequalitySystem, v: VRep, *, ambient_cap: int = DEFAULT_AMBIENT_CAP
) -> list:
    """Classify every constraint as facet / implicit-equation / redundant.

    Requires the completeness check to pass first; tightness on every
    point is decided before the facet test, so a constraint tight
    everywhere is never reported as a facet.
    """
    report = check_completeness(system, v, ambient_cap=ambient_cap)
    if not report.complete:
        raise ValueError("irredundancy classification requires completeness")
    dim_p = affine_dimension(v.sorted_points)
    out = []
    for c in system.constraints:
        tight = [p for p in v.sorted_points if c.is_tight(p)]
        if len(tight) == len(v.points):
            label = IMPLICIT_EQUATION
        elif affine_dimension(tight) == dim_p - 1:
            label = FACET
        else:
            label = REDUNDANT
        out.append((c, label))
    return out

"""Lifting maps for the four families and the section-enforcement check.

Each family packages four things: a linear description of its domain R,
the lifting map into the extension, the projection back (a right inverse
of the lifting on R), and a membership test for the extension. The
matching family lifts affinely and tests membership against the
classical perfect-matching description of the doubled graph; the path
and small-clique families lift by solving a pinned-capacity circulation
problem; the two lex-matrix families lift through the minimum recursion
and the interval construction.

``check_section_enforcing`` verifies the defining property of a
candidate system on the vertices of {x in R : candidate} plus seeded
random convex combinations; failures are reported as exact rational
counterexamples, never raised.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .circulation import CapacityBounds, Circulation, find_circulation, hoffman_feasible_flow
from .descriptions import (
    InequalitySystem,
    LinearConstraint,
    merge_systems,
    qxy_system,
    qxy_vars,
    qxyz_system,
)
from .errors import DomainViolation
from .exactnum import F0, F1, NEG_INF, POS_INF, format_rat
from .graphcore import (
    CLIQUE_SINK,
    CLIQUE_SOURCE,
    CloneLabel,
    Digraph,
    Graph,
    classify_split_arc,
    clique_digraph,
    matching_double,
    path_split,
)
from .orbisack import ZLift, flat_from_matrix, lift_y, lift_z, matrix_from_flat, orb_vars
from .verify import HPolytope, dd_vertices


@dataclass(frozen=True)
class MarkedInfeasible:
    """Lift outcome when the pinned circulation polytope is empty."""

    witness: frozenset  # Hoffman cut certifying emptiness


@dataclass(frozen=True)
class Membership:
    ok: bool
    reason: str = ""
    witness: tuple | None = None


@dataclass(frozen=True, eq=False)
class LiftingSpec:
    """A lifting with its domain description, projection and membership test."""

    name: str
    variable_index: tuple
    domain_system: InequalitySystem
    lift: Callable
    project: Callable
    extension_membership: Callable


def _unit_row(size, pos):
    row = [F0] * size
    row[pos] = F1
    return row


# ---------------------------------------------------------------------------
# Matching: affine lift into the doubled graph.


def matching_domain_system(g: Graph) -> InequalitySystem:
    """Nonnegative edge vectors with degree sums at most one."""
    edges = g.edge_list
    size = len(edges)
    variable_index = tuple(f"x[{u},{v}]" for u, v in edges)
    edge_pos = {e: i for i, e in enumerate(edges)}
    cons = []
    for i, (u, v) in enumerate(edges):
        cons.append(LinearConstraint.build(_unit_row(size, i), ">=", 0, f"nonneg x[{u},{v}]"))
    for v in g.nodes:
        row = [F0] * size
        for e in g.incident_edges(v):
            row[edge_pos[e]] = F1
        cons.append(LinearConstraint.build(row, "<=", 1, f"degree {v}"))
    return InequalitySystem.build(variable_index, cons)


def perfect_matching_system(g: Graph) -> InequalitySystem:
    """The classical complete description of the perfect matching polytope:
    nonnegativity, degree equations, and odd-set cut constraints."""
    edges = g.edge_list
    size = len(edges)
    variable_index = tuple(f"x[{u},{v}]" for u, v in edges)
    edge_pos = {e: i for i, e in enumerate(edges)}
    cons = []
    for i, (u, v) in enumerate(edges):
        cons.append(LinearConstraint.build(_unit_row(size, i), ">=", 0, f"nonneg x[{u},{v}]"))
    for v in g.nodes:
        row = [F0] * size
        for e in g.incident_edges(v):
            row[edge_pos[e]] = F1
        cons.append(LinearConstraint.build(row, "=", 1, f"degree {v}"))
    n = len(g.nodes)
    for mask in range(1 << n):
        W = [g.nodes[i] for i in range(n) if (mask >> i) & 1]
        if len(W) % 2 == 0 or len(W) < 3:
            continue
        Wset = frozenset(W)
        row = [F0] * size
        for e in edges:
            if (e[0] in Wset) != (e[1] in Wset):
                row[edge_pos[e]] = F1
        names = ",".join(str(v) for v in W)
        cons.append(LinearConstraint.build(row, ">=", 1, f"oddcut W={{{names}}}"))
    return InequalitySystem.build(variable_index, cons)


def matching_lift(g: Graph, x: Sequence) -> tuple:
    """Copy the edge vector onto both layers; linking edges absorb the slack."""
    edges = g.edge_list
    if len(x) != len(edges):
        raise DomainViolation("edge vector has the wrong length")
    x = tuple(Fraction(v) for v in x)
    edge_pos = {e: i for i, e in enumerate(edges)}
    degree = {}
    for v in g.nodes:
        degree[v] = sum((x[edge_pos[e]] for e in g.incident_edges(v)), F0)
    if any(v < 0 for v in x) or any(s > 1 for s in degree.values()):
        raise DomainViolation("vector outside the degree-constrained domain")
    gt = matching_double(g)
    lifted = []
    for a, b in gt.edge_list:
        if a.tag == "copy1" and b.tag == "copy1":
            lifted.append(x[edge_pos[g.canonical_edge(a.base, b.base)]])
        elif a.tag == "copy2" and b.tag == "copy2":
            lifted.append(x[edge_pos[g.canonical_edge(a.base, b.base)]])
        else:  # linking edge between the two clones of one node
            lifted.append(1 - degree[a.base])
    return tuple(lifted)


def matching_family(g: Graph) -> LiftingSpec:
    gt = matching_double(g)
    pm_system = perfect_matching_system(gt)
    edges = g.edge_list

    copy1_positions = []
    for i, (a, b) in enumerate(gt.edge_list):
        if a.tag == "copy1" and b.tag == "copy1":
            copy1_positions.append((g.canonical_edge(a.base, b.base), i))
    order = {e: i for i, e in enumerate(edges)}
    restriction = [None] * len(edges)
    for e, i in copy1_positions:
        restriction[order[e]] = i

    def lift(x):
        return matching_lift(g, x)

    def project(lifted):
        return tuple(lifted[i] for i in restriction)

    def membership(lifted) -> Membership:
        for c in pm_system.constraints:
            if not c.holds(lifted):
                return Membership(False, f"violates {c.tag}")
        return Membership(True)

    return LiftingSpec(
        name="matching",
        variable_index=tuple(f"x[{u},{v}]" for u, v in edges),
        domain_system=matching_domain_system(g),
        lift=lift,
        project=project,
        extension_membership=membership,
    )


# ---------------------------------------------------------------------------
# Path sets: circulation in the split digraph with pinned node arcs.


def pathset_domain_system(d: Digraph, s, t) -> InequalitySystem:
    size = len(d.nodes)
    variable_index = tuple(f"x[{v}]" for v in d.nodes)
    cons = [
        LinearConstraint.build(_unit_row(size, d.index[s]), "=", 1, f"start {s}"),
        LinearConstraint.build(_unit_row(size, d.index[t]), "=", 1, f"end {t}"),
    ]
    for v in d.nodes:
        cons.append(LinearConstraint.build(_unit_row(size, d.index[v]), ">=", 0, f"nonneg x[{v}]"))
    return InequalitySystem.build(variable_index, cons)


def pathset_star_bounds(dt: Digraph, s, t) -> CapacityBounds:
    """Free real arcs, nonnegative internal arcs, unit return arc."""
    lower = {}
    upper = {}
    for arc in dt.arc_list:
        kind = classify_split_arc(arc, s, t)
        if kind == "real":
            lower[arc] = NEG_INF
            upper[arc] = POS_INF
        elif kind == "internal":
            lower[arc] = F0
            upper[arc] = POS_INF
        else:
            lower[arc] = F1
            upper[arc] = F1
    return CapacityBounds.build(dt, lower, upper)


def pathset_lift(d: Digraph, s, t, x: Sequence):
    """Any circulation with internal arcs pinned to x, or the Hoffman cut."""
    if len(x) != len(d.nodes):
        raise DomainViolation("node vector has the wrong length")
    x = tuple(Fraction(v) for v in x)
    if any(v < 0 for v in x):
        raise DomainViolation("negative entries")
    if x[d.index[s]] != 1 or x[d.index[t]] != 1:
        raise DomainViolation("start and end coordinates must equal one")
    dt = path_split(d, s, t)
    pins = {
        (CloneLabel(v, "in"), CloneLabel(v, "out")): x[d.index[v]] for v in d.nodes
    }
    cb = pathset_star_bounds(dt, s, t).with_pinned(pins)
    circ = find_circulation(dt, cb)
    if circ is None:
        verdict = hoffman_feasible_flow(dt, cb)
        return MarkedInfeasible(verdict.witness)
    return circ


def pathset_family(d: Digraph, s, t) -> LiftingSpec:
    def lift(x):
        return pathset_lift(d, s, t, x)

    def project(lifted):
        return tuple(
            lifted.flow[(CloneLabel(v, "in"), CloneLabel(v, "out"))] for v in d.nodes
        )

    def membership(lifted) -> Membership:
        if isinstance(lifted, MarkedInfeasible):
            return Membership(False, "pinned circulation polytope is empty",
                              tuple(sorted(map(str, lifted.witness))))
        return Membership(True)

    return LiftingSpec(
        name="pathset",
        variable_index=tuple(f"x[{v}]" for v in d.nodes),
        domain_system=pathset_domain_system(d, s, t),
        lift=lift,
        project=project,
        extension_membership=membership,
    )


# ---------------------------------------------------------------------------
# Small cliques: circulation in the clique digraph with half pins.


def smallclique_domain_system(g: Graph) -> InequalitySystem:
    size = len(g.nodes)
    variable_index = tuple(f"x[{v}]" for v in g.nodes)
    cons = [
        LinearConstraint.build(_unit_row(size, g.index[v]), ">=", 0, f"nonneg x[{v}]")
        for v in g.nodes
    ]
    return InequalitySystem.build(variable_index, cons)


def smallclique_star_bounds(dg: Digraph) -> CapacityBounds:
    """Zero lower bounds everywhere; only the sink-source arc is capped."""
    lower = {arc: F0 for arc in dg.arc_list}
    upper = {
        arc: (F1 if arc == (CLIQUE_SINK, CLIQUE_SOURCE) else POS_INF)
        for arc in dg.arc_list
    }
    return CapacityBounds.build(dg, lower, upper)


def smallclique_lift(g: Graph, x: Sequence):
    """Circulation with source/sink arcs pinned to half the node values."""
    if len(x) != len(g.nodes):
        raise DomainViolation("node vector has the wrong length")
    x = tuple(Fraction(v) for v in x)
    if any(v < 0 for v in x):
        raise DomainViolation("negative entries")
    dg = clique_digraph(g)
    pins = {}
    for v in g.nodes:
        half = x[g.index[v]] / 2
        pins[(CLIQUE_SOURCE, CloneLabel(v, "copy1"))] = half
        pins[(CloneLabel(v, "copy2"), CLIQUE_SINK)] = half
    cb = smallclique_star_bounds(dg).with_pinned(pins)
    circ = find_circulation(dg, cb)
    if circ is None:
        verdict = hoffman_feasible_flow(dg, cb)
        return MarkedInfeasible(verdict.witness)
    return circ


def smallclique_family(g: Graph) -> LiftingSpec:
    def lift(x):
        return smallclique_lift(g, x)

    def project(lifted):
        return tuple(
            lifted.flow[(CLIQUE_SOURCE, CloneLabel(v, "copy1"))]
            + lifted.flow[(CloneLabel(v, "copy2"), CLIQUE_SINK)]
            for v in g.nodes
        )

    def membership(lifted) -> Membership:
        if isinstance(lifted, MarkedInfeasible):
            return Membership(False, "pinned circulation polytope is empty",
                              tuple(sorted(map(str, lifted.witness))))
        return Membership(True)

    return LiftingSpec(
        name="smallclique",
        variable_index=tuple(f"x[{v}]" for v in g.nodes),
        domain_system=smallclique_domain_system(g),
        lift=lift,
        project=project,
        extension_membership=membership,
    )


# ---------------------------------------------------------------------------
# Lex matrices: minimum recursion into the critical-row extension, and the
# interval construction one level further up.


def orbisack_domain_system(p: int) -> InequalitySystem:
    variable_index = orb_vars(p)
    size = 2 * p
    cons = []
    for pos, var in enumerate(variable_index):
        cons.append(LinearConstraint.build(_unit_row(size, pos), ">=", 0, f"lb {var}"))
        cons.append(LinearConstraint.build(_unit_row(size, pos), "<=", 1, f"ub {var}"))
    return InequalitySystem.build(variable_index, cons)


def orbisack_family(p: int) -> LiftingSpec:
    extension = qxy_system(p)

    def lift(point):
        x = matrix_from_flat(point, p)
        return flat_from_matrix(x) + lift_y(x).y

    def project(lifted):
        return tuple(lifted[: 2 * p])

    def membership(lifted) -> Membership:
        for c in extension.constraints:
            if not c.holds(lifted):
                return Membership(False, f"violates {c.tag}")
        return Membership(True)

    return LiftingSpec(
        name="orbisack",
        variable_index=orb_vars(p),
        domain_system=orbisack_domain_system(p),
        lift=lift,
        project=project,
        extension_membership=membership,
    )


def qxy_domain_system(p: int) -> InequalitySystem:
    """Only the y part is sign-constrained; x is free in the domain."""
    variable_index = qxy_vars(p)
    size = len(variable_index)
    cons = [
        LinearConstraint.build(_unit_row(size, 2 * p + i), ">=", 0, f"lb y[{i + 1}]")
        for i in range(p)
    ]
    return InequalitySystem.build(variable_index, cons)


def qxy_family(p: int) -> LiftingSpec:
    extension = qxyz_system(p)

    def lift(point):
        point = tuple(Fraction(v) for v in point)
        x = matrix_from_flat(point[: 2 * p], p)
        y = point[2 * p :]
        zres = lift_z(x, y)
        if zres.z is None:
            return zres
        xt = []
        for (x1, x2), yi, zi in zip(x, y, zres.z):
            xt.append(x1 - yi - zi)
            xt.append(x2 - zi)
        return tuple(xt) + tuple(y) + zres.z

    def project(lifted):
        xt = lifted[: 2 * p]
        y = lifted[2 * p : 3 * p]
        z = lifted[3 * p :]
        out = []
        for i in range(p):
            out.append(xt[2 * i] + y[i] + z[i])
            out.append(xt[2 * i + 1] + z[i])
        return tuple(out) + tuple(y)

    def membership(lifted) -> Membership:
        if isinstance(lifted, ZLift):
            return Membership(False, f"empty interval at row {lifted.infeasible_at}")
        for c in extension.constraints:
            if not c.holds(lifted):
                return Membership(False, f"violates {c.tag}")
        return Membership(True)

    return LiftingSpec(
        name="qxy",
        variable_index=qxy_vars(p),
        domain_system=qxy_domain_system(p),
        lift=lift,
        project=project,
        extension_membership=membership,
    )


# ---------------------------------------------------------------------------
# Section enforcement.


@dataclass(frozen=True)
class CounterExample:
    point: tuple
    reason: str
    witness: tuple | None = None

    def to_json_dict(self) -> dict:
        return {
            "point": [format_rat(x) for x in self.point],
            "reason": self.reason,
            "witness": list(self.witness) if self.witness is not None else None,
        }


@dataclass(frozen=True)
class SectionReport:
    passed: bool
    vertices_checked: int
    samples_checked: int
    counterexamples: tuple

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "vertices_checked": self.vertices_checked,
            "samples_checked": self.samples_checked,
            "counterexamples": [c.to_json_dict() for c in self.counterexamples],
        }


def check_section_enforcing(
    family: LiftingSpec,
    candidate: InequalitySystem,
    *,
    samples: int = 25,
    seed: int = 0,
    ambient_cap: int = 16,
) -> SectionReport:
    """Does every point of {x in R : candidate} lift into the extension?

    Checks all vertices of the polytope plus seeded random convex
    combinations of them (weights are integers up to 64, so the sample
    points are exact rationals). Failures become report entries.
    """
    merged = merge_systems(family.domain_system, candidate)
    vertices = dd_vertices(HPolytope(merged), ambient_cap=ambient_cap)
    counterexamples = []

    def probe(point):
        lifted = family.lift(point)
        found = family.extension_membership(lifted)
        if not found.ok:
            counterexamples.append(CounterExample(point, found.reason, found.witness))
            return
        projected = tuple(family.project(lifted))
        if projected != tuple(point):
            counterexamples.append(
                CounterExample(point, "projection does not return the input")
            )

    for vtx in vertices:
        probe(vtx)
    rng = random.Random(seed)
    samples_checked = 0
    if vertices:
        for _ in range(samples):
            k = min(len(vertices), rng.randint(2, 4))
            chosen = rng.sample(range(len(vertices)), k)
            weights = [rng.randint(1, 64) for _ in chosen]
            total = sum(weights)
            point = tuple(
                sum(
                    (Fraction(w) * vertices[i][pos] for w, i in zip(weights, chosen)),
                    F0,
                )
                / total
                for pos in range(len(family.variable_index))
            )
            probe(point)
            samples_checked += 1
    return SectionReport(
        passed=not counterexamples,
        vertices_checked=len(vertices),
        samples_checked=samples_checked,
        counterexamples=tuple(counterexamples),
    )

"""Generators for the derived inequality systems.

Every generator emits an ``InequalitySystem`` whose constraints carry
provenance tags naming the defining object (node, odd set, stable set,
tau vector, row index), so verification reports can point back at the
responsible constraint. Exact duplicates (same coefficients, relation
and right-hand side) are merged at construction, keeping the first tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotAcyclic, NotASource, SameNodes
from .exactnum import F0, F1, format_rat
from .graphcore import (
    Digraph,
    Graph,
    bipartite_components,
    edges_inside,
    induced_subgraph,
    neighbors,
    non_neighbors,
    remove_edges,
    remove_node,
    successors,
    topological_order,
)

RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class LinearConstraint:
    """A single linear constraint with dense rational coefficients."""

    coeffs: tuple
    rel: str
    rhs: Fraction
    tag: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        if not self.tag:
            raise ValueError("constraint tag must be nonempty")

    @classmethod
    def build(cls, coeffs: Iterable, rel: str, rhs, tag: str) -> "LinearConstraint":
        return cls(tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs), tag)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != len(self.coeffs):
            raise DimensionMismatch("point length does not match constraint")
        total = F0
        for c, x in zip(self.coeffs, point):
            if c:
                total += c * x
        return total

    def holds(self, point: Sequence) -> bool:
        lhs = self.evaluate(point)
        if self.rel == "<=":
            return lhs <= self.rhs
        if self.rel == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs

    def is_tight(self, point: Sequence) -> bool:
        return self.evaluate(point) == self.rhs

    def to_json_dict(self, variable_index: Sequence[str]) -> dict:
        coef = {
            var: format_rat(c)
            for var, c in zip(variable_index, self.coeffs)
            if c
        }
        return {
            "coef": coef,
            "rel": self.rel,
            "rhs": format_rat(self.rhs),
            "tag": self.tag,
        }


@dataclass(frozen=True)
class InequalitySystem:
    """A list of constraints over a shared ordered variable index."""

    variable_index: tuple
    constraints: tuple

    @classmethod
    def build(
        cls, variable_index: Iterable[str], constraints: Iterable[LinearConstraint]
    ) -> "InequalitySystem":
        variable_index = tuple(variable_index)
        width = len(variable_index)
        kept = []
        seen = set()
        for c in constraints:
            if len(c.coeffs) != width:
                raise DimensionMismatch(
                    f"constraint {c.tag!r} has {len(c.coeffs)} coefficients "
                    f"over {width} variables"
                )
            key = (c.coeffs, c.rel, c.rhs)
            if key in seen:
                continue
            seen.add(key)
            kept.append(c)
        return cls(variable_index, tuple(kept))

    def __len__(self):
        return len(self.constraints)

    def without_tags(self, prefix: str) -> "InequalitySystem":
        """Copy with every constraint whose tag starts with ``prefix`` removed."""
        return InequalitySystem(
            self.variable_index,
            tuple(c for c in self.constraints if not c.tag.startswith(prefix)),
        )

    def satisfied_by(self, point: Sequence) -> bool:
        return all(c.holds(point) for c in self.constraints)

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.variable_index),
            "constraints": [
                c.to_json_dict(self.variable_index) for c in self.constraints
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "InequalitySystem":
        variable_index = tuple(data["vars"])
        position = {v: i for i, v in enumerate(variable_index)}
        constraints = []
        for item in data["constraints"]:
            coeffs = [F0] * len(variable_index)
            for var, value in item["coef"].items():
                coeffs[position[var]] = Fraction(value)
            constraints.append(
                LinearConstraint.build(coeffs, item["rel"], Fraction(item["rhs"]), item["tag"])
            )
        return cls.build(variable_index, constraints)


def merge_systems(*systems: InequalitySystem) -> InequalitySystem:
    """Union of constraint lists over an identical variable index."""
    first = systems[0]
    for s in systems[1:]:
        if s.variable_index != first.variable_index:
            raise DimensionMismatch("systems over different variable indices")
    constraints = []
    for s in systems:
        constraints.extend(s.constraints)
    return InequalitySystem.build(first.variable_index, constraints)


def _fmt_set(g, nodes) -> str:
    ordered = sorted(nodes, key=g.index.__getitem__)
    return "{" + ",".join(str(v) for v in ordered) + "}"


def _subsets(items: Sequence) -> Iterable[tuple]:
    """All subsets of ``items`` in bitmask order (empty set first)."""
    n = len(items)
    for mask in range(1 << n):
        yield tuple(items[i] for i in range(n) if (mask >> i) & 1)


def _stable_sets(g: Graph) -> Iterable[frozenset]:
    for combo in _subsets(g.nodes):
        T = frozenset(combo)
        if not edges_inside(g, T):
            yield T


def _unit_row(size: int, pos: int, value=F1) -> list:
    row = [F0] * size
    row[pos] = Fraction(value)
    return row


# ---------------------------------------------------------------------------
# Matching polytope: nonnegativity, degree bounds and odd-set constraints.


def blossom_system(g: Graph) -> InequalitySystem:
    """Degree-constrained system plus one odd-set constraint per odd S.

    Odd sets of size one are skipped: they would contribute the vacuous
    constraint 0 <= 0.
    """
    edges = g.edge_list
    size = len(edges)
    variable_index = tuple(f"x[{u},{v}]" for u, v in edges)
    edge_pos = {e: i for i, e in enumerate(edges)}
    cons = []
    for i, (u, v) in enumerate(edges):
        cons.append(
            LinearConstraint.build(_unit_row(size, i), ">=", 0, f"nonneg x[{u},{v}]")
        )
    for v in g.nodes:
        row = [F0] * size
        for e in g.incident_edges(v):
            row[edge_pos[e]] = F1
        cons.append(LinearConstraint.build(row, "<=", 1, f"degree {v}"))
    for S in _subsets(g.nodes):
        if len(S) < 3 or len(S) % 2 == 0:
            continue
        inside = edges_inside(g, S)
        row = [F0] * size
        for e in inside:
            row[edge_pos[e]] = F1
        rhs = Fraction(len(S) - 1, 2)
        cons.append(
            LinearConstraint.build(row, "<=", rhs, f"blossom S={_fmt_set(g, S)}")
        )
    return InequalitySystem.build(variable_index, cons)


# ---------------------------------------------------------------------------
# Path-set polytope: the successor system.


def vande_vate_system(d: Digraph, s, t) -> InequalitySystem:
    """x_s = x_t = 1, nonnegativity, and x(T) <= x(succ(T)) per T."""
    d.require_node(s)
    d.require_node(t)
    if s == t:
        raise SameNodes("start and end node coincide")
    if topological_order(d) is None:
        raise NotAcyclic("digraph has a directed cycle")
    if d.in_arcs(s):
        raise NotASource(f"node {s!r} has incoming arcs")
    size = len(d.nodes)
    variable_index = tuple(f"x[{v}]" for v in d.nodes)
    cons = [
        LinearConstraint.build(_unit_row(size, d.index[s]), "=", 1, f"start {s}"),
        LinearConstraint.build(_unit_row(size, d.index[t]), "=", 1, f"end {t}"),
    ]
    for v in d.nodes:
        cons.append(
            LinearConstraint.build(_unit_row(size, d.index[v]), ">=", 0, f"nonneg x[{v}]")
        )
    others = tuple(v for v in d.nodes if v != t)
    for T in _subsets(others):
        if not T:
            continue
        T = frozenset(T)
        succ = successors(d, T)
        row = [F0] * size
        for v in T:
            row[d.index[v]] += F1
        for v in succ:
            row[d.index[v]] -= F1
        cons.append(
            LinearConstraint.build(row, "<=", 0, f"succ T={_fmt_set(d, T)}")
        )
    return InequalitySystem.build(variable_index, cons)


# ---------------------------------------------------------------------------
# Small-clique polytope and its edge-polytope face.


def small_clique_system(g: Graph, irredundant: bool = False) -> InequalitySystem:
    """2x(T) + x(nonneighbors(T)) <= 2 per stable T, plus nonnegativity.

    With ``irredundant`` set, only stable sets whose non-neighbor-induced
    subgraph has no bipartite component are kept; those are exactly the
    facet-defining ones.
    """
    size = len(g.nodes)
    variable_index = tuple(f"x[{v}]" for v in g.nodes)
    cons = []
    for v in g.nodes:
        cons.append(
            LinearConstraint.build(_unit_row(size, g.index[v]), ">=", 0, f"nonneg x[{v}]")
        )
    for T in _stable_sets(g):
        nbar = non_neighbors(g, T)
        if irredundant:
            beta, _ = bipartite_components(induced_subgraph(g, nbar))
            if beta != 0:
                continue
        row = [F0] * size
        for v in T:
            row[g.index[v]] = Fraction(2)
        for v in nbar:
            row[g.index[v]] = F1
        cons.append(
            LinearConstraint.build(row, "<=", 2, f"stable T={_fmt_set(g, T)}")
        )
    return InequalitySystem.build(variable_index, cons)


def stable_set_constraint(g: Graph, T: Iterable) -> LinearConstraint:
    """The single constraint 2x(T) + x(nonneighbors(T)) <= 2 for one T."""
    T = frozenset(T)
    if edges_inside(g, T):
        raise ValueError("T is not a stable set")
    nbar = non_neighbors(g, T)
    row = [F0] * len(g.nodes)
    for v in T:
        row[g.index[v]] = Fraction(2)
    for v in nbar:
        row[g.index[v]] = F1
    return LinearConstraint.build(row, "<=", 2, f"stable T={_fmt_set(g, T)}")


def _bipartite_count_after_shrink(g: Graph, T: frozenset) -> int:
    """Bipartite components after deleting the edges inside N(T) and
    the edges between N(T) and the non-neighbors of T."""
    nb = neighbors(g, T)
    nbar = non_neighbors(g, T)
    drop = set(edges_inside(g, nb))
    drop.update(
        e
        for e in g.edges
        if (e[0] in nb and e[1] in nbar) or (e[0] in nbar and e[1] in nb)
    )
    beta, _ = bipartite_components(remove_edges(g, drop))
    return beta


def edge_polytope_system(g: Graph) -> InequalitySystem:
    """The five constraint groups describing the edge polytope.

    Shores of bipartite components give implicit equations, stable sets
    whose edge-deletion recount raises the bipartite-component count by
    exactly one give the facet inequalities, isolated nodes are fixed to
    zero, and nonnegativity is kept only for nodes whose removal leaves
    the bipartite-component count unchanged. An empty shore (isolated
    node component) contributes no constraint.
    """
    size = len(g.nodes)
    variable_index = tuple(f"x[{v}]" for v in g.nodes)
    beta, shores = bipartite_components(g)
    cons = [
        LinearConstraint.build([F1] * size, "=", 2, "total")
    ]
    shore_sets = []
    for side0, side1 in shores:
        shore_sets.extend([side0, side1])
    for S in shore_sets:
        if not S:
            continue
        nb = neighbors(g, S)
        row = [F0] * size
        for v in S:
            row[g.index[v]] += F1
        for v in nb:
            row[g.index[v]] -= F1
        cons.append(LinearConstraint.build(row, "=", 0, f"shore S={_fmt_set(g, S)}"))
    for T in _stable_sets(g):
        if _bipartite_count_after_shrink(g, T) != beta + 1:
            continue
        nb = neighbors(g, T)
        row = [F0] * size
        for v in T:
            row[g.index[v]] += F1
        for v in nb:
            row[g.index[v]] -= F1
        cons.append(LinearConstraint.build(row, "<=", 0, f"tight T={_fmt_set(g, T)}"))
    for v in g.nodes:
        if not g.adjacent(v):
            cons.append(
                LinearConstraint.build(
                    _unit_row(size, g.index[v]), "=", 0, f"isolated {v}"
                )
            )
    for v in g.nodes:
        beta_removed, _ = bipartite_components(remove_node(g, v))
        if beta_removed == beta:
            cons.append(
                LinearConstraint.build(
                    _unit_row(size, g.index[v]), ">=", 0, f"nonneg x[{v}]"
                )
            )
    return InequalitySystem.build(variable_index, cons)


# ---------------------------------------------------------------------------
# Orbisack extension polytopes (row count p, columns 1 and 2).


def qxyz_vars(p: int) -> tuple:
    xt = [f"xt[{i},{j}]" for i in range(1, p + 1) for j in (1, 2)]
    y = [f"y[{i}]" for i in range(1, p + 1)]
    z = [f"z[{i}]" for i in range(1, p + 1)]
    return tuple(xt + y + z)


def qxy_vars(p: int) -> tuple:
    x = [f"x[{i},{j}]" for i in range(1, p + 1) for j in (1, 2)]
    y = [f"y[{i}]" for i in range(1, p + 1)]
    return tuple(x + y)


def qxyz_system(p: int) -> InequalitySystem:
    """Totally unimodular description of the split-row extension."""
    if p < 1:
        raise ValueError("p must be at least 1")
    variable_index = qxyz_vars(p)
    size = len(variable_index)

    def xt_pos(i, j):
        return 2 * (i - 1) + (j - 1)

    def y_pos(i):
        return 2 * p + (i - 1)

    def z_pos(i):
        return 3 * p + (i - 1)

    cons = []
    for i in range(1, p + 1):
        for j in (1, 2):
            row = [F0] * size
            row[xt_pos(i, j)] = F1
            for k in range(1, i):
                row[y_pos(k)] = -F1
            cons.append(LinearConstraint.build(row, "<=", 0, f"gate xt[{i},{j}]"))
    for i in range(1, p + 1):
        row = [F0] * size
        for k in range(1, i + 1):
            row[y_pos(k)] = F1
        row[z_pos(i)] = F1
        cons.append(LinearConstraint.build(row, "<=", 1, f"budget z[{i}]"))
    for pos, var in enumerate(variable_index):
        cons.append(LinearConstraint.build(_unit_row(size, pos), ">=", 0, f"nonneg {var}"))
    return InequalitySystem.build(variable_index, cons)


def qxy_system(p: int) -> InequalitySystem:
    """Eight constraint families describing the critical-row extension."""
    if p < 1:
        raise ValueError("p must be at least 1")
    variable_index = qxy_vars(p)
    size = len(variable_index)

    def x_pos(i, j):
        return 2 * (i - 1) + (j - 1)

    def y_pos(i):
        return 2 * p + (i - 1)

    cons = []
    for i in range(1, p + 1):
        cons.append(
            LinearConstraint.build(_unit_row(size, x_pos(i, 1)), "<=", 1, f"x1 ub i={i}")
        )
        cons.append(
            LinearConstraint.build(_unit_row(size, x_pos(i, 2)), ">=", 0, f"x2 lb i={i}")
        )
        cons.append(
            LinearConstraint.build(_unit_row(size, y_pos(i)), ">=", 0, f"y lb i={i}")
        )
        # y_i >= x_{i,1} - x_{i,2} - sum_{k<i} y_k
        row = [F0] * size
        row[y_pos(i)] = F1
        row[x_pos(i, 1)] = -F1
        row[x_pos(i, 2)] = F1
        for k in range(1, i):
            row[y_pos(k)] = F1
        cons.append(LinearConstraint.build(row, ">=", 0, f"y ge diff i={i}"))
        # y_i <= x_{i,1}
        row = [F0] * size
        row[y_pos(i)] = F1
        row[x_pos(i, 1)] = -F1
        cons.append(LinearConstraint.build(row, "<=", 0, f"y le x1 i={i}"))
        # y_i <= 1 - x_{i,2}
        row = [F0] * size
        row[y_pos(i)] = F1
        row[x_pos(i, 2)] = F1
        cons.append(LinearConstraint.build(row, "<=", 1, f"y le 1-x2 i={i}"))
        # y_i <= x_{i,1} - x_{i,2} + sum_{k<i} y_k
        row = [F0] * size
        row[y_pos(i)] = F1
        row[x_pos(i, 1)] = -F1
        row[x_pos(i, 2)] = F1
        for k in range(1, i):
            row[y_pos(k)] = -F1
        cons.append(LinearConstraint.build(row, "<=", 0, f"y le diff+prefix i={i}"))
        # y_i <= 1 - sum_{k<i} y_k
        row = [F0] * size
        row[y_pos(i)] = F1
        for k in range(1, i):
            row[y_pos(k)] = F1
        cons.append(LinearConstraint.build(row, "<=", 1, f"y le 1-prefix i={i}"))
    return InequalitySystem.build(variable_index, cons)

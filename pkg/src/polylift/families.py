"""Exhaustive vertex-set enumeration for the combinatorial families.

These enumerators are deliberately simple backtracking / filtering
procedures: they provide the ground truth that generated inequality
systems are verified against, so clarity beats speed. Instance caps are
enforced explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import DimensionMismatch, NotAcyclic, NotASource, SameNodes, SizeLimitExceeded
from .exactnum import F0, F1, format_rat
from .graphcore import Digraph, Graph, topological_order


@dataclass(frozen=True)
class VRep:
    """A finite set of exact rational points over a named variable index."""

    variable_index: tuple
    points: frozenset

    @classmethod
    def build(cls, variable_index: Iterable[str], points: Iterable) -> "VRep":
        variable_index = tuple(variable_index)
        width = len(variable_index)
        converted = set()
        for p in points:
            pt = tuple(Fraction(x) for x in p)
            if len(pt) != width:
                raise DimensionMismatch(
                    f"point of length {len(pt)} over {width} variables"
                )
            converted.add(pt)
        return cls(variable_index, frozenset(converted))

    @cached_property
    def sorted_points(self) -> tuple:
        return tuple(sorted(self.points))

    def __len__(self):
        return len(self.points)

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.variable_index),
            "points": [[format_rat(x) for x in p] for p in self.sorted_points],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "VRep":
        return cls.build(
            data["vars"], [[Fraction(x) for x in p] for p in data["points"]]
        )


def node_vars(g) -> tuple:
    return tuple(f"x[{v}]" for v in g.nodes)


def edge_vars(g: Graph) -> tuple:
    return tuple(f"x[{u},{v}]" for u, v in g.edge_list)


def _indicator(size: int, ones: Iterable[int]) -> tuple:
    point = [F0] * size
    for i in ones:
        point[i] = F1
    return tuple(point)


def enum_matchings(g: Graph, *, max_edges: int = 24) -> VRep:
    """Characteristic vectors of all matchings, including the empty one."""
    edges = g.edge_list
    if len(edges) > max_edges:
        raise SizeLimitExceeded(f"{len(edges)} edges exceeds the cap of {max_edges}")
    points = []

    def extend(i, used, chosen):
        if i == len(edges):
            points.append(_indicator(len(edges), chosen))
            return
        extend(i + 1, used, chosen)
        u, v = edges[i]
        if u not in used and v not in used:
            extend(i + 1, used | {u, v}, chosen + [i])

    extend(0, frozenset(), [])
    return VRep.build(edge_vars(g), points)


def enum_perfect_matchings(g: Graph, *, max_edges: int = 24) -> VRep:
    """Characteristic vectors of perfect matchings (possibly none)."""
    edges = g.edge_list
    if len(edges) > max_edges:
        raise SizeLimitExceeded(f"{len(edges)} edges exceeds the cap of {max_edges}")
    edge_pos = {e: i for i, e in enumerate(edges)}
    points = []

    def extend(uncovered, chosen):
        if not uncovered:
            points.append(_indicator(len(edges), chosen))
            return
        v = min(uncovered, key=g.index.__getitem__)
        for e in g.incident_edges(v):
            w = e[1] if e[0] == v else e[0]
            if w in uncovered:
                extend(uncovered - {v, w}, chosen + [edge_pos[e]])

    extend(frozenset(g.nodes), [])
    return VRep.build(edge_vars(g), points)


def enum_path_sets(d: Digraph, s, t) -> VRep:
    """Node sets of directed s-t paths as indicator vectors.

    In an acyclic digraph the node set determines the path, so the sets
    are collected without duplicates.
    """
    d.require_node(s)
    d.require_node(t)
    if s == t:
        raise SameNodes("start and end node coincide")
    if topological_order(d) is None:
        raise NotAcyclic("digraph has a directed cycle")
    if d.in_arcs(s):
        raise NotASource(f"node {s!r} has incoming arcs")
    node_sets = set()

    def walk(v, visited):
        if v == t:
            node_sets.add(visited)
            return
        for (_, w) in d.out_arcs(v):
            if w not in visited:
                walk(w, visited | {w})

    walk(s, frozenset({s}))
    size = len(d.nodes)
    points = [
        _indicator(size, [d.index[v] for v in node_set]) for node_set in node_sets
    ]
    return VRep.build(node_vars(d), points)


def enum_small_cliques(g: Graph) -> VRep:
    """The zero vector, all unit vectors, and one point per edge."""
    size = len(g.nodes)
    points = [_indicator(size, [])]
    points += [_indicator(size, [i]) for i in range(size)]
    points += [
        _indicator(size, [g.index[u], g.index[v]]) for u, v in g.edge_list
    ]
    return VRep.build(node_vars(g), points)


def enum_edge_vertices(g: Graph) -> VRep:
    """Exactly the |E| points e_v + e_w, one per edge."""
    size = len(g.nodes)
    points = [
        _indicator(size, [g.index[u], g.index[v]]) for u, v in g.edge_list
    ]
    return VRep.build(node_vars(g), points)

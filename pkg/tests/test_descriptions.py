from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from polylift.descriptions import (
    InequalitySystem,
    LinearConstraint,
    blossom_system,
    edge_polytope_system,
    merge_systems,
    qxy_system,
    qxyz_system,
    small_clique_system,
    vande_vate_system,
)
from polylift.errors import DimensionMismatch, NotASource
from polylift.families import (
    enum_matchings,
    enum_path_sets,
    enum_small_cliques,
)
from polylift.graphcore import Digraph, Graph
from polylift.orbisack import (
    enum_orbisack_vertices,
    flat_from_matrix,
    lift_xy,
    lift_xyz,
    matrix_from_flat,
)
from polylift.verify import check_validity


def tags(system, prefix):
    return [c.tag for c in system.constraints if c.tag.startswith(prefix)]


class TestConstraintPlumbing:
    def test_relation_check(self):
        with pytest.raises(ValueError):
            LinearConstraint.build([1], "<", 0, "bad")

    def test_tag_required(self):
        with pytest.raises(ValueError):
            LinearConstraint.build([1], "<=", 0, "")

    def test_holds_and_tight(self):
        c = LinearConstraint.build([2, 1], "<=", 2, "c")
        assert c.holds((F(1, 2), F(1)))
        assert c.is_tight((F(1, 2), F(1)))
        assert not c.holds((F(1), F(1)))

    def test_dedupe(self):
        c1 = LinearConstraint.build([1], ">=", 0, "first")
        c2 = LinearConstraint.build([1], ">=", 0, "second")
        s = InequalitySystem.build(("x",), [c1, c2])
        assert len(s) == 1 and s.constraints[0].tag == "first"

    def test_width_check(self):
        with pytest.raises(DimensionMismatch):
            InequalitySystem.build(("x", "y"), [LinearConstraint.build([1], "<=", 0, "c")])

    def test_json_roundtrip(self, k3):
        s = blossom_system(k3)
        assert InequalitySystem.from_json_dict(s.to_json_dict()) == s

    def test_merge(self, k3):
        s = blossom_system(k3)
        assert merge_systems(s, s) == s


class TestBlossom:
    def test_k3_counts(self, k3):
        s = blossom_system(k3)
        assert len(tags(s, "nonneg")) == 3
        assert len(tags(s, "degree")) == 3
        assert tags(s, "blossom") == ["blossom S={0,1,2}"]
        blossom = next(c for c in s.constraints if c.tag.startswith("blossom"))
        assert blossom.rhs == 1 and all(a == 1 for a in blossom.coeffs)

    def test_k2_no_odd_sets(self, k2):
        assert tags(blossom_system(k2), "blossom") == []

    def test_single_edge_substitution(self, k2):
        s = blossom_system(k2)
        assert s.satisfied_by((F(1),))
        assert not s.satisfied_by((F(2),))

    def test_validity_on_matchings(self, k3, k4, path3):
        for g in (k3, k4, path3):
            assert check_validity(blossom_system(g), enum_matchings(g)) == []


class TestVandeVate:
    def test_dag3_constraints(self, dag3):
        s = vande_vate_system(dag3, 0, 2)
        by_tag = {c.tag: c for c in s.constraints}
        # T={a}: x_a - x_t <= 0
        assert by_tag["succ T={1}"].coeffs == (F(0), F(1), F(-1))
        # T={s}: x_s - x_a - x_t <= 0
        assert by_tag["succ T={0}"].coeffs == (F(1), F(-1), F(-1))

    def test_count_formula(self, dag3):
        s = vande_vate_system(dag3, 0, 2)
        n = len(dag3.nodes)
        assert len(s) == 2 + n + (2 ** (n - 1) - 1)

    def test_st_indicator_feasible(self, dag3):
        s = vande_vate_system(dag3, 0, 2)
        assert s.satisfied_by((F(1), F(0), F(1)))

    def test_validity(self, dag3, chain4):
        for d, source, sink in ((dag3, 0, 2), (chain4, 0, 3)):
            assert check_validity(vande_vate_system(d, source, sink), enum_path_sets(d, source, sink)) == []

    def test_source_precondition(self):
        with pytest.raises(NotASource):
            vande_vate_system(Digraph.build(range(2), [(1, 0)]), 0, 1)


class TestSmallClique:
    def test_k2_single_stable_node(self, k2):
        s = small_clique_system(k2)
        by_tag = {c.tag: c for c in s.constraints}
        # T={v} has no non-neighbors in K2: 2 x_v <= 2
        assert by_tag["stable T={0}"].coeffs == (F(2), F(0))
        assert by_tag["stable T={0}"].rhs == 2

    def test_empty_stable_set_constraint(self, k3):
        s = small_clique_system(k3)
        empty = next(c for c in s.constraints if c.tag == "stable T={}")
        assert all(a == 1 for a in empty.coeffs) and empty.rhs == 2

    def test_oddity_filter(self, oddity_graph):
        full = small_clique_system(oddity_graph, irredundant=False)
        filtered = small_clique_system(oddity_graph, irredundant=True)
        assert "stable T={0}" in {c.tag for c in full.constraints}
        assert "stable T={0}" not in {c.tag for c in filtered.constraints}

    def test_validity(self, k2, k3, path3, oddity_graph):
        for g in (k2, k3, path3, oddity_graph):
            for flag in (False, True):
                s = small_clique_system(g, irredundant=flag)
                assert check_validity(s, enum_small_cliques(g)) == []


class TestEdgePolytope:
    def test_k2(self, k2):
        s = edge_polytope_system(k2)
        got = {c.tag for c in s.constraints}
        assert "total" in got
        assert "shore S={0}" in got and "shore S={1}" in got

    def test_isolated_node_forced_to_zero(self, oddity_graph):
        # the singleton-shore equation and the isolated-node equation are
        # the same row; the merged constraint keeps the shore tag
        s = edge_polytope_system(oddity_graph)
        unit0 = tuple(F(1) if i == 0 else F(0) for i in range(6))
        pinned = [c for c in s.constraints if c.coeffs == unit0 and c.rel == "="]
        assert len(pinned) == 1 and pinned[0].rhs == 0

    def test_lone_node_next_to_triangle(self):
        g = Graph.build(range(4), [(1, 2), (1, 3), (2, 3)])
        s = edge_polytope_system(g)
        unit0 = (F(1), F(0), F(0), F(0))
        pinned = [c for c in s.constraints if c.coeffs == unit0 and c.rel == "="]
        assert len(pinned) == 1

    def test_k3_families(self, k3):
        s = edge_polytope_system(k3)
        got = {c.tag for c in s.constraints}
        # no bipartite components, no isolated nodes; removing any node of
        # the triangle creates a bipartite component, so no nonnegativity
        # constraint survives either
        assert got == {"total", "tight T={0}", "tight T={1}", "tight T={2}"}


class TestLexMatrixSystems:
    def test_qxyz_p1_forces_first_row(self):
        s = qxyz_system(1)
        assert len(s) == 7
        # gates read xt[1,j] <= 0; together with nonnegativity both vanish
        gate = next(c for c in s.constraints if c.tag == "gate xt[1,1]")
        assert gate.rhs == 0 and gate.coeffs[0] == 1

    def test_counts(self):
        for p in (1, 2, 4):
            assert len(qxyz_system(p)) == 7 * p
            assert len(qxy_system(p)) == 8 * p

    def test_p_validation(self):
        with pytest.raises(ValueError):
            qxyz_system(0)
        with pytest.raises(ValueError):
            qxy_system(0)

    def test_qxy_p1_pins_y(self):
        s = qxy_system(1)
        point = (F(1), F(0), F(1))  # x=(1,0), y=x11-x12
        assert s.satisfied_by(point)
        assert not s.satisfied_by((F(1), F(0), F(1, 2)))

    def test_lifted_vertices_satisfy_systems(self):
        for p in (1, 2, 3):
            s_xy = qxy_system(p)
            s_xyz = qxyz_system(p)
            for point in enum_orbisack_vertices(p).sorted_points:
                x = matrix_from_flat(point, p)
                mat, y = lift_xy(x)
                assert s_xy.satisfied_by(flat_from_matrix(mat) + y)
                xt, y2, z = lift_xyz(x)
                assert s_xyz.satisfied_by(flat_from_matrix(xt) + y2 + z)

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from polylift.descriptions import (
    InequalitySystem,
    LinearConstraint,
    blossom_system,
    edge_polytope_system,
    small_clique_system,
    stable_set_constraint,
    vande_vate_system,
)
from polylift.errors import SizeLimitExceeded, Unbounded
from polylift.exactnum import RatMatrix, rank
from polylift.families import (
    VRep,
    enum_edge_vertices,
    enum_matchings,
    enum_path_sets,
    enum_small_cliques,
)
from polylift.graphcore import Graph
from polylift.orbisack import enum_orbisack_vertices, orbisack_system
from polylift.verify import (
    FACET,
    IMPLICIT_EQUATION,
    REDUNDANT,
    HPolytope,
    check_completeness,
    check_irredundancy,
    check_validity,
    dd_vertices,
    facet_dimension,
)


def box_system(names, lo=0, hi=1):
    cons = []
    size = len(names)
    for i, name in enumerate(names):
        row = [F(0)] * size
        row[i] = F(1)
        cons.append(LinearConstraint.build(row, ">=", lo, f"lb {name}"))
        cons.append(LinearConstraint.build(list(row), "<=", hi, f"ub {name}"))
    return InequalitySystem.build(names, cons)


class TestDDVertices:
    def test_unit_square(self):
        verts = dd_vertices(box_system(("x", "y")))
        assert len(verts) == 4
        assert (F(0), F(1)) in verts

    def test_blossom_k3(self, k3):
        assert set(dd_vertices(blossom_system(k3))) == enum_matchings(k3).points

    def test_orbisack_p2(self):
        assert set(dd_vertices(orbisack_system(2))) == enum_orbisack_vertices(2).points

    def test_empty_polytope(self):
        names = ("x",)
        cons = [
            LinearConstraint.build([1], "<=", -1, "below"),
            LinearConstraint.build([1], ">=", 1, "above"),
        ]
        assert dd_vertices(InequalitySystem.build(names, cons)) == []

    def test_unbounded_detected(self):
        names = ("x", "y")
        cons = [
            LinearConstraint.build([1, 0], ">=", 0, "lb x"),
            LinearConstraint.build([0, 1], ">=", 0, "lb y"),
        ]
        with pytest.raises(Unbounded):
            dd_vertices(InequalitySystem.build(names, cons))

    def test_line_detected(self):
        names = ("x", "y")
        cons = [LinearConstraint.build([1, 0], "=", 0, "plane")]
        with pytest.raises(Unbounded):
            dd_vertices(InequalitySystem.build(names, cons))

    def test_ambient_cap(self):
        with pytest.raises(SizeLimitExceeded):
            dd_vertices(box_system(tuple(f"x{i}" for i in range(17))))

    def test_equation_slice_of_cube(self):
        # x + y + z = 1 over the cube: a triangle
        names = ("x", "y", "z")
        cons = list(box_system(names).constraints)
        cons.append(LinearConstraint.build([1, 1, 1], "=", 1, "plane"))
        verts = dd_vertices(InequalitySystem.build(names, cons))
        assert set(verts) == {
            (F(1), F(0), F(0)),
            (F(0), F(1), F(0)),
            (F(0), F(0), F(1)),
        }

    def test_vertices_have_full_tight_rank(self, k3):
        system = blossom_system(k3)
        d = len(system.variable_index)
        for v in dd_vertices(system):
            tight = [
                list(c.coeffs)
                for c in system.constraints
                if c.is_tight(v) or c.rel == "="
            ]
            assert rank(RatMatrix.from_rows(tight, cols=d)) == d

    def test_deterministic(self, k4):
        system = small_clique_system(k4)
        assert dd_vertices(system) == dd_vertices(system)


class TestValidity:
    def test_blossom_valid(self, k3):
        assert check_validity(blossom_system(k3), enum_matchings(k3)) == []

    def test_violation_reported(self, k3):
        bad = VRep.build(
            blossom_system(k3).variable_index, [(F(1), F(1), F(0))]
        )
        violations = check_validity(blossom_system(k3), bad)
        assert violations and any(c.tag.startswith("degree") for _, c in violations)


class TestCompleteness:
    def test_vande_vate_dag3(self, dag3):
        report = check_completeness(
            vande_vate_system(dag3, 0, 2), enum_path_sets(dag3, 0, 2)
        )
        assert report.complete

    def test_small_clique_k2(self, k2):
        report = check_completeness(
            small_clique_system(k2, irredundant=True), enum_small_cliques(k2)
        )
        assert report.complete

    def test_missing_odd_set_detected(self, k3):
        system = blossom_system(k3).without_tags("blossom")
        report = check_completeness(system, enum_matchings(k3))
        assert report.valid and not report.vertex_match
        assert report.extra_vertices == ((F(1, 2), F(1, 2), F(1, 2)),)

    def test_empty_both_sides(self):
        # no s-t path: system infeasible, point set empty, honest match
        from polylift.graphcore import Digraph

        d = Digraph.build(range(3), [(0, 1)])
        report = check_completeness(
            vande_vate_system(d, 0, 2), enum_path_sets(d, 0, 2)
        )
        assert report.complete and len(report.extra_vertices) == 0

    def test_json_shape(self, k3):
        report = check_completeness(blossom_system(k3), enum_matchings(k3))
        payload = report.to_json_dict()
        assert payload["valid"] is True and payload["vertex_match"] is True


class TestFacetDimension:
    def test_k2_stable_singleton_is_facet(self, k2):
        v = enum_small_cliques(k2)
        c = stable_set_constraint(k2, {0})
        assert facet_dimension(small_clique_system(k2), c, v) == 1

    def test_oddity_constraint_not_facet(self, oddity_graph):
        v = enum_small_cliques(oddity_graph)
        c = stable_set_constraint(oddity_graph, {0})
        assert facet_dimension(small_clique_system(oddity_graph), c, v) < 5

    def test_orbisack_redundant_bound(self):
        v = enum_orbisack_vertices(2)
        s = orbisack_system(2)
        c = next(c for c in s.constraints if c.tag == "lb x[1,1]")
        assert facet_dimension(s, c, v) < 2 * 2 - 1

    def test_invalid_constraint_rejected(self, k2):
        v = enum_small_cliques(k2)
        bad = LinearConstraint.build([1, 1], "<=", 1, "too tight")
        with pytest.raises(ValueError):
            facet_dimension(small_clique_system(k2), bad, v)


class TestIrredundancy:
    def test_edge_polytope_k2(self, k2):
        labels = dict(
            (c.tag, lab)
            for c, lab in check_irredundancy(
                edge_polytope_system(k2), enum_edge_vertices(k2)
            )
        )
        assert labels["shore S={0}"] == IMPLICIT_EQUATION
        assert labels["total"] == IMPLICIT_EQUATION

    def test_orbisack_p3_exact_redundant_pair(self):
        labels = check_irredundancy(orbisack_system(3), enum_orbisack_vertices(3))
        redundant = {c.tag for c, lab in labels if lab == REDUNDANT}
        assert redundant == {"lb x[1,1]", "ub x[1,2]"}
        for c, lab in labels:
            if c.tag not in redundant:
                assert lab == FACET

    def test_small_clique_irredundant_all_facets(self):
        rng = random.Random(6021)
        for _ in range(25):
            n = rng.randint(1, 6)
            edges = [
                (i, j)
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.5
            ]
            g = Graph.build(range(n), edges)
            system = small_clique_system(g, irredundant=True)
            labels = check_irredundancy(system, enum_small_cliques(g))
            assert all(lab == FACET for _, lab in labels)

    def test_requires_completeness(self, k3):
        system = blossom_system(k3).without_tags("blossom")
        with pytest.raises(ValueError):
            check_irredundancy(system, enum_matchings(k3))

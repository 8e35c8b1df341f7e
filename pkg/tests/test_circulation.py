from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from polylift.circulation import (
    CapacityBounds,
    FeasibilityResult,
    find_circulation,
    hoffman_feasible_flow,
    hoffman_feasible_subsets,
)
from polylift.errors import SizeLimitExceeded
from polylift.exactnum import NEG_INF, POS_INF, ExtendedRational
from polylift.graphcore import CloneLabel, Digraph, path_split
from polylift.lifting import pathset_star_bounds


def bounds(d, lower, upper):
    return CapacityBounds.build(d, lower, upper)


class TestCapacityBounds:
    def test_lower_above_upper_rejected(self):
        d = Digraph.build(range(2), [(0, 1)])
        with pytest.raises(ValueError):
            bounds(d, {(0, 1): 2}, {(0, 1): 1})

    def test_infinite_lower_rejected(self):
        d = Digraph.build(range(2), [(0, 1)])
        with pytest.raises(ValueError):
            bounds(d, {(0, 1): POS_INF}, {(0, 1): POS_INF})

    def test_missing_arc_rejected(self):
        d = Digraph.build(range(3), [(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            bounds(d, {(0, 1): 0}, {(0, 1): 1})

    def test_pinning(self):
        d = Digraph.build(range(2), [(0, 1)])
        cb = bounds(d, {(0, 1): 0}, {(0, 1): POS_INF}).with_pinned({(0, 1): F(1, 2)})
        assert cb.lower[(0, 1)] == cb.upper[(0, 1)]


class TestFeasibilityOracles:
    def test_two_cycle_unit(self):
        d = Digraph.build(["a", "b"], [("a", "b"), ("b", "a")])
        cb = bounds(d, {("a", "b"): 1, ("b", "a"): 1}, {("a", "b"): 1, ("b", "a"): 1})
        assert hoffman_feasible_subsets(d, cb).feasible
        assert hoffman_feasible_flow(d, cb).feasible
        circ = find_circulation(d, cb)
        assert circ.flow == {("a", "b"): F(1), ("b", "a"): F(1)}

    def test_single_arc_infeasible(self):
        d = Digraph.build(["a", "b"], [("a", "b")])
        cb = bounds(d, {("a", "b"): 1}, {("a", "b"): 1})
        verdict = hoffman_feasible_subsets(d, cb)
        assert not verdict.feasible and verdict.witness == frozenset({"b"})
        flow_verdict = hoffman_feasible_flow(d, cb)
        assert not flow_verdict.feasible
        assert find_circulation(d, cb) is None

    def test_zero_capacities(self):
        d = Digraph.build(range(3), [(0, 1), (1, 2), (2, 0)])
        cb = bounds(d, {a: 0 for a in d.arc_list}, {a: 0 for a in d.arc_list})
        assert hoffman_feasible_flow(d, cb).feasible
        circ = find_circulation(d, cb)
        assert all(v == 0 for v in circ.flow.values())

    def test_pinned_split_digraph(self, dag3):
        dt = path_split(dag3, 0, 2)
        pins = {
            (CloneLabel(v, "in"), CloneLabel(v, "out")): 1 for v in dag3.nodes
        }
        cb = pathset_star_bounds(dt, 0, 2).with_pinned(pins)
        assert hoffman_feasible_subsets(dt, cb).feasible
        circ = find_circulation(dt, cb)
        assert circ.satisfies(dt, cb)

    def test_subset_cap(self):
        d = Digraph.build(range(25), [(i, i + 1) for i in range(24)])
        cb = bounds(d, {a: 0 for a in d.arc_list}, {a: 1 for a in d.arc_list})
        with pytest.raises(SizeLimitExceeded):
            hoffman_feasible_subsets(d, cb)

    def test_negative_flow_allowed(self):
        # a single arc with free bounds admits the zero circulation; with a
        # forced negative lower/upper window the flow must go "backwards"
        d = Digraph.build(range(2), [(0, 1), (1, 0)])
        cb = bounds(
            d,
            {(0, 1): NEG_INF, (1, 0): NEG_INF},
            {(0, 1): F(-1), (1, 0): POS_INF},
        )
        circ = find_circulation(d, cb)
        assert circ is not None
        assert circ.flow[(0, 1)] <= -1
        assert circ.satisfies(d, cb)


def random_instance(rng):
    n = rng.randint(2, 10)
    arcs = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and rng.random() < 0.3
    ]
    d = Digraph.build(range(n), arcs)
    upper_pool = [F(0), F(1, 2), F(1), F(2), POS_INF]
    lower_pool = [F(0), F(1, 2), F(1), NEG_INF]
    lower = {}
    upper = {}
    for a in d.arc_list:
        while True:
            lo = rng.choice(lower_pool)
            up = rng.choice(upper_pool)
            if lo is NEG_INF or up is POS_INF or lo <= up:
                break
        lower[a] = lo
        upper[a] = up
    return d, CapacityBounds.build(d, lower, upper)


class TestOracleAgreement:
    def test_random_instances_agree(self):
        rng = random.Random(90125)
        infeasible_seen = 0
        for _ in range(250):
            d, cb = random_instance(rng)
            by_subsets = hoffman_feasible_subsets(d, cb)
            by_flow = hoffman_feasible_flow(d, cb)
            assert by_subsets.feasible == by_flow.feasible
            circ = find_circulation(d, cb)
            if by_subsets.feasible:
                assert circ is not None and circ.satisfies(d, cb)
            else:
                infeasible_seen += 1
                assert circ is None
                for verdict in (by_subsets, by_flow):
                    W = verdict.witness
                    lin = sum(
                        (cb.lower[a] for a in d.arc_list if a[1] in W and a[0] not in W),
                        start=ExtendedRational(0),
                    )
                    uout = sum(
                        (cb.upper[a] for a in d.arc_list if a[0] in W and a[1] not in W),
                        start=ExtendedRational(0),
                    )
                    assert uout < lin
        assert infeasible_seen > 20

"""Seeded instance generators shared by the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

from polylift.circulation import CapacityBounds
from polylift.exactnum import NEG_INF, POS_INF
from polylift.graphcore import Digraph, Graph


def nonisomorphic_graphs(max_n: int) -> list:
    """All graphs on 1..max_n nodes up to isomorphism (canonical-form dedup).

    Intended for small max_n; the n-th layer costs 2^C(n,2) * n! operations.
    """
    out = []
    for n in range(1, max_n + 1):
        perms = list(itertools.permutations(range(n)))
        pairs = list(itertools.combinations(range(n), 2))
        seen = set()
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
            canon = min(
                tuple(
                    sorted(
                        (min(pi[u], pi[v]), max(pi[u], pi[v])) for u, v in edges
                    )
                )
                for pi in perms
            )
            if canon not in seen:
                seen.add(canon)
                out.append(Graph.build(range(n), canon))
    return out


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph.build(range(n), edges)


def random_dag_instance(rng: random.Random, n: int, p: float):
    """A DAG with arcs along the identity order, source 0, reachable sink."""
    while True:
        arcs = [
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
        ]
        d = Digraph.build(range(n), arcs)
        reachable = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for (_, w) in d.out_arcs(v):
                if w not in reachable:
                    reachable.add(w)
                    frontier.append(w)
        candidates = sorted(reachable - {0})
        if candidates:
            return d, 0, rng.choice(candidates)


def random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    arcs = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and rng.random() < p
    ]
    return Digraph.build(range(n), arcs)


def random_capacities(rng: random.Random, d: Digraph) -> CapacityBounds:
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
    return CapacityBounds.build(d, lower, upper)


def random_box_matrix(rng: random.Random, p: int, max_den: int = 16) -> tuple:
    """A random rational point of the unit box in matrix form."""
    rows = []
    for _ in range(p):
        entries = []
        for _ in range(2):
            den = rng.randint(1, max_den)
            entries.append(F(rng.randint(0, den), den))
        rows.append(tuple(entries))
    return tuple(rows)
